#pragma once

#include <string>
#include <vector>

#include "dll/tensor.hpp"

namespace dll {

/// Multivariate series parsed from CSV (header row, leading timestamp column
/// ignored, D numeric columns). Values are z-scored per column with
/// statistics from the chronological 70% training split only; the same stats
/// transform every split, so there is no leakage. Metrics downstream are
/// computed in this normalized space.
struct TimeSeriesSet {
    Tensor values;               // [T x D], normalized
    std::vector<double> mean;    // per column, raw units
    std::vector<double> stddev;  // per column, raw units, > 0
    std::size_t input_len = 0;
    std::size_t horizon = 0;
    std::size_t train_rows = 0;  // rows [0, train_rows)
    std::size_t valid_rows = 0;  // rows [train_rows, train_rows + valid_rows)

    std::size_t rows() const { return values.dim(0); }
    std::size_t cols() const { return values.dim(1); }

    // Sliding stride-1 windows: input rows [w, w+input_len), target rows
    // [w+input_len, w+input_len+horizon).
    std::size_t window_count() const { return rows() - input_len - horizon + 1; }
    Tensor input_window(std::size_t w) const;    // [input_len x D]
    Tensor target_window(std::size_t w) const;   // [horizon x D]

    // A window belongs to the split that contains its last target row.
    bool window_in_train(std::size_t w) const;
    bool window_in_valid(std::size_t w) const;
    bool window_in_test(std::size_t w) const;
    std::vector<std::size_t> windows_of_split(const std::string& split) const;  // train|valid|test

    double denormalize(double value, std::size_t col) const;
    Tensor denormalize_rows(const Tensor& rows_by_cols) const;
};

TimeSeriesSet build_timeseries(const std::string& csv_text, std::size_t input_len, std::size_t horizon);

}  // namespace dll
