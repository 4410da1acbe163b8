#include "dll/data/timeseries.hpp"

#include <cmath>
#include <sstream>

#include "dll/errors.hpp"

namespace dll {

Tensor TimeSeriesSet::input_window(std::size_t w) const {
    if (w >= window_count()) throw InputError("window index out of range");
    const std::size_t d = cols();
    std::vector<scalar> data(values.data() + w * d, values.data() + (w + input_len) * d);
    return Tensor({input_len, d}, std::move(data));
}

Tensor TimeSeriesSet::target_window(std::size_t w) const {
    if (w >= window_count()) throw InputError("window index out of range");
    const std::size_t d = cols();
    const std::size_t start = w + input_len;
    std::vector<scalar> data(values.data() + start * d, values.data() + (start + horizon) * d);
    return Tensor({horizon, d}, std::move(data));
}

bool TimeSeriesSet::window_in_train(std::size_t w) const {
    return w + input_len + horizon <= train_rows;
}
bool TimeSeriesSet::window_in_valid(std::size_t w) const {
    return !window_in_train(w) && w + input_len + horizon <= train_rows + valid_rows;
}
bool TimeSeriesSet::window_in_test(std::size_t w) const {
    return !window_in_train(w) && !window_in_valid(w);
}

std::vector<std::size_t> TimeSeriesSet::windows_of_split(const std::string& split) const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < window_count(); ++w) {
        const bool take = (split == "train" && window_in_train(w)) ||
                          (split == "valid" && window_in_valid(w)) ||
                          (split == "test" && window_in_test(w));
        if (take) out.push_back(w);
    }
    if (out.empty()) throw InputError("no windows in split '" + split + "'");
    return out;
}

double TimeSeriesSet::denormalize(double value, std::size_t col) const {
    return value * stddev.at(col) + mean.at(col);
}

Tensor TimeSeriesSet::denormalize_rows(const Tensor& rows_by_cols) const {
    if (rows_by_cols.rank() != 2 || rows_by_cols.dim(1) != cols()) {
        throw ShapeError("denormalize_rows: expected [rows x D]");
    }
    Tensor out(rows_by_cols.shape());
    for (std::size_t r = 0; r < rows_by_cols.dim(0); ++r) {
        for (std::size_t c = 0; c < cols(); ++c) {
            out.at(r, c) = static_cast<scalar>(denormalize(rows_by_cols.at(r, c), c));
        }
    }
    return out;
}

TimeSeriesSet build_timeseries(const std::string& csv_text, std::size_t input_len, std::size_t horizon) {
    if (input_len == 0 || horizon == 0) throw InputError("input_len and horizon must be positive");

    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("CSV: missing header row");

    std::vector<double> raw;
    std::size_t d = 0;
    std::size_t row_no = 1;  // header was row 1
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        std::size_t col = 0;
        std::size_t numeric_cols = 0;
        while (std::getline(cells, cell, ',')) {
            ++col;
            if (col == 1) continue;  // timestamp column
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                raw.push_back(v);
            } catch (const std::exception&) {
                throw FormatError("CSV: non-numeric cell '" + cell + "' at row " + std::to_string(row_no) +
                                  ", column " + std::to_string(col));
            }
            ++numeric_cols;
        }
        if (d == 0) {
            d = numeric_cols;
            if (d == 0) throw FormatError("CSV: no numeric columns after the timestamp column");
        } else if (numeric_cols != d) {
            throw FormatError("CSV: row " + std::to_string(row_no) + " has " + std::to_string(numeric_cols) +
                              " columns, expected " + std::to_string(d));
        }
    }
    const std::size_t t = d ? raw.size() / d : 0;
    if (t < input_len + horizon) {
        throw InputError("CSV: " + std::to_string(t) + " rows, need at least " +
                         std::to_string(input_len + horizon));
    }

    TimeSeriesSet set;
    set.input_len = input_len;
    set.horizon = horizon;
    set.train_rows = (t * 7) / 10;
    set.valid_rows = t / 10;
    if (set.train_rows < input_len + horizon) throw InputError("CSV: training split too small for the window");

    // Normalization statistics from the training split only.
    set.mean.assign(d, 0.0);
    set.stddev.assign(d, 0.0);
    for (std::size_t r = 0; r < set.train_rows; ++r) {
        for (std::size_t c = 0; c < d; ++c) set.mean[c] += raw[r * d + c];
    }
    for (std::size_t c = 0; c < d; ++c) set.mean[c] /= static_cast<double>(set.train_rows);
    for (std::size_t r = 0; r < set.train_rows; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const double dev = raw[r * d + c] - set.mean[c];
            set.stddev[c] += dev * dev;
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        set.stddev[c] = std::sqrt(set.stddev[c] / static_cast<double>(set.train_rows));
        if (set.stddev[c] == 0.0) {
            throw InputError("CSV: column " + std::to_string(c + 2) + " is constant on the training split");
        }
    }

    std::vector<scalar> normalized(raw.size());
    for (std::size_t r = 0; r < t; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            normalized[r * d + c] = static_cast<scalar>((raw[r * d + c] - set.mean[c]) / set.stddev[c]);
        }
    }
    set.values = Tensor({t, d}, std::move(normalized));
    return set;
}

}  // namespace dll
