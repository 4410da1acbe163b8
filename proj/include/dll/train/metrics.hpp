#pragma once

#include <string>
#include <vector>

#include "dll/tensor.hpp"

namespace dll {

enum class MetricKind { Accuracy, Mse, Mae };

std::string to_string(MetricKind k);
MetricKind metric_from_string(const std::string& s);

/// accuracy: fraction of rows whose argmax matches (ties to lowest index);
/// mse/mae: means over all elements.
double metric(MetricKind kind, const Tensor& predictions, const Tensor& truth);

/// Classification accuracy against integer labels.
double accuracy_against_labels(const Tensor& outputs, const std::vector<int>& labels);

}  // namespace dll
