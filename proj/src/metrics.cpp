#include "dll/train/metrics.hpp"

#include <cmath>

#include "dll/errors.hpp"
#include "dll/nn/network.hpp"

namespace dll {

std::string to_string(MetricKind k) {
    switch (k) {
        case MetricKind::Accuracy: return "accuracy";
        case MetricKind::Mse: return "mse";
        case MetricKind::Mae: return "mae";
    }
    return "?";
}

MetricKind metric_from_string(const std::string& s) {
    if (s == "accuracy") return MetricKind::Accuracy;
    if (s == "mse") return MetricKind::Mse;
    if (s == "mae") return MetricKind::Mae;
    throw ConfigError("unknown metric '" + s + "'");
}

double metric(MetricKind kind, const Tensor& predictions, const Tensor& truth) {
    if (!predictions.same_shape(truth)) {
        throw ShapeError("metric: prediction shape " + shape_to_string(predictions.shape()) +
                         " does not match truth " + shape_to_string(truth.shape()));
    }
    switch (kind) {
        case MetricKind::Accuracy: {
            const auto pred_ids = predict_classes(predictions);
            const auto true_ids = predict_classes(truth);
            std::size_t hits = 0;
            for (std::size_t i = 0; i < pred_ids.size(); ++i) hits += pred_ids[i] == true_ids[i] ? 1 : 0;
            return static_cast<double>(hits) / static_cast<double>(pred_ids.size());
        }
        case MetricKind::Mse: {
            double acc = 0;
            for (std::size_t i = 0; i < predictions.size(); ++i) {
                const double d = static_cast<double>(predictions[i]) - static_cast<double>(truth[i]);
                acc += d * d;
            }
            return acc / static_cast<double>(predictions.size());
        }
        case MetricKind::Mae: {
            double acc = 0;
            for (std::size_t i = 0; i < predictions.size(); ++i) {
                acc += std::abs(static_cast<double>(predictions[i]) - static_cast<double>(truth[i]));
            }
            return acc / static_cast<double>(predictions.size());
        }
    }
    throw ConfigError("unreachable");
}

double accuracy_against_labels(const Tensor& outputs, const std::vector<int>& labels) {
    if (outputs.rank() != 2 || outputs.dim(0) != labels.size()) {
        throw ShapeError("accuracy_against_labels: outputs must be [N x K] with N labels");
    }
    const auto ids = predict_classes(outputs);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) hits += ids[i] == labels[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(ids.size());
}

}  // namespace dll
