#pragma once

#include <vector>

#include "dll/nn/layer.hpp"

namespace dll {

enum class PoolKind { Max, Avg };

/// Weightless spatial pooling over non-overlapping windows (stride ==
/// window, floor truncation of ragged edges). Max pooling routes errors to
/// the cached argmax position (ties break to the lowest linear index); avg
/// pooling spreads them uniformly. Both conserve the error sum.
class PoolLayer : public Layer {
  public:
    PoolLayer(PoolKind kind, std::size_t window);

    std::string kind() const override { return kind_ == PoolKind::Max ? "maxpool" : "avgpool"; }

    Tensor forward(const Tensor& input) override;
    void gate_error(const Tensor& err_out) override;
    Tensor propagate_error(ErrorRoute route) override;
    void compute_updates(const Tensor&, bool) override {}
    Shape output_shape(const Shape& input_shape) const override;

  private:
    PoolKind kind_;
    std::size_t window_;

    Shape in_shape_;
    std::vector<std::size_t> argmax_;  // flat input offsets, max mode
    Tensor err_;
};

/// Pure reshape boundary between feature maps and dense layers.
class FlattenLayer : public Layer {
  public:
    std::string kind() const override { return "flatten"; }

    Tensor forward(const Tensor& input) override;
    void gate_error(const Tensor& err_out) override;
    Tensor propagate_error(ErrorRoute route) override;
    void compute_updates(const Tensor&, bool) override {}
    Shape output_shape(const Shape& input_shape) const override;

  private:
    Shape in_shape_;
    Tensor err_;
};

}  // namespace dll
