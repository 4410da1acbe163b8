#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dll/tensor.hpp"

namespace dll {

/// Which matrix carries the error signal through a weighted layer:
///   ForwardWeights  - the transposed forward weights (backpropagation),
///   BackwardWeights - the trainable backward weights (the local rule),
///   FeedbackMatrix  - a fixed random matrix (feedback alignment).
enum class ErrorRoute { ForwardWeights, BackwardWeights, FeedbackMatrix };

struct ParamRef {
    std::string name;
    Tensor* value;
    Tensor* delta;          // update direction, ascent convention (P += lr * delta)
    bool backward_weight;   // true for the backward matrices
};

/// One stage of a feedforward stack. A layer caches whatever its error and
/// update phases need during forward; callers own the phase ordering:
/// forward -> gate_error -> propagate_error -> compute_updates.
class Layer {
  public:
    virtual ~Layer() = default;

    virtual std::string kind() const = 0;

    virtual Tensor forward(const Tensor& input) = 0;

    // Caches the error at this layer's output, gated by the activation
    // derivative where one exists.
    virtual void gate_error(const Tensor& err_out) = 0;

    // Maps the gated error to this layer's input space.
    virtual Tensor propagate_error(ErrorRoute route) = 0;

    // Computes update directions from the cached pass. err_in is the error at
    // this layer's input (feeds the backward-weight rule); backward_weights
    // selects whether the backward-weight delta is formed at all.
    virtual void compute_updates(const Tensor& err_in, bool backward_weights) = 0;

    virtual std::vector<ParamRef> params() { return {}; }

    // Fixed random feedback matrix for feedback alignment; only weighted
    // layers accept one.
    virtual void set_feedback(Tensor) { throw StateError(kind() + " layer takes no feedback matrix"); }

    virtual Shape output_shape(const Shape& input_shape) const = 0;
};

}  // namespace dll
