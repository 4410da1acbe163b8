#include "dll/nn/dense.hpp"

namespace dll {

DenseLayer::DenseLayer(std::size_t n_in, std::size_t n_out, Activation act, SeededRng& rng)
    : act_(act) {
    if (n_in == 0 || n_out == 0) throw ConfigError("dense layer dimensions must be positive");
    // Independent draws for the forward and backward weights.
    SeededRng w_rng = rng.derive(0x57);
    SeededRng theta_rng = rng.derive(0x7e);
    w_ = init_params({n_out, n_in}, n_in, w_rng);
    theta_ = init_params({n_out, n_in}, n_in, theta_rng);
    dw_ = Tensor({n_out, n_in});
    dtheta_ = Tensor({n_out, n_in});
}

Tensor DenseLayer::forward(const Tensor& input) {
    if (input.rank() != 2 || input.dim(1) != fan_in()) {
        throw ShapeError("dense forward: expected [batch x " + std::to_string(fan_in()) + "], got " +
                         shape_to_string(input.shape()));
    }
    input_ = input;
    preact_ = matmul_nt(input, w_);
    output_ = Tensor(preact_.shape());
    fprime_ = Tensor(preact_.shape());
    apply_activation_into(preact_, act_, output_, fprime_);
    gated_ = Tensor();
    return output_;
}

void DenseLayer::gate_error(const Tensor& err_out) {
    if (!has_pass()) throw StateError("dense gate_error called before forward");
    if (!err_out.same_shape(preact_)) {
        throw ShapeError("dense gate_error: error shape " + shape_to_string(err_out.shape()) +
                         " does not match output " + shape_to_string(preact_.shape()));
    }
    gated_ = hadamard(err_out, fprime_);
}

Tensor DenseLayer::propagate_error(ErrorRoute route) {
    if (gated_.empty()) throw StateError("dense propagate_error called before gate_error");
    switch (route) {
        case ErrorRoute::ForwardWeights: return matmul(gated_, w_);
        case ErrorRoute::BackwardWeights: return matmul(gated_, theta_);
        case ErrorRoute::FeedbackMatrix:
            if (feedback_.empty()) throw StateError("dense layer has no feedback matrix installed");
            return matmul_nt(gated_, feedback_);
    }
    throw StateError("unreachable");
}

void DenseLayer::compute_updates(const Tensor& err_in, bool backward_weights) {
    if (gated_.empty()) throw StateError("dense compute_updates called before gate_error");
    const scalar inv_batch = scalar{1} / static_cast<scalar>(input_.dim(0));
    dw_ = scaled(matmul_tn(gated_, input_), inv_batch);
    if (backward_weights) {
        if (!err_in.same_shape(input_)) {
            throw ShapeError("dense compute_updates: err_in shape " + shape_to_string(err_in.shape()) +
                             " does not match input " + shape_to_string(input_.shape()));
        }
        dtheta_ = scaled(matmul_tn(gated_, err_in), -inv_batch);
    } else {
        dtheta_.fill(0);
    }
}

std::vector<ParamRef> DenseLayer::params() {
    return {
        {"w", &w_, &dw_, false},
        {"theta", &theta_, &dtheta_, true},
    };
}

void DenseLayer::set_feedback(Tensor b) {
    if (b.rank() != 2 || b.dim(0) != fan_in() || b.dim(1) != fan_out()) {
        throw ShapeError("feedback matrix must be [n_in x n_out]");
    }
    feedback_ = std::move(b);
}

Shape DenseLayer::output_shape(const Shape& input_shape) const {
    if (input_shape.size() != 2 || input_shape[1] != fan_in()) {
        throw ShapeError("dense output_shape: bad input shape " + shape_to_string(input_shape));
    }
    return {input_shape[0], fan_out()};
}

const Tensor& DenseLayer::cached_input() const {
    if (input_.empty()) throw StateError("no cached pass");
    return input_;
}
const Tensor& DenseLayer::cached_output() const {
    if (output_.empty()) throw StateError("no cached pass");
    return output_;
}
const Tensor& DenseLayer::cached_fprime() const {
    if (fprime_.empty()) throw StateError("no cached pass");
    return fprime_;
}
const Tensor& DenseLayer::cached_gated() const {
    if (gated_.empty()) throw StateError("no gated error cached");
    return gated_;
}

}  // namespace dll
