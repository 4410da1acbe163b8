#pragma once

#include "dll/activation.hpp"
#include "dll/nn/layer.hpp"
#include "dll/rng.hpp"

namespace dll {

/// Fully connected layer of three-compartment units. The forward weights W
/// drive the sensory input u (basal side); the trainable backward weights
/// Theta carry the error signal toward the input (apical side); the local
/// error xi lives at the output units. W and Theta always share the
/// (n_out x n_in) shape and are drawn independently.
class DenseLayer : public Layer {
  public:
    DenseLayer(std::size_t n_in, std::size_t n_out, Activation act, SeededRng& rng);

    std::string kind() const override { return "dense"; }

    // input [batch x n_in] -> [batch x n_out]; caches u, z and f'(z).
    Tensor forward(const Tensor& input) override;

    void gate_error(const Tensor& err_out) override;
    Tensor propagate_error(ErrorRoute route) override;
    void compute_updates(const Tensor& err_in, bool backward_weights) override;

    std::vector<ParamRef> params() override;
    void set_feedback(Tensor b) override;

    Shape output_shape(const Shape& input_shape) const override;

    std::size_t fan_in() const { return w_.dim(1); }
    std::size_t fan_out() const { return w_.dim(0); }
    Activation activation() const { return act_; }

    Tensor& weights() { return w_; }
    Tensor& backward_weights() { return theta_; }
    const Tensor& weights() const { return w_; }
    const Tensor& backward_weights() const { return theta_; }
    const Tensor& feedback() const { return feedback_; }

    // Cached pass state (used by the relaxation mode and by tests).
    const Tensor& cached_input() const;
    const Tensor& cached_output() const;
    const Tensor& cached_fprime() const;
    const Tensor& cached_gated() const;
    bool has_pass() const { return !input_.empty(); }

  private:
    Tensor w_;         // [n_out x n_in]
    Tensor theta_;     // [n_out x n_in]
    Tensor feedback_;  // [n_in x n_out], empty unless feedback alignment
    Activation act_;

    // per-pass caches
    Tensor input_;    // u      [B x n_in]
    Tensor preact_;   // z      [B x n_out]
    Tensor output_;   // f(z)   [B x n_out]
    Tensor fprime_;   // f'(z)  [B x n_out]
    Tensor gated_;    // err_out (.) f'(z)
    Tensor dw_;       // update direction for W
    Tensor dtheta_;   // update direction for Theta
};

}  // namespace dll
