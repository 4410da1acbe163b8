#pragma once

#include "dll/activation.hpp"
#include "dll/nn/layer.hpp"
#include "dll/rng.hpp"

namespace dll {

/// Patch geometry of a convolution, shared by im2col/col2im and the layer.
struct ConvGeom {
    std::size_t c_in = 0, h = 0, w = 0;
    std::size_t k = 0, stride = 1, pad = 0;

    std::size_t out_h() const { return (h + 2 * pad - k) / stride + 1; }
    std::size_t out_w() const { return (w + 2 * pad - k) / stride + 1; }
    std::size_t patch() const { return c_in * k * k; }
    std::size_t positions() const { return out_h() * out_w(); }
    void validate() const;
};

/// Unrolls receptive fields: column p of the result is the flattened patch
/// (channel-major, then kernel row, kernel column) feeding output position p.
/// Out-of-range taps read zero (zero padding).
Tensor im2col(const Tensor& input, std::size_t k, std::size_t stride, std::size_t pad);

/// Exact adjoint of im2col: scatter-adds every patch entry back to its source
/// pixel; overlapping patches accumulate, padded taps are dropped.
Tensor col2im(const Tensor& cols, const ConvGeom& geom);

/// Convolution as a linear map on patch matrices, so the dense error and
/// update rules apply verbatim in the linearized space. Kernels live in
/// matrix form W [c_out x (c_in*k*k)]; the backward kernels Theta share that
/// shape.
class ConvLayer : public Layer {
  public:
    ConvLayer(std::size_t c_in, std::size_t c_out, std::size_t k, std::size_t stride, std::size_t pad,
              Activation act, SeededRng& rng);

    std::string kind() const override { return "conv"; }

    // input [B x c_in x H x W] -> [B x c_out x H' x W']; caches the patch
    // matrix and pre-activation per sample.
    Tensor forward(const Tensor& input) override;

    void gate_error(const Tensor& err_out) override;
    Tensor propagate_error(ErrorRoute route) override;
    void compute_updates(const Tensor& err_in, bool backward_weights) override;

    std::vector<ParamRef> params() override;
    void set_feedback(Tensor b) override;

    Shape output_shape(const Shape& input_shape) const override;

    std::size_t kernel() const { return k_; }
    Tensor& weights() { return w_; }
    Tensor& backward_weights() { return theta_; }
    const Tensor& weights() const { return w_; }
    const Tensor& backward_weights() const { return theta_; }

  private:
    ConvGeom geom_for(const Shape& input_shape) const;

    std::size_t c_in_, c_out_, k_, stride_, pad_;
    Tensor w_;         // [c_out x patch]
    Tensor theta_;     // [c_out x patch]
    Tensor feedback_;  // [patch x c_out], empty unless feedback alignment
    Activation act_;

    // per-pass caches
    ConvGeom geom_;
    std::size_t batch_ = 0;
    Tensor cols_;    // [B x patch x P]
    Tensor fprime_;  // [B x c_out x P]
    Tensor gated_;   // [B x c_out x P]
    Tensor dw_, dtheta_;
};

}  // namespace dll
