#pragma once

#include <vector>

#include "dll/activation.hpp"
#include "dll/nn/layer.hpp"
#include "dll/rng.hpp"

namespace dll {

/// Recurrent cell whose hidden state is split into a sensory component h^s
/// (drives the forward recurrence and the readout) and an expected component
/// h^p (carries the error signal). Backward weights Theta_h / Theta_y stand
/// in for the transposed forward weights on the error path; W_x never
/// appears there, so it has no backward twin.
struct RnnCell {
    Tensor w_x;      // [h x d_in]
    Tensor w_h;      // [h x h]
    Tensor w_y;      // [d_out x h]
    Tensor theta_h;  // [h x h]
    Tensor theta_y;  // [d_out x h]

    std::size_t input_size() const { return w_x.dim(1); }
    std::size_t hidden_size() const { return w_h.dim(0); }
    std::size_t output_size() const { return w_y.dim(0); }

    std::vector<ParamRef> params();
    Tensor dw_x, dw_h, dw_y, dtheta_h, dtheta_y;  // update directions, ascent convention
};

RnnCell build_rnn_cell(std::size_t d_in, std::size_t hidden, std::size_t d_out, std::uint64_t seed);

/// Cached unrolled pass over n timesteps, batch-major per step. The hidden
/// expectation h^p is initialized to h^s each step; errors are filled by
/// rnn_errors or rnn_relax_hidden.
struct UnrolledPass {
    Tensor h0;                     // [B x h]
    std::vector<Tensor> inputs;    // n x [B x d_in]
    std::vector<Tensor> z;         // n x [B x h], z_i = W_h h_{i-1} + W_x x_i
    std::vector<Tensor> h;         // n x [B x h], sensory h^s
    std::vector<Tensor> fprime;    // n x [B x h]
    std::vector<Tensor> y;         // n x [B x d_out], linear readout
    std::vector<Tensor> xi_h;      // n x [B x h]
    std::vector<Tensor> xi_y;      // n x [B x d_out]
    bool errors_filled = false;

    std::size_t steps() const { return inputs.size(); }
    std::size_t batch() const { return h0.dim(0); }
};

UnrolledPass rnn_forward(const RnnCell& cell, const std::vector<Tensor>& inputs, const Tensor& h0);

/// Direct per-timestep error assignment: xi_y = t - y at every step, then
/// the hidden recursion from the last step backward. route selects Theta
/// (the local rule) or the forward weights (the truncated-BPTT reference).
void rnn_errors(const RnnCell& cell, UnrolledPass& pass, const std::vector<Tensor>& targets,
                ErrorRoute route = ErrorRoute::BackwardWeights);

/// Iterative relaxation of the hidden expectations; lands on rnn_errors'
/// assignment at the fixed point.
void rnn_relax_hidden(const RnnCell& cell, UnrolledPass& pass, const std::vector<Tensor>& targets,
                      std::size_t steps, scalar lr_h);

/// The five update sums over timesteps (batch-mean, ascent convention),
/// written into the cell's delta tensors.
void rnn_updates(RnnCell& cell, const UnrolledPass& pass);

}  // namespace dll
