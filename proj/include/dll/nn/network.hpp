#pragma once

#include <memory>
#include <vector>

#include "dll/nn/dense.hpp"
#include "dll/nn/layer.hpp"

namespace dll {

/// Hyperparameters of the local training step. Direct error assignment is
/// the default path; the iterative expected-value relaxation is opt-in and
/// must land on the same fixed point.
struct DllHyper {
    scalar lr_w = scalar{1e-3};
    scalar lr_theta = scalar{1e-3};
    bool relaxation = false;
    scalar lr_x = scalar{1};   // relaxation step size
    std::size_t relax_steps = 1;

    void validate() const;
};

/// Ordered layer stack trained with MSE on a linear output layer. Hidden
/// dense/conv layers use tanh. The stack owns its per-pass buffers; exactly
/// one trainer drives it at a time.
class Network {
  public:
    Network() = default;
    Network(Network&&) = default;
    Network& operator=(Network&&) = default;

    void add(std::unique_ptr<Layer> layer);
    std::size_t layer_count() const { return layers_.size(); }
    Layer& layer(std::size_t i) { return *layers_.at(i); }
    const Layer& layer(std::size_t i) const { return *layers_.at(i); }

    Tensor forward(const Tensor& input);
    const Tensor& output() const;
    bool has_pass() const { return !output_.empty(); }

    // xi_L = target - output, the negative MSE gradient at the output units.
    Tensor output_error(const Tensor& target) const;

    // One backward sweep of the error recursion along `route`. Returns the
    // error at every neuron boundary: result[0] is the stack input boundary
    // (identically zero, since the input's expected value equals its sensory
    // value), result[layer_count()] is output_err.
    std::vector<Tensor> assign_errors(const Tensor& output_err, ErrorRoute route);

    // Iterative expected-value relaxation (dense stacks only): holds the
    // output expectation at `target`, nudges every hidden expectation by
    // lr_x * (-xi_i + Theta_i^T [xi_{i+1} . f'(z_i)]) for `steps` sweeps, and
    // returns the resulting errors in assign_errors' layout.
    std::vector<Tensor> relax_expected(const Tensor& target, std::size_t steps, scalar lr_x);

    // Forms the per-layer update directions from boundary errors (ascent
    // convention). backward_weights selects whether Theta deltas are formed;
    // the bottom layer's Theta delta is always zero because the input
    // boundary error is zero.
    void compute_local_updates(const std::vector<Tensor>& errors, bool backward_weights);

    std::vector<ParamRef> params();

    std::size_t parameter_count();

  private:
    std::vector<std::unique_ptr<Layer>> layers_;
    Tensor input_;
    Tensor output_;
};

/// Multilayer perceptron with the repo-wide activation contract: tanh hidden
/// layers, linear output. Weights and backward weights are drawn from
/// independent streams of `seed`.
Network build_mlp(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed);

/// Argmax class readout, ties to the lowest index.
std::vector<int> predict_classes(const Tensor& outputs);

/// 0.5 * mean over samples of ||target - output||^2.
scalar mse_half_loss(const Tensor& output, const Tensor& target);

}  // namespace dll
