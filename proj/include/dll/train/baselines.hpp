#pragma once

#include <memory>
#include <string>

#include "dll/nn/network.hpp"
#include "dll/nn/rnn.hpp"
#include "dll/train/adam.hpp"

namespace dll {

/// The learning rules sharing one trainer interface. DLL_FA behaves exactly
/// like DLL except the backward weights are never updated after their random
/// initialization.
enum class TrainerKind { BP, FA, DLL, DLL_FA };

std::string to_string(TrainerKind k);
TrainerKind trainer_kind_from_string(const std::string& s);

/// Builds and installs fixed random feedback matrices (shape [n_in x n_out]
/// per weighted layer, same +-1/sqrt(fan) family as the forward weights).
/// They are immutable for the network's lifetime.
void install_feedback_matrices(Network& net, std::uint64_t seed);

/// Exact backpropagation of 0.5*||t - y||^2 through the cached forward pass.
/// Returns the true loss gradients dL/dW per weighted layer, in layer order.
/// Backward weights are untouched.
std::vector<Tensor> bp_backward(Network& net, const Tensor& targets);

/// Feedback-alignment sweep: deltas flow through the fixed random matrices,
/// forward-weight update directions (ascent) are formed per layer. Returns
/// the per-boundary deltas, matching assign_errors' layout.
std::vector<Tensor> fa_backward(Network& net, const Tensor& targets);

/// Unified training step over a layer stack. Owns the optimizer states; the
/// caller owns the epoch schedule and passes the current rates.
class NetworkTrainer {
  public:
    NetworkTrainer(Network& net, TrainerKind kind, DllHyper hyper, bool use_adam);

    // Runs forward -> error assignment -> local updates -> parameter
    // application. Returns 0.5 * mean ||t - y||^2 before the update.
    scalar step(const Tensor& inputs, const Tensor& targets, scalar lr_w, scalar lr_theta);

    Network& network() { return *net_; }
    TrainerKind kind() const { return kind_; }
    std::vector<std::pair<std::string, AdamState>>& optimizer_states() { return states_; }

  private:
    Network* net_;
    TrainerKind kind_;
    DllHyper hyper_;
    bool use_adam_;
    std::vector<std::pair<std::string, AdamState>> states_;
};

/// Same contract for recurrent cells; timestep-major batches.
class RnnTrainer {
  public:
    RnnTrainer(RnnCell& cell, TrainerKind kind, DllHyper hyper, bool use_adam);

    scalar step(const std::vector<Tensor>& inputs, const std::vector<Tensor>& targets, scalar lr_w,
                scalar lr_theta);

    RnnCell& cell() { return *cell_; }
    TrainerKind kind() const { return kind_; }
    std::vector<std::pair<std::string, AdamState>>& optimizer_states() { return states_; }

  private:
    RnnCell* cell_;
    TrainerKind kind_;
    DllHyper hyper_;
    bool use_adam_;
    std::vector<std::pair<std::string, AdamState>> states_;
};

// Factory helpers; reject unsupported (kind, architecture) pairs.
std::unique_ptr<NetworkTrainer> make_trainer(Network& net, TrainerKind kind, DllHyper hyper,
                                             bool use_adam = true, std::uint64_t feedback_seed = 0);
std::unique_ptr<RnnTrainer> make_trainer(RnnCell& cell, TrainerKind kind, DllHyper hyper,
                                         bool use_adam = true);

}  // namespace dll
