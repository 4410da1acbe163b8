#include "dll/train/baselines.hpp"

#include <cmath>

namespace dll {

std::string to_string(TrainerKind k) {
    switch (k) {
        case TrainerKind::BP: return "bp";
        case TrainerKind::FA: return "fa";
        case TrainerKind::DLL: return "dll";
        case TrainerKind::DLL_FA: return "dll_fa";
    }
    return "?";
}

TrainerKind trainer_kind_from_string(const std::string& s) {
    if (s == "bp") return TrainerKind::BP;
    if (s == "fa") return TrainerKind::FA;
    if (s == "dll") return TrainerKind::DLL;
    if (s == "dll_fa" || s == "dllfa") return TrainerKind::DLL_FA;
    throw ConfigError("unknown algorithm '" + s + "' (expected bp|fa|dll|dll_fa)");
}

void install_feedback_matrices(Network& net, std::uint64_t seed) {
    SeededRng rng(seed);
    for (std::size_t i = 0; i < net.layer_count(); ++i) {
        Layer& layer = net.layer(i);
        auto params = layer.params();
        if (params.empty()) continue;
        const Tensor& w = *params.front().value;  // [n_out x n_in]
        SeededRng layer_rng = rng.derive(i);
        layer.set_feedback(init_params({w.dim(1), w.dim(0)}, w.dim(0), layer_rng));
    }
}

namespace {

ErrorRoute route_of(TrainerKind kind) {
    switch (kind) {
        case TrainerKind::BP: return ErrorRoute::ForwardWeights;
        case TrainerKind::FA: return ErrorRoute::FeedbackMatrix;
        case TrainerKind::DLL:
        case TrainerKind::DLL_FA: return ErrorRoute::BackwardWeights;
    }
    throw StateError("unreachable");
}

std::vector<std::pair<std::string, AdamState>> states_for(std::vector<ParamRef> params) {
    std::vector<std::pair<std::string, AdamState>> states;
    states.reserve(params.size());
    for (const ParamRef& p : params) states.emplace_back(p.name, AdamState::for_param(*p.value));
    return states;
}

}  // namespace

std::vector<Tensor> bp_backward(Network& net, const Tensor& targets) {
    const Tensor err = net.output_error(targets);
    auto errors = net.assign_errors(err, ErrorRoute::ForwardWeights);
    net.compute_local_updates(errors, /*backward_weights=*/false);
    std::vector<Tensor> grads;
    for (const ParamRef& p : net.params()) {
        if (p.backward_weight) continue;
        // Local updates are ascent directions on -L; the true gradient is
        // their negation.
        grads.push_back(scaled(*p.delta, scalar{-1}));
    }
    return grads;
}

std::vector<Tensor> fa_backward(Network& net, const Tensor& targets) {
    const Tensor err = net.output_error(targets);
    auto deltas = net.assign_errors(err, ErrorRoute::FeedbackMatrix);
    net.compute_local_updates(deltas, /*backward_weights=*/false);
    return deltas;
}

NetworkTrainer::NetworkTrainer(Network& net, TrainerKind kind, DllHyper hyper, bool use_adam)
    : net_(&net), kind_(kind), hyper_(hyper), use_adam_(use_adam) {
    hyper_.validate();
    states_ = states_for(net.params());
}

scalar NetworkTrainer::step(const Tensor& inputs, const Tensor& targets, scalar lr_w, scalar lr_theta) {
    Network& net = *net_;
    const Tensor out = net.forward(inputs);
    const scalar loss = mse_half_loss(out, targets);

    std::vector<Tensor> errors;
    if (hyper_.relaxation && kind_ != TrainerKind::BP && kind_ != TrainerKind::FA) {
        errors = net.relax_expected(targets, hyper_.relax_steps, hyper_.lr_x);
    } else {
        errors = net.assign_errors(net.output_error(targets), route_of(kind_));
    }
    const bool train_backward = kind_ == TrainerKind::DLL;
    net.compute_local_updates(errors, train_backward);

    auto params = net.params();
    for (std::size_t i = 0; i < params.size(); ++i) {
        ParamRef& p = params[i];
        if (p.backward_weight && !train_backward) continue;
        const scalar rate = p.backward_weight ? lr_theta : lr_w;
        if (use_adam_) {
            adam_apply(states_[i].second, *p.value, *p.delta, rate);
        } else {
            sgd_apply(*p.value, *p.delta, rate);
        }
    }
    return loss;
}

RnnTrainer::RnnTrainer(RnnCell& cell, TrainerKind kind, DllHyper hyper, bool use_adam)
    : cell_(&cell), kind_(kind), hyper_(hyper), use_adam_(use_adam) {
    hyper_.validate();
    if (kind == TrainerKind::FA) throw ConfigError("feedback alignment is not supported for RNNs");
    states_ = states_for(cell.params());
}

scalar RnnTrainer::step(const std::vector<Tensor>& inputs, const std::vector<Tensor>& targets, scalar lr_w,
                        scalar lr_theta) {
    RnnCell& cell = *cell_;
    if (inputs.empty() || targets.size() != inputs.size()) {
        throw InputError("rnn step: need matching input/target sequences");
    }
    const Tensor h0({inputs.front().dim(0), cell.hidden_size()});
    UnrolledPass pass = rnn_forward(cell, inputs, h0);

    scalar loss = 0;
    for (std::size_t i = 0; i < pass.steps(); ++i) loss += mse_half_loss(pass.y[i], targets[i]);

    if (hyper_.relaxation && kind_ != TrainerKind::BP) {
        rnn_relax_hidden(cell, pass, targets, hyper_.relax_steps, hyper_.lr_x);
    } else {
        rnn_errors(cell, pass, targets,
                   kind_ == TrainerKind::BP ? ErrorRoute::ForwardWeights : ErrorRoute::BackwardWeights);
    }
    rnn_updates(cell, pass);

    const bool train_backward = kind_ == TrainerKind::DLL;
    auto params = cell.params();
    for (std::size_t i = 0; i < params.size(); ++i) {
        ParamRef& p = params[i];
        if (p.backward_weight && !train_backward) continue;
        const scalar rate = p.backward_weight ? lr_theta : lr_w;
        if (use_adam_) {
            adam_apply(states_[i].second, *p.value, *p.delta, rate);
        } else {
            sgd_apply(*p.value, *p.delta, rate);
        }
    }
    return loss;
}

std::unique_ptr<NetworkTrainer> make_trainer(Network& net, TrainerKind kind, DllHyper hyper, bool use_adam,
                                             std::uint64_t feedback_seed) {
    if (kind == TrainerKind::FA) install_feedback_matrices(net, feedback_seed);
    return std::make_unique<NetworkTrainer>(net, kind, hyper, use_adam);
}

std::unique_ptr<RnnTrainer> make_trainer(RnnCell& cell, TrainerKind kind, DllHyper hyper, bool use_adam) {
    return std::make_unique<RnnTrainer>(cell, kind, hyper, use_adam);
}

}  // namespace dll
