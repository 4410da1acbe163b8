#include "dll/nn/network.hpp"

namespace dll {

void DllHyper::validate() const {
    if (lr_w <= 0 || lr_theta <= 0) throw ConfigError("learning rates must be positive");
    if (relaxation) {
        if (relax_steps < 1) throw ConfigError("relaxation step count must be >= 1");
        if (lr_x <= 0) throw ConfigError("relaxation step size must be positive");
    }
}

void Network::add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

Tensor Network::forward(const Tensor& input) {
    if (layers_.empty()) throw StateError("forward on an empty network");
    input_ = input;
    Tensor x = input;
    for (auto& layer : layers_) x = layer->forward(x);
    output_ = x;
    return output_;
}

const Tensor& Network::output() const {
    if (output_.empty()) throw StateError("no forward pass has run");
    return output_;
}

Tensor Network::output_error(const Tensor& target) const {
    const Tensor& y = output();
    if (!target.same_shape(y)) {
        throw ShapeError("output_error: target shape " + shape_to_string(target.shape()) +
                         " does not match output " + shape_to_string(y.shape()));
    }
    return sub(target, y);
}

std::vector<Tensor> Network::assign_errors(const Tensor& output_err, ErrorRoute route) {
    if (output_.empty()) throw StateError("assign_errors called before forward");
    const std::size_t n = layers_.size();
    std::vector<Tensor> errors(n + 1);
    errors[n] = output_err;
    for (std::size_t i = n; i-- > 0;) {
        layers_[i]->gate_error(errors[i + 1]);
        if (i == 0) {
            // The input boundary error is x_0 - u_0 = 0 by construction.
            errors[0] = Tensor(input_.shape());
        } else {
            errors[i] = layers_[i]->propagate_error(route);
        }
    }
    return errors;
}

std::vector<Tensor> Network::relax_expected(const Tensor& target, std::size_t steps, scalar lr_x) {
    if (output_.empty()) throw StateError("relax_expected called before forward");
    if (steps < 1) throw ConfigError("relaxation step count must be >= 1");
    const std::size_t n = layers_.size();

    std::vector<DenseLayer*> dense(n);
    for (std::size_t i = 0; i < n; ++i) {
        dense[i] = dynamic_cast<DenseLayer*>(layers_[i].get());
        if (!dense[i]) throw StateError("relaxation supports dense stacks only");
    }

    // Hidden expectations start at the sensory values (zero error); the
    // output expectation is pinned to the target.
    const Tensor xi_top = output_error(target);
    std::vector<Tensor> xi(n + 1);          // xi[i]: error at neuron boundary i
    xi[n] = xi_top;
    for (std::size_t i = 1; i < n; ++i) xi[i] = Tensor(dense[i]->cached_input().shape());
    std::vector<Tensor> x(n);               // x[i]: hidden expectation at boundary i (1..n-1 used)
    for (std::size_t i = 1; i < n; ++i) x[i] = dense[i]->cached_input();

    for (std::size_t sweep = 0; sweep < steps; ++sweep) {
        // Snapshot semantics: all increments use this sweep's starting errors.
        std::vector<Tensor> delta(n);
        for (std::size_t i = 1; i < n; ++i) {
            const Tensor gated = hadamard(xi[i + 1], dense[i]->cached_fprime());
            delta[i] = sub(matmul(gated, dense[i]->backward_weights()), xi[i]);
        }
        for (std::size_t i = 1; i < n; ++i) {
            add_scaled(x[i], delta[i], lr_x);
            xi[i] = sub(x[i], dense[i]->cached_input());
        }
    }
    xi[0] = Tensor(input_.shape());
    return xi;
}

void Network::compute_local_updates(const std::vector<Tensor>& errors, bool backward_weights) {
    if (errors.size() != layers_.size() + 1) {
        throw StateError("compute_local_updates: expected one error per neuron boundary");
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        layers_[i]->gate_error(errors[i + 1]);
        // The bottom boundary error is identically zero, so the bottom
        // backward-weight delta vanishes; skip forming it.
        layers_[i]->compute_updates(errors[i], backward_weights && i > 0);
    }
}

std::vector<ParamRef> Network::params() {
    std::vector<ParamRef> out;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        for (ParamRef p : layers_[i]->params()) {
            p.name = "L" + std::to_string(i) + "." + p.name;
            out.push_back(p);
        }
    }
    return out;
}

std::size_t Network::parameter_count() {
    std::size_t n = 0;
    for (const ParamRef& p : params()) n += p.value->size();
    return n;
}

Network build_mlp(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 2) throw ConfigError("an MLP needs at least 2 layer sizes");
    for (std::size_t s : layer_sizes) {
        if (s == 0) throw ConfigError("layer sizes must be positive");
    }
    SeededRng rng(seed);
    Network net;
    for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
        const bool last = i + 2 == layer_sizes.size();
        SeededRng layer_rng = rng.derive(i);
        net.add(std::make_unique<DenseLayer>(layer_sizes[i], layer_sizes[i + 1],
                                             last ? Activation::Linear : Activation::Tanh, layer_rng));
    }
    return net;
}

std::vector<int> predict_classes(const Tensor& outputs) {
    if (outputs.rank() != 2) throw ShapeError("predict_classes: expected [batch x classes]");
    std::vector<int> ids(outputs.dim(0));
    for (std::size_t b = 0; b < outputs.dim(0); ++b) {
        const scalar* row = outputs.data() + b * outputs.dim(1);
        std::size_t best = 0;
        for (std::size_t j = 1; j < outputs.dim(1); ++j) {
            if (row[j] > row[best]) best = j;
        }
        ids[b] = static_cast<int>(best);
    }
    return ids;
}

scalar mse_half_loss(const Tensor& output, const Tensor& target) {
    if (!output.same_shape(target)) throw ShapeError("mse_half_loss: shape mismatch");
    scalar acc = 0;
    for (std::size_t i = 0; i < output.size(); ++i) {
        const scalar d = target[i] - output[i];
        acc += d * d;
    }
    return acc / (scalar{2} * static_cast<scalar>(output.dim(0)));
}

}  // namespace dll
