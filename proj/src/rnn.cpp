#include "dll/nn/rnn.hpp"

namespace dll {

std::vector<ParamRef> RnnCell::params() {
    return {
        {"w_x", &w_x, &dw_x, false},
        {"w_h", &w_h, &dw_h, false},
        {"w_y", &w_y, &dw_y, false},
        {"theta_h", &theta_h, &dtheta_h, true},
        {"theta_y", &theta_y, &dtheta_y, true},
    };
}

RnnCell build_rnn_cell(std::size_t d_in, std::size_t hidden, std::size_t d_out, std::uint64_t seed) {
    if (d_in == 0 || hidden == 0 || d_out == 0) throw ConfigError("rnn cell dimensions must be positive");
    SeededRng rng(seed);
    RnnCell cell;
    SeededRng rx = rng.derive(1), rh = rng.derive(2), ry = rng.derive(3), rth = rng.derive(4),
              rty = rng.derive(5);
    cell.w_x = init_params({hidden, d_in}, d_in, rx);
    cell.w_h = init_params({hidden, hidden}, hidden, rh);
    cell.w_y = init_params({d_out, hidden}, hidden, ry);
    cell.theta_h = init_params({hidden, hidden}, hidden, rth);
    cell.theta_y = init_params({d_out, hidden}, hidden, rty);
    cell.dw_x = Tensor(cell.w_x.shape());
    cell.dw_h = Tensor(cell.w_h.shape());
    cell.dw_y = Tensor(cell.w_y.shape());
    cell.dtheta_h = Tensor(cell.theta_h.shape());
    cell.dtheta_y = Tensor(cell.theta_y.shape());
    return cell;
}

UnrolledPass rnn_forward(const RnnCell& cell, const std::vector<Tensor>& inputs, const Tensor& h0) {
    if (inputs.empty()) throw InputError("rnn_forward: empty sequence");
    const std::size_t batch = inputs.front().dim(0);
    if (h0.rank() != 2 || h0.dim(0) != batch || h0.dim(1) != cell.hidden_size()) {
        throw ShapeError("rnn_forward: h0 must be [batch x hidden]");
    }
    for (const Tensor& x : inputs) {
        if (x.rank() != 2 || x.dim(0) != batch || x.dim(1) != cell.input_size()) {
            throw ShapeError("rnn_forward: inputs must be [batch x " + std::to_string(cell.input_size()) +
                             "]");
        }
    }

    UnrolledPass pass;
    pass.h0 = h0;
    pass.inputs = inputs;
    const std::size_t n = inputs.size();
    pass.z.resize(n);
    pass.h.resize(n);
    pass.fprime.resize(n);
    pass.y.resize(n);
    const Tensor* prev = &h0;
    for (std::size_t i = 0; i < n; ++i) {
        pass.z[i] = add(matmul_nt(*prev, cell.w_h), matmul_nt(inputs[i], cell.w_x));
        pass.h[i] = Tensor(pass.z[i].shape());
        pass.fprime[i] = Tensor(pass.z[i].shape());
        apply_activation_into(pass.z[i], Activation::Tanh, pass.h[i], pass.fprime[i]);
        pass.y[i] = matmul_nt(pass.h[i], cell.w_y);  // linear readout
        prev = &pass.h[i];
    }
    return pass;
}

namespace {

void check_targets(const RnnCell& cell, const UnrolledPass& pass, const std::vector<Tensor>& targets) {
    if (pass.steps() == 0) throw StateError("error assignment before forward");
    if (targets.size() != pass.steps()) throw InputError("one target per timestep required");
    for (const Tensor& t : targets) {
        if (t.rank() != 2 || t.dim(0) != pass.batch() || t.dim(1) != cell.output_size()) {
            throw ShapeError("targets must be [batch x " + std::to_string(cell.output_size()) + "]");
        }
    }
}

}  // namespace

void rnn_errors(const RnnCell& cell, UnrolledPass& pass, const std::vector<Tensor>& targets,
                ErrorRoute route) {
    check_targets(cell, pass, targets);
    if (route == ErrorRoute::FeedbackMatrix) throw ConfigError("feedback alignment is not defined for RNNs");
    const Tensor& th_y = route == ErrorRoute::BackwardWeights ? cell.theta_y : cell.w_y;
    const Tensor& th_h = route == ErrorRoute::BackwardWeights ? cell.theta_h : cell.w_h;

    const std::size_t n = pass.steps();
    pass.xi_y.resize(n);
    pass.xi_h.resize(n);
    for (std::size_t i = 0; i < n; ++i) pass.xi_y[i] = sub(targets[i], pass.y[i]);

    // Last step first, then the recursion toward the beginning.
    pass.xi_h[n - 1] = matmul(pass.xi_y[n - 1], th_y);
    for (std::size_t i = n - 1; i-- > 0;) {
        const Tensor gated = hadamard(pass.xi_h[i + 1], pass.fprime[i + 1]);
        pass.xi_h[i] = add(matmul(pass.xi_y[i], th_y), matmul(gated, th_h));
    }
    pass.errors_filled = true;
}

void rnn_relax_hidden(const RnnCell& cell, UnrolledPass& pass, const std::vector<Tensor>& targets,
                      std::size_t steps, scalar lr_h) {
    check_targets(cell, pass, targets);
    if (steps < 1) throw ConfigError("relaxation step count must be >= 1");

    const std::size_t n = pass.steps();
    pass.xi_y.resize(n);
    for (std::size_t i = 0; i < n; ++i) pass.xi_y[i] = sub(targets[i], pass.y[i]);

    // h^p starts at h^s, so every hidden error starts at zero.
    std::vector<Tensor> hp(pass.h);
    pass.xi_h.assign(n, Tensor());
    for (std::size_t i = 0; i < n; ++i) pass.xi_h[i] = Tensor(pass.h[i].shape());

    for (std::size_t sweep = 0; sweep < steps; ++sweep) {
        std::vector<Tensor> delta(n);
        for (std::size_t i = 0; i < n; ++i) {
            Tensor d = sub(matmul(pass.xi_y[i], cell.theta_y), pass.xi_h[i]);
            if (i + 1 < n) {
                const Tensor gated = hadamard(pass.xi_h[i + 1], pass.fprime[i + 1]);
                d = add(d, matmul(gated, cell.theta_h));
            }
            delta[i] = std::move(d);
        }
        for (std::size_t i = 0; i < n; ++i) {
            add_scaled(hp[i], delta[i], lr_h);
            pass.xi_h[i] = sub(hp[i], pass.h[i]);
        }
    }
    pass.errors_filled = true;
}

void rnn_updates(RnnCell& cell, const UnrolledPass& pass) {
    if (!pass.errors_filled) throw StateError("rnn_updates called before error assignment");
    const std::size_t n = pass.steps();
    const scalar inv_batch = scalar{1} / static_cast<scalar>(pass.batch());

    cell.dw_x.fill(0);
    cell.dw_h.fill(0);
    cell.dw_y.fill(0);
    cell.dtheta_h.fill(0);
    cell.dtheta_y.fill(0);

    for (std::size_t i = 0; i < n; ++i) {
        const Tensor gated = hadamard(pass.xi_h[i], pass.fprime[i]);
        const Tensor& h_prev = i == 0 ? pass.h0 : pass.h[i - 1];
        add_scaled(cell.dw_y, matmul_tn(pass.xi_y[i], pass.h[i]), inv_batch);
        add_scaled(cell.dw_x, matmul_tn(gated, pass.inputs[i]), inv_batch);
        add_scaled(cell.dw_h, matmul_tn(gated, h_prev), inv_batch);
        add_scaled(cell.dtheta_y, matmul_tn(pass.xi_y[i], pass.xi_h[i]), -inv_batch);
        if (i + 1 < n) {
            // The backward recurrence pairs step i with the gated error of
            // step i+1; the sum stops at n-1.
            const Tensor gated_next = hadamard(pass.xi_h[i + 1], pass.fprime[i + 1]);
            add_scaled(cell.dtheta_h, matmul_tn(gated_next, pass.xi_h[i]), -inv_batch);
        }
    }
}

}  // namespace dll
