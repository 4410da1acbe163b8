#include "dll/train/gradcheck.hpp"

#include <cmath>

namespace dll {

namespace {

double rel_err(double a, double b) {
    const double denom = std::max({std::abs(a), std::abs(b), 1e-6});
    return std::abs(a - b) / denom;
}

ErrorRoute route_of(TrainerKind kind) {
    switch (kind) {
        case TrainerKind::BP: return ErrorRoute::ForwardWeights;
        case TrainerKind::FA: return ErrorRoute::FeedbackMatrix;
        default: return ErrorRoute::BackwardWeights;
    }
}

}  // namespace

GradcheckReport gradcheck_network(TrainerKind kind, Network& net, const Tensor& inputs,
                                  const Tensor& targets, double eps, bool tie_backward) {
    auto params = net.params();
    std::size_t forward_entries = 0;
    for (const ParamRef& p : params) {
        if (!p.backward_weight) forward_entries += p.value->size();
    }
    if (forward_entries > kGradcheckParamLimit) {
        throw ConfigError("gradcheck refused: network exceeds " + std::to_string(kGradcheckParamLimit) +
                          " forward parameters");
    }

    if (tie_backward && (kind == TrainerKind::DLL || kind == TrainerKind::DLL_FA)) {
        for (ParamRef& p : params) {
            if (p.backward_weight) continue;
            for (ParamRef& q : params) {
                if (q.backward_weight && q.name.substr(0, q.name.find('.')) ==
                                             p.name.substr(0, p.name.find('.'))) {
                    *q.value = *p.value;
                }
            }
        }
    }

    // The algorithm's update directions for this batch.
    net.forward(inputs);
    auto errors = net.assign_errors(net.output_error(targets), route_of(kind));
    net.compute_local_updates(errors, false);

    GradcheckReport report;
    for (ParamRef& p : params) {
        if (p.backward_weight) continue;
        double worst = 0;
        Tensor& w = *p.value;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const scalar keep = w[i];
            w[i] = keep + static_cast<scalar>(eps);
            const double lp = static_cast<double>(mse_half_loss(net.forward(inputs), targets));
            w[i] = keep - static_cast<scalar>(eps);
            const double lm = static_cast<double>(mse_half_loss(net.forward(inputs), targets));
            w[i] = keep;
            const double fd_grad = (lp - lm) / (2 * eps);
            // Deltas are ascent directions on -L.
            const double algo_grad = -static_cast<double>((*p.delta)[i]);
            worst = std::max(worst, rel_err(fd_grad, algo_grad));
        }
        report.per_param.push_back({p.name, worst});
        report.max_rel_err = std::max(report.max_rel_err, worst);
    }
    // Leave the cached pass consistent with the unperturbed parameters.
    net.forward(inputs);
    return report;
}

GradcheckReport gradcheck_rnn(RnnCell& cell, const std::vector<Tensor>& inputs,
                              const std::vector<Tensor>& targets, double eps, bool tie_backward) {
    auto params = cell.params();
    std::size_t forward_entries = 0;
    for (const ParamRef& p : params) {
        if (!p.backward_weight) forward_entries += p.value->size();
    }
    if (forward_entries > kGradcheckParamLimit) {
        throw ConfigError("gradcheck refused: cell exceeds " + std::to_string(kGradcheckParamLimit) +
                          " forward parameters");
    }
    if (tie_backward) {
        cell.theta_h = cell.w_h;
        cell.theta_y = cell.w_y;
    }

    const Tensor h0({inputs.front().dim(0), cell.hidden_size()});
    auto loss_of = [&]() {
        UnrolledPass pass = rnn_forward(cell, inputs, h0);
        scalar loss = 0;
        for (std::size_t i = 0; i < pass.steps(); ++i) loss += mse_half_loss(pass.y[i], targets[i]);
        return static_cast<double>(loss);
    };

    UnrolledPass pass = rnn_forward(cell, inputs, h0);
    rnn_errors(cell, pass, targets, ErrorRoute::BackwardWeights);
    rnn_updates(cell, pass);

    GradcheckReport report;
    for (ParamRef& p : params) {
        if (p.backward_weight) continue;
        double worst = 0;
        Tensor& w = *p.value;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const scalar keep = w[i];
            w[i] = keep + static_cast<scalar>(eps);
            const double lp = loss_of();
            w[i] = keep - static_cast<scalar>(eps);
            const double lm = loss_of();
            w[i] = keep;
            const double fd_grad = (lp - lm) / (2 * eps);
            const double algo_grad = -static_cast<double>((*p.delta)[i]);
            worst = std::max(worst, rel_err(fd_grad, algo_grad));
        }
        report.per_param.push_back({p.name, worst});
        report.max_rel_err = std::max(report.max_rel_err, worst);
    }
    return report;
}

}  // namespace dll
