#include "dll/train/adam.hpp"

#include <cmath>

namespace dll {

AdamState AdamState::for_param(const Tensor& param) {
    AdamState s;
    s.m = Tensor(param.shape());
    s.v = Tensor(param.shape());
    return s;
}

void adam_apply(AdamState& state, Tensor& param, const Tensor& delta, scalar rate) {
    if (!state.m.same_shape(param) || !delta.same_shape(param)) {
        throw ShapeError("adam_apply: state/delta shape mismatch");
    }
    state.t += 1;
    const scalar b1 = state.beta1, b2 = state.beta2;
    const scalar c1 = scalar{1} - std::pow(b1, static_cast<scalar>(state.t));
    const scalar c2 = scalar{1} - std::pow(b2, static_cast<scalar>(state.t));
    for (std::size_t i = 0; i < param.size(); ++i) {
        const scalar g = -delta[i];
        state.m[i] = b1 * state.m[i] + (scalar{1} - b1) * g;
        state.v[i] = b2 * state.v[i] + (scalar{1} - b2) * g * g;
        const scalar m_hat = state.m[i] / c1;
        const scalar v_hat = state.v[i] / c2;
        param[i] -= rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
    ensure_finite(param, "adam_apply");
}

void sgd_apply(Tensor& param, const Tensor& delta, scalar rate) {
    add_scaled(param, delta, rate);
}

}  // namespace dll
