#pragma once

#include <cstdint>

#include "dll/tensor.hpp"

namespace dll {

/// Per-parameter Adam state. The learning rules in this repository produce
/// ascent directions (P += lr * delta), so apply() treats g = -delta as the
/// gradient and performs the standard bias-corrected update.
struct AdamState {
    Tensor m;
    Tensor v;
    std::uint64_t t = 0;
    scalar beta1 = scalar{0.9};
    scalar beta2 = scalar{0.999};
    scalar epsilon = scalar{1e-8};

    static AdamState for_param(const Tensor& param);
};

void adam_apply(AdamState& state, Tensor& param, const Tensor& delta, scalar rate);

/// Plain ascent step P += rate * delta (the non-Adam mode used by the
/// equivalence oracles).
void sgd_apply(Tensor& param, const Tensor& delta, scalar rate);

}  // namespace dll
