#pragma once

#include <string>
#include <utility>

#include "dll/rng.hpp"
#include "dll/tensor.hpp"

namespace dll {

enum class Activation { Tanh, Linear };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// Evaluates f and f' elementwise: tanh' = 1 - tanh^2, linear' = 1.
std::pair<Tensor, Tensor> apply_activation(const Tensor& z, Activation kind);

// In-place variant for the hot path; value/derivative must be preallocated
// to z's shape.
void apply_activation_into(const Tensor& z, Activation kind, Tensor& value, Tensor& derivative);

/// Weight initialization used for every parameter tensor: i.i.d. uniform on
/// [-1/sqrt(fan_in), +1/sqrt(fan_in)], which keeps tanh pre-activations in
/// the linear regime at the start of training.
Tensor init_params(Shape shape, std::size_t fan_in, SeededRng& rng);

}  // namespace dll
