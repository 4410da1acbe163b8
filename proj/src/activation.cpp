#include "dll/activation.hpp"

#include <cmath>

#include "dll/errors.hpp"

namespace dll {

std::string to_string(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Linear: return "linear";
    }
    return "?";
}

Activation activation_from_string(const std::string& s) {
    if (s == "tanh") return Activation::Tanh;
    if (s == "linear") return Activation::Linear;
    throw ConfigError("unknown activation '" + s + "'");
}

void apply_activation_into(const Tensor& z, Activation kind, Tensor& value, Tensor& derivative) {
    if (!value.same_shape(z) || !derivative.same_shape(z)) {
        throw ShapeError("apply_activation_into: output buffers must match input shape");
    }
    ensure_finite(z, "apply_activation input");
    switch (kind) {
        case Activation::Tanh:
            for (std::size_t i = 0; i < z.size(); ++i) {
                const scalar v = std::tanh(z[i]);
                value[i] = v;
                derivative[i] = scalar{1} - v * v;
            }
            break;
        case Activation::Linear:
            for (std::size_t i = 0; i < z.size(); ++i) {
                value[i] = z[i];
                derivative[i] = scalar{1};
            }
            break;
    }
}

std::pair<Tensor, Tensor> apply_activation(const Tensor& z, Activation kind) {
    Tensor value(z.shape());
    Tensor derivative(z.shape());
    apply_activation_into(z, kind, value, derivative);
    return {std::move(value), std::move(derivative)};
}

Tensor init_params(Shape shape, std::size_t fan_in, SeededRng& rng) {
    if (fan_in == 0) throw ConfigError("init_params: fan_in must be positive");
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = static_cast<scalar>(rng.uniform(-bound, bound));
    }
    return t;
}

}  // namespace dll
