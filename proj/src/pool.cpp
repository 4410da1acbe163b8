#include "dll/nn/pool.hpp"

namespace dll {

PoolLayer::PoolLayer(PoolKind kind, std::size_t window) : kind_(kind), window_(window) {
    if (window == 0) throw ConfigError("pool window must be positive");
}

Tensor PoolLayer::forward(const Tensor& input) {
    if (input.rank() != 4) throw ShapeError("pool forward: expected [B x C x H x W]");
    in_shape_ = input.shape();
    const std::size_t b = input.dim(0), c = input.dim(1), h = input.dim(2), w = input.dim(3);
    const std::size_t oh = h / window_, ow = w / window_;
    if (oh == 0 || ow == 0) throw ShapeError("pool window larger than input");

    Tensor out({b, c, oh, ow});
    if (kind_ == PoolKind::Max) argmax_.assign(b * c * oh * ow, 0);

    for (std::size_t bi = 0; bi < b; ++bi) {
        for (std::size_t ci = 0; ci < c; ++ci) {
            const scalar* plane = input.data() + (bi * c + ci) * h * w;
            for (std::size_t oy = 0; oy < oh; ++oy) {
                for (std::size_t ox = 0; ox < ow; ++ox) {
                    const std::size_t out_idx = ((bi * c + ci) * oh + oy) * ow + ox;
                    if (kind_ == PoolKind::Max) {
                        scalar best = plane[(oy * window_) * w + ox * window_];
                        std::size_t best_at = (oy * window_) * w + ox * window_;
                        for (std::size_t dy = 0; dy < window_; ++dy) {
                            for (std::size_t dx = 0; dx < window_; ++dx) {
                                const std::size_t at = (oy * window_ + dy) * w + (ox * window_ + dx);
                                if (plane[at] > best) {
                                    best = plane[at];
                                    best_at = at;
                                }
                            }
                        }
                        out[out_idx] = best;
                        argmax_[out_idx] = (bi * c + ci) * h * w + best_at;
                    } else {
                        scalar acc = 0;
                        for (std::size_t dy = 0; dy < window_; ++dy) {
                            for (std::size_t dx = 0; dx < window_; ++dx) {
                                acc += plane[(oy * window_ + dy) * w + (ox * window_ + dx)];
                            }
                        }
                        out[out_idx] = acc / static_cast<scalar>(window_ * window_);
                    }
                }
            }
        }
    }
    return out;
}

void PoolLayer::gate_error(const Tensor& err_out) {
    if (in_shape_.empty()) throw StateError("pool gate_error called before forward");
    const std::size_t oh = in_shape_[2] / window_, ow = in_shape_[3] / window_;
    const Shape want{in_shape_[0], in_shape_[1], oh, ow};
    if (err_out.shape() != want) {
        throw ShapeError("pool gate_error: error shape " + shape_to_string(err_out.shape()) + ", expected " +
                         shape_to_string(want));
    }
    err_ = err_out;
}

Tensor PoolLayer::propagate_error(ErrorRoute) {
    if (err_.empty()) throw StateError("pool propagate_error called before gate_error");
    Tensor err_in(in_shape_);
    const std::size_t b = in_shape_[0], c = in_shape_[1], h = in_shape_[2], w = in_shape_[3];
    const std::size_t oh = h / window_, ow = w / window_;
    if (kind_ == PoolKind::Max) {
        for (std::size_t i = 0; i < err_.size(); ++i) err_in[argmax_[i]] += err_[i];
    } else {
        const scalar share = scalar{1} / static_cast<scalar>(window_ * window_);
        for (std::size_t bi = 0; bi < b; ++bi) {
            for (std::size_t ci = 0; ci < c; ++ci) {
                scalar* plane = err_in.data() + (bi * c + ci) * h * w;
                const scalar* eplane = err_.data() + (bi * c + ci) * oh * ow;
                for (std::size_t oy = 0; oy < oh; ++oy) {
                    for (std::size_t ox = 0; ox < ow; ++ox) {
                        const scalar v = eplane[oy * ow + ox] * share;
                        for (std::size_t dy = 0; dy < window_; ++dy) {
                            for (std::size_t dx = 0; dx < window_; ++dx) {
                                plane[(oy * window_ + dy) * w + (ox * window_ + dx)] = v;
                            }
                        }
                    }
                }
            }
        }
    }
    return err_in;
}

Shape PoolLayer::output_shape(const Shape& s) const {
    if (s.size() != 4) throw ShapeError("pool output_shape: expected [B x C x H x W]");
    const std::size_t oh = s[2] / window_, ow = s[3] / window_;
    if (oh == 0 || ow == 0) throw ShapeError("pool window larger than input");
    return {s[0], s[1], oh, ow};
}

Tensor FlattenLayer::forward(const Tensor& input) {
    if (input.rank() < 2) throw ShapeError("flatten forward: expected a batched tensor");
    in_shape_ = input.shape();
    return input.reshaped(output_shape(in_shape_));
}

void FlattenLayer::gate_error(const Tensor& err_out) {
    if (in_shape_.empty()) throw StateError("flatten gate_error called before forward");
    err_ = err_out;
}

Tensor FlattenLayer::propagate_error(ErrorRoute) {
    if (err_.empty()) throw StateError("flatten propagate_error called before gate_error");
    return err_.reshaped(in_shape_);
}

Shape FlattenLayer::output_shape(const Shape& s) const {
    std::size_t flat = 1;
    for (std::size_t i = 1; i < s.size(); ++i) flat *= s[i];
    return {s[0], flat};
}

}  // namespace dll
