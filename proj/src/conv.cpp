#include "dll/nn/conv.hpp"

namespace dll {

void ConvGeom::validate() const {
    if (c_in == 0 || h == 0 || w == 0 || k == 0 || stride == 0) {
        throw ShapeError("conv geometry has a zero dimension");
    }
    if (h + 2 * pad < k || w + 2 * pad < k) {
        throw ShapeError("kernel " + std::to_string(k) + " larger than padded input " +
                         std::to_string(h + 2 * pad) + "x" + std::to_string(w + 2 * pad));
    }
}

namespace {

void im2col_into(const scalar* img, const ConvGeom& g, scalar* cols) {
    // cols is [patch x positions], row-major.
    const std::size_t oh = g.out_h(), ow = g.out_w(), positions = oh * ow;
    for (std::size_t c = 0; c < g.c_in; ++c) {
        const scalar* plane = img + c * g.h * g.w;
        for (std::size_t ky = 0; ky < g.k; ++ky) {
            for (std::size_t kx = 0; kx < g.k; ++kx) {
                scalar* row = cols + ((c * g.k + ky) * g.k + kx) * positions;
                for (std::size_t oy = 0; oy < oh; ++oy) {
                    const std::ptrdiff_t iy =
                        static_cast<std::ptrdiff_t>(oy * g.stride + ky) - static_cast<std::ptrdiff_t>(g.pad);
                    for (std::size_t ox = 0; ox < ow; ++ox) {
                        const std::ptrdiff_t ix =
                            static_cast<std::ptrdiff_t>(ox * g.stride + kx) - static_cast<std::ptrdiff_t>(g.pad);
                        const bool inside = iy >= 0 && iy < static_cast<std::ptrdiff_t>(g.h) && ix >= 0 &&
                                            ix < static_cast<std::ptrdiff_t>(g.w);
                        row[oy * ow + ox] = inside ? plane[iy * g.w + ix] : scalar{0};
                    }
                }
            }
        }
    }
}

void col2im_into(const scalar* cols, const ConvGeom& g, scalar* img) {
    const std::size_t oh = g.out_h(), ow = g.out_w(), positions = oh * ow;
    std::fill(img, img + g.c_in * g.h * g.w, scalar{0});
    for (std::size_t c = 0; c < g.c_in; ++c) {
        scalar* plane = img + c * g.h * g.w;
        for (std::size_t ky = 0; ky < g.k; ++ky) {
            for (std::size_t kx = 0; kx < g.k; ++kx) {
                const scalar* row = cols + ((c * g.k + ky) * g.k + kx) * positions;
                for (std::size_t oy = 0; oy < oh; ++oy) {
                    const std::ptrdiff_t iy =
                        static_cast<std::ptrdiff_t>(oy * g.stride + ky) - static_cast<std::ptrdiff_t>(g.pad);
                    if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
                    for (std::size_t ox = 0; ox < ow; ++ox) {
                        const std::ptrdiff_t ix =
                            static_cast<std::ptrdiff_t>(ox * g.stride + kx) - static_cast<std::ptrdiff_t>(g.pad);
                        if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) continue;
                        plane[iy * g.w + ix] += row[oy * ow + ox];
                    }
                }
            }
        }
    }
}

}  // namespace

Tensor im2col(const Tensor& input, std::size_t k, std::size_t stride, std::size_t pad) {
    if (input.rank() != 3) throw ShapeError("im2col: expected [C x H x W]");
    ConvGeom g{input.dim(0), input.dim(1), input.dim(2), k, stride, pad};
    g.validate();
    Tensor cols({g.patch(), g.positions()});
    im2col_into(input.data(), g, cols.data());
    return cols;
}

Tensor col2im(const Tensor& cols, const ConvGeom& geom) {
    geom.validate();
    if (cols.rank() != 2 || cols.dim(0) != geom.patch() || cols.dim(1) != geom.positions()) {
        throw ShapeError("col2im: cols shape " + shape_to_string(cols.shape()) + " does not match geometry");
    }
    Tensor img({geom.c_in, geom.h, geom.w});
    col2im_into(cols.data(), geom, img.data());
    return img;
}

ConvLayer::ConvLayer(std::size_t c_in, std::size_t c_out, std::size_t k, std::size_t stride, std::size_t pad,
                     Activation act, SeededRng& rng)
    : c_in_(c_in), c_out_(c_out), k_(k), stride_(stride), pad_(pad), act_(act) {
    if (c_in == 0 || c_out == 0 || k == 0 || stride == 0) throw ConfigError("conv layer has a zero parameter");
    const std::size_t patch = c_in * k * k;
    SeededRng w_rng = rng.derive(0x57);
    SeededRng theta_rng = rng.derive(0x7e);
    w_ = init_params({c_out, patch}, patch, w_rng);
    theta_ = init_params({c_out, patch}, patch, theta_rng);
    dw_ = Tensor({c_out, patch});
    dtheta_ = Tensor({c_out, patch});
}

ConvGeom ConvLayer::geom_for(const Shape& s) const {
    if (s.size() != 4 || s[1] != c_in_) {
        throw ShapeError("conv forward: expected [B x " + std::to_string(c_in_) + " x H x W], got " +
                         shape_to_string(s));
    }
    ConvGeom g{c_in_, s[2], s[3], k_, stride_, pad_};
    g.validate();
    return g;
}

Tensor ConvLayer::forward(const Tensor& input) {
    geom_ = geom_for(input.shape());
    batch_ = input.dim(0);
    const std::size_t patch = geom_.patch(), positions = geom_.positions();

    cols_ = Tensor({batch_, patch, positions});
    Tensor preact({batch_, c_out_, positions});
    for (std::size_t b = 0; b < batch_; ++b) {
        scalar* cols_b = cols_.data() + b * patch * positions;
        im2col_into(input.data() + b * c_in_ * geom_.h * geom_.w, geom_, cols_b);
        gemm_nn(w_.data(), cols_b, preact.data() + b * c_out_ * positions, c_out_, patch, positions);
    }
    Tensor out(preact.shape());
    fprime_ = Tensor(preact.shape());
    apply_activation_into(preact, act_, out, fprime_);
    gated_ = Tensor();
    return out.reshaped({batch_, c_out_, geom_.out_h(), geom_.out_w()});
}

void ConvLayer::gate_error(const Tensor& err_out) {
    if (batch_ == 0) throw StateError("conv gate_error called before forward");
    const Shape want{batch_, c_out_, geom_.out_h(), geom_.out_w()};
    if (err_out.shape() != want) {
        throw ShapeError("conv gate_error: error shape " + shape_to_string(err_out.shape()) +
                         ", expected " + shape_to_string(want));
    }
    gated_ = hadamard(err_out.reshaped(fprime_.shape()), fprime_);
}

Tensor ConvLayer::propagate_error(ErrorRoute route) {
    if (gated_.empty()) throw StateError("conv propagate_error called before gate_error");
    const std::size_t patch = geom_.patch(), positions = geom_.positions();
    if (route == ErrorRoute::FeedbackMatrix && feedback_.empty()) {
        throw StateError("conv layer has no feedback matrix installed");
    }
    Tensor err_in({batch_, c_in_, geom_.h, geom_.w});
    std::vector<scalar> err_cols(patch * positions);
    for (std::size_t b = 0; b < batch_; ++b) {
        const scalar* gated_b = gated_.data() + b * c_out_ * positions;
        switch (route) {
            case ErrorRoute::ForwardWeights:
                gemm_tn(w_.data(), gated_b, err_cols.data(), patch, c_out_, positions);
                break;
            case ErrorRoute::BackwardWeights:
                gemm_tn(theta_.data(), gated_b, err_cols.data(), patch, c_out_, positions);
                break;
            case ErrorRoute::FeedbackMatrix:
                gemm_nn(feedback_.data(), gated_b, err_cols.data(), patch, c_out_, positions);
                break;
        }
        col2im_into(err_cols.data(), geom_, err_in.data() + b * c_in_ * geom_.h * geom_.w);
    }
    return err_in;
}

void ConvLayer::compute_updates(const Tensor& err_in, bool backward_weights) {
    if (gated_.empty()) throw StateError("conv compute_updates called before gate_error");
    const std::size_t patch = geom_.patch(), positions = geom_.positions();
    const Shape in_shape{batch_, c_in_, geom_.h, geom_.w};
    if (backward_weights && err_in.shape() != in_shape) {
        throw ShapeError("conv compute_updates: err_in shape " + shape_to_string(err_in.shape()) +
                         ", expected " + shape_to_string(in_shape));
    }
    dw_.fill(0);
    dtheta_.fill(0);
    const scalar inv_batch = scalar{1} / static_cast<scalar>(batch_);
    std::vector<scalar> err_cols_buf(patch * positions);
    for (std::size_t b = 0; b < batch_; ++b) {
        const scalar* gated_b = gated_.data() + b * c_out_ * positions;
        const scalar* cols_b = cols_.data() + b * patch * positions;
        gemm_nt(gated_b, cols_b, dw_.data(), c_out_, positions, patch, inv_batch, true);
        if (backward_weights) {
            im2col_into(err_in.data() + b * c_in_ * geom_.h * geom_.w, geom_, err_cols_buf.data());
            gemm_nt(gated_b, err_cols_buf.data(), dtheta_.data(), c_out_, positions, patch, -inv_batch, true);
        }
    }
}

std::vector<ParamRef> ConvLayer::params() {
    return {
        {"w", &w_, &dw_, false},
        {"theta", &theta_, &dtheta_, true},
    };
}

void ConvLayer::set_feedback(Tensor b) {
    if (b.rank() != 2 || b.dim(0) != c_in_ * k_ * k_ || b.dim(1) != c_out_) {
        throw ShapeError("conv feedback matrix must be [patch x c_out]");
    }
    feedback_ = std::move(b);
}

Shape ConvLayer::output_shape(const Shape& input_shape) const {
    ConvGeom g = geom_for(input_shape);
    return {input_shape[0], c_out_, g.out_h(), g.out_w()};
}

}  // namespace dll
