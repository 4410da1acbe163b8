#include "dll/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <sstream>

namespace dll {

namespace {

std::size_t checked_product(const Shape& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) {
        if (d == 0) throw ShapeError("tensor dimensions must be positive, got " + shape_to_string(shape));
        n *= d;
    }
    return n;
}

using EMat = Eigen::Matrix<scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using ECMap = Eigen::Map<const EMat>;

ECMap as_matrix(const Tensor& t) {
    return ECMap(t.data(), static_cast<Eigen::Index>(t.dim(0)), static_cast<Eigen::Index>(t.dim(1)));
}

void require_rank2(const Tensor& t, const char* op) {
    if (t.rank() != 2) {
        throw ShapeError(std::string(op) + ": expected a matrix, got shape " + shape_to_string(t.shape()));
    }
}

}  // namespace

std::string shape_to_string(const Shape& s) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out << ",";
        out << s[i];
    }
    out << ")";
    return out.str();
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)), data_(checked_product(shape_), scalar{0}) {}

Tensor::Tensor(Shape shape, std::vector<scalar> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (checked_product(shape_) != data_.size()) {
        throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                         shape_to_string(shape_));
    }
}

Tensor Tensor::vector(std::vector<scalar> v) {
    Shape s{v.size()};
    return Tensor(std::move(s), std::move(v));
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<scalar>> rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m ? rows.begin()->size() : 0;
    std::vector<scalar> data;
    data.reserve(m * n);
    for (const auto& row : rows) {
        if (row.size() != n) throw ShapeError("ragged matrix literal");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Tensor({m, n}, std::move(data));
}

Tensor Tensor::full(Shape shape, scalar value) {
    Tensor t(std::move(shape));
    t.fill(value);
    return t;
}

scalar& Tensor::at(std::size_t i) {
    if (rank() != 1 || i >= dim(0)) throw ShapeError("bad 1-d index");
    return data_[i];
}
scalar Tensor::at(std::size_t i) const { return const_cast<Tensor*>(this)->at(i); }

scalar& Tensor::at(std::size_t i, std::size_t j) {
    if (rank() != 2 || i >= dim(0) || j >= dim(1)) throw ShapeError("bad 2-d index");
    return data_[i * dim(1) + j];
}
scalar Tensor::at(std::size_t i, std::size_t j) const { return const_cast<Tensor*>(this)->at(i, j); }

scalar& Tensor::at(std::size_t i, std::size_t j, std::size_t k) {
    if (rank() != 3 || i >= dim(0) || j >= dim(1) || k >= dim(2)) throw ShapeError("bad 3-d index");
    return data_[(i * dim(1) + j) * dim(2) + k];
}
scalar Tensor::at(std::size_t i, std::size_t j, std::size_t k) const {
    return const_cast<Tensor*>(this)->at(i, j, k);
}

scalar& Tensor::at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    if (rank() != 4 || i >= dim(0) || j >= dim(1) || k >= dim(2) || l >= dim(3)) {
        throw ShapeError("bad 4-d index");
    }
    return data_[((i * dim(1) + j) * dim(2) + k) * dim(3) + l];
}
scalar Tensor::at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return const_cast<Tensor*>(this)->at(i, j, k, l);
}

Tensor Tensor::reshaped(Shape shape) const {
    if (checked_product(shape) != size()) {
        throw ShapeError("reshape " + shape_to_string(shape_) + " -> " + shape_to_string(shape) +
                         " changes element count");
    }
    return Tensor(std::move(shape), data_);
}

void Tensor::fill(scalar v) { std::fill(data_.begin(), data_.end(), v); }

void ensure_finite(const Tensor& t, const char* what) {
    for (scalar v : t.values()) {
        if (!std::isfinite(v)) {
            throw NumericError(std::string(what) + " produced a non-finite value");
        }
    }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul");
    require_rank2(b, "matmul");
    if (a.dim(1) != b.dim(0)) {
        throw ShapeError("matmul: inner dimensions disagree, " + shape_to_string(a.shape()) + " x " +
                         shape_to_string(b.shape()));
    }
    Tensor c({a.dim(0), b.dim(1)});
    EMap(c.data(), static_cast<Eigen::Index>(a.dim(0)), static_cast<Eigen::Index>(b.dim(1))).noalias() =
        as_matrix(a) * as_matrix(b);
    ensure_finite(c, "matmul");
    return c;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul_nt");
    require_rank2(b, "matmul_nt");
    if (a.dim(1) != b.dim(1)) {
        throw ShapeError("matmul_nt: inner dimensions disagree, " + shape_to_string(a.shape()) + " x " +
                         shape_to_string(b.shape()) + "^T");
    }
    Tensor c({a.dim(0), b.dim(0)});
    EMap(c.data(), static_cast<Eigen::Index>(a.dim(0)), static_cast<Eigen::Index>(b.dim(0))).noalias() =
        as_matrix(a) * as_matrix(b).transpose();
    ensure_finite(c, "matmul_nt");
    return c;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul_tn");
    require_rank2(b, "matmul_tn");
    if (a.dim(0) != b.dim(0)) {
        throw ShapeError("matmul_tn: inner dimensions disagree, " + shape_to_string(a.shape()) + "^T x " +
                         shape_to_string(b.shape()));
    }
    Tensor c({a.dim(1), b.dim(1)});
    EMap(c.data(), static_cast<Eigen::Index>(a.dim(1)), static_cast<Eigen::Index>(b.dim(1))).noalias() =
        as_matrix(a).transpose() * as_matrix(b);
    ensure_finite(c, "matmul_tn");
    return c;
}

namespace {
using ECMapDyn = Eigen::Map<const EMat>;

void gemm_finish(const scalar* c, std::size_t count, const char* what) {
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::isfinite(c[i])) throw NumericError(std::string(what) + " produced a non-finite value");
    }
}
}  // namespace

void gemm_nn(const scalar* a, const scalar* b, scalar* c, std::size_t m, std::size_t k, std::size_t n,
             scalar alpha, bool accumulate) {
    ECMapDyn ma(a, m, k), mb(b, k, n);
    EMap mc(c, m, n);
    if (accumulate) {
        mc.noalias() += alpha * (ma * mb);
    } else {
        mc.noalias() = alpha * (ma * mb);
    }
    gemm_finish(c, m * n, "gemm_nn");
}

void gemm_tn(const scalar* a, const scalar* b, scalar* c, std::size_t m, std::size_t k, std::size_t n,
             scalar alpha, bool accumulate) {
    ECMapDyn ma(a, k, m), mb(b, k, n);
    EMap mc(c, m, n);
    if (accumulate) {
        mc.noalias() += alpha * (ma.transpose() * mb);
    } else {
        mc.noalias() = alpha * (ma.transpose() * mb);
    }
    gemm_finish(c, m * n, "gemm_tn");
}

void gemm_nt(const scalar* a, const scalar* b, scalar* c, std::size_t m, std::size_t k, std::size_t n,
             scalar alpha, bool accumulate) {
    ECMapDyn ma(a, m, k), mb(b, n, k);
    EMap mc(c, m, n);
    if (accumulate) {
        mc.noalias() += alpha * (ma * mb.transpose());
    } else {
        mc.noalias() = alpha * (ma * mb.transpose());
    }
    gemm_finish(c, m * n, "gemm_nt");
}

Tensor outer(const Tensor& a, const Tensor& b) {
    if (a.rank() != 1 || b.rank() != 1) {
        throw ShapeError("outer: expected vectors, got " + shape_to_string(a.shape()) + " and " +
                         shape_to_string(b.shape()));
    }
    Tensor c({a.dim(0), b.dim(0)});
    for (std::size_t i = 0; i < a.dim(0); ++i) {
        const scalar ai = a[i];
        scalar* row = c.data() + i * b.dim(0);
        for (std::size_t j = 0; j < b.dim(0); ++j) row[j] = ai * b[j];
    }
    ensure_finite(c, "outer");
    return c;
}

namespace {
void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(op) + ": shape mismatch " + shape_to_string(a.shape()) + " vs " +
                         shape_to_string(b.shape()));
    }
}
}  // namespace

Tensor hadamard(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "hadamard");
    Tensor c(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * b[i];
    ensure_finite(c, "hadamard");
    return c;
}

Tensor add(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "add");
    Tensor c(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    ensure_finite(c, "add");
    return c;
}

Tensor sub(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "sub");
    Tensor c(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    ensure_finite(c, "sub");
    return c;
}

Tensor scaled(const Tensor& a, scalar c) {
    Tensor r(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    ensure_finite(r, "scaled");
    return r;
}

void add_scaled(Tensor& dst, const Tensor& src, scalar c) {
    require_same_shape(dst, src, "add_scaled");
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i];
    ensure_finite(dst, "add_scaled");
}

scalar dot(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "dot");
    scalar s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    if (!std::isfinite(s)) throw NumericError("dot produced a non-finite value");
    return s;
}

scalar sum(const Tensor& a) {
    scalar s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i];
    return s;
}

scalar max_abs(const Tensor& a) {
    scalar m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

}  // namespace dll
