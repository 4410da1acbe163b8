#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "dll/errors.hpp"

namespace dll {

#ifdef DLL_FLOAT32
using scalar = float;
#else
using scalar = double;
#endif

using Shape = std::vector<std::size_t>;

std::string shape_to_string(const Shape& s);

/// Dense row-major n-dimensional array. The lingua franca of all modules:
/// activations, weights, errors, images and sequences are all Tensors.
/// Value semantics throughout; no views, no broadcasting.
class Tensor {
  public:
    Tensor() = default;

    // Zero-filled tensor of the given shape.
    explicit Tensor(Shape shape);

    Tensor(Shape shape, std::vector<scalar> data);

    static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }
    static Tensor vector(std::vector<scalar> v);
    // 2-D convenience used heavily in tests.
    static Tensor matrix(std::initializer_list<std::initializer_list<scalar>> rows);
    static Tensor full(Shape shape, scalar value);

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t dim(std::size_t i) const { return shape_.at(i); }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    scalar* data() { return data_.data(); }
    const scalar* data() const { return data_.data(); }
    const std::vector<scalar>& values() const { return data_; }

    scalar& operator[](std::size_t i) { return data_[i]; }
    scalar operator[](std::size_t i) const { return data_[i]; }

    scalar& at(std::size_t i);
    scalar at(std::size_t i) const;
    scalar& at(std::size_t i, std::size_t j);
    scalar at(std::size_t i, std::size_t j) const;
    scalar& at(std::size_t i, std::size_t j, std::size_t k);
    scalar at(std::size_t i, std::size_t j, std::size_t k) const;
    scalar& at(std::size_t i, std::size_t j, std::size_t k, std::size_t l);
    scalar at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const;

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    // Same data, new shape; element count must match.
    Tensor reshaped(Shape shape) const;

    void fill(scalar v);

    bool operator==(const Tensor& other) const {
        return shape_ == other.shape_ && data_ == other.data_;
    }

  private:
    Shape shape_;
    std::vector<scalar> data_;
};

// Throws NumericError if any entry is NaN or Inf. `what` names the producing op.
void ensure_finite(const Tensor& t, const char* what);

// --- linear algebra -------------------------------------------------------
// Weight orientation is fixed repo-wide: weights are (out_dim x in_dim) and
// activations are batch-major (batch x dim), so a forward map is matmul_nt.

// C = A * B with A [m x k], B [k x n].
Tensor matmul(const Tensor& a, const Tensor& b);
// C = A * B^T with A [m x k], B [n x k].
Tensor matmul_nt(const Tensor& a, const Tensor& b);
// C = A^T * B with A [m x k], B [m x n], giving [k x n].
Tensor matmul_tn(const Tensor& a, const Tensor& b);

// C[i][j] = a[i] * b[j] for vectors a [m], b [n].
Tensor outer(const Tensor& a, const Tensor& b);

// Raw row-major GEMM kernels for hot paths that work on tensor slices.
// c = alpha * op(a) * op(b) (+ c when accumulate); dimensions are those of
// the logical product: op(a) [m x k], op(b) [k x n], c [m x n].
void gemm_nn(const scalar* a, const scalar* b, scalar* c, std::size_t m, std::size_t k, std::size_t n,
             scalar alpha = 1, bool accumulate = false);
void gemm_tn(const scalar* a, const scalar* b, scalar* c, std::size_t m, std::size_t k, std::size_t n,
             scalar alpha = 1, bool accumulate = false);  // a stored [k x m]
void gemm_nt(const scalar* a, const scalar* b, scalar* c, std::size_t m, std::size_t k, std::size_t n,
             scalar alpha = 1, bool accumulate = false);  // b stored [n x k]

// --- elementwise ----------------------------------------------------------

Tensor hadamard(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scaled(const Tensor& a, scalar c);
// dst += c * src
void add_scaled(Tensor& dst, const Tensor& src, scalar c);
scalar dot(const Tensor& a, const Tensor& b);
scalar sum(const Tensor& a);
scalar max_abs(const Tensor& a);

}  // namespace dll
