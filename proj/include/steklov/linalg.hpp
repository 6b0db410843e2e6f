#pragma once

// Dense symmetric linear algebra for the Galerkin solver: packed symmetric
// storage, Cholesky, triangular solves and a cyclic Jacobi eigensolver.
//
// Everything here operates on caller-owned values; there is no global state.

#include <cstddef>
#include <span>
#include <vector>

namespace steklov::linalg {

/// Symmetric matrix in packed lower-triangular storage (row i holds
/// entries (i,0)..(i,i)). Symmetry is structural: (i,j) and (j,i) alias.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> d);

  std::size_t dim() const noexcept { return dim_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[index(i, j)];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[index(i, j)];
  }

  double frobenius_norm() const noexcept;
  bool all_finite() const noexcept;

  /// Row-major dense copy, dim*dim entries.
  std::vector<double> dense() const;

  std::vector<double> multiply(std::span<const double> x) const;

  /// x^T A y
  double bilinear(std::span<const double> x, std::span<const double> y) const;

 private:
  static std::size_t index(std::size_t i, std::size_t j) noexcept {
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
  }

  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Lower-triangular factor in packed row storage.
class LowerTriangular {
 public:
  LowerTriangular() = default;
  explicit LowerTriangular(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return j > i ? 0.0 : data_[i * (i + 1) / 2 + j];
  }
  double& at(std::size_t i, std::size_t j) noexcept {
    return data_[i * (i + 1) / 2 + j];
  }

  /// Solves L x = b in place.
  void solve_lower(std::span<double> b) const;
  /// Solves L^T x = b in place.
  void solve_upper(std::span<double> b) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// A = L L^T. A pivot at or below 1e-13 ||A||_F is reported as NotSPD.
LowerTriangular cholesky(const SymMatrix& a);

/// Eigenvalues ascending; vectors stored eigenvector-major, so vector k
/// occupies [k*dim, (k+1)*dim).
struct Eigensystem {
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<double> vectors;
  int sweeps = 0;

  std::span<const double> vector(std::size_t k) const {
    return {vectors.data() + k * dim, dim};
  }
};

/// Cyclic-by-row Jacobi. Iterates until the off-diagonal Frobenius norm of
/// the rotated matrix is below 1e-12 ||A||_F; throws NumericalError after
/// 30 sweeps without convergence.
Eigensystem jacobi_eigen(const SymMatrix& a);

/// L^{-1} K L^{-T} for the Cholesky factor L of M.
SymMatrix reduce_generalized(const SymMatrix& k, const LowerTriangular& l);

/// Symmetric-definite problem K c = s M c. Returned vectors are
/// M-orthonormal. Decoupled blocks (connected components of the joint
/// sparsity pattern of K and M) are solved independently and merged in
/// ascending order; ties keep block order.
Eigensystem generalized_eigen(const SymMatrix& k, const SymMatrix& m);

}  // namespace steklov::linalg
