#include "steklov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "steklov/errors.hpp"

namespace steklov::linalg {

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

double SymMatrix::frobenius_norm() const noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < i; ++j) sum += 2.0 * (*this)(i, j) * (*this)(i, j);
    sum += (*this)(i, i) * (*this)(i, i);
  }
  return std::sqrt(sum);
}

bool SymMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> SymMatrix::dense() const {
  std::vector<double> out(dim_ * dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j <= i; ++j) out[i * dim_ + j] = out[j * dim_ + i] = (*this)(i, j);
  return out;
}

std::vector<double> SymMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double a = (*this)(i, j);
      y[i] += a * x[j];
      y[j] += a * x[i];
    }
    y[i] += (*this)(i, i) * x[i];
  }
  return y;
}

double SymMatrix::bilinear(std::span<const double> x, std::span<const double> y) const {
  const auto ay = multiply(y);
  return std::inner_product(x.begin(), x.end(), ay.begin(), 0.0);
}

LowerTriangular::LowerTriangular(std::size_t dim) : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {}

void LowerTriangular::solve_lower(std::span<double> b) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    const double* row = data_.data() + i * (i + 1) / 2;
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= row[j] * b[j];
    b[i] = s / row[i];
  }
}

void LowerTriangular::solve_upper(std::span<double> b) const {
  for (std::size_t ii = dim_; ii-- > 0;) {
    b[ii] /= (*this)(ii, ii);
    const double x = b[ii];
    const double* row = data_.data() + ii * (ii + 1) / 2;
    for (std::size_t j = 0; j < ii; ++j) b[j] -= row[j] * x;
  }
}

LowerTriangular cholesky(const SymMatrix& a) {
  const std::size_t n = a.dim();
  if (!a.all_finite()) throw NotSPD("cholesky: matrix has non-finite entries");
  const double threshold = 1e-13 * a.frobenius_norm();
  LowerTriangular l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > threshold)) {
      std::ostringstream msg;
      msg << "cholesky: pivot " << d << " at row " << j << " is not above " << threshold
          << "; matrix is not positive definite";
      throw NotSPD(msg.str());
    }
    const double ljj = std::sqrt(d);
    l.at(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l.at(i, j) = s / ljj;
    }
  }
  return l;
}

namespace {

constexpr int kMaxSweeps = 30;

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
  double sum = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) sum += a[p * n + q] * a[p * n + q];
  return std::sqrt(2.0 * sum);
}

}  // namespace

Eigensystem jacobi_eigen(const SymMatrix& sym) {
  const std::size_t n = sym.dim();
  if (!sym.all_finite()) throw NumericalError("jacobi_eigen: matrix has non-finite entries");

  std::vector<double> a = sym.dense();
  // Rows of vt are the eigenvectors (V transposed) so rotations touch
  // contiguous memory.
  std::vector<double> vt(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;

  const double norm = sym.frobenius_norm();
  int sweep = 0;
  for (;; ++sweep) {
    if (off_diagonal_norm(a, n) <= 1e-12 * norm) break;
    if (sweep == kMaxSweeps) {
      std::ostringstream msg;
      msg << "jacobi_eigen: no convergence after " << kMaxSweeps << " sweeps (dim " << n << ")";
      throw NumericalError(msg.str());
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        const double abs_apq = std::abs(apq);
        if (abs_apq < 1e-300) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        // Late sweeps: drop elements that can no longer change the diagonal.
        const double g = 100.0 * abs_apq;
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a[p * n + q] = a[q * n + p] = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        double* rp = a.data() + p * n;
        double* rq = a.data() + q * n;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = rp[r];
          const double arq = rq[r];
          rp[r] = arp - s * (arq + tau * arp);
          rq[r] = arq + s * (arp - tau * arq);
          a[r * n + p] = rp[r];
          a[r * n + q] = rq[r];
        }
        rp[p] = app - t * apq;
        rq[q] = aqq + t * apq;
        rp[q] = rq[p] = 0.0;

        double* vp = vt.data() + p * n;
        double* vq = vt.data() + q * n;
        for (std::size_t r = 0; r < n; ++r) {
          const double x = vp[r];
          const double y = vq[r];
          vp[r] = x - s * (y + tau * x);
          vq[r] = y + s * (x - tau * y);
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });

  Eigensystem out;
  out.dim = n;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]];
    std::copy_n(vt.begin() + static_cast<std::ptrdiff_t>(order[k] * n), n,
                out.vectors.begin() + static_cast<std::ptrdiff_t>(k * n));
  }
  return out;
}

SymMatrix reduce_generalized(const SymMatrix& k, const LowerTriangular& l) {
  const std::size_t n = k.dim();
  // wt row j = L^{-1} K[:, j], i.e. column j of W = L^{-1} K.
  std::vector<double> wt(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    std::span<double> col(wt.data() + j * n, n);
    for (std::size_t i = 0; i < n; ++i) col[i] = k(i, j);
    l.solve_lower(col);
  }
  // Column j of C = L^{-1} (row j of W).
  SymMatrix c(n);
  std::vector<double> work(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) work[i] = wt[i * n + j];
    l.solve_lower(work);
    for (std::size_t i = j; i < n; ++i) c(i, j) = work[i];
  }
  return c;
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

Eigensystem generalized_eigen(const SymMatrix& k, const SymMatrix& m) {
  const std::size_t n = k.dim();
  if (m.dim() != n) throw DomainError("generalized_eigen: K and M dimensions differ");

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (k(i, j) != 0.0 || m(i, j) != 0.0) {
        const std::size_t ri = find_root(parent, i);
        const std::size_t rj = find_root(parent, j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  // Blocks ordered by their smallest member; members ascending.
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::ptrdiff_t> block_of_root(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find_root(parent, i);
    if (block_of_root[r] < 0) {
      block_of_root[r] = static_cast<std::ptrdiff_t>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(block_of_root[r])].push_back(i);
  }

  struct Pair {
    double value;
    std::size_t block;
    std::size_t local;
  };
  std::vector<Pair> pairs;
  std::vector<Eigensystem> solved;
  solved.reserve(blocks.size());
  int max_sweeps = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    const std::size_t d = idx.size();
    SymMatrix kb(d), mb(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        kb(i, j) = k(idx[i], idx[j]);
        mb(i, j) = m(idx[i], idx[j]);
      }
    const LowerTriangular l = cholesky(mb);
    Eigensystem es = jacobi_eigen(reduce_generalized(kb, l));
    for (std::size_t e = 0; e < d; ++e) {
      l.solve_upper(std::span<double>(es.vectors.data() + e * d, d));
      pairs.push_back({es.values[e], b, e});
    }
    max_sweeps = std::max(max_sweeps, es.sweeps);
    solved.push_back(std::move(es));
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& x, const Pair& y) { return x.value < y.value; });

  Eigensystem out;
  out.dim = n;
  out.sweeps = max_sweeps;
  out.values.resize(n);
  out.vectors.assign(n * n, 0.0);
  for (std::size_t e = 0; e < n; ++e) {
    const Pair& p = pairs[e];
    out.values[e] = p.value;
    const auto& idx = blocks[p.block];
    const auto v = solved[p.block].vector(p.local);
    for (std::size_t i = 0; i < idx.size(); ++i) out.vectors[e * n + idx[i]] = v[i];
  }
  return out;
}

}  // namespace steklov::linalg
