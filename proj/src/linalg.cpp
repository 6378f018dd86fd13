#include "kmsgraph/linalg.hpp"

#include <cmath>
#include <cstdlib>

#include "kmsgraph/errors.hpp"

namespace kmsgraph {

IntMatrix::IntMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

namespace {

long long saturating_mul(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > IntMatrix::kSaturation / b) return IntMatrix::kSaturation;
  return a * b;
}

long long saturating_add(long long a, long long b) {
  if (a > IntMatrix::kSaturation - b) return IntMatrix::kSaturation;
  return a + b;
}

}  // namespace

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw InternalError("matrix product shape mismatch");
  IntMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const long long aik = (*this)(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j)
        out(i, j) = saturating_add(out(i, j), saturating_mul(aik, rhs(k, j)));
    }
  return out;
}

std::vector<long long> IntMatrix::apply(std::span<const long long> x) const {
  if (static_cast<int>(x.size()) != cols_) throw InternalError("matrix apply shape mismatch");
  std::vector<long long> out(rows_, 0);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      out[i] = saturating_add(out[i], saturating_mul((*this)(i, j), x[j]));
  return out;
}

bool IntMatrix::is_zero() const {
  for (long long v : a_)
    if (v != 0) return false;
  return true;
}

Matrix::Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from(const IntMatrix& m) {
  Matrix out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = static_cast<double>(m(i, j));
  return out;
}

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

std::vector<double> Matrix::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != cols_) throw InternalError("matrix apply shape mismatch");
  std::vector<double> out(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

LuSolver::LuSolver(Matrix a) : lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols()) throw InternalError("LU requires a square matrix");
  const int n = lu_.rows();
  perm_.resize(n);
  for (int i = 0; i < n; ++i) perm_[i] = i;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::fabs(lu_(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double cand = std::fabs(lu_(i, k));
      if (cand > best) {
        best = cand;
        pivot = i;
      }
    }
    if (best < 1e-300) throw InternalError("singular system in LU factorization");
    if (pivot != k) {
      std::swap(perm_[k], perm_[pivot]);
      for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(pivot, j));
    }
    for (int i = k + 1; i < n; ++i) {
      lu_(i, k) /= lu_(k, k);
      const double lik = lu_(i, k);
      if (lik == 0.0) continue;
      for (int j = k + 1; j < n; ++j) lu_(i, j) -= lik * lu_(k, j);
    }
  }
}

std::vector<double> LuSolver::solve(std::span<const double> b) const {
  const int n = lu_.rows();
  if (static_cast<int>(b.size()) != n) throw InternalError("LU solve shape mismatch");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (int i = 1; i < n; ++i) {
    double acc = x[i];
    for (int j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
    x[i] = acc;
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = x[i];
    for (int j = i + 1; j < n; ++j) acc -= lu_(i, j) * x[j];
    x[i] = acc / lu_(i, i);
  }
  return x;
}

std::vector<double> solve_linear(Matrix a, std::span<const double> b) {
  return LuSolver(std::move(a)).solve(b);
}

double pow_int(double x, int n) {
  if (n < 0) throw InternalError("pow_int requires a nonnegative exponent");
  double acc = 1.0;
  double base = x;
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

}  // namespace kmsgraph
