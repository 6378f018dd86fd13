#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kmsgraph {

/// Dense row-major matrix of nonnegative integer counts.  Multiplication
/// saturates at kSaturation so powers of adjacency-type matrices can be
/// compared against caps without overflow; counts below the saturation
/// threshold are exact.
class IntMatrix {
 public:
  static constexpr long long kSaturation = 1'000'000'000'000'000LL;

  IntMatrix() = default;
  IntMatrix(int rows, int cols);
  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long long& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  long long operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  IntMatrix operator*(const IntMatrix& rhs) const;
  std::vector<long long> apply(std::span<const long long> x) const;
  bool is_zero() const;

  bool operator==(const IntMatrix&) const = default;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<long long> a_;
};

/// Dense row-major double matrix sized for graphs with a handful of vertices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);
  static Matrix identity(int n);
  static Matrix from(const IntMatrix& m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix transposed() const;
  std::vector<double> apply(std::span<const double> x) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

/// LU factorization with partial pivoting.  Throws InternalError when a
/// pivot vanishes; callers guarantee nonsingular systems.
class LuSolver {
 public:
  explicit LuSolver(Matrix a);
  std::vector<double> solve(std::span<const double> b) const;

 private:
  Matrix lu_;
  std::vector<int> perm_;
};

std::vector<double> solve_linear(Matrix a, std::span<const double> b);

/// x^n by repeated squaring with the convention x^0 = 1, including 0^0 = 1.
double pow_int(double x, int n);

}  // namespace kmsgraph
