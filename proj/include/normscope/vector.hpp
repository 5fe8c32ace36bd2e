#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace normscope {

/// Maximum ambient dimension accepted unless a caller configures otherwise.
inline constexpr std::size_t kDefaultMaxDim = 8;

/// Absolute threshold below which a norm value counts as zero.
inline constexpr double kZeroThreshold = 1e-12;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Element of a finite-dimensional real vector space, in reference coordinates.
class Vector {
public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0) : coords_(dim, fill) {}
  Vector(std::initializer_list<double> xs) : coords_(xs) {}
  explicit Vector(std::vector<double> xs) : coords_(std::move(xs)) {}

  static Vector unit(std::size_t dim, std::size_t axis) {
    Vector e(dim);
    e[axis] = 1.0;
    return e;
  }

  std::size_t size() const noexcept { return coords_.size(); }
  double& operator[](std::size_t i) noexcept { return coords_[i]; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const std::vector<double>& data() const noexcept { return coords_; }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  bool all_finite() const noexcept {
    return std::all_of(coords_.begin(), coords_.end(), [](double x) { return std::isfinite(x); });
  }

  Vector& operator+=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  Vector& operator*=(double a) noexcept {
    for (auto& x : coords_) x *= a;
    return *this;
  }
  Vector& operator/=(double a) noexcept {
    for (auto& x : coords_) x /= a;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator-(Vector a) {
    for (auto& x : a.coords_) x = -x;
    return a;
  }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator/(Vector a, double s) { return a /= s; }
  friend bool operator==(const Vector&, const Vector&) = default;

private:
  void check_same(const Vector& o) const {
    if (o.size() != size())
      throw Error("vector dimension mismatch: " + std::to_string(size()) + " vs " +
                  std::to_string(o.size()));
  }

  std::vector<double> coords_;
};

inline double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Euclidean length in reference coordinates (not the norm under analysis).
inline double reference_length(const Vector& a) { return std::sqrt(dot(a, a)); }

inline double max_abs_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Row-major dense square matrix, small sizes only.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) noexcept { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a[i * n + j]; }

  double quadratic_form(const Vector& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += (*this)(i, j) * x[j];
      s += x[i] * row;
    }
    return s;
  }

  Vector apply(const Vector& x) const {
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Leading principal minors of m, computed from the pivots of Gaussian
/// elimination without row exchanges. Elimination stops at the first
/// non-positive pivot; later minors are then reported as 0.
inline std::vector<double> leading_principal_minors(const Matrix& m) {
  Matrix w = m;
  std::vector<double> minors(m.n, 0.0);
  double det = 1.0;
  for (std::size_t k = 0; k < m.n; ++k) {
    const double pivot = w(k, k);
    det *= pivot;
    minors[k] = det;
    if (!(pivot > 0.0)) break;
    for (std::size_t i = k + 1; i < m.n; ++i) {
      const double f = w(i, k) / pivot;
      for (std::size_t j = k; j < m.n; ++j) w(i, j) -= f * w(k, j);
    }
  }
  return minors;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
  return m;
}

}  // namespace normscope
