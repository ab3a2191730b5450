#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypercalc/polynomial.hpp"

namespace hypercalc {

/// One Laurent monomial c * t^e0 * (x^1)^e1 ... * s^e9 of a scalar, with
/// negative exponents allowed on t and s only.
struct LaurentTerm {
  Rational coeff;
  std::array<int, kMaxVars> exp{};
  int degree() const;
};

/// Element of the coefficient ring Q[t, x, s]/(s^2 - t^2 + r^2) with t and s
/// inverted.
///
/// Stored as num * t^-t_den * s^-s_den where num has s-degree <= 1 and the
/// denominators are minimal (num is not divisible by t when t_den > 0 and not
/// divisible by s when s_den > 0). This representation is unique, so
/// structural equality is equality of functions on the cone.
class Scalar {
 public:
  explicit Scalar(int dim);
  Scalar(int dim, const Rational& c);

  static Scalar t(int dim);
  static Scalar s(int dim);
  static Scalar x(int a, int dim);
  /// r^2 = sum_a (x^a)^2.
  static Scalar r2(int dim);
  /// Builds from a polynomial in the shared slots, reducing s^2 -> t^2 - r^2.
  static Scalar from_polynomial(int dim, Polynomial p, int t_den = 0, int s_den = 0);

  int dim() const { return dim_; }
  const Polynomial& numerator() const { return num_; }
  int t_denominator() const { return t_den_; }
  int s_denominator() const { return s_den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return t_den_ == 0 && s_den_ == 0 && num_.is_constant(); }
  std::optional<Rational> constant_value() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  Scalar scaled(const Rational& c) const;

  /// Units of the ring are c * t^i * s^j; anything else throws.
  bool is_unit() const;
  Scalar inverse() const;
  Scalar pow(int exponent) const;

  /// Exact partial derivative d/dx^alpha (alpha = 0 is t), using
  /// d_t s = t/s and d_a s = -x^a/s.
  Scalar derivative(int alpha) const;

  double evaluate(double t, std::span<const double> x) const;
  /// Exact evaluation at a rational point; s must satisfy s^2 = t^2 - |x|^2.
  Rational evaluate_exact(const Rational& t, std::span<const Rational> x, const Rational& s) const;

  std::vector<LaurentTerm> laurent_terms() const;
  std::string to_string() const;

  bool operator==(const Scalar& o) const {
    return dim_ == o.dim_ && t_den_ == o.t_den_ && s_den_ == o.s_den_ && num_ == o.num_;
  }

 private:
  Scalar(int dim, Polynomial num, int t_den, int s_den);
  void canonicalize();
  // Rewrites every s^k (k >= 2) in p via s^2 = t^2 - r^2.
  Polynomial reduce_radical(const Polynomial& p) const;
  Polynomial times_s(const Polynomial& p, int power) const;
  Polynomial radical_square() const;

  int dim_;
  Polynomial num_;
  int t_den_ = 0;
  int s_den_ = 0;
};

/// Variable names used when printing slots: t, x1..x8, s.
std::span<const std::string> slot_names();

}  // namespace hypercalc
