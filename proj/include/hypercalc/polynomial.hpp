#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hypercalc/rational.hpp"

namespace hypercalc {

/// Variable slots shared by every polynomial in the library: slot 0 is t,
/// slots 1..8 are x^1..x^8 and slot 9 is the radical s.
inline constexpr int kMaxDim = 8;
inline constexpr int kMaxVars = kMaxDim + 2;
inline constexpr int kVarT = 0;
inline constexpr int kVarS = kMaxVars - 1;

struct Monomial {
  std::array<std::int16_t, kMaxVars> exp{};

  int degree() const;
  bool operator==(const Monomial&) const = default;
  Monomial operator*(const Monomial& o) const;
};

/// Graded lexicographic order with t < x^1 < ... < x^8 < s.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial with rational coefficients. Terms are kept
/// in ascending graded-lex order and zero coefficients are never stored.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, GrlexLess>;

  Polynomial() = default;
  explicit Polynomial(const Rational& c);
  static Polynomial variable(int slot, int power = 1);
  static Polynomial monomial(const Monomial& m, const Rational& c);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& m, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial operator-() const;
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Rational& c) const;
  Polynomial times_monomial(const Monomial& m) const;
  Polynomial pow(int exponent) const;

  /// Formal partial derivative with respect to one slot.
  Polynomial derivative(int slot) const;
  int max_exponent(int slot) const;
  /// True when every term carries slot with exponent >= 1.
  bool divisible_by_variable(int slot) const;
  Polynomial divide_by_variable(int slot) const;

  /// Splits p = sum_k c_k * v^k by powers of the given slot.
  std::map<int, Polynomial> coefficients_in(int slot) const;

  /// Exact division by d where d is monic in `slot` of degree >= 1 and
  /// treated as a polynomial in that slot. Returns false when the remainder
  /// is non-zero.
  bool divide_exact(const Polynomial& divisor, int slot, Polynomial& quotient) const;

  double evaluate(std::span<const double> values) const;
  Rational evaluate_exact(std::span<const Rational> values) const;

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

  /// Renders with caller-provided variable names (empty slot names are
  /// never printed since their exponents are zero).
  std::string to_string(std::span<const std::string> names) const;

 private:
  TermMap terms_;
};

}  // namespace hypercalc
