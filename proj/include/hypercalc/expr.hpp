#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypercalc/scalar.hpp"

namespace hypercalc {

/// Abstract function symbol appearing in an expression.
///
/// A derivative atom is d^I L^J u, meaning d^I applied to (L^J u). The
/// partial word I is kept sorted because coordinate partials commute; the
/// boost word J is kept exactly as written, outermost boost first.
/// A composition atom is f^(k)(u), the k-th derivative of an outer function
/// evaluated at the inner function u.
struct Atom {
  enum class Kind { Derivative, Composition };

  Kind kind = Kind::Derivative;
  std::string function;       // u (derivative atoms) or the inner function
  std::vector<int> partials;  // sorted, entries in 0..n
  std::vector<int> boosts;    // entries in 1..n
  std::string outer;          // composition only
  int order = 0;              // composition only

  static Atom derivative(std::string id, std::vector<int> partials = {},
                         std::vector<int> boosts = {});
  static Atom composition(std::string outer, int order, std::string inner);

  std::string to_string() const;
  auto operator<=>(const Atom&) const = default;
};

/// Product of atom powers, sorted by atom; the empty product is 1.
using AtomMonomial = std::vector<std::pair<Atom, int>>;

/// A point of the cone K = {t > |x| + 1}.
struct Point {
  double t = 0.0;
  std::vector<double> x;

  int dim() const { return static_cast<int>(x.size()); }
  double r() const;
  double s() const;
  bool in_cone() const;
};

/// Rational point with a rational s; used for exact evaluation.
struct ExactPoint {
  Rational t;
  std::vector<Rational> x;
  Rational s;
};

class Expr;

/// Univariate polynomial y -> sum c_k y^k used as a concrete outer function
/// for composition atoms.
struct OuterFunction {
  std::vector<Rational> coeffs;

  static OuterFunction power(int p);
  OuterFunction derivative(int times = 1) const;
  Expr compose(const Expr& inner) const;
};

struct Bindings {
  std::map<std::string, Expr> functions;
  std::map<std::string, OuterFunction> outer;
};

/// Exact scalar field on the cone, polynomial in abstract atoms.
///
/// Every Expr is held in canonical form: a map from atom monomials to
/// non-zero canonical Scalar coefficients. Two Exprs are equal iff their
/// canonical forms coincide.
class Expr {
 public:
  explicit Expr(int dim);
  Expr(int dim, const Rational& c);
  explicit Expr(Scalar c);

  static Expr t(int dim);
  static Expr s(int dim);
  static Expr x(int a, int dim);
  static Expr r2(int dim);
  static Expr atom(const Atom& a, int dim);
  static Expr function(const std::string& id, int dim) { return atom(Atom::derivative(id), dim); }

  int dim() const { return dim_; }
  const std::map<AtomMonomial, Scalar>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_atom_free() const;
  bool is_constant() const;
  std::optional<Rational> constant_value() const;
  /// Coefficient of the empty atom monomial.
  Scalar atom_free_part() const;
  /// Atom-free expression as a scalar; throws when atoms are present.
  Scalar as_scalar() const;

  Expr operator-() const;
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(const Expr& a, const Expr& b);
  /// Division is defined for divisors that are units c*t^i*s^j.
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr scaled(const Rational& c) const;
  Expr times_scalar(const Scalar& c) const;
  Expr pow(int exponent) const;

  /// Exact partial derivative along x^alpha (alpha = 0 is t).
  Expr differentiate(int alpha) const;

  /// Replaces every atom by its bound closed form.
  Expr bind(const Bindings& b) const;
  double evaluate(const Point& p, const Bindings& b = {}) const;
  Rational evaluate_exact(const ExactPoint& p, const Bindings& b = {}) const;

  /// Flattened view: one Laurent term per coefficient term, tagged with its
  /// atom monomial.
  std::vector<std::pair<LaurentTerm, AtomMonomial>> flat_terms() const;

  std::string to_string() const;

  bool operator==(const Expr& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

 private:
  void add(const AtomMonomial& m, const Scalar& c);

  int dim_;
  std::map<AtomMonomial, Scalar> terms_;
};

/// Applies the boost L_a = x^a d_t + t d_a to an atom-free expression.
Expr apply_boost_to_function(int a, const Expr& e);

/// Generic derivation over atom products: coefficients go through
/// `on_scalar`, each atom through `on_atom`, combined by the product rule.
template <typename ScalarFn, typename AtomFn>
Expr apply_derivation(const Expr& e, ScalarFn&& on_scalar, AtomFn&& on_atom);

struct HomogeneityReport {
  std::optional<int> degree;
  std::string witness;
};

/// Degree k with e(lambda t, lambda x) = lambda^k e(t, x), counting t, x^a
/// and s with weight one. Throws when atoms are present.
HomogeneityReport homogeneity_degree(const Expr& e);

/// Same as `Expr::simplify` in a classical CAS; canonical form is maintained
/// on construction so this returns its argument.
inline Expr simplify(const Expr& e) { return e; }

std::string format_atom_monomial(const AtomMonomial& m);
std::string format_laurent_term(const LaurentTerm& lt);

// ---------------------------------------------------------------------------

template <typename ScalarFn, typename AtomFn>
Expr apply_derivation(const Expr& e, ScalarFn&& on_scalar, AtomFn&& on_atom) {
  const int n = e.dim();
  Expr result(n);
  for (const auto& [mono, coeff] : e.terms()) {
    Expr atoms(n, Rational(1));
    for (const auto& [atom, power] : mono) atoms *= Expr::atom(atom, n).pow(power);
    Expr dc = on_scalar(coeff);
    if (!dc.is_zero()) result += dc * atoms;
    for (std::size_t i = 0; i < mono.size(); ++i) {
      Expr da = on_atom(mono[i].first);
      if (da.is_zero()) continue;
      Expr others{Scalar(coeff)};
      for (std::size_t j = 0; j < mono.size(); ++j) {
        const int p = (i == j) ? mono[j].second - 1 : mono[j].second;
        if (p > 0) others *= Expr::atom(mono[j].first, n).pow(p);
      }
      result += (others * da).scaled(Rational(mono[i].second));
    }
  }
  return result;
}

}  // namespace hypercalc
