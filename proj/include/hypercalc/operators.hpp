#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hypercalc/expr.hpp"
#include "hypercalc/multiindex.hpp"

namespace hypercalc {

/// How generators act on expressions.
///
/// Canonical: every field is expanded into coordinate partials
///   (L_a = x^a d_t + t d_a, h_a = (x^a/t) d_t + d_a, a_alpha = (s/t) d_alpha).
///   Atom-level results only ever extend the partial word, so for arguments
///   built from d^I u atoms the output is a unique polynomial in jets of u.
/// Definition: boosts stay letters. L_a on d^I L^J u gives d^I L^{aJ} u plus
///   the commutator terms from [L_a, d_t] = -d_a and [L_a, d_b] = -delta_ab d_t;
///   hyperbolic and adapted fields expand through their definitions.
/// BoostForm: like Definition, except h_a = t^-1 L_a.
enum class Mode { Canonical, Definition, BoostForm };

/// Coefficient functions of a generator in the coordinate frame:
/// Z = sum_beta c_beta d_beta.
std::map<int, Expr> vector_field_coefficients(const Generator& Z, int dim);

/// L_a applied to an atom-free scalar.
Scalar boost_scalar(int a, const Scalar& c);

Expr apply_generator(const Generator& Z, const Expr& e, Mode mode = Mode::Definition);
/// Z^K e with the last letter acting first.
Expr apply_word(const MultiIndex& K, const Expr& e, Mode mode = Mode::Definition);

/// Z^I (u_1 ... u_m) expanded over D_m(I): one product of realizations per
/// ordered partition. Each realization acts on its factor in Definition
/// mode.
Expr leibniz_expand(const MultiIndex& I, const std::vector<std::string>& factors, int dim);
/// d^I L^J (u_1 ... u_m) = sum over partitions of I and of J of the products
/// d^{I_k} L^{J_k} u_k, written directly as atoms.
Expr leibniz_expand_mixed(const std::vector<int>& partials, const std::vector<int>& boosts,
                          const std::vector<std::string>& factors, int dim);
/// Z^I f(u) = sum_k f^(k)(u) sum over D*_k(I) of prod Z^{I_j} u. Throws for
/// |I| = 0.
Expr faa_di_bruno(const MultiIndex& I, const std::string& f, const std::string& u, int dim);

/// (I', J') -> Gamma with [L^J, d^I] = sum Gamma d^{I'} L^{J'}.
using CommutatorEntry = std::map<std::pair<std::vector<int>, std::vector<int>>, Rational>;

/// Exact constants by the recursion
///   [L_a L^J', d^I] = L_a [L^J', d^I] + [L_a, d^I] L^J'.
/// Tables are cached by (J, I) behind a mutex; I is sorted on entry.
CommutatorEntry gamma_coefficients(const std::vector<int>& J, std::vector<int> I);
std::size_t gamma_cache_size();

struct NormalFormTerm {
  Expr coeff;
  std::vector<int> I;  // sorted partials
  std::vector<int> J;  // boost word, outermost first
};

/// sum_k c_k d^{I_k} L^{J_k}; no two terms share (I, J), no zero
/// coefficients, ordered by (|I|+|J|, I, J).
struct NormalForm {
  int dim = 3;
  std::vector<NormalFormTerm> terms;

  /// The operator applied to the abstract function `u`.
  Expr to_expr(const std::string& u = "u") const;
  /// Reads an expression linear in derivative atoms of `u`.
  static NormalForm from_expr(const Expr& e, const std::string& u = "u");
  /// "t^-1 · L1 u", one term per line.
  std::string to_string(const std::string& u = "u") const;
};

/// sum c d^I L^J e with boosts acting in Definition mode.
Expr apply_normal_form(const NormalForm& nf, const Expr& e);

/// Rewrites Z^K into sum c d^I L^J. Adapted letters need `generalized`;
/// otherwise they throw std::invalid_argument. The identity word gives the
/// single term 1 d^0 L^0.
NormalForm normal_form(const MultiIndex& K, int dim, bool generalized = false);

/// Composition nf1 o nf2 rewritten back into normal form.
NormalForm compose(const NormalForm& nf1, const NormalForm& nf2);

std::string partial_word_string(const std::vector<int>& I);
std::string boost_word_string(const std::vector<int>& J);

}  // namespace hypercalc
