#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hypercalc/expr.hpp"
#include "hypercalc/multiindex.hpp"

namespace hypercalc {

/// Outcome of one exhaustive or randomized identity check.
struct SuiteResult {
  std::string name;
  long cases = 0;
  long failures = 0;
  std::string detail;  // first failure, or a short summary
  double seconds = 0.0;
  bool passed() const { return cases > 0 && failures == 0; }
};

/// Dense polynomial in t, x^1..x^n of total degree <= deg with small random
/// rational coefficients.
Expr random_polynomial(std::mt19937_64& rng, int dim, int deg);

/// Every word of length <= max_len over `letters`, shortest first.
std::vector<MultiIndex> all_words(const std::vector<Generator>& letters, int max_len);

/// Z^I(u_1...u_m) expanded over ordered partitions equals direct
/// differentiation of the product, words over {L_a, d_alpha}.
SuiteResult leibniz_suite(int dim, int max_len, const std::vector<int>& factor_counts, std::uint64_t seed);
/// Z^I f(u) with f = y^p equals direct differentiation; words over
/// {L_a, d_alpha, h_a}.
SuiteResult faa_di_bruno_suite(int dim, int max_len, int max_power);
/// p_l and p*_l are bijections onto D_m and D*_m of the extended graph; the
/// counts equal m^N and S(N, m).
SuiteResult bijection_suite(int max_len, int max_parts);
/// sum Gamma d^I' L^J' u equals [L^J, d^I] u on a generic polynomial of the
/// given degree, with |I'| = |I| and |J'| < |J| per entry.
SuiteResult commutator_suite(int dim, int degree, int max_total, std::uint64_t seed);
/// Random words of type (j,i,0,l): the normal form equals direct application
/// on a rational test function and t^{l+i-|I|} c is homogeneous of degree 0.
SuiteResult normal_form_suite(int dim, int words, int max_len, std::uint64_t seed);
/// Box and Hessian residuals vanish identically.
SuiteResult box_hessian_suite(const std::vector<int>& dims);
/// The three energy integrands coincide as canonical expressions.
SuiteResult energy_form_suite(const std::vector<int>& dims);
/// L^J(s/t)/(s/t) and d^I L^J(s/t) have degrees 0 and -|I|.
SuiteResult s_over_t_homogeneity_suite(int dim, int order);

/// Every suite above with the default sizes used by the command line.
std::vector<SuiteResult> run_identity_suites(int dim, std::uint64_t seed);

}  // namespace hypercalc
