#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypercalc/expr.hpp"
#include "hypercalc/frames.hpp"
#include "hypercalc/multiindex.hpp"
#include "hypercalc/operators.hpp"

namespace hypercalc {

// ---------------------------------------------------------------------------
// Regions and sampling

/// K_[s0,s1] = {t >= sqrt(s0^2 + r^2), t <= sqrt(s1^2 + r^2), t > r + 1},
/// optionally intersected with {t/2 < r < t}. Both bounding hyperboloids are
/// included.
struct Region {
  int dim = 2;
  double s0 = 2.0;
  double s1 = 10.0;  // +inf allowed for membership, not for sampling
  bool angular = false;

  bool contains(const Point& p) const;
};

/// Formal product (s/t)^k t^l s^m.
struct Envelope {
  int k = 0;
  int l = 0;
  int m = 0;

  double operator()(double t, double s) const;
  std::string to_string() const;
};

/// Atom-free Expr compiled to a double evaluator. Atoms are allowed when the
/// caller supplies their values per point, in the order of `atoms()`.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);

  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double operator()(double t, const double* x, double s, std::span<const double> atom_values = {}) const;
  double operator()(const Point& p) const { return (*this)(p.t, p.x.data(), p.s()); }

 private:
  struct Term {
    double coeff;
    std::array<int, kMaxVars> exp;
    std::vector<std::pair<int, int>> atoms;  // (index into atoms_, power)
  };
  int dim_ = 0;
  std::vector<Term> terms_;
  std::vector<Atom> atoms_;
};

using PointFunction = std::function<double(const Point&)>;

struct BoundClaim {
  std::string name;
  Expr expr{2};                    // atom-free; ignored when `target` is set
  PointFunction target;            // numeric target for quantities outside the ring
  Envelope envelope;
  Region region;
};

/// log-spaced s values, a radial x angular sample per slice with radial nodes
/// (i + 1/2)/R of the admissible interval, plus scattered seeded points.
struct SampleGrid {
  int s_values = 16;
  int radial = 64;
  int angular = 64;
  int scattered = 1000;
  unsigned long long seed = 1;
};

std::vector<Point> sample_points(const Region& region, const SampleGrid& grid);

enum class Verdict { Pass, Fail, Info };
std::string verdict_name(Verdict v);

struct BoundReport {
  std::string name;
  double empirical_C = 0.0;
  Point argmax;
  std::size_t samples = 0;
  std::optional<double> declared_C;
  Verdict verdict = Verdict::Info;
};

/// Relative slack for comparing a sampled sup against a declared constant:
/// a ratio that is identically C evaluates to C(1 + few ulp).
inline constexpr double kRoundingSlack = 1e-12;
Verdict judge_constant(double empirical_C, double declared_C);

/// empirical_C = max |expr| / envelope over the grid; PASS/FAIL only against
/// a declared constant. Throws std::invalid_argument on an empty grid or a
/// non-positive envelope.
BoundReport verify_bound(const BoundClaim& claim, const SampleGrid& grid,
                         std::optional<double> declared_C = std::nullopt);

// Bound suites. Each returns one report per (target, word).

/// L^J(s/t) against (s/t) and s * d^I L^J(s/t) for |I| >= 1, |I|+|J| <= order.
std::vector<BoundReport> s_over_t_suite(const Region& region, const SampleGrid& grid, int order);
/// d^I L^J((s/t)^k t^l) against (s/t)^k t^l, times t/s^2 when |I| >= 1.
std::vector<BoundReport> power_suite(const Region& region, const SampleGrid& grid, int k_range, int order);
/// d^I L^J(1 - r/t) on {t/2 < r < t}: (s/t)^2 for |I| = 0, t^-|I| otherwise.
std::vector<BoundReport> one_minus_r_over_t_suite(const Region& region, const SampleGrid& grid, int order);
/// SHF and HF components of a constant tensor; the (0..0) entries of null
/// tensors carry the extra (s/t)^2 gain.
std::vector<BoundReport> null_suite(const TensorComponents& T, const Region& region, const SampleGrid& grid,
                                    int order);

/// Symbolic structure behind the s/t bounds: L^J(s/t) / (s/t) and
/// d^I(s/t) are homogeneous of degree 0 and -|I|.
struct HomogeneityCheck {
  std::string word;
  std::optional<int> degree;
  int expected = 0;
  bool ok() const { return degree && *degree == expected; }
};
std::vector<HomogeneityCheck> s_over_t_homogeneity(int dim, int order);

/// All atoms d^I L^J with |I| + |J| <= order: I a sorted partial multiset,
/// J an ordered boost word.
std::vector<std::pair<std::vector<int>, std::vector<int>>> atom_words(int dim, int order);
/// d^I L^J e in canonical coordinates.
Expr apply_atom_word(const std::vector<int>& I, const std::vector<int>& J, const Expr& e);

// ---------------------------------------------------------------------------
// Hessian and d'Alembertian

/// A printed operator: sum of coefficient * word, words acting left to right
/// as compositions (last letter first).
struct OperatorDisplay {
  std::vector<std::pair<Expr, MultiIndex>> terms;
  std::string to_string() const;
};

struct HessianIdentity {
  int alpha = 0;
  int beta = 1;
  OperatorDisplay display;  // right-hand side as printed
  NormalForm rhs;           // the same operator as sum c d^I L^J
  Expr residual{2};         // d_alpha d_beta u - rhs u, canonical coordinates
};
/// (alpha, beta) != (0, 0); throws std::invalid_argument otherwise.
HessianIdentity hessian_decompose(int alpha, int beta, int dim);

struct BoxDecomposition {
  Expr principal{2};         // (s/t)^2, the weight of d_t d_t
  OperatorDisplay A_display; // A_m as printed
  NormalForm A;              // A_m as sum c d^I L^J
  Expr residual{2};          // Box u - (s/t)^2 d_t d_t u - t^-1 A_m u, canonical
};
BoxDecomposition dalembert_decompose(int dim);

/// d_t d_t u - sum_a d_a d_a u.
Expr box(const Expr& u);
/// The operator of a display applied to e in canonical coordinates.
Expr apply_display(const OperatorDisplay& d, const Expr& e);

// ---------------------------------------------------------------------------
// Hyperboloid integration and energy

/// Radial Gauss-Legendre times a trapezoid rule in the azimuth; polar angles
/// (dim >= 3) use Gauss-Legendre with sin^k weights.
struct Quadrature {
  int radial = 128;
  int angular = 256;
};

/// Nodes of the slice-pullback on {r <= (s^2 - 1)/2}: t = sqrt(s^2 + r^2).
struct SliceNodes {
  int dim = 2;
  double s = 0.0;
  bool empty = false;  // s <= 1
  std::vector<double> t;
  std::vector<double> x;  // dim entries per node
  std::vector<double> w;
  std::size_t size() const { return t.size(); }
  const double* xs(std::size_t i) const { return x.data() + i * dim; }
};
SliceNodes slice_nodes(int dim, double s, const Quadrature& q);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int count);

double slice_radius(double s);

struct IntegralResult {
  double value = 0.0;
  bool warning = false;  // empty domain
  int levels = 1;
  double rel_change = 0.0;
  bool converged = true;
  Quadrature resolution;
};

/// p = 1: the integral of u. p > 1: the L^p norm (integral of |u|^p)^(1/p).
IntegralResult hyperboloid_integral(const Expr& u, double s, double p, const Quadrature& q);
/// Same, doubling the resolution until the relative change is below rel_tol.
IntegralResult hyperboloid_integral_refined(const Expr& u, double s, double p, const Quadrature& start,
                                            double rel_tol, int max_levels);

struct EnergyReport {
  double s = 0.0;
  double c = 0.0;
  double value = 0.0;  // form2
  double form1 = 0.0;
  double form2 = 0.0;
  double form3 = 0.0;
  double max_pointwise_discrepancy = 0.0;  // max over nodes and pairs, relative to max(1, |form|)
  bool warning = false;
  int levels = 1;
  double rel_change = 0.0;
  Quadrature resolution;
};

/// The three integrand forms of E_c as symbolic expressions in u:
///   |d_t u|^2 + 2 (x^a/t) d_t u d_a u + sum |d_a u|^2 + c^2 u^2,
///   sum |h_a u|^2 + |(s/t) d_t u|^2 + c^2 u^2,
///   (d_t u + (x^a/t) d_a u)^2 + sum |(s/t) d_a u|^2 + c^2 u^2,
/// with c^2 entering as the rational `c2`.
std::array<Expr, 3> energy_integrands(const Expr& u, const Rational& c2);

EnergyReport energy(const Expr& u, double s, double c, const Quadrature& q);
EnergyReport energy_refined(const Expr& u, double s, double c, const Quadrature& start, double rel_tol,
                            int max_levels);
/// sum of E_c(s, d^I L^J u) over atoms with |I| + |J| <= N.
double energy_hierarchy(const Expr& u, double s, int N, double c, const Quadrature& q);

// ---------------------------------------------------------------------------
// L^2 estimate lemmas

enum class L2Lemma { Lemma44i, Lemma44ii, Lemma44iii, Lemma45, Lemma47 };
std::string l2_lemma_name(L2Lemma l);
L2Lemma parse_l2_lemma(std::string_view name);

struct EstimateConfig {
  int N = 1;
  std::vector<double> s_grid{2, 3, 4, 5, 6, 7, 8, 9, 10};
  Quadrature quadrature{64, 128};
  double c = 0.0;
  std::vector<int> wrapper_partials;  // I0 for the Klainerman-Sobolev lemma
  std::vector<int> wrapper_boosts;    // J0
  int p_n(int dim) const { return dim / 2 + 1; }
};

struct RatioSample {
  double s = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct L2Report {
  L2Lemma lemma = L2Lemma::Lemma44i;
  std::string word;
  std::vector<RatioSample> curve;
  double max_ratio = 0.0;
  double spread = 0.0;   // max ratio / min ratio over the grid
  double growth = 0.0;   // largest factor by which the ratio increases along s
  bool bounded = false;  // finite and growth <= 10
  /// Klainerman-Sobolev wrapper only: largest relative gap between the Leibniz-expanded and
  /// the directly differentiated wrapper.
  double wrapper_discrepancy = 0.0;
};

/// Throws std::invalid_argument when the word type or length violates the
/// lemma hypothesis.
L2Report verify_l2_estimate(L2Lemma lemma, const Expr& u, const MultiIndex& K, const EstimateConfig& cfg);

}  // namespace hypercalc
