#include "hypercalc/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hypercalc {

namespace {

double ipow(double b, int e) {
  if (e == 0) return 1.0;
  if (e < 0) return 1.0 / ipow(b, -e);
  double r = 1.0;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

MultiIndex atom_word(const std::vector<int>& I, const std::vector<int>& J) {
  MultiIndex K;
  for (int alpha : I) K.word.push_back(Generator::partial(alpha));
  for (int a : J) K.word.push_back(Generator::boost(a));
  return K;
}

std::string atom_word_name(const std::vector<int>& I, const std::vector<int>& J) {
  std::string w = atom_word(I, J).to_string();
  return w.empty() ? "id" : w;
}

// Replaces atoms for which `sub` returns a value.
template <typename Sub>
Expr substitute(const Expr& e, Sub&& sub) {
  const int n = e.dim();
  Expr out(n);
  for (const auto& [mono, coeff] : e.terms()) {
    Expr term{Scalar(coeff)};
    for (const auto& [atom, power] : mono) {
      std::optional<Expr> v = sub(atom);
      term *= (v ? *v : Expr::atom(atom, n)).pow(power);
    }
    out += term;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

bool Region::contains(const Point& p) const {
  const double r = p.r();
  if (!(p.t > r + 1.0)) return false;
  const double s2 = p.t * p.t - r * r;
  const double eps = 1e-12 * std::max(1.0, s2);
  if (s2 < s0 * s0 - eps) return false;
  if (std::isfinite(s1) && s2 > s1 * s1 + eps) return false;
  if (angular && !(p.t / 2 < r && r < p.t)) return false;
  return true;
}

double Envelope::operator()(double t, double s) const { return ipow(s / t, k) * ipow(t, l) * ipow(s, m); }

std::string Envelope::to_string() const {
  std::string out;
  auto part = [&](const std::string& base, int e) {
    if (e == 0) return;
    if (!out.empty()) out += " ";
    out += base;
    if (e != 1) out += "^" + std::to_string(e);
  };
  part("(s/t)", k);
  part("t", l);
  part("s", m);
  return out.empty() ? "1" : out;
}

CompiledExpr::CompiledExpr(const Expr& e) : dim_(e.dim()) {
  std::map<Atom, int> index;
  for (const auto& [mono, coeff] : e.terms()) {
    std::vector<std::pair<int, int>> atoms;
    for (const auto& [atom, power] : mono) {
      auto [it, fresh] = index.emplace(atom, static_cast<int>(atoms_.size()));
      if (fresh) atoms_.push_back(atom);
      atoms.emplace_back(it->second, power);
    }
    for (const LaurentTerm& lt : coeff.laurent_terms()) terms_.push_back({lt.coeff.to_double(), lt.exp, atoms});
  }
}

double CompiledExpr::operator()(double t, const double* x, double s, std::span<const double> atom_values) const {
  if (atom_values.size() < atoms_.size())
    throw std::invalid_argument("unbound abstract function: " + atoms_[0].to_string());
  double sum = 0.0;
  for (const Term& term : terms_) {
    double v = term.coeff * ipow(t, term.exp[kVarT]) * ipow(s, term.exp[kVarS]);
    for (int a = 1; a <= dim_; ++a)
      if (term.exp[a]) v *= ipow(x[a - 1], term.exp[a]);
    for (const auto& [i, p] : term.atoms) v *= ipow(atom_values[i], p);
    sum += v;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

// Admissible radial interval on H_s: r < (s^2 - 1)/2 for the cone, and
// r > s/sqrt(3) for t/2 < r.
std::pair<double, double> radial_range(const Region& region, double s) {
  const double hi = slice_radius(s);
  const double lo = region.angular ? s / std::sqrt(3.0) : 0.0;
  return {lo, hi};
}

std::vector<double> unit_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::vector<double> d(n);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : d) {
      v = g(rng);
      norm += v * v;
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  for (double& v : d) v /= norm;
  return d;
}

Point make_point(double s, double r, const std::vector<double>& dir) {
  Point p;
  p.t = std::sqrt(s * s + r * r);
  p.x.resize(dir.size());
  for (std::size_t a = 0; a < dir.size(); ++a) p.x[a] = r * dir[a];
  return p;
}

}  // namespace

std::vector<Point> sample_points(const Region& region, const SampleGrid& grid) {
  if (!std::isfinite(region.s1)) throw std::invalid_argument("sampling needs a finite s1");
  if (region.s0 <= 1.0 || region.s1 < region.s0) throw std::invalid_argument("region needs 1 < s0 <= s1");
  const int n = region.dim;
  std::mt19937_64 rng(grid.seed);
  std::vector<std::vector<double>> dirs;
  if (n == 1) {
    dirs = {{1.0}, {-1.0}};
  } else if (n == 2) {
    for (int j = 0; j < grid.angular; ++j) {
      const double th = 2.0 * std::numbers::pi * j / grid.angular;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    for (int j = 0; j < grid.angular; ++j) dirs.push_back(unit_direction(rng, n));
  }
  std::vector<Point> pts;
  for (int i = 0; i < grid.s_values; ++i) {
    const double s = grid.s_values == 1 ? region.s0
                                        : region.s0 * std::pow(region.s1 / region.s0, double(i) / (grid.s_values - 1));
    const auto [lo, hi] = radial_range(region, s);
    if (lo >= hi) continue;
    for (int k = 0; k < grid.radial; ++k) {
      const double r = lo + (hi - lo) * (k + 0.5) / grid.radial;
      for (const auto& d : dirs) {
        Point p = make_point(s, r, d);
        if (region.contains(p)) pts.push_back(std::move(p));
      }
    }
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double ls0 = std::log(region.s0), ls1 = std::log(region.s1);
  for (int k = 0; k < grid.scattered; ++k) {
    const double s = std::exp(ls0 + (ls1 - ls0) * unit(rng));
    const auto [lo, hi] = radial_range(region, s);
    const double r = lo + (hi - lo) * unit(rng);
    Point p = make_point(s, r, unit_direction(rng, n));
    if (lo < hi && region.contains(p)) pts.push_back(std::move(p));
  }
  return pts;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Info: return "INFO";
  }
  return "?";
}

Verdict judge_constant(double empirical_C, double declared_C) {
  return std::isfinite(empirical_C) && empirical_C <= declared_C * (1.0 + kRoundingSlack) ? Verdict::Pass
                                                                                            : Verdict::Fail;
}

BoundReport verify_bound(const BoundClaim& claim, const SampleGrid& grid, std::optional<double> declared_C) {
  const std::vector<Point> pts = sample_points(claim.region, grid);
  if (pts.empty()) throw std::invalid_argument("empty grid");
  CompiledExpr f;
  if (!claim.target) {
    if (!claim.expr.is_atom_free()) throw std::invalid_argument("bound target must be atom-free");
    f = CompiledExpr(claim.expr);
  }
  BoundReport rep;
  rep.name = claim.name;
  rep.samples = pts.size();
  rep.declared_C = declared_C;
  rep.argmax = pts.front();
  for (const Point& p : pts) {
    const double s = p.s();
    const double env = claim.envelope(p.t, s);
    if (!(env > 0.0)) throw std::invalid_argument("envelope must be positive on the region");
    const double v = claim.target ? claim.target(p) : f(p.t, p.x.data(), s);
    const double ratio = std::abs(v) / env;
    if (ratio > rep.empirical_C) {
      rep.empirical_C = ratio;
      rep.argmax = p;
    }
  }
  if (declared_C) rep.verdict = judge_constant(rep.empirical_C, *declared_C);
  return rep;
}

// ---------------------------------------------------------------------------
// Bound suites

std::vector<std::pair<std::vector<int>, std::vector<int>>> atom_words(int dim, int order) {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  for (int total = 0; total <= order; ++total) {
    for (int i = total; i >= 0; --i) {
      const int j = total - i;
      std::vector<std::vector<int>> Is, Js;
      std::vector<int> cur;
      auto rec_I = [&](auto&& self, int from) -> void {
        if (static_cast<int>(cur.size()) == i) {
          Is.push_back(cur);
          return;
        }
        for (int alpha = from; alpha <= dim; ++alpha) {
          cur.push_back(alpha);
          self(self, alpha);
          cur.pop_back();
        }
      };
      rec_I(rec_I, 0);
      auto rec_J = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == j) {
          Js.push_back(cur);
          return;
        }
        for (int a = 1; a <= dim; ++a) {
          cur.push_back(a);
          self(self);
          cur.pop_back();
        }
      };
      rec_J(rec_J);
      for (const auto& I : Is)
        for (const auto& J : Js) out.emplace_back(I, J);
    }
  }
  return out;
}

Expr apply_atom_word(const std::vector<int>& I, const std::vector<int>& J, const Expr& e) {
  return apply_word(atom_word(I, J), e, Mode::Canonical);
}

std::vector<BoundReport> s_over_t_suite(const Region& region, const SampleGrid& grid, int order) {
  const int n = region.dim;
  const Expr st = Expr::s(n) / Expr::t(n);
  std::vector<BoundReport> out;
  for (const auto& [I, J] : atom_words(n, order)) {
    BoundClaim c;
    c.expr = apply_atom_word(I, J, st);
    c.envelope = I.empty() ? Envelope{1, 0, 0} : Envelope{0, 0, -1};
    c.region = region;
    c.name = atom_word_name(I, J) + " (s/t) / " + c.envelope.to_string();
    out.push_back(verify_bound(c, grid));
  }
  return out;
}

std::vector<BoundReport> power_suite(const Region& region, const SampleGrid& grid, int k_range, int order) {
  const int n = region.dim;
  const Expr st = Expr::s(n) / Expr::t(n);
  std::vector<BoundReport> out;
  const auto words = atom_words(n, order);
  for (int k = -k_range; k <= k_range; ++k)
    for (int l = -k_range; l <= k_range; ++l) {
      const Expr w = st.pow(k) * Expr::t(n).pow(l);
      for (const auto& [I, J] : words) {
        BoundClaim c;
        c.expr = apply_atom_word(I, J, w);
        c.envelope = I.empty() ? Envelope{k, l, 0} : Envelope{k, l + 1, -2};
        c.region = region;
        c.name = atom_word_name(I, J) + " ((s/t)^" + std::to_string(k) + " t^" + std::to_string(l) + ") / " +
                 c.envelope.to_string();
        out.push_back(verify_bound(c, grid));
      }
    }
  return out;
}

std::vector<BoundReport> one_minus_r_over_t_suite(const Region& region_in, const SampleGrid& grid, int order) {
  Region region = region_in;
  region.angular = true;
  const int n = region.dim;
  // r/t = f(w) with w = r^2/t^2 and f = sqrt; d^I L^J of f(w) goes through
  // the chain rule with the w-jets bound to closed forms.
  const Expr w = Expr::r2(n) / Expr::t(n).pow(2);
  const Expr fw = Expr::atom(Atom::composition("sqrt", 0, "w"), n);
  std::vector<BoundReport> out;
  for (const auto& [I, J] : atom_words(n, order)) {
    BoundClaim c;
    c.region = region;
    c.envelope = I.empty() ? Envelope{2, 0, 0} : Envelope{0, -static_cast<int>(I.size()), 0};
    c.name = atom_word_name(I, J) + " (1 - r/t) / " + c.envelope.to_string();
    if (I.empty() && J.empty()) {
      c.target = [](const Point& p) { return 1.0 - p.r() / p.t; };
    } else {
      const Expr chain = substitute(apply_atom_word(I, J, fw), [&](const Atom& a) -> std::optional<Expr> {
        if (a.kind != Atom::Kind::Derivative) return std::nullopt;
        Expr v = w;
        for (int alpha : a.partials) v = v.differentiate(alpha);
        return v;
      });
      auto compiled = std::make_shared<CompiledExpr>(chain);
      c.target = [compiled](const Point& p) {
        const double rt = p.r() / p.t;
        const double wv = rt * rt;
        std::vector<double> vals;
        for (const Atom& a : compiled->atoms()) {
          // f^(k)(w) = (1/2)(1/2 - 1)...(1/2 - k + 1) w^(1/2 - k)
          double c = 1.0;
          for (int j = 0; j < a.order; ++j) c *= 0.5 - j;
          vals.push_back(c * std::pow(wv, 0.5 - a.order));
        }
        return -(*compiled)(p.t, p.x.data(), p.s(), vals);
      };
    }
    out.push_back(verify_bound(c, grid));
  }
  return out;
}

std::vector<BoundReport> null_suite(const TensorComponents& T_in, const Region& region, const SampleGrid& grid,
                                    int order) {
  const int n = T_in.dim;
  if (n != region.dim) throw std::invalid_argument("dimension mismatch");
  const TensorComponents T = T_in.frame == Frame::Canonical ? T_in : transform_components(T_in, Frame::Canonical);
  if (!T.constant()) throw std::invalid_argument("null suite needs constant canonical components");
  const bool null = is_null_form(T).is_null;
  const TensorComponents shf = transform_components(T, Frame::SHF);
  const auto hf = hf_weighted_components(T);
  const auto words = atom_words(n, order);
  const std::vector<int> origin(T.rank, 0);
  std::vector<BoundReport> out;
  // SHF entries drop to t^-|I| under partials; weighted HF entries to t/s^2.
  auto run = [&](const std::string& label, const Expr& comp, Envelope base, bool shf_family) {
    for (const auto& [I, J] : words) {
      BoundClaim c;
      c.region = region;
      c.expr = apply_atom_word(I, J, comp);
      if (I.empty()) c.envelope = base;
      else if (shf_family) c.envelope = Envelope{0, -static_cast<int>(I.size()), 0};
      else c.envelope = Envelope{0, 1, -2};
      c.name = label + ": " + atom_word_name(I, J) + " / " + c.envelope.to_string();
      out.push_back(verify_bound(c, grid));
    }
  };
  for (std::size_t k = 0; k < shf.entries.size(); ++k) {
    if (shf.entries[k].is_zero()) continue;
    run("SHF T^" + index_key(hf[k].first), shf.entries[k], Envelope{}, true);
  }
  for (const auto& [idx, weighted] : hf) {
    if (weighted.is_zero()) continue;
    run("HF (s/t)^k T^" + index_key(idx), weighted, Envelope{}, false);
  }
  if (null) {
    run("null SHF T^" + index_key(origin), shf.at(origin), Envelope{2, 0, 0}, true);
    const TensorComponents hfc = transform_components(T, Frame::HF);
    const Expr st = Expr::s(n) / Expr::t(n);
    const Expr gain = T.rank == 3 ? st * hfc.at(origin) : hfc.at(origin);
    if (!gain.is_zero()) run("null HF T^" + index_key(origin), gain, Envelope{}, false);
  }
  return out;
}

std::vector<HomogeneityCheck> s_over_t_homogeneity(int dim, int order) {
  const Expr st = Expr::s(dim) / Expr::t(dim);
  std::vector<HomogeneityCheck> out;
  for (const auto& [I, J] : atom_words(dim, order)) {
    Expr v = apply_atom_word(I, J, st);
    HomogeneityCheck h;
    h.word = atom_word_name(I, J);
    if (I.empty()) {
      h.degree = homogeneity_degree(v / st).degree;
      h.expected = 0;
    } else {
      h.degree = v.is_zero() ? std::optional<int>(-static_cast<int>(I.size())) : homogeneity_degree(v).degree;
      h.expected = -static_cast<int>(I.size());
    }
    out.push_back(h);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hessian and d'Alembertian

std::string OperatorDisplay::to_string() const {
  std::string out;
  for (const auto& [c, w] : terms) {
    if (!out.empty()) out += "\n";
    std::string coeff = c.to_string();
    if (c.atom_free_part().laurent_terms().size() > 1) coeff = "(" + coeff + ")";
    out += coeff + " · " + (w.empty() ? std::string("id") : w.to_string());
  }
  return out;
}

Expr apply_display(const OperatorDisplay& d, const Expr& e) {
  Expr out(e.dim());
  for (const auto& [c, w] : d.terms) out += c * apply_word(w, e, Mode::Canonical);
  return out;
}

Expr box(const Expr& u) {
  Expr out = u.differentiate(0).differentiate(0);
  for (int a = 1; a <= u.dim(); ++a) out -= u.differentiate(a).differentiate(a);
  return out;
}

namespace {

NormalForm display_normal_form(const OperatorDisplay& d, int n) {
  Expr acc(n);
  for (const auto& [c, w] : d.terms) acc += c * normal_form(w, n).to_expr("u");
  NormalForm nf = NormalForm::from_expr(acc, "u");
  nf.dim = n;
  return nf;
}

Expr normal_form_canonical(const NormalForm& nf, const Expr& u) {
  Expr out(u.dim());
  for (const auto& term : nf.terms) out += term.coeff * apply_atom_word(term.I, term.J, u);
  return out;
}

MultiIndex word(std::initializer_list<Generator> g) { return MultiIndex{std::vector<Generator>(g)}; }

}  // namespace

HessianIdentity hessian_decompose(int alpha, int beta, int n) {
  if (alpha < 0 || beta < 0 || alpha > n || beta > n) throw std::out_of_range("index out of range");
  if (alpha == 0 && beta == 0) throw std::invalid_argument("(0,0) is the d'Alembertian decomposition");
  HessianIdentity h;
  h.alpha = alpha;
  h.beta = beta;
  const Expr t = Expr::t(n);
  const Expr one(n, Rational(1));
  const Generator dt = Generator::partial(0);
  if (alpha == 0 || beta == 0) {
    const int a = alpha == 0 ? beta : alpha;
    const Expr xa = Expr::x(a, n);
    h.display.terms = {
        {-(xa / t), word({dt, dt})},
        {one / t, word({dt, Generator::boost(a)})},
        {-(one / t), word({Generator::hyperbolic(a)})},
        {xa / t.pow(2), word({dt})},
    };
  } else {
    const int a = alpha, b = beta;
    const Expr xa = Expr::x(a, n), xb = Expr::x(b, n);
    h.display.terms = {
        {xa * xb / t.pow(2), word({dt, dt})},
        {one / t, word({Generator::partial(a), Generator::boost(b)})},
        {-(xb / t.pow(2)), word({dt, Generator::boost(a)})},
        {xb / t.pow(2), word({Generator::hyperbolic(a)})},
    };
    if (a == b) h.display.terms.push_back({-(one / t), word({dt})});
    h.display.terms.push_back({-(xa * xb / t.pow(3)), word({dt})});
  }
  h.rhs = display_normal_form(h.display, n);
  const Expr u = Expr::function("u", n);
  h.residual = u.differentiate(alpha).differentiate(beta) - normal_form_canonical(h.rhs, u);
  return h;
}

BoxDecomposition dalembert_decompose(int n) {
  BoxDecomposition b;
  const Expr t = Expr::t(n);
  const Generator dt = Generator::partial(0);
  b.principal = (Expr::s(n) / t).pow(2);
  for (int a = 1; a <= n; ++a)
    b.A_display.terms.push_back({Expr::x(a, n).scaled(Rational(2)) / t, word({dt, Generator::boost(a)})});
  for (int a = 1; a <= n; ++a)
    b.A_display.terms.push_back({Expr(n, Rational(-1)), word({Generator::hyperbolic(a), Generator::boost(a)})});
  for (int a = 1; a <= n; ++a) b.A_display.terms.push_back({-(Expr::x(a, n) / t), word({Generator::hyperbolic(a)})});
  b.A_display.terms.push_back({Expr(n, Rational(n)) + Expr::r2(n) / t.pow(2), word({dt})});
  b.A = display_normal_form(b.A_display, n);
  const Expr u = Expr::function("u", n);
  b.residual = box(u) - b.principal * u.differentiate(0).differentiate(0) - normal_form_canonical(b.A, u) / t;
  return b;
}

// ---------------------------------------------------------------------------
// Quadrature

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("need at least one node");
  std::vector<double> x(count), w(count);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    // Newton on P_count from the Chebyshev-like guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p0 = 0.0;
      for (int k = 1; k <= count; ++k) {
        const double p2 = p0;
        p0 = p1;
        p1 = ((2.0 * k - 1.0) * z * p0 - (k - 1.0) * p2) / k;
      }
      dp = count * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x[i] = -z;
    x[count - 1 - i] = z;
    w[i] = w[count - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

double slice_radius(double s) { return s > 1.0 ? (s * s - 1.0) / 2.0 : 0.0; }

SliceNodes slice_nodes(int n, double s, const Quadrature& q) {
  if (n < 1 || n > kMaxDim) throw std::out_of_range("index out of range");
  if (q.radial < 1 || q.angular < 1) throw std::invalid_argument("quadrature needs positive resolution");
  SliceNodes nodes;
  nodes.dim = n;
  nodes.s = s;
  if (s <= 1.0) {
    nodes.empty = true;
    return nodes;
  }
  const double R = slice_radius(s);
  // Unit directions with surface weights.
  std::vector<std::vector<double>> dirs;
  std::vector<double> dw;
  if (n == 1) {
    dirs = {{1.0}, {-1.0}};
    dw = {1.0, 1.0};
  } else {
    std::vector<double> theta, tw;
    for (int j = 0; j < q.angular; ++j) {
      theta.push_back(2.0 * std::numbers::pi * j / q.angular);
      tw.push_back(2.0 * std::numbers::pi / q.angular);
    }
    const int polar = std::max(2, q.angular / 2);
    auto [gx, gw] = gauss_legendre(polar);
    // Recursive hyperspherical coordinates: x1 = cos p1, x2 = sin p1 cos p2, ...
    std::vector<double> angles(n - 2);
    auto rec = [&](auto&& self, int k, double weight, double sin_prod, std::vector<double>& prefix) -> void {
      if (k == n - 2) {
        for (std::size_t j = 0; j < theta.size(); ++j) {
          std::vector<double> d = prefix;
          d.push_back(sin_prod * std::cos(theta[j]));
          d.push_back(sin_prod * std::sin(theta[j]));
          dirs.push_back(std::move(d));
          dw.push_back(weight * tw[j]);
        }
        return;
      }
      for (int i = 0; i < polar; ++i) {
        const double phi = std::numbers::pi * (gx[i] + 1.0) / 2.0;
        const double wphi = std::numbers::pi / 2.0 * gw[i] * ipow(std::sin(phi), n - 2 - k);
        prefix.push_back(sin_prod * std::cos(phi));
        self(self, k + 1, weight * wphi, sin_prod * std::sin(phi), prefix);
        prefix.pop_back();
      }
    };
    std::vector<double> prefix;
    rec(rec, 0, 1.0, 1.0, prefix);
  }
  auto [rx, rw] = gauss_legendre(q.radial);
  const std::size_t total = rx.size() * dirs.size();
  nodes.t.reserve(total);
  nodes.x.reserve(total * n);
  nodes.w.reserve(total);
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double r = R * (rx[i] + 1.0) / 2.0;
    const double wr = R / 2.0 * rw[i] * ipow(r, n - 1);
    const double t = std::sqrt(s * s + r * r);
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      nodes.t.push_back(t);
      for (int a = 0; a < n; ++a) nodes.x.push_back(r * dirs[j][a]);
      nodes.w.push_back(wr * dw[j]);
    }
  }
  return nodes;
}

namespace {

CompiledExpr compile_bound(const Expr& u) {
  if (!u.is_atom_free()) throw std::invalid_argument("unbound abstract function");
  return CompiledExpr(u);
}

double integrate_on(const CompiledExpr& f, const SliceNodes& nodes, double p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double v = f(nodes.t[i], nodes.xs(i), nodes.s);
    sum += nodes.w[i] * (p == 1.0 ? v : std::pow(std::abs(v), p));
  }
  return p == 1.0 ? sum : std::pow(sum, 1.0 / p);
}

double l2_on(const Expr& e, const SliceNodes& nodes) {
  if (e.is_zero()) return 0.0;
  return integrate_on(compile_bound(e), nodes, 2.0);
}

Quadrature doubled(const Quadrature& q, int level) {
  return Quadrature{q.radial << level, q.angular << level};
}

double rel_change(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
  return std::abs(a - b) / scale;
}

}  // namespace

IntegralResult hyperboloid_integral(const Expr& u, double s, double p, const Quadrature& q) {
  if (p < 1.0) throw std::invalid_argument("p must be >= 1");
  IntegralResult res;
  res.resolution = q;
  const CompiledExpr f = compile_bound(u);
  const SliceNodes nodes = slice_nodes(u.dim(), s, q);
  if (nodes.empty) {
    res.warning = true;
    return res;
  }
  res.value = integrate_on(f, nodes, p);
  return res;
}

IntegralResult hyperboloid_integral_refined(const Expr& u, double s, double p, const Quadrature& start,
                                            double rel_tol, int max_levels) {
  IntegralResult res = hyperboloid_integral(u, s, p, start);
  if (res.warning) return res;
  res.converged = false;
  for (int level = 1; level < max_levels; ++level) {
    IntegralResult next = hyperboloid_integral(u, s, p, doubled(start, level));
    next.levels = level + 1;
    next.rel_change = rel_change(next.value, res.value);
    res = next;
    if (res.rel_change < rel_tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Energy

std::array<Expr, 3> energy_integrands(const Expr& u, const Rational& c2) {
  const int n = u.dim();
  const Expr t = Expr::t(n);
  const Expr st = Expr::s(n) / t;
  const Expr ut = u.differentiate(0);
  const Expr mass = u.pow(2).scaled(c2);
  Expr f1 = ut.pow(2) + mass, f2 = (st * ut).pow(2) + mass, f3 = mass;
  Expr radial = ut;
  for (int a = 1; a <= n; ++a) {
    const Expr ua = u.differentiate(a);
    const Expr xa_t = Expr::x(a, n) / t;
    f1 += (xa_t * ut * ua).scaled(Rational(2)) + ua.pow(2);
    f2 += (xa_t * ut + ua).pow(2);
    f3 += (st * ua).pow(2);
    radial += xa_t * ua;
  }
  f3 += radial.pow(2);
  return {f1, f2, f3};
}

namespace {

struct EnergyKernel {
  int dim;
  double c;
  CompiledExpr u, ut;
  std::vector<CompiledExpr> ux;

  EnergyKernel(const Expr& e, double c_)
      : dim(e.dim()), c(c_), u(compile_bound(e)), ut(compile_bound(e.differentiate(0))) {
    for (int a = 1; a <= dim; ++a) ux.push_back(compile_bound(e.differentiate(a)));
  }
};

EnergyReport energy_on(const EnergyKernel& k, const SliceNodes& nodes) {
  EnergyReport rep;
  rep.s = nodes.s;
  rep.c = k.c;
  if (nodes.empty) {
    rep.warning = true;
    return rep;
  }
  const int n = k.dim;
  std::vector<double> B(n);
  const double c2 = k.c * k.c;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double t = nodes.t[i], s = nodes.s;
    const double* x = nodes.xs(i);
    const double U = k.c == 0.0 ? 0.0 : k.u(t, x, s);
    const double A = k.ut(t, x, s);
    double f1 = A * A + c2 * U * U;
    double f2 = (s / t) * (s / t) * A * A + c2 * U * U;
    double f3 = c2 * U * U;
    double radial = A;
    for (int a = 0; a < n; ++a) {
      B[a] = k.ux[a](t, x, s);
      const double xa_t = x[a] / t;
      f1 += 2.0 * xa_t * A * B[a] + B[a] * B[a];
      const double h = xa_t * A + B[a];
      f2 += h * h;
      f3 += (s / t) * (s / t) * B[a] * B[a];
      radial += xa_t * B[a];
    }
    f3 += radial * radial;
    const double scale = std::max({1.0, std::abs(f1), std::abs(f2), std::abs(f3)});
    const double d = std::max({std::abs(f1 - f2), std::abs(f1 - f3), std::abs(f2 - f3)}) / scale;
    rep.max_pointwise_discrepancy = std::max(rep.max_pointwise_discrepancy, d);
    rep.form1 += nodes.w[i] * f1;
    rep.form2 += nodes.w[i] * f2;
    rep.form3 += nodes.w[i] * f3;
  }
  rep.value = rep.form2;
  return rep;
}

}  // namespace

EnergyReport energy(const Expr& u, double s, double c, const Quadrature& q) {
  if (c < 0.0) throw std::invalid_argument("c must be >= 0");
  EnergyReport rep = energy_on(EnergyKernel(u, c), slice_nodes(u.dim(), s, q));
  rep.resolution = q;
  return rep;
}

EnergyReport energy_refined(const Expr& u, double s, double c, const Quadrature& start, double rel_tol,
                            int max_levels) {
  if (c < 0.0) throw std::invalid_argument("c must be >= 0");
  const EnergyKernel k(u, c);
  EnergyReport rep = energy_on(k, slice_nodes(u.dim(), s, start));
  rep.resolution = start;
  if (rep.warning) return rep;
  for (int level = 1; level < max_levels; ++level) {
    const Quadrature q = doubled(start, level);
    EnergyReport next = energy_on(k, slice_nodes(u.dim(), s, q));
    next.resolution = q;
    next.levels = level + 1;
    next.rel_change = rel_change(next.value, rep.value);
    next.max_pointwise_discrepancy = std::max(next.max_pointwise_discrepancy, rep.max_pointwise_discrepancy);
    rep = next;
    if (rep.rel_change < rel_tol) break;
  }
  return rep;
}

namespace {

double hierarchy_on(const Expr& u, const SliceNodes& nodes, int N, double c) {
  if (N < 0) throw std::invalid_argument("N must be >= 0");
  double sum = 0.0;
  for (const auto& [I, J] : atom_words(u.dim(), N)) {
    const Expr v = apply_atom_word(I, J, u);
    if (v.is_zero()) continue;
    sum += energy_on(EnergyKernel(v, c), nodes).value;
  }
  return sum;
}

}  // namespace

double energy_hierarchy(const Expr& u, double s, int N, double c, const Quadrature& q) {
  if (c < 0.0) throw std::invalid_argument("c must be >= 0");
  return hierarchy_on(u, slice_nodes(u.dim(), s, q), N, c);
}

// ---------------------------------------------------------------------------
// L^2 lemmas

std::string l2_lemma_name(L2Lemma l) {
  switch (l) {
    case L2Lemma::Lemma44i: return "4.4-i";
    case L2Lemma::Lemma44ii: return "4.4-ii";
    case L2Lemma::Lemma44iii: return "4.4-iii";
    case L2Lemma::Lemma45: return "4.5";
    case L2Lemma::Lemma47: return "4.7";
  }
  return "?";
}

L2Lemma parse_l2_lemma(std::string_view name) {
  for (L2Lemma l : {L2Lemma::Lemma44i, L2Lemma::Lemma44ii, L2Lemma::Lemma44iii, L2Lemma::Lemma45, L2Lemma::Lemma47})
    if (l2_lemma_name(l) == name) return l;
  throw std::invalid_argument("unknown lemma '" + std::string(name) + "'");
}

L2Report verify_l2_estimate(L2Lemma lemma, const Expr& u, const MultiIndex& K, const EstimateConfig& cfg) {
  const int n = u.dim();
  if (!u.is_atom_free()) throw std::invalid_argument("unbound abstract function");
  const OperatorType type = classify(K);
  const int order = static_cast<int>(K.order());
  auto mismatch = [&](const std::string& why) {
    throw std::invalid_argument("type mismatch with lemma " + l2_lemma_name(lemma) + ": " + why);
  };
  if (type.k != 0) mismatch("adapted letters are not allowed");
  const Expr t = Expr::t(n);
  const Expr st = Expr::s(n) / t;
  const Expr ZKu = apply_word(K, u, Mode::Canonical);

  // Per lemma: the LHS norms as functions of the slice, the energy order and c.
  int N = 0;
  double c = 0.0;
  std::vector<Expr> lhs_terms;
  std::vector<Expr> source_terms;  // Hessian-type estimate only
  double wrapper_gap = 0.0;
  Expr wrapper_direct(n);
  switch (lemma) {
    case L2Lemma::Lemma44i:
      if (order < 1) mismatch("|K| >= 1 required");
      if (type.i != 0) mismatch("i = 0 required");
      N = order - 1;
      lhs_terms.push_back(t.pow(type.l - 1) * ZKu);
      break;
    case L2Lemma::Lemma44ii:
      if (order < 1) mismatch("|K| >= 1 required");
      if (type.i < 1) mismatch("i >= 1 required");
      N = order - 1;
      lhs_terms.push_back(st * t.pow(type.l) * ZKu);
      break;
    case L2Lemma::Lemma44iii:
      if (!(cfg.c > 0.0)) mismatch("c > 0 required");
      if (order > cfg.N - 1) mismatch("|K| <= N - 1 required");
      N = cfg.N;
      c = cfg.c;
      // c enters as a numeric factor of the norm, applied below.
      lhs_terms.push_back(t.pow(type.l) * ZKu);
      break;
    case L2Lemma::Lemma45: {
      const int pn = cfg.p_n(n);
      if (static_cast<int>(cfg.wrapper_partials.size() + cfg.wrapper_boosts.size()) > pn)
        mismatch("|I0| + |J0| <= p_n required");
      N = cfg.N;
      if (order > N - pn + 1) mismatch("|K| <= N - p_n + 1 required");
      const Expr weight = type.i == 0 ? t.pow(type.l - 1) : t.pow(type.l) * st;
      // Leibniz expansion of the wrapper over (weight, Z^K u), then bound.
      Bindings b;
      b.functions.emplace("w", weight);
      b.functions.emplace("v", ZKu);
      const Expr expanded =
          leibniz_expand_mixed(cfg.wrapper_partials, cfg.wrapper_boosts, {"w", "v"}, n).bind(b);
      wrapper_direct = apply_atom_word(cfg.wrapper_partials, cfg.wrapper_boosts, weight * ZKu);
      lhs_terms.push_back(expanded);
      wrapper_gap = (expanded == wrapper_direct) ? 0.0 : -1.0;  // numeric gap filled per slice
      break;
    }
    case L2Lemma::Lemma47: {
      if (type.l != 0) mismatch("type (j,i,0,0) required");
      N = cfg.N;
      if (order > N - 1) mismatch("|K| <= N - 1 required");
      const Expr weight = t * st.pow(3);
      for (int a = 0; a <= n; ++a)
        for (int b2 = a; b2 <= n; ++b2) {
          lhs_terms.push_back(weight * ZKu.differentiate(a).differentiate(b2));
          lhs_terms.push_back(weight * apply_word(K, u.differentiate(a).differentiate(b2), Mode::Canonical));
        }
      const Expr bu = box(u);
      for (const auto& [I, J] : atom_words(n, order)) source_terms.push_back(Expr::s(n) * apply_atom_word(I, J, bu));
      break;
    }
  }

  L2Report rep;
  rep.lemma = lemma;
  rep.word = K.empty() ? "id" : K.to_string();
  for (double s : cfg.s_grid) {
    const SliceNodes nodes = slice_nodes(n, s, cfg.quadrature);
    RatioSample rs;
    rs.s = s;
    if (lemma == L2Lemma::Lemma47) {
      // max over (alpha, beta) of the two Hessian norms
      for (std::size_t k = 0; k + 1 < lhs_terms.size(); k += 2)
        rs.lhs = std::max(rs.lhs, l2_on(lhs_terms[k], nodes) + l2_on(lhs_terms[k + 1], nodes));
    } else {
      rs.lhs = l2_on(lhs_terms[0], nodes) * (lemma == L2Lemma::Lemma44iii ? c : 1.0);
    }
    rs.rhs = std::sqrt(hierarchy_on(u, nodes, N, c));
    for (const Expr& e : source_terms) rs.rhs += l2_on(e, nodes);
    rs.ratio = rs.rhs > 0.0 ? rs.lhs / rs.rhs : (rs.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (wrapper_gap < 0.0) {
      const double gap = l2_on(lhs_terms[0] - wrapper_direct, nodes);
      rep.wrapper_discrepancy = std::max(rep.wrapper_discrepancy, gap / std::max(rs.lhs, 1e-300));
    }
    rep.curve.push_back(rs);
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  double lo = inf, hi = 0.0;
  for (const auto& rs : rep.curve) {
    lo = std::min(lo, rs.ratio);
    hi = std::max(hi, rs.ratio);
  }
  rep.max_ratio = hi;
  // An identically vanishing left side counts as a flat curve.
  rep.spread = hi == 0.0 ? 1.0 : (lo > 0.0 ? hi / lo : inf);
  rep.growth = 1.0;
  for (std::size_t i = 0; i < rep.curve.size(); ++i)
    for (std::size_t j = i + 1; j < rep.curve.size(); ++j) {
      const double a = rep.curve[i].ratio, b = rep.curve[j].ratio;
      if (b > a) rep.growth = std::max(rep.growth, a > 0.0 ? b / a : inf);
    }
  rep.bounded = std::isfinite(hi) && rep.growth <= 10.0;
  return rep;
}

}  // namespace hypercalc
