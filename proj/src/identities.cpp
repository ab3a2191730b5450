#include "hypercalc/identities.hpp"

#include <chrono>
#include <set>

#include "hypercalc/estimates.hpp"
#include "hypercalc/operators.hpp"

namespace hypercalc {

namespace {

class Recorder {
 public:
  explicit Recorder(std::string name) : start_(std::chrono::steady_clock::now()) { res_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++res_.cases;
    if (ok) return;
    if (res_.failures == 0) res_.detail = "first failure: " + what;
    ++res_.failures;
  }
  SuiteResult finish() {
    res_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (res_.failures == 0) res_.detail = std::to_string(res_.cases) + " cases";
    return res_;
  }

 private:
  SuiteResult res_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<Generator> boosts_and_partials(int n) {
  std::vector<Generator> g;
  for (int a = 1; a <= n; ++a) g.push_back(Generator::boost(a));
  for (int alpha = 0; alpha <= n; ++alpha) g.push_back(Generator::partial(alpha));
  return g;
}

MultiIndex mixed_word(int N) {
  const Generator letters[] = {Generator::boost(1), Generator::partial(0), Generator::hyperbolic(2),
                               Generator::partial(1), Generator::boost(2)};
  MultiIndex I;
  for (int k = 0; k < N; ++k) I.word.push_back(letters[k % 5]);
  return I;
}

long long ipow(int b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

Expr random_polynomial(std::mt19937_64& rng, int dim, int deg) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  std::vector<Expr> vars{Expr::t(dim)};
  for (int a = 1; a <= dim; ++a) vars.push_back(Expr::x(a, dim));
  Expr out(dim);
  std::vector<int> e(vars.size(), 0);
  auto rec = [&](auto&& self, std::size_t v, int left) -> void {
    if (v == vars.size()) {
      Expr m(dim, Rational(num(rng), den(rng)));
      for (std::size_t k = 0; k < vars.size(); ++k) m *= vars[k].pow(e[k]);
      out += m;
      return;
    }
    for (int p = 0; p <= left; ++p) {
      e[v] = p;
      self(self, v + 1, left - p);
    }
    e[v] = 0;
  };
  rec(rec, 0, deg);
  return out;
}

std::vector<MultiIndex> all_words(const std::vector<Generator>& letters, int max_len) {
  std::vector<MultiIndex> out{MultiIndex{}};
  std::vector<MultiIndex> layer{MultiIndex{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<MultiIndex> next;
    for (const auto& w : layer)
      for (const auto& g : letters) {
        MultiIndex v = w;
        v.word.push_back(g);
        next.push_back(std::move(v));
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

SuiteResult leibniz_suite(int n, int max_len, const std::vector<int>& factor_counts, std::uint64_t seed) {
  Recorder rec("leibniz");
  std::mt19937_64 rng(seed);
  int max_m = 0;
  for (int m : factor_counts) max_m = std::max(max_m, m);
  Bindings b;
  std::vector<Expr> polys;
  for (int k = 1; k <= max_m; ++k) {
    polys.push_back(random_polynomial(rng, n, 2));
    b.functions.emplace("u" + std::to_string(k), polys.back());
  }
  for (const auto& I : all_words(boosts_and_partials(n), max_len))
    for (int m : factor_counts) {
      std::vector<std::string> ids;
      Expr product(n, Rational(1));
      for (int k = 0; k < m; ++k) {
        ids.push_back("u" + std::to_string(k + 1));
        product *= polys[k];
      }
      rec.check(leibniz_expand(I, ids, n).bind(b) == apply_word(I, product, Mode::Canonical),
                "I = '" + I.to_string() + "', m = " + std::to_string(m));
    }
  return rec.finish();
}

SuiteResult faa_di_bruno_suite(int n, int max_len, int max_power) {
  Recorder rec("faa-di-bruno");
  std::vector<Generator> letters = boosts_and_partials(n);
  letters.push_back(Generator::hyperbolic(1));
  // Inhomogeneous so that no derivative order vanishes by degree counting.
  Expr u = Expr::t(n).pow(2) + Expr::x(1, n);
  if (n >= 2) u += Expr::x(1, n) * Expr::x(2, n);
  std::vector<Expr> powers{Expr(n, Rational(1))};
  for (int p = 1; p <= max_power; ++p) powers.push_back(powers.back() * u);
  for (const auto& I : all_words(letters, max_len)) {
    if (I.empty()) continue;
    const Expr expansion = faa_di_bruno(I, "f", "u", n);
    for (int p = 1; p <= max_power; ++p) {
      Bindings b;
      b.functions.emplace("u", u);
      b.outer.emplace("f", OuterFunction::power(p));
      rec.check(expansion.bind(b) == apply_word(I, powers[p], Mode::Canonical),
                "I = '" + I.to_string() + "', p = " + std::to_string(p));
    }
  }
  return rec.finish();
}

SuiteResult bijection_suite(int max_len, int max_parts) {
  Recorder rec("bijections");
  const Generator g0 = Generator::boost(2);
  for (int N = 0; N <= max_len; ++N) {
    const GraphSet base = graph(mixed_word(N));
    GraphSet extended = base;
    extended.emplace(0, g0);
    for (int m = 1; m <= max_parts; ++m) {
      const std::string tag = "N = " + std::to_string(N) + ", m = " + std::to_string(m);
      const auto parts = enumerate_partitions(base, m);
      const auto star = enumerate_star_partitions(base, m);
      rec.check(static_cast<long long>(parts.size()) == ipow(m, N), "count m^N, " + tag);
      rec.check(static_cast<long long>(star.size()) == stirling2(N, m), "count S(N,m), " + tag);

      // Ordered: p_l over (p, l) hits every element of D_m exactly once,
      // and the part holding 0 splits D_m into m disjoint blocks.
      std::set<Partition> images;
      std::size_t produced = 0;
      bool inverse_ok = true;
      for (const auto& p : parts)
        for (int l = 1; l <= m; ++l) {
          Partition q = insert_extend(p, 0, g0, l);
          inverse_ok = inverse_ok && remove_position(q, 0) == p && part_containing(q.parts, 0) == l - 1;
          images.insert(std::move(q));
          ++produced;
        }
      const auto target = enumerate_partitions(extended, m);
      rec.check(inverse_ok, "p_l inverse, " + tag);
      rec.check(images.size() == produced, "p_l injective, " + tag);
      rec.check(std::set<Partition>(target.begin(), target.end()) == images, "p_l surjective, " + tag);
      std::vector<long long> block(m, 0);
      for (const auto& q : target) ++block[part_containing(q.parts, 0)];
      bool cover = true;
      for (long long c : block) cover = cover && c == ipow(m, N);
      rec.check(cover, "disjoint cover of D_m, " + tag);

      // Star: a new singleton from D*_{m-1} or one of m existing parts.
      std::set<StarPartition> simages;
      std::size_t sproduced = 0, singles = 0;
      bool sinverse_ok = true;
      std::vector<StarPartition> smaller;
      if (m == 1) {
        if (N == 0) smaller.push_back(StarPartition{});
      } else {
        smaller = enumerate_star_partitions(base, m - 1);
      }
      for (const auto& p : smaller) {
        StarPartition q = insert_extend(p, 0, g0, 0);
        sinverse_ok = sinverse_ok && q.is_canonical() && remove_position(q, 0) == p;
        simages.insert(std::move(q));
        ++sproduced;
        ++singles;
      }
      for (const auto& p : star)
        for (int l = 1; l <= m; ++l) {
          StarPartition q = insert_extend(p, 0, g0, l);
          sinverse_ok = sinverse_ok && q.is_canonical() && remove_position(q, 0) == p;
          simages.insert(std::move(q));
          ++sproduced;
        }
      const auto starget = enumerate_star_partitions(extended, m);
      rec.check(sinverse_ok, "p*_l inverse, " + tag);
      rec.check(simages.size() == sproduced, "p*_l injective, " + tag);
      rec.check(std::set<StarPartition>(starget.begin(), starget.end()) == simages, "p*_l surjective, " + tag);
      std::size_t own = 0;
      for (const auto& q : starget) own += q.parts.front().size() == 1;
      rec.check(own == singles && starget.size() - own == star.size() * m, "disjoint cover of D*_m, " + tag);
    }
  }
  return rec.finish();
}

SuiteResult commutator_suite(int n, int degree, int max_total, std::uint64_t seed) {
  Recorder rec("commutators");
  std::mt19937_64 rng(seed);
  const Expr poly = random_polynomial(rng, n, degree);
  // Cache d^I L^J poly across table entries.
  std::map<std::pair<std::vector<int>, std::vector<int>>, Expr> jets;
  auto jet = [&](const std::vector<int>& I, const std::vector<int>& J) -> const Expr& {
    auto it = jets.find({I, J});
    if (it == jets.end()) it = jets.emplace(std::pair{I, J}, apply_atom_word(I, J, poly)).first;
    return it->second;
  };
  for (const auto& [I, J] : atom_words(n, max_total)) {
    if (I.empty() || J.empty()) continue;
    MultiIndex dI, LJ;
    for (int p : I) dI.word.push_back(Generator::partial(p));
    for (int b : J) LJ.word.push_back(Generator::boost(b));
    const Expr direct = apply_word(LJ, jet(I, {}), Mode::Canonical) - jet(I, J);
    Expr rebuilt(n);
    bool shape = true;
    for (const auto& [key, g] : gamma_coefficients(J, I)) {
      shape = shape && key.first.size() == I.size() && key.second.size() < J.size();
      rebuilt += jet(key.first, key.second).scaled(g);
    }
    const std::string tag = "J = '" + boost_word_string(J) + "', I = '" + partial_word_string(I) + "'";
    rec.check(shape, "index bounds, " + tag);
    rec.check(direct == rebuilt, "reconstruction, " + tag);
  }
  return rec.finish();
}

SuiteResult normal_form_suite(int n, int words, int max_len, std::uint64_t seed) {
  Recorder rec("normal-forms");
  std::mt19937_64 rng(seed);
  std::vector<Generator> letters = boosts_and_partials(n);
  for (int a = 1; a <= n; ++a) letters.push_back(Generator::hyperbolic(a));
  std::uniform_int_distribution<int> len(1, max_len), pick(0, static_cast<int>(letters.size()) - 1);
  // A rational test function: polynomial plus genuinely rational terms.
  const Expr f = random_polynomial(rng, n, 4) + Expr::x(1, n).pow(3) / Expr::t(n) + Expr::s(n) / Expr::t(n).pow(2);
  Bindings b;
  b.functions.emplace("u", f);
  for (int trial = 0; trial < words; ++trial) {
    MultiIndex K;
    for (int k = len(rng); k > 0; --k) K.word.push_back(letters[pick(rng)]);
    const OperatorType type = classify(K);
    const NormalForm nf = normal_form(K, n);
    const std::string tag = "K = '" + K.to_string() + "'";
    rec.check(nf.to_expr().bind(b) == apply_word(K, f, Mode::Canonical), "agreement, " + tag);
    bool shape = true;
    for (const auto& term : nf.terms) {
      const int I = static_cast<int>(term.I.size());
      const int J = static_cast<int>(term.J.size());
      shape = shape && I <= type.i && J <= type.j + type.l && I + J >= 1;
      const Expr scaled = term.coeff * Expr::t(n).pow(type.l + type.i - I);
      shape = shape && homogeneity_degree(scaled).degree == 0;
      if (type.l == 0) shape = shape && term.coeff.is_constant();
    }
    rec.check(shape, "coefficient shape, " + tag);
  }
  return rec.finish();
}

SuiteResult box_hessian_suite(const std::vector<int>& dims) {
  Recorder rec("box-hessian");
  for (int n : dims) {
    rec.check(dalembert_decompose(n).residual.is_zero(), "box, n = " + std::to_string(n));
    for (int a = 0; a <= n; ++a)
      for (int c = a; c <= n; ++c) {
        if (a == 0 && c == 0) continue;
        rec.check(hessian_decompose(a, c, n).residual.is_zero(),
                  "hessian (" + std::to_string(a) + "," + std::to_string(c) + "), n = " + std::to_string(n));
      }
  }
  return rec.finish();
}

SuiteResult energy_form_suite(const std::vector<int>& dims) {
  Recorder rec("energy-forms");
  for (int n : dims) {
    const auto f = energy_integrands(Expr::function("u", n), Rational(1));
    const std::string tag = ", n = " + std::to_string(n);
    rec.check(f[0] == f[1], "form1 = form2" + tag);
    rec.check(f[0] == f[2], "form1 = form3" + tag + ", difference " + (f[0] - f[2]).to_string());
  }
  return rec.finish();
}

SuiteResult s_over_t_homogeneity_suite(int n, int order) {
  Recorder rec("s-over-t-homogeneity");
  for (const auto& h : s_over_t_homogeneity(n, order)) rec.check(h.ok(), h.word);
  return rec.finish();
}

std::vector<SuiteResult> run_identity_suites(int dim, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  out.push_back(leibniz_suite(dim, 3, {2, 3}, seed));
  out.push_back(faa_di_bruno_suite(dim, 4, 4));
  out.push_back(bijection_suite(4, 3));
  out.push_back(commutator_suite(dim, 5, 5, seed));
  out.push_back(normal_form_suite(dim, 200, 5, seed));
  out.push_back(box_hessian_suite({1, 2, 3}));
  out.push_back(energy_form_suite({1, 2, 3}));
  out.push_back(s_over_t_homogeneity_suite(dim, 3));
  return out;
}

}  // namespace hypercalc
