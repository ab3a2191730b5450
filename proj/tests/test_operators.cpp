#include <random>
#include <stdexcept>

#include "doctest.h"
#include "hypercalc/operators.hpp"
#include "hypercalc/parse.hpp"
#include "test_points.hpp"

using namespace hypercalc;

namespace {

Expr P(const char* text, int dim) { return parse_expression(text, dim); }

Bindings bind_u(const Expr& f) {
  Bindings b;
  b.functions.emplace("u", f);
  return b;
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
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("vector field coefficients reproduce the definitions") {
  const int n = 3;
  for (int a = 1; a <= n; ++a) {
    CHECK(apply_generator(Generator::boost(a), Expr::t(n)) == Expr::x(a, n));
    for (int b = 1; b <= n; ++b)
      CHECK(apply_generator(Generator::boost(a), Expr::x(b, n)) == (a == b ? Expr::t(n) : Expr(n)));
    auto c = vector_field_coefficients(Generator::hyperbolic(a), n);
    CHECK(c.at(0) == Expr::x(a, n) / Expr::t(n));
    CHECK(c.at(a) == Expr(n, Rational(1)));
  }
  CHECK(vector_field_coefficients(Generator::adapted(0), n).at(0) == P("s/t", n));
}

TEST_CASE("apply_generator examples") {
  const int n = 2;
  CHECK(apply_generator(Generator::boost(1), P("s/t", n)) == P("-(x1/t)*(s/t)", n));
  CHECK(apply_generator(Generator::hyperbolic(1), Expr::t(n)) == P("x1/t", n));
  CHECK(apply_generator(Generator::boost(1), P("u[;L2]", n)) == P("u[;L1,L2]", n));
  // A boost on an atom with partials is commuted through.
  CHECK(apply_generator(Generator::boost(1), P("u[dt]", n)) == P("u[dt;L1] - u[d1]", n));
  CHECK(apply_generator(Generator::boost(1), P("u[d1]", n)) == P("u[d1;L1] - u[dt]", n));
  CHECK(apply_generator(Generator::boost(1), P("u[d2]", n)) == P("u[d2;L1]", n));
  // Composition atoms obey the chain rule.
  CHECK(apply_generator(Generator::boost(1), P("f<0>(u)", n)) == P("f<1>(u)*u[;L1]", n));
  CHECK(apply_generator(Generator::partial(2), P("f<1>(u)", n)) == P("f<2>(u)*u[d2]", n));
}

TEST_CASE("apply_word examples") {
  const int n = 2;
  CHECK(apply_word(parse_word("dt dt", n), P("t^3", n)) == P("6*t", n));
  Expr lt = apply_word(parse_word("L1 dt", n), Expr::function("u", n));
  CHECK(lt == P("u[dt;L1] - u[d1]", n));
  CHECK(apply_word(parse_word("h1", n), Expr::function("u", n)) == P("(x1/t)*u[dt] + u[d1]", n));
  CHECK(apply_word(parse_word("h1", n), Expr::function("u", n), Mode::BoostForm) == P("t^-1*u[;L1]", n));
  // All three modes agree after binding.
  std::mt19937_64 rng(3);
  Expr f = testing_support::random_polynomial(rng, n, 3);
  for (const char* w : {"L1 dt h2", "h1 h2 L1", "L2 L1 d1 d2", "a0 L1 h2"}) {
    MultiIndex K = parse_word(w, n);
    Expr direct = apply_word(K, f, Mode::Canonical);
    for (Mode m : {Mode::Canonical, Mode::Definition, Mode::BoostForm})
      CHECK(apply_word(K, Expr::function("u", n), m).bind(bind_u(f)) == direct);
  }
}

TEST_CASE("Leibniz expansion") {
  const int n = 2;
  Expr e = leibniz_expand(parse_word("d1 d1", n), {"u1", "u2"}, n);
  CHECK(e == P("u1[d1,d1]*u2 + u1*u2[d1,d1] + 2*u1[d1]*u2[d1]", n));
  CHECK(leibniz_expand(MultiIndex{}, {"u1", "u2", "u3"}, n) == P("u1*u2*u3", n));
  Bindings b;
  b.functions.emplace("u1", Expr::t(n));
  b.functions.emplace("u2", Expr::x(1, n));
  MultiIndex I = parse_word("L1 dt", n);
  CHECK(leibniz_expand(I, {"u1", "u2"}, n).bind(b) == apply_word(I, Expr::t(n) * Expr::x(1, n), Mode::Canonical));
}

TEST_CASE("Leibniz soundness, |I| <= 3 over {L1, L2, dt, d1, d2}") {
  const int n = 2;
  std::mt19937_64 rng(17);
  const std::vector<Generator> letters{Generator::boost(1), Generator::boost(2), Generator::partial(0),
                                       Generator::partial(1), Generator::partial(2)};
  Bindings b;
  std::vector<Expr> polys;
  for (int k = 1; k <= 3; ++k) {
    polys.push_back(testing_support::random_polynomial(rng, n, 2));
    b.functions.emplace("u" + std::to_string(k), polys.back());
  }
  int cases = 0;
  for (const auto& I : all_words(letters, 3)) {
    for (int m : {2, 3}) {
      std::vector<std::string> ids;
      Expr product(n, Rational(1));
      for (int k = 0; k < m; ++k) {
        ids.push_back("u" + std::to_string(k + 1));
        product *= polys[k];
      }
      CHECK(leibniz_expand(I, ids, n).bind(b) == apply_word(I, product, Mode::Canonical));
      ++cases;
    }
  }
  CHECK(cases == 156 * 2);
}

TEST_CASE("mixed Leibniz rule for d^I L^J") {
  const int n = 2;
  std::mt19937_64 rng(23);
  Bindings b;
  Expr f = testing_support::random_polynomial(rng, n, 2);
  Expr g = testing_support::random_polynomial(rng, n, 2);
  b.functions.emplace("u1", f);
  b.functions.emplace("u2", g);
  const std::vector<std::pair<std::vector<int>, std::vector<int>>> cases{
      {{}, {1}}, {{0}, {2}}, {{0, 1}, {1, 2}}, {{2}, {2, 1, 1}}, {{0, 0, 1}, {}}};
  for (const auto& [I, J] : cases) {
    Expr lhs = leibniz_expand_mixed(I, J, {"u1", "u2"}, n).bind(b);
    Expr rhs = Expr::atom(Atom::derivative("w", I, J), n).bind(Bindings{{{"w", f * g}}, {}});
    CHECK(lhs == rhs);
  }
}

TEST_CASE("Faa di Bruno") {
  const int n = 2;
  CHECK(faa_di_bruno(parse_word("dt", n), "f", "u", n) == P("f<1>(u)*u[dt]", n));
  CHECK(faa_di_bruno(parse_word("dt d1", n), "f", "u", n) == P("f<2>(u)*u[dt]*u[d1] + f<1>(u)*u[dt,d1]", n));
  CHECK_THROWS_AS(faa_di_bruno(MultiIndex{}, "f", "u", n), std::invalid_argument);

  Bindings b;
  Expr u = P("t^2 + x1", n);
  b.functions.emplace("u", u);
  b.outer.emplace("f", OuterFunction::power(3));
  MultiIndex I = parse_word("L1 dt d1", n);
  CHECK(faa_di_bruno(I, "f", "u", n).bind(b) == apply_word(I, u.pow(3), Mode::Canonical));
}

TEST_CASE("Faa di Bruno soundness, |I| <= 4, f = y^p") {
  const int n = 2;
  const std::vector<Generator> letters{Generator::boost(1), Generator::partial(0), Generator::partial(2),
                                       Generator::hyperbolic(1)};
  Expr u = P("t^2 + x1*x2 - 2*t + 1", n);
  for (const auto& I : all_words(letters, 4)) {
    if (I.empty()) continue;
    Expr expansion = faa_di_bruno(I, "f", "u", n);
    for (int p = 1; p <= 4; ++p) {
      Bindings b;
      b.functions.emplace("u", u);
      b.outer.emplace("f", OuterFunction::power(p));
      CHECK(expansion.bind(b) == apply_word(I, u.pow(p), Mode::Canonical));
    }
  }
}

TEST_CASE("commutator table examples") {
  auto t1 = gamma_coefficients({1}, {0});
  REQUIRE(t1.size() == 1);
  CHECK(t1.begin()->first == std::pair<std::vector<int>, std::vector<int>>{{1}, {}});
  CHECK(t1.begin()->second == Rational(-1));
  CHECK(gamma_coefficients({1}, {2}).empty());
  auto t2 = gamma_coefficients({1, 2}, {0});
  CHECK(t2.size() == 2);
  CHECK(t2.at({{2}, {1}}) == Rational(-1));
  CHECK(t2.at({{1}, {2}}) == Rational(-1));
  const std::size_t before = gamma_cache_size();
  CHECK(gamma_coefficients({1, 2}, {0}) == t2);
  CHECK(gamma_cache_size() == before);
}

TEST_CASE("commutator reconstruction on a degree-5 polynomial, |I|+|J| <= 5") {
  const int n = 2;
  std::mt19937_64 rng(41);
  Expr poly = testing_support::random_polynomial(rng, n, 5);
  MultiIndex none;
  int entries = 0;
  for (int i = 1; i <= 4; ++i) {
    // Multisets of partials of size i.
    std::vector<std::vector<int>> Is{{}};
    for (int k = 0; k < i; ++k) {
      std::vector<std::vector<int>> next;
      for (const auto& v : Is)
        for (int p = v.empty() ? 0 : v.back(); p <= n; ++p) {
          auto w = v;
          w.push_back(p);
          next.push_back(w);
        }
      Is = next;
    }
    for (int j = 1; i + j <= 5; ++j) {
      std::vector<std::vector<int>> Js{{}};
      for (int k = 0; k < j; ++k) {
        std::vector<std::vector<int>> next;
        for (const auto& v : Js)
          for (int b = 1; b <= n; ++b) {
            auto w = v;
            w.push_back(b);
            next.push_back(w);
          }
        Js = next;
      }
      for (const auto& I : Is) {
        for (const auto& J : Js) {
          MultiIndex dI, LJ;
          for (int p : I) dI.word.push_back(Generator::partial(p));
          for (int b : J) LJ.word.push_back(Generator::boost(b));
          Expr direct = apply_word(LJ + dI, poly, Mode::Canonical) - apply_word(dI + LJ, poly, Mode::Canonical);
          Expr rebuilt(n);
          for (const auto& [key, g] : gamma_coefficients(J, I)) {
            CHECK(key.first.size() == I.size());
            CHECK(key.second.size() < J.size());
            MultiIndex w;
            for (int p : key.first) w.word.push_back(Generator::partial(p));
            for (int b : key.second) w.word.push_back(Generator::boost(b));
            rebuilt += apply_word(w, poly, Mode::Canonical).scaled(g);
            ++entries;
          }
          CHECK(direct == rebuilt);
        }
      }
    }
  }
  CHECK(entries > 0);
}

TEST_CASE("normal form examples") {
  const int n = 2;
  NormalForm h = normal_form(parse_word("h1", n), n);
  REQUIRE(h.terms.size() == 1);
  CHECK(h.terms[0].coeff == P("t^-1", n));
  CHECK(h.terms[0].I.empty());
  CHECK(h.terms[0].J == std::vector<int>{1});
  CHECK(h.to_string() == "t^-1 · L1 u");

  NormalForm c = normal_form(parse_word("L1 dt", n), n);
  REQUIRE(c.terms.size() == 2);
  CHECK(c.terms[0].I == std::vector<int>{1});
  CHECK(c.terms[0].coeff == Expr(n, Rational(-1)));
  CHECK(c.terms[1].I == std::vector<int>{0});
  CHECK(c.terms[1].J == std::vector<int>{1});
  CHECK(c.terms[1].coeff == Expr(n, Rational(1)));

  NormalForm hh = normal_form(parse_word("h1 h2", n), n);
  Expr f = P("t^2 + x1*x2", n);
  Expr direct = apply_word(parse_word("h1 h2", n), f, Mode::Canonical);
  Expr via_nf = hh.to_expr().bind(bind_u(f));
  CHECK(direct == via_nf);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    ExactPoint p = testing_support::random_exact_point(rng, n);
    CHECK(direct.evaluate_exact(p) == via_nf.evaluate_exact(p));
  }

  NormalForm id = normal_form(MultiIndex{}, n);
  REQUIRE(id.terms.size() == 1);
  CHECK(id.terms[0].coeff == Expr(n, Rational(1)));
  CHECK_THROWS_AS(normal_form(parse_word("a1", n), n), std::invalid_argument);
  NormalForm gen = normal_form(parse_word("a1 L2", n), n, true);
  CHECK(gen.to_expr().bind(bind_u(f)) == apply_word(parse_word("a1 L2", n), f, Mode::Canonical));
}

TEST_CASE("normal form shape and agreement on random words") {
  const int n = 2;
  std::mt19937_64 rng(2718);
  const std::vector<Generator> letters{Generator::boost(1),   Generator::boost(2),      Generator::partial(0),
                                       Generator::partial(1), Generator::partial(2),    Generator::hyperbolic(1),
                                       Generator::hyperbolic(2)};
  std::uniform_int_distribution<int> len(1, 5), pick(0, static_cast<int>(letters.size()) - 1);
  Expr f = testing_support::random_polynomial(rng, n, 4);
  for (int trial = 0; trial < 200; ++trial) {
    MultiIndex K;
    const int L = len(rng);
    for (int k = 0; k < L; ++k) K.word.push_back(letters[pick(rng)]);
    const OperatorType type = classify(K);
    NormalForm nf = normal_form(K, n);
    CHECK(nf.to_expr().bind(bind_u(f)) == apply_word(K, f, Mode::Canonical));
    for (const auto& term : nf.terms) {
      const int I = static_cast<int>(term.I.size());
      const int J = static_cast<int>(term.J.size());
      CHECK(I <= type.i);
      CHECK(J <= type.j + type.l);
      CHECK(I + J >= 1);
      Expr scaled = term.coeff / Expr::t(n).pow(-type.l - type.i + I);
      CHECK(homogeneity_degree(scaled).degree == 0);
      if (type.l == 0) CHECK(term.coeff.is_constant());
    }
  }
}

TEST_CASE("word splitting consistency") {
  const int n = 2;
  std::mt19937_64 rng(99);
  const auto letters = alphabet(n);
  std::uniform_int_distribution<int> len(0, 3), pick(0, static_cast<int>(letters.size()) - 1);
  for (int trial = 0; trial < 60; ++trial) {
    MultiIndex K1, K2;
    for (int k = len(rng); k > 0; --k) K1.word.push_back(letters[pick(rng)]);
    for (int k = len(rng); k > 0; --k) K2.word.push_back(letters[pick(rng)]);
    const NormalForm whole = normal_form(K1 + K2, n, true);
    const NormalForm parts = compose(normal_form(K1, n, true), normal_form(K2, n, true));
    CHECK(whole.to_expr() == parts.to_expr());
  }
}

TEST_CASE("boosts preserve homogeneity on the monomial basis") {
  for (int dim = 1; dim <= 3; ++dim) {
    for (int k = -3; k <= 3; ++k) {
      for (int j = -1; j <= 1; ++j) {
        for (int a1 = 0; a1 <= dim; ++a1) {
          Expr xs = a1 ? Expr::x(a1, dim) : Expr(dim, Rational(1));
          Expr e = Expr::t(dim).pow(k - j - (a1 ? 1 : 0)) * Expr::s(dim).pow(j) * xs;
          REQUIRE(homogeneity_degree(e).degree == k);
          for (int a = 1; a <= dim; ++a) {
            Expr d = apply_generator(Generator::boost(a), e);
            if (d.is_zero()) continue;
            CHECK(homogeneity_degree(d).degree == k);
          }
        }
      }
    }
  }
}
