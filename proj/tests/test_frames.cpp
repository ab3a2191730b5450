#include <random>

#include "doctest.h"
#include "hypercalc/frames.hpp"
#include "hypercalc/parse.hpp"

using namespace hypercalc;

namespace {

Expr P(const char* text, int n) { return parse_expression(text, n); }

TensorComponents random_constant(std::mt19937_64& rng, int rank, int n) {
  std::uniform_int_distribution<int> v(-4, 4);
  TensorComponents T = TensorComponents::zero(rank, n);
  for (auto& e : T.entries) e = Expr(n, Rational(v(rng), 3));
  return T;
}

}  // namespace

TEST_CASE("transition matrices match the displayed pairs") {
  const int n = 3;
  auto shf = basis_matrices(Frame::SHF, n);
  CHECK(shf.phi[0][0] == Expr(n, Rational(1)));
  for (int b = 1; b <= n; ++b) CHECK(shf.phi[0][b].is_zero());
  for (int a = 1; a <= n; ++a) {
    CHECK(shf.phi[a][0] == Expr::x(a, n) / Expr::t(n));
    for (int b = 1; b <= n; ++b) CHECK(shf.phi[a][b] == Expr(n, Rational(a == b ? 1 : 0)));
  }
  CHECK(is_identity(multiply(shf.phi, shf.psi)));
  CHECK(is_identity(multiply(shf.psi, shf.phi)));
  auto hf = basis_matrices(Frame::HF, n);
  CHECK(is_identity(multiply(hf.phi, hf.psi)));

  Matrix to_hf = transition_matrix(Frame::Canonical, Frame::HF, n);
  CHECK(to_hf[0][0] == P("t/s", n));
  for (int b = 1; b <= n; ++b) CHECK(to_hf[0][b].is_zero());
  CHECK(to_hf[1][0] == P("-x1/s", n));
  CHECK(transition_matrix(Frame::Canonical, Frame::SHF, n) == shf.psi);
  CHECK(transition_matrix(Frame::SHF, Frame::Canonical, n) == shf.phi);
  for (Frame a : {Frame::Canonical, Frame::SHF, Frame::HF})
    for (Frame b : {Frame::Canonical, Frame::SHF, Frame::HF})
      CHECK(is_identity(multiply(transition_matrix(a, b, n), transition_matrix(b, a, n))));
}

TEST_CASE("Minkowski metric in SHF and HF") {
  const int n = 2;
  TensorComponents m = TensorComponents::minkowski(n);
  TensorComponents ms = transform_components(m, Frame::SHF);
  CHECK(ms.at({0, 0}) == P("(s/t)^2", n));
  CHECK(ms.at({0, 1}) == P("x1/t", n));
  CHECK(ms.at({2, 0}) == P("x2/t", n));
  // Spatial block comes out -Id under (+,-,...,-).
  CHECK(ms.at({1, 1}) == Expr(n, Rational(-1)));
  CHECK(ms.at({1, 2}).is_zero());
  TensorComponents mh = transform_components(m, Frame::HF);
  CHECK(mh.at({0, 0}) == Expr(n, Rational(1)));
  CHECK(mh.at({0, 1}) == P("x1/s", n));
  CHECK(mh.at({1, 1}) == Expr(n, Rational(-1)));
  // The other signature flips every entry.
  TensorComponents mp = transform_components(TensorComponents::minkowski(n, Signature::MinusPlus), Frame::SHF);
  CHECK(mp.at({0, 0}) == -P("(s/t)^2", n));
  CHECK(mp.at({1, 1}) == Expr(n, Rational(1)));
  CHECK(transform_components(m, Frame::Canonical) == m);
}

TEST_CASE("round trips on random constant tensors") {
  std::mt19937_64 rng(12);
  const Frame frames[] = {Frame::Canonical, Frame::SHF, Frame::HF};
  for (int trial = 0; trial < 100; ++trial) {
    const int rank = 2 + trial % 2;
    TensorComponents T = random_constant(rng, rank, 2);
    for (Frame a : frames) {
      TensorComponents Ta = transform_components(T, a);
      for (Frame b : frames) {
        TensorComponents back = transform_components(transform_components(Ta, b), a);
        CHECK(back == Ta);
      }
    }
  }
}

TEST_CASE("null form examples") {
  const int n = 2;
  CHECK(is_null_form(TensorComponents::minkowski(n)).is_null);
  TensorComponents e00 = TensorComponents::zero(2, n);
  e00.at({0, 0}) = Expr(n, Rational(1));
  auto c = is_null_form(e00);
  CHECK_FALSE(c.is_null);
  CHECK(c.residual_string() == "xi1^2 + xi2^2");
  TensorComponents Q = TensorComponents::zero(3, n);
  Q.at({0, 0, 0}) = Expr(n, Rational(1));
  for (int a = 1; a <= n; ++a) {
    Q.at({0, a, a}) = Expr(n, Rational(-1, 3));
    Q.at({a, 0, a}) = Expr(n, Rational(-1, 3));
    Q.at({a, a, 0}) = Expr(n, Rational(-1, 3));
  }
  CHECK(is_null_form(Q).is_null);
  TensorComponents nonconst = TensorComponents::zero(2, n);
  nonconst.at({0, 1}) = Expr::t(n);
  CHECK_THROWS_AS(is_null_form(nonconst), std::invalid_argument);
}

TEST_CASE("null detection agrees with probing on the symmetric rank-2 space") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> v(-3, 3), coin(0, 1);
  const int n = 2;
  int nulls = 0;
  for (int trial = 0; trial < 200; ++trial) {
    TensorComponents T = TensorComponents::zero(2, n);
    if (coin(rng)) {
      // lambda m + antisymmetric part: null by construction.
      const Rational lambda(v(rng), 2);
      T = TensorComponents::minkowski(n);
      for (auto& e : T.entries) e = e.scaled(lambda);
      for (int a = 0; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) {
          const Rational w(v(rng));
          T.at({a, b}) += Expr(n, w);
          T.at({b, a}) -= Expr(n, w);
        }
    } else {
      for (int a = 0; a <= n; ++a)
        for (int b = a; b <= n; ++b) {
          const Rational w(v(rng));
          T.at({a, b}) = Expr(n, w);
          T.at({b, a}) = Expr(n, w);
        }
    }
    const bool certified = is_null_form(T).is_null;
    const bool probed = probe_null_cone(T, 1000, 1000 + trial) < 1e-12;
    CHECK(certified == probed);
    nulls += certified;
  }
  CHECK(nulls > 50);
}

TEST_CASE("good component") {
  const int n = 2;
  auto gc = good_component(TensorComponents::minkowski(n));
  CHECK(gc.shf_component == P("(s/t)^2", n));
  CHECK(gc.g == Expr(n, Rational(1)));
  CHECK(gc.check.is_zero());
  auto zero = good_component(TensorComponents::zero(2, n));
  CHECK(zero.g.is_zero());
  TensorComponents T = TensorComponents::zero(2, 1);
  T.at({0, 0}) = Expr(1, Rational(1));
  T.at({1, 1}) = Expr(1, Rational(1));
  CHECK_THROWS_WITH(good_component(T), "no good-component guarantee");
  // Rank 3: m (x) v is null and g = v^0 - v^a x^a / t.
  TensorComponents Q = TensorComponents::zero(3, n);
  const Rational v[] = {Rational(2), Rational(1), Rational(-1)};
  TensorComponents m = TensorComponents::minkowski(n);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      for (int c = 0; c <= n; ++c) Q.at({a, b, c}) = m.at({a, b}).scaled(v[c]);
  auto gq = good_component(Q);
  CHECK(gq.check.is_zero());
  CHECK(gq.g == P("2 - x1/t + x2/t", n));
}

TEST_CASE("tensor record parsing") {
  TensorComponents T = parse_tensor_record(R"({"rank":2,"dim":2,"signature":"pm","entries":{"00":"1","11":"-1","22":"-1"}})");
  CHECK(T == TensorComponents::minkowski(2));
  TensorComponents Q = parse_tensor_record(R"({"rank":3,"dim":1,"entries":{"010":"-1/3"}})");
  CHECK(Q.at({0, 1, 0}) == Expr(1, Rational(-1, 3)));
  CHECK_THROWS_AS(parse_tensor_record("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_tensor_record(R"({"rank":2,"dim":2,"entries":{"0":"1"}})"), std::invalid_argument);
}
