#pragma once

// Sampling helpers shared by the unit tests.

#include <cmath>
#include <random>

#include "hypercalc/expr.hpp"

namespace testing_support {

// Uniform-ish point of K with s in [s_lo, s_hi].
inline hypercalc::Point random_cone_point(std::mt19937_64& rng, int dim, double s_lo, double s_hi) {
  std::uniform_real_distribution<double> su(s_lo, s_hi), unit(-1.0, 1.0), frac(0.0, 0.95);
  const double s = su(rng);
  std::vector<double> dir(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : dir) {
      v = unit(rng);
      norm += v * v;
    }
  } while (norm < 1e-6);
  norm = std::sqrt(norm);
  const double r = frac(rng) * (s * s - 1.0) / 2.0;
  hypercalc::Point p;
  p.t = std::sqrt(s * s + r * r);
  p.x.resize(dim);
  for (int a = 0; a < dim; ++a) p.x[a] = r * dir[a] / norm;
  return p;
}

// Rational point with rational s: t - s = d, t + s = |x|^2 / d.
inline hypercalc::ExactPoint random_exact_point(std::mt19937_64& rng, int dim) {
  using hypercalc::Rational;
  std::uniform_int_distribution<int> num(-6, 6), den(1, 3), dd(1, 4);
  while (true) {
    hypercalc::ExactPoint p;
    Rational r2(0);
    for (int a = 0; a < dim; ++a) {
      p.x.emplace_back(num(rng), den(rng));
      r2 += p.x.back() * p.x.back();
    }
    if (r2.is_zero()) continue;
    const Rational d(dd(rng), 8);
    p.t = (d + r2 / d) / Rational(2);
    p.s = (r2 / d - d) / Rational(2);
    if (p.s <= Rational(1)) continue;
    // t > r + 1  <=>  s^2 > 2r + 1, with r^2 = r2: check (s^2 - 1)^2 > 4 r2.
    const Rational lhs = p.s * p.s - Rational(1);
    if (lhs * lhs <= Rational(4) * r2) continue;
    return p;
  }
}

}  // namespace testing_support

namespace testing_support {

// Dense polynomial in t, x^1..x^n of total degree <= deg with random small
// rational coefficients.
inline hypercalc::Expr random_polynomial(std::mt19937_64& rng, int dim, int deg) {
  using hypercalc::Expr;
  using hypercalc::Rational;
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  std::vector<Expr> vars{Expr::t(dim)};
  for (int a = 1; a <= dim; ++a) vars.push_back(Expr::x(a, dim));
  // Enumerate exponent vectors by recursion over variables.
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

}  // namespace testing_support
