#include <cmath>
#include <functional>
#include <memory>
#include <random>

#include "doctest.h"
#include "hypercalc/expr.hpp"
#include "hypercalc/parse.hpp"
#include "test_points.hpp"

using namespace hypercalc;

TEST_CASE("rational basics") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(3, -6).to_string() == "-1/2");
  CHECK(Rational::parse("-7/21") == Rational(-1, 3));
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
}

TEST_CASE("parse examples") {
  Expr e = parse_expression("(s/t)^2", 2);
  CHECK(e.to_string() == "1 - t^-2*x1^2 - t^-2*x2^2");
  Expr f = parse_expression("x1/t", 3);
  auto terms = f.atom_free_part().laurent_terms();
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].coeff.is_one());
  CHECK(terms[0].exp[0] == -1);
  CHECK(terms[0].exp[1] == 1);
  CHECK_THROWS_WITH_AS(parse_expression("x4/t", 3), "index out of range", std::out_of_range);
  CHECK_THROWS_AS(parse_expression("t + * s", 2), ParseError);
  try {
    parse_expression("t + )", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.position() == 4);
  }
  CHECK_THROWS_AS(parse_expression("1/(1+t)", 2), ParseError);
}

TEST_CASE("simplify examples") {
  CHECK(parse_expression("s*s - t^2 + x1^2 + x2^2", 2).is_zero());
  CHECK(parse_expression("(s/t)^2 + x1^2/t^2 + x2^2/t^2", 2) == Expr(2, Rational(1)));
  Expr a = parse_expression("1 - (x1^2 + x2^2)/t^2", 2);
  CHECK((a - parse_expression("(s/t)^2", 2)).is_zero());
  CHECK(simplify(simplify(a)) == a);
  // Odd and negative s powers.
  CHECK(parse_expression("s^3", 2) == parse_expression("(t^2 - r2)*s", 2));
  CHECK(parse_expression("(t^2 - r2)/s", 2) == parse_expression("s", 2));
  CHECK(parse_expression("s^-2*s^2", 3) == Expr(3, Rational(1)));
  CHECK(parse_expression("s^-3", 2).to_string() == "s^-3");
}

TEST_CASE("round trip printing") {
  for (const char* text : {"(s/t)^2", "x1/t - 3/2*s^-1", "u[dt,d1;L2]*(t+s) - f<2>(u)*u[d2]^2",
                           "t^-2*s^-1*x1^3 + 7", "-u", "r2*u[;L1,L2]"}) {
    Expr e = parse_expression(text, 2);
    CHECK(parse_expression(e.to_string(), 2) == e);
  }
}

TEST_CASE("differentiate examples") {
  const int n = 2;
  CHECK(Expr::s(n).differentiate(0) == parse_expression("t/s", n));
  Expr d = parse_expression("s/t", n).differentiate(1);
  CHECK(d == parse_expression("-x1/(s*t)", n));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    Point p = testing_support::random_cone_point(rng, n, 2.0, 10.0);
    const double h = 1e-5 * p.t;
    Point a = p, b = p;
    a.x[0] += h;
    b.x[0] -= h;
    Expr f = parse_expression("s/t", n);
    const double fd = (f.evaluate(a) - f.evaluate(b)) / (2 * h);
    CHECK(std::abs(fd - d.evaluate(p)) <= 1e-8 * std::abs(d.evaluate(p)) + 1e-12);
  }
  Expr atom = parse_expression("u[d1;L3]", 3);
  Expr da = atom.differentiate(2);
  CHECK(da == Expr::atom(Atom::derivative("u", {1, 2}, {3}), 3));
  CHECK(da.to_string() == "u[d1,d2;L3]");
}

TEST_CASE("evaluate examples") {
  Point p{5.0, {3.0, 0.0}};
  CHECK(parse_expression("s/t", 2).evaluate(p) == doctest::Approx(0.8).epsilon(1e-15));
  Bindings b;
  b.functions.emplace("u", parse_expression("t^2", 2));
  Point q{3.0, {0.5, 0.5}};
  CHECK(parse_expression("u[dt]", 2).evaluate(q, b) == doctest::Approx(6.0));
  CHECK_THROWS_WITH(parse_expression("u", 2).evaluate(q), doctest::Contains("unbound abstract function"));
  Point outside{1.5, {1.0, 0.0}};
  CHECK_THROWS_AS(parse_expression("t", 2).evaluate(outside), std::domain_error);
  // Boost words bind right to left: L1 L2 u with u = x2 gives L1 t = x1.
  Bindings c;
  c.functions.emplace("u", Expr::x(2, 2));
  CHECK(parse_expression("u[;L1,L2]", 2).bind(c) == Expr::x(1, 2));
}

TEST_CASE("homogeneity examples") {
  CHECK(homogeneity_degree(parse_expression("x1/t", 3)).degree == 0);
  CHECK(homogeneity_degree(parse_expression("t^-1", 3)).degree == -1);
  auto rep = homogeneity_degree(parse_expression("1 + t", 3));
  CHECK_FALSE(rep.degree.has_value());
  CHECK(rep.witness.find("{0, 1}") != std::string::npos);
  CHECK_THROWS(homogeneity_degree(parse_expression("u", 3)));
}

namespace {

// Expression tree evaluated independently of the canonical form.
struct Node {
  enum Op { T, S, X1, X2, Const, Add, Sub, Mul, DivUnit, Pow } op;
  Rational c;
  int k = 0;
  std::unique_ptr<Node> a, b;
};

std::unique_ptr<Node> random_tree(std::mt19937_64& rng, int depth) {
  auto node = std::make_unique<Node>();
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 4 : 9);
  const int choice = pick(rng);
  switch (choice) {
    case 0: node->op = Node::T; break;
    case 1: node->op = Node::S; break;
    case 2: node->op = Node::X1; break;
    case 3: node->op = Node::X2; break;
    case 4: {
      node->op = Node::Const;
      std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
      node->c = Rational(num(rng), den(rng));
      break;
    }
    case 5:
    case 6:
      node->op = choice == 5 ? Node::Add : Node::Sub;
      node->a = random_tree(rng, depth - 1);
      node->b = random_tree(rng, depth - 1);
      break;
    case 7:
      node->op = Node::Mul;
      node->a = random_tree(rng, depth - 1);
      node->b = random_tree(rng, depth - 1);
      break;
    case 8: {
      node->op = Node::DivUnit;  // divide by t^i s^j
      node->a = random_tree(rng, depth - 1);
      std::uniform_int_distribution<int> e(0, 2);
      node->k = e(rng) * 3 + e(rng);
      break;
    }
    default: {
      node->op = Node::Pow;
      node->a = random_tree(rng, depth - 1);
      std::uniform_int_distribution<int> e(0, 3);
      node->k = e(rng);
      break;
    }
  }
  return node;
}

Expr build(const Node& n, int dim) {
  switch (n.op) {
    case Node::T: return Expr::t(dim);
    case Node::S: return Expr::s(dim);
    case Node::X1: return Expr::x(1, dim);
    case Node::X2: return Expr::x(2, dim);
    case Node::Const: return Expr(dim, n.c);
    case Node::Add: return build(*n.a, dim) + build(*n.b, dim);
    case Node::Sub: return build(*n.a, dim) - build(*n.b, dim);
    case Node::Mul: return build(*n.a, dim) * build(*n.b, dim);
    case Node::DivUnit:
      return build(*n.a, dim) / (Expr::t(dim).pow(n.k / 3) * Expr::s(dim).pow(n.k % 3));
    case Node::Pow: return build(*n.a, dim).pow(n.k);
  }
  return Expr(dim);
}

Rational direct(const Node& n, const ExactPoint& p) {
  switch (n.op) {
    case Node::T: return p.t;
    case Node::S: return p.s;
    case Node::X1: return p.x[0];
    case Node::X2: return p.x[1];
    case Node::Const: return n.c;
    case Node::Add: return direct(*n.a, p) + direct(*n.b, p);
    case Node::Sub: return direct(*n.a, p) - direct(*n.b, p);
    case Node::Mul: return direct(*n.a, p) * direct(*n.b, p);
    case Node::DivUnit: return direct(*n.a, p) / (p.t.pow(n.k / 3) * p.s.pow(n.k % 3));
    case Node::Pow: return direct(*n.a, p).pow(n.k);
  }
  return Rational(0);
}

double direct_double(const Node& n, const Point& p) {
  switch (n.op) {
    case Node::T: return p.t;
    case Node::S: return p.s();
    case Node::X1: return p.x[0];
    case Node::X2: return p.x[1];
    case Node::Const: return n.c.to_double();
    case Node::Add: return direct_double(*n.a, p) + direct_double(*n.b, p);
    case Node::Sub: return direct_double(*n.a, p) - direct_double(*n.b, p);
    case Node::Mul: return direct_double(*n.a, p) * direct_double(*n.b, p);
    case Node::DivUnit:
      return direct_double(*n.a, p) / (std::pow(p.t, n.k / 3) * std::pow(p.s(), n.k % 3));
    case Node::Pow: return std::pow(direct_double(*n.a, p), n.k);
  }
  return 0.0;
}

}  // namespace

TEST_CASE("canonical-form soundness on random trees") {
  std::mt19937_64 rng(2024);
  std::vector<ExactPoint> points;
  for (int i = 0; i < 10; ++i) points.push_back(testing_support::random_exact_point(rng, 2));
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    auto tree = random_tree(rng, 6);
    Expr e = build(*tree, 2);
    CHECK(simplify(e) == e);
    CHECK(parse_expression(e.to_string(), 2) == e);
    for (const auto& p : points) {
      CHECK(e.evaluate_exact(p) == direct(*tree, p));
      ++checked;
    }
  }
  CHECK(checked == 5000);
}

TEST_CASE("canonical-form numeric agreement at irrational-s points") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto tree = random_tree(rng, 4);
    Expr e = build(*tree, 2);
    Point p = testing_support::random_cone_point(rng, 2, 2.0, 5.0);
    const double a = e.evaluate(p);
    const double b = direct_double(*tree, p);
    CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("product rule on random pairs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Expr a = build(*random_tree(rng, 3), 2);
    Expr b = build(*random_tree(rng, 3), 2);
    for (int alpha = 0; alpha <= 2; ++alpha) {
      CHECK((a * b).differentiate(alpha) == a.differentiate(alpha) * b + a * b.differentiate(alpha));
      CHECK((a + b).differentiate(alpha) == a.differentiate(alpha) + b.differentiate(alpha));
    }
  }
}

TEST_CASE("homogeneity drops by one under partials, monomial basis") {
  for (int dim = 1; dim <= 3; ++dim) {
    for (int k = -3; k <= 3; ++k) {
      // t^i s^j x^beta with |beta| <= 2, j in {-1, 0, 1}, i = k - j - |beta|.
      for (int j = -1; j <= 1; ++j) {
        for (int mask = 0; mask < 9; ++mask) {
          Expr xs(dim, Rational(1));
          int xdeg = 0;
          int a1 = mask % 3, a2 = mask / 3;
          if (a1 && a1 <= dim) {
            xs *= Expr::x(a1, dim);
            ++xdeg;
          }
          if (a2 && a2 <= dim) {
            xs *= Expr::x(a2, dim);
            ++xdeg;
          }
          const int i = k - j - xdeg;
          Expr e = Expr::t(dim).pow(i) * Expr::s(dim).pow(j) * xs;
          REQUIRE(homogeneity_degree(e).degree == k);
          for (int alpha = 0; alpha <= dim; ++alpha) {
            Expr d = e.differentiate(alpha);
            if (d.is_zero()) continue;
            CHECK(homogeneity_degree(d).degree == k - 1);
          }
        }
      }
    }
  }
}

TEST_CASE("scaling law for homogeneous expressions") {
  std::mt19937_64 rng(11);
  const char* samples[] = {"x1/t", "s/t", "t^-1*s^-1*x2", "(s/t)^3*t^2 + x1*x2", "s^-3*t^4"};
  for (const char* text : samples) {
    Expr e = parse_expression(text, 2);
    auto k = homogeneity_degree(e).degree;
    REQUIRE(k.has_value());
    for (int i = 0; i < 10; ++i) {
      Point p = testing_support::random_cone_point(rng, 2, 2.0, 6.0);
      for (double lambda : {2.0, 3.0, 0.5}) {
        Point q = p;
        q.t *= lambda;
        for (double& v : q.x) v *= lambda;
        if (!q.in_cone()) continue;
        const double lhs = e.evaluate(q);
        const double rhs = std::pow(lambda, *k) * e.evaluate(p);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}
