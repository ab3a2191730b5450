#include "hypercalc/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hypercalc {

namespace {

std::string partial_name(int alpha) { return alpha == 0 ? "dt" : "d" + std::to_string(alpha); }

void check_atom(const Atom& a, int dim) {
  for (int p : a.partials)
    if (p < 0 || p > dim) throw std::out_of_range("index out of range");
  for (int b : a.boosts)
    if (b < 1 || b > dim) throw std::out_of_range("index out of range");
}

AtomMonomial multiply_monomials(const AtomMonomial& a, const AtomMonomial& b) {
  AtomMonomial out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == a.end() || j->first < i->first) {
      out.push_back(*j++);
    } else {
      out.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Atom Atom::derivative(std::string id, std::vector<int> partials, std::vector<int> boosts) {
  Atom a;
  a.kind = Kind::Derivative;
  a.function = std::move(id);
  std::sort(partials.begin(), partials.end());
  a.partials = std::move(partials);
  a.boosts = std::move(boosts);
  return a;
}

Atom Atom::composition(std::string outer, int order, std::string inner) {
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  Atom a;
  a.kind = Kind::Composition;
  a.outer = std::move(outer);
  a.order = order;
  a.function = std::move(inner);
  return a;
}

std::string Atom::to_string() const {
  if (kind == Kind::Composition)
    return outer + "<" + std::to_string(order) + ">(" + function + ")";
  if (partials.empty() && boosts.empty()) return function;
  std::string out = function + "[";
  for (std::size_t i = 0; i < partials.size(); ++i) {
    if (i) out += ',';
    out += partial_name(partials[i]);
  }
  if (!boosts.empty()) {
    out += ';';
    for (std::size_t i = 0; i < boosts.size(); ++i) {
      if (i) out += ',';
      out += "L" + std::to_string(boosts[i]);
    }
  }
  return out + "]";
}

double Point::r() const {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::sqrt(r2);
}

double Point::s() const {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::sqrt(t * t - r2);
}

bool Point::in_cone() const { return t > r() + 1.0; }

// --- OuterFunction ----------------------------------------------------------

OuterFunction OuterFunction::power(int p) {
  if (p < 0) throw std::invalid_argument("outer power must be >= 0");
  OuterFunction f;
  f.coeffs.assign(p + 1, Rational(0));
  f.coeffs[p] = Rational(1);
  return f;
}

OuterFunction OuterFunction::derivative(int times) const {
  OuterFunction f = *this;
  for (int k = 0; k < times; ++k) {
    if (f.coeffs.empty()) break;
    std::vector<Rational> next;
    for (std::size_t i = 1; i < f.coeffs.size(); ++i) next.push_back(f.coeffs[i] * Rational(static_cast<long>(i)));
    f.coeffs = std::move(next);
  }
  return f;
}

Expr OuterFunction::compose(const Expr& inner) const {
  Expr acc(inner.dim());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * inner + Expr(inner.dim(), *it);
  return acc;
}

// --- Expr -------------------------------------------------------------------

Expr::Expr(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension must be in 1..8");
}

Expr::Expr(int dim, const Rational& c) : Expr(dim) {
  if (!c.is_zero()) terms_.emplace(AtomMonomial{}, Scalar(dim, c));
}

Expr::Expr(Scalar c) : Expr(c.dim()) {
  if (!c.is_zero()) terms_.emplace(AtomMonomial{}, std::move(c));
}

Expr Expr::t(int dim) { return Expr(Scalar::t(dim)); }
Expr Expr::s(int dim) { return Expr(Scalar::s(dim)); }
Expr Expr::x(int a, int dim) { return Expr(Scalar::x(a, dim)); }
Expr Expr::r2(int dim) { return Expr(Scalar::r2(dim)); }

Expr Expr::atom(const Atom& a, int dim) {
  check_atom(a, dim);
  Expr e(dim);
  e.terms_.emplace(AtomMonomial{{a, 1}}, Scalar(dim, Rational(1)));
  return e;
}

bool Expr::is_atom_free() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

bool Expr::is_constant() const { return is_atom_free() && atom_free_part().is_constant(); }

std::optional<Rational> Expr::constant_value() const {
  if (!is_atom_free()) return std::nullopt;
  return atom_free_part().constant_value();
}

Scalar Expr::atom_free_part() const {
  auto it = terms_.find(AtomMonomial{});
  return it == terms_.end() ? Scalar(dim_) : it->second;
}

Scalar Expr::as_scalar() const {
  if (!is_atom_free()) throw std::invalid_argument("expression contains abstract functions");
  return atom_free_part();
}

void Expr::add(const AtomMonomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Expr Expr::operator-() const {
  Expr r(dim_);
  for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, -c);
  return r;
}

Expr& Expr::operator+=(const Expr& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

Expr& Expr::operator-=(const Expr& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch");
  Expr r(a.dim_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add(multiply_monomials(ma, mb), ca * cb);
  return r;
}

Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (!b.is_atom_free()) throw std::domain_error("division by an abstract function");
  return a.times_scalar(b.atom_free_part().inverse());
}

Expr Expr::scaled(const Rational& c) const {
  Expr r(dim_);
  if (c.is_zero()) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, v.scaled(c));
  return r;
}

Expr Expr::times_scalar(const Scalar& c) const {
  Expr r(dim_);
  if (c.is_zero()) return r;
  for (const auto& [m, v] : terms_) r.add(m, v * c);
  return r;
}

Expr Expr::pow(int exponent) const {
  if (exponent < 0) {
    if (!is_atom_free() || is_zero()) throw std::domain_error("negative power of a non-unit");
    return Expr(atom_free_part().pow(exponent));
  }
  Expr result(dim_, Rational(1));
  Expr base = *this;
  while (exponent) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent) base *= base;
  }
  return result;
}

Expr Expr::differentiate(int alpha) const {
  if (alpha < 0 || alpha > dim_) throw std::out_of_range("index out of range");
  return apply_derivation(
      *this, [&](const Scalar& c) { return Expr(c.derivative(alpha)); },
      [&](const Atom& a) {
        if (a.kind == Atom::Kind::Composition) {
          // d f^(k)(u) = f^(k+1)(u) * d u
          return atom(Atom::composition(a.outer, a.order + 1, a.function), dim_) *
                 atom(Atom::derivative(a.function, {alpha}), dim_);
        }
        std::vector<int> p = a.partials;
        p.push_back(alpha);
        return atom(Atom::derivative(a.function, std::move(p), a.boosts), dim_);
      });
}

Expr apply_boost_to_function(int a, const Expr& e) {
  if (a < 1 || a > e.dim()) throw std::out_of_range("index out of range");
  return Expr::x(a, e.dim()) * e.differentiate(0) + Expr::t(e.dim()) * e.differentiate(a);
}

Expr Expr::bind(const Bindings& b) const {
  std::map<Atom, Expr> cache;
  auto resolve = [&](const Atom& a) -> const Expr& {
    auto it = cache.find(a);
    if (it != cache.end()) return it->second;
    auto fn = b.functions.find(a.function);
    if (fn == b.functions.end()) throw std::invalid_argument("unbound abstract function: " + a.function);
    if (fn->second.dim() != dim_) throw std::invalid_argument("dimension mismatch in binding");
    Expr value(dim_);
    if (a.kind == Atom::Kind::Composition) {
      auto of = b.outer.find(a.outer);
      if (of == b.outer.end()) throw std::invalid_argument("unbound abstract function: " + a.outer);
      value = of->second.derivative(a.order).compose(fn->second);
    } else {
      value = fn->second;
      for (auto j = a.boosts.rbegin(); j != a.boosts.rend(); ++j) value = apply_boost_to_function(*j, value);
      for (int p : a.partials) value = value.differentiate(p);
    }
    return cache.emplace(a, std::move(value)).first->second;
  };
  std::map<std::pair<Atom, int>, Expr> powers;
  auto resolve_pow = [&](const Atom& a, int power) -> const Expr& {
    auto it = powers.find({a, power});
    if (it == powers.end()) it = powers.emplace(std::pair{a, power}, resolve(a).pow(power)).first;
    return it->second;
  };
  Expr out(dim_);
  for (const auto& [m, c] : terms_) {
    Expr term(c);
    for (const auto& [atom, power] : m) term *= resolve_pow(atom, power);
    out += term;
  }
  return out;
}

double Expr::evaluate(const Point& p, const Bindings& b) const {
  if (p.dim() != dim_) throw std::invalid_argument("point dimension mismatch");
  if (!p.in_cone()) throw std::domain_error("point outside K (need t > |x| + 1)");
  const Expr bound = is_atom_free() ? *this : bind(b);
  if (!bound.is_atom_free()) throw std::invalid_argument("unbound abstract function");
  return bound.atom_free_part().evaluate(p.t, p.x);
}

Rational Expr::evaluate_exact(const ExactPoint& p, const Bindings& b) const {
  if (static_cast<int>(p.x.size()) != dim_) throw std::invalid_argument("point dimension mismatch");
  const Expr bound = is_atom_free() ? *this : bind(b);
  if (!bound.is_atom_free()) throw std::invalid_argument("unbound abstract function");
  if (p.t.sign() <= 0 || p.s.sign() <= 0) throw std::domain_error("point outside K");
  return bound.atom_free_part().evaluate_exact(p.t, p.x, p.s);
}

std::vector<std::pair<LaurentTerm, AtomMonomial>> Expr::flat_terms() const {
  std::vector<std::pair<LaurentTerm, AtomMonomial>> out;
  for (const auto& [m, c] : terms_)
    for (auto& lt : c.laurent_terms()) out.emplace_back(std::move(lt), m);
  return out;
}

std::string format_laurent_term(const LaurentTerm& lt) {
  std::ostringstream os;
  os << lt.coeff.to_string();
  const auto names = slot_names();
  for (int i = 0; i < kMaxVars; ++i)
    if (lt.exp[i]) os << '*' << names[i] << (lt.exp[i] == 1 ? "" : "^" + std::to_string(lt.exp[i]));
  return os.str();
}

std::string format_atom_monomial(const AtomMonomial& m) {
  std::string out;
  for (const auto& [a, p] : m) {
    if (!out.empty()) out += '*';
    out += a.to_string();
    if (p != 1) out += "^" + std::to_string(p);
  }
  return out;
}

std::string Expr::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string piece;
    if (m.empty()) {
      piece = c.to_string();
      if (out.empty()) {
        out = piece;
        continue;
      }
      // Atom-free part is always first, so this path is unreachable.
    }
    const std::string atoms = format_atom_monomial(m);
    const auto lts = c.laurent_terms();
    bool negative = false;
    if (lts.size() == 1) {
      std::string cs = c.to_string();
      if (cs[0] == '-') {
        negative = true;
        cs.erase(0, 1);
      }
      piece = (cs == "1") ? atoms : cs + "*" + atoms;
    } else {
      piece = "(" + c.to_string() + ")*" + atoms;
    }
    if (out.empty())
      out = negative ? "-" + piece : piece;
    else
      out += (negative ? " - " : " + ") + piece;
  }
  return out;
}

HomogeneityReport homogeneity_degree(const Expr& e) {
  if (!e.is_atom_free()) throw std::invalid_argument("homogeneity_degree requires an atom-free expression");
  HomogeneityReport rep;
  const auto terms = e.atom_free_part().laurent_terms();
  if (terms.empty()) {
    rep.witness = "zero expression is homogeneous of every degree";
    return rep;
  }
  const int k = terms.front().degree();
  for (const auto& lt : terms) {
    if (lt.degree() != k) {
      rep.witness = "mixed monomial degrees {" + std::to_string(k) + ", " +
                    std::to_string(lt.degree()) + "}: " + format_laurent_term(terms.front()) + " vs " +
                    format_laurent_term(lt);
      return rep;
    }
  }
  rep.degree = k;
  return rep;
}

}  // namespace hypercalc
