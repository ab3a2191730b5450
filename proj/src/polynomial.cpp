#include "hypercalc/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hypercalc {

int Monomial::degree() const {
  int d = 0;
  for (auto e : exp) d += e;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.exp[i] = static_cast<std::int16_t>(exp[i] + o.exp[i]);
  return r;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db;
  for (int i = kMaxVars - 1; i >= 0; --i) {
    if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i];
  }
  return false;
}

Polynomial::Polynomial(const Rational& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

Polynomial Polynomial::variable(int slot, int power) {
  Monomial m;
  m.exp[slot] = static_cast<std::int16_t>(power);
  return monomial(m, Rational(1));
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
  Polynomial p;
  p.add_term(m, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial r;
  for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, -c);
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c.is_zero()) return {};
  Polynomial r;
  for (const auto& [m, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, v * c);
  return r;
}

Polynomial Polynomial::times_monomial(const Monomial& mono) const {
  Polynomial r;
  // Multiplying by a fixed monomial preserves the graded order.
  for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m * mono, c);
  return r;
}

Polynomial Polynomial::pow(int exponent) const {
  if (exponent < 0) throw std::invalid_argument("negative polynomial power");
  Polynomial result(Rational(1));
  Polynomial base = *this;
  while (exponent) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(int slot) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    if (m.exp[slot] == 0) continue;
    Monomial d = m;
    --d.exp[slot];
    r.add_term(d, c * Rational(m.exp[slot]));
  }
  return r;
}

int Polynomial::max_exponent(int slot) const {
  int e = 0;
  for (const auto& [m, c] : terms_) e = std::max<int>(e, m.exp[slot]);
  return e;
}

bool Polynomial::divisible_by_variable(int slot) const {
  if (terms_.empty()) return true;
  for (const auto& [m, c] : terms_)
    if (m.exp[slot] == 0) return false;
  return true;
}

Polynomial Polynomial::divide_by_variable(int slot) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    Monomial d = m;
    --d.exp[slot];
    r.terms_.emplace_hint(r.terms_.end(), d, c);
  }
  return r;
}

std::map<int, Polynomial> Polynomial::coefficients_in(int slot) const {
  std::map<int, Polynomial> out;
  for (const auto& [m, c] : terms_) {
    Monomial rest = m;
    rest.exp[slot] = 0;
    out[m.exp[slot]].add_term(rest, c);
  }
  return out;
}

bool Polynomial::divide_exact(const Polynomial& divisor, int slot, Polynomial& quotient) const {
  const int dd = divisor.max_exponent(slot);
  if (dd < 1) throw std::invalid_argument("divisor must involve the main variable");
  auto dcoeffs = divisor.coefficients_in(slot);
  if (!(dcoeffs[dd].is_constant() && dcoeffs[dd].constant_term().is_one()))
    throw std::invalid_argument("divisor must be monic in the main variable");
  // Lower part d = v^dd + tail; each step cancels the top v-power.
  Polynomial tail = divisor - Polynomial::variable(slot, dd);
  auto rem = coefficients_in(slot);
  quotient = Polynomial();
  for (int k = rem.empty() ? -1 : rem.rbegin()->first; k >= dd; --k) {
    auto it = rem.find(k);
    if (it == rem.end() || it->second.is_zero()) continue;
    Polynomial lead = it->second;
    rem.erase(it);
    quotient += lead * Polynomial::variable(slot, k - dd);
    // Subtract lead * v^(k-dd) * tail.
    Polynomial sub = lead * tail;
    for (auto& [e, part] : sub.coefficients_in(slot)) {
      rem[e + k - dd] -= part;
    }
  }
  for (const auto& [k, part] : rem)
    if (!part.is_zero()) return false;
  return true;
}

double Polynomial::evaluate(std::span<const double> values) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double term = c.to_double();
    for (int i = 0; i < kMaxVars; ++i) {
      for (int e = 0; e < m.exp[i]; ++e) term *= values[i];
    }
    sum += term;
  }
  return sum;
}

Rational Polynomial::evaluate_exact(std::span<const Rational> values) const {
  Rational sum(0);
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (int i = 0; i < kMaxVars; ++i)
      if (m.exp[i]) term *= values[i].pow(m.exp[i]);
    sum += term;
  }
  return sum;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = c.abs();
    if (first) {
      if (c.sign() < 0) os << '-';
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (!mag.is_one() || m.degree() == 0) {
      os << mag.to_string();
      wrote = true;
    }
    for (int i = 0; i < kMaxVars; ++i) {
      if (m.exp[i] == 0) continue;
      if (wrote) os << '*';
      os << names[i];
      if (m.exp[i] != 1) os << '^' << m.exp[i];
      wrote = true;
    }
  }
  return os.str();
}

}  // namespace hypercalc
