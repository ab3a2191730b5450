#include "hypercalc/scalar.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hypercalc {

namespace {

const std::array<std::string, kMaxVars> kSlotNames = {"t",  "x1", "x2", "x3", "x4",
                                                      "x5", "x6", "x7", "x8", "s"};

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension must be in 1..8");
}

}  // namespace

std::span<const std::string> slot_names() { return kSlotNames; }

int LaurentTerm::degree() const {
  int d = 0;
  for (int e : exp) d += e;
  return d;
}

Scalar::Scalar(int dim) : dim_(dim) { check_dim(dim); }

Scalar::Scalar(int dim, const Rational& c) : dim_(dim), num_(c) { check_dim(dim); }

Scalar::Scalar(int dim, Polynomial num, int t_den, int s_den)
    : dim_(dim), num_(std::move(num)), t_den_(t_den), s_den_(s_den) {
  check_dim(dim);
  canonicalize();
}

Scalar Scalar::t(int dim) { return Scalar(dim, Polynomial::variable(kVarT), 0, 0); }
Scalar Scalar::s(int dim) { return Scalar(dim, Polynomial::variable(kVarS), 0, 0); }

Scalar Scalar::x(int a, int dim) {
  if (a < 1 || a > dim) throw std::out_of_range("index out of range");
  return Scalar(dim, Polynomial::variable(a), 0, 0);
}

Scalar Scalar::r2(int dim) {
  Polynomial p;
  for (int a = 1; a <= dim; ++a) p += Polynomial::variable(a, 2);
  return Scalar(dim, p, 0, 0);
}

Scalar Scalar::from_polynomial(int dim, Polynomial p, int t_den, int s_den) {
  for (const auto& [m, c] : p.terms())
    for (int a = dim + 1; a <= kMaxDim; ++a)
      if (m.exp[a] != 0) throw std::out_of_range("index out of range");
  return Scalar(dim, std::move(p), t_den, s_den);
}

std::optional<Rational> Scalar::constant_value() const {
  if (!is_constant()) return std::nullopt;
  return num_.constant_term();
}

Polynomial Scalar::radical_square() const {
  Polynomial q = Polynomial::variable(kVarT, 2);
  for (int a = 1; a <= dim_; ++a) q -= Polynomial::variable(a, 2);
  return q;
}

Polynomial Scalar::reduce_radical(const Polynomial& p) const {
  if (p.max_exponent(kVarS) < 2) return p;
  const Polynomial q = radical_square();
  Polynomial out;
  for (const auto& [m, c] : p.terms()) {
    const int e = m.exp[kVarS];
    if (e < 2) {
      out.add_term(m, c);
      continue;
    }
    Monomial base = m;
    base.exp[kVarS] = static_cast<std::int16_t>(e % 2);
    out += q.pow(e / 2).times_monomial(base).scaled(c);
  }
  return out;
}

Polynomial Scalar::times_s(const Polynomial& p, int power) const {
  if (power == 0) return p;
  Monomial m;
  m.exp[kVarS] = static_cast<std::int16_t>(power);
  return reduce_radical(p.times_monomial(m));
}

void Scalar::canonicalize() {
  num_ = reduce_radical(num_);
  if (t_den_ < 0) {
    Monomial m;
    m.exp[kVarT] = static_cast<std::int16_t>(-t_den_);
    num_ = num_.times_monomial(m);
    t_den_ = 0;
  }
  if (s_den_ < 0) {
    num_ = times_s(num_, -s_den_);
    s_den_ = 0;
  }
  if (num_.is_zero()) {
    t_den_ = s_den_ = 0;
    return;
  }
  if (t_den_ == 0 && s_den_ == 0) return;
  const Polynomial q = s_den_ > 0 ? radical_square() : Polynomial{};
  bool changed = true;
  while (changed) {
    changed = false;
    while (t_den_ > 0 && num_.divisible_by_variable(kVarT)) {
      num_ = num_.divide_by_variable(kVarT);
      --t_den_;
      changed = true;
    }
    if (s_den_ > 0) {
      // num = A + B s is divisible by s iff q | A; then num/s = B + (A/q) s.
      auto parts = num_.coefficients_in(kVarS);
      Polynomial quotient;
      if (parts[0].divide_exact(q, kVarT, quotient)) {
        num_ = parts[1] + quotient.times_monomial([] {
                 Monomial m;
                 m.exp[kVarS] = 1;
                 return m;
               }());
        --s_den_;
        changed = true;
      }
    }
  }
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.num_ = -num_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  const int a = std::max(t_den_, o.t_den_);
  const int b = std::max(s_den_, o.s_den_);
  auto lift = [&](const Scalar& v) {
    Monomial m;
    m.exp[kVarT] = static_cast<std::int16_t>(a - v.t_den_);
    return times_s(v.num_.times_monomial(m), b - v.s_den_);
  };
  *this = Scalar(dim_, lift(*this) + lift(o), a, b);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  *this = Scalar(dim_, num_ * o.num_, t_den_ + o.t_den_, s_den_ + o.s_den_);
  return *this;
}

Scalar Scalar::scaled(const Rational& c) const {
  if (c.is_zero()) return Scalar(dim_);
  Scalar r = *this;
  r.num_ = num_.scaled(c);
  return r;
}

namespace {

struct UnitSplit {
  bool unit = false;
  Rational c;
  int t_power = 0;
  int s_power = 0;
};

}  // namespace

static UnitSplit split_unit(const Polynomial& numerator, const Polynomial& q) {
  UnitSplit out;
  Polynomial n = numerator;
  if (n.is_zero()) return out;
  bool changed = true;
  while (changed) {
    changed = false;
    while (!n.is_constant() && n.divisible_by_variable(kVarT)) {
      n = n.divide_by_variable(kVarT);
      ++out.t_power;
      changed = true;
    }
    if (n.is_constant()) break;
    auto parts = n.coefficients_in(kVarS);
    Polynomial quotient;
    if (parts[0].divide_exact(q, kVarT, quotient)) {
      Monomial sm;
      sm.exp[kVarS] = 1;
      n = parts[1] + quotient.times_monomial(sm);
      ++out.s_power;
      changed = true;
    }
  }
  if (n.is_constant()) {
    out.unit = true;
    out.c = n.constant_term();
  }
  return out;
}

bool Scalar::is_unit() const { return split_unit(num_, radical_square()).unit; }

Scalar Scalar::inverse() const {
  const UnitSplit u = split_unit(num_, radical_square());
  if (!u.unit)
    throw std::domain_error("division by non-monomial expression (only c*t^i*s^j is invertible)");
  return Scalar(dim_, Polynomial(Rational(1) / u.c), u.t_power - t_den_, u.s_power - s_den_);
}

Scalar Scalar::pow(int exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  Scalar result(dim_, Rational(1));
  Scalar base = *this;
  while (exponent) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent) base *= base;
  }
  return result;
}

Scalar Scalar::derivative(int alpha) const {
  if (alpha < 0 || alpha > dim_) throw std::out_of_range("index out of range");
  if (is_zero()) return Scalar(dim_);
  const int slot = alpha;  // slot 0 is t, slot a is x^a
  auto parts = num_.coefficients_in(kVarS);
  const Polynomial& b_part = parts[1];
  // ds = t/s or -x^a/s
  const Scalar ds = alpha == 0 ? Scalar(dim_, Polynomial::variable(kVarT), 0, 1)
                               : Scalar(dim_, -Polynomial::variable(alpha), 0, 1);
  Scalar result(dim_, num_.derivative(slot), t_den_, s_den_);
  if (!b_part.is_zero()) result += Scalar(dim_, b_part, t_den_, s_den_) * ds;
  if (alpha == 0 && t_den_ > 0)
    result -= Scalar(dim_, num_, t_den_ + 1, s_den_).scaled(Rational(t_den_));
  if (s_den_ > 0) result -= (Scalar(dim_, num_, t_den_, s_den_ + 1) * ds).scaled(Rational(s_den_));
  return result;
}

double Scalar::evaluate(double t, std::span<const double> x) const {
  std::array<double, kMaxVars> v{};
  v[kVarT] = t;
  double r2 = 0.0;
  for (int a = 1; a <= dim_; ++a) {
    v[a] = x[a - 1];
    r2 += x[a - 1] * x[a - 1];
  }
  v[kVarS] = std::sqrt(t * t - r2);
  double value = num_.evaluate(v);
  for (int i = 0; i < t_den_; ++i) value /= t;
  for (int i = 0; i < s_den_; ++i) value /= v[kVarS];
  return value;
}

Rational Scalar::evaluate_exact(const Rational& t, std::span<const Rational> x,
                                const Rational& s) const {
  std::array<Rational, kMaxVars> v{};
  v[kVarT] = t;
  Rational r2(0);
  for (int a = 1; a <= dim_; ++a) {
    v[a] = x[a - 1];
    r2 += x[a - 1] * x[a - 1];
  }
  if (s * s != t * t - r2) throw std::invalid_argument("s^2 != t^2 - |x|^2 at exact point");
  v[kVarS] = s;
  Rational value = num_.evaluate_exact(v);
  if (t_den_) value /= t.pow(t_den_);
  if (s_den_) value /= s.pow(s_den_);
  return value;
}

std::vector<LaurentTerm> Scalar::laurent_terms() const {
  std::vector<LaurentTerm> out;
  out.reserve(num_.size());
  for (const auto& [m, c] : num_.terms()) {
    LaurentTerm lt;
    lt.coeff = c;
    for (int i = 0; i < kMaxVars; ++i) lt.exp[i] = m.exp[i];
    lt.exp[kVarT] -= t_den_;
    lt.exp[kVarS] -= s_den_;
    out.push_back(std::move(lt));
  }
  return out;
}

std::string Scalar::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& lt : laurent_terms()) {
    if (first) {
      if (lt.coeff.sign() < 0) os << '-';
    } else {
      os << (lt.coeff.sign() < 0 ? " - " : " + ");
    }
    first = false;
    const Rational mag = lt.coeff.abs();
    bool wrote = false;
    bool any_var = false;
    for (int e : lt.exp) any_var = any_var || e != 0;
    if (!mag.is_one() || !any_var) {
      os << mag.to_string();
      wrote = true;
    }
    for (int i = 0; i < kMaxVars; ++i) {
      if (lt.exp[i] == 0) continue;
      if (wrote) os << '*';
      os << kSlotNames[i];
      if (lt.exp[i] != 1) os << '^' << lt.exp[i];
      wrote = true;
    }
  }
  return os.str();
}

}  // namespace hypercalc
