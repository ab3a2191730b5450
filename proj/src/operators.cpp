#include "hypercalc/operators.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace hypercalc {

namespace {

// I with entry k replaced by the commutator letter of [L_a, d_{I_k}], or
// nullopt-like empty flag when it vanishes.
bool commuted_partial(int a, int alpha, int& out) {
  if (alpha == 0) {
    out = a;  // [L_a, d_t] = -d_a
    return true;
  }
  if (alpha == a) {
    out = 0;  // [L_a, d_a] = -d_t
    return true;
  }
  return false;
}

Expr coeff_expr(const Scalar& c) { return Expr(c); }

Expr boost_definition(int a, const Expr& e) {
  const int n = e.dim();
  if (a < 1 || a > n) throw std::out_of_range("index out of range");
  return apply_derivation(
      e, [&](const Scalar& c) { return coeff_expr(boost_scalar(a, c)); },
      [&](const Atom& atom) {
        if (atom.kind == Atom::Kind::Composition) {
          return Expr::atom(Atom::composition(atom.outer, atom.order + 1, atom.function), n) *
                 Expr::atom(Atom::derivative(atom.function, {}, {a}), n);
        }
        std::vector<int> J;
        J.reserve(atom.boosts.size() + 1);
        J.push_back(a);
        J.insert(J.end(), atom.boosts.begin(), atom.boosts.end());
        Expr out = Expr::atom(Atom::derivative(atom.function, atom.partials, std::move(J)), n);
        for (std::size_t k = 0; k < atom.partials.size(); ++k) {
          int repl = 0;
          if (!commuted_partial(a, atom.partials[k], repl)) continue;
          std::vector<int> I = atom.partials;
          I[k] = repl;
          out -= Expr::atom(Atom::derivative(atom.function, std::move(I), atom.boosts), n);
        }
        return out;
      });
}

}  // namespace

Scalar boost_scalar(int a, const Scalar& c) {
  const int n = c.dim();
  return Scalar::x(a, n) * c.derivative(0) + Scalar::t(n) * c.derivative(a);
}

std::map<int, Expr> vector_field_coefficients(const Generator& Z, int n) {
  if (!Z.valid(n)) throw std::out_of_range("index out of range");
  std::map<int, Expr> c;
  switch (Z.family) {
    case Family::Boost:
      c.emplace(0, Expr::x(Z.index, n));
      c.emplace(Z.index, Expr::t(n));
      break;
    case Family::Partial: c.emplace(Z.index, Expr(n, Rational(1))); break;
    case Family::Adapted: c.emplace(Z.index, Expr::s(n) / Expr::t(n)); break;
    case Family::Hyperbolic:
      c.emplace(0, Expr::x(Z.index, n) / Expr::t(n));
      c.emplace(Z.index, Expr(n, Rational(1)));
      break;
  }
  return c;
}

Expr apply_generator(const Generator& Z, const Expr& e, Mode mode) {
  const int n = e.dim();
  if (!Z.valid(n)) throw std::out_of_range("index out of range");
  switch (Z.family) {
    case Family::Partial: return e.differentiate(Z.index);
    case Family::Adapted: return (Expr::s(n) / Expr::t(n)) * e.differentiate(Z.index);
    case Family::Boost:
      if (mode == Mode::Canonical) return apply_boost_to_function(Z.index, e);
      return boost_definition(Z.index, e);
    case Family::Hyperbolic:
      if (mode == Mode::BoostForm) return boost_definition(Z.index, e) / Expr::t(n);
      return (Expr::x(Z.index, n) / Expr::t(n)) * e.differentiate(0) + e.differentiate(Z.index);
  }
  return Expr(n);
}

Expr apply_word(const MultiIndex& K, const Expr& e, Mode mode) {
  Expr cur = e;
  for (auto it = K.word.rbegin(); it != K.word.rend(); ++it) cur = apply_generator(*it, cur, mode);
  return cur;
}

Expr leibniz_expand(const MultiIndex& I, const std::vector<std::string>& factors, int n) {
  const int m = static_cast<int>(factors.size());
  if (m < 1) throw std::invalid_argument("need at least one factor");
  std::vector<Expr> base;
  for (const auto& f : factors) base.push_back(Expr::function(f, n));
  Expr sum(n);
  std::map<std::pair<int, std::vector<int>>, Expr> cache;  // (factor, flat ids) -> Z^{I_k} u_k
  for (const auto& p : enumerate_partitions(I, m)) {
    Expr term(n, Rational(1));
    for (int k = 0; k < m; ++k) {
      MultiIndex part = realization(p.parts[k]);
      std::vector<int> key;
      for (const auto& g : part.word) key.push_back(g.flat_id(n));
      auto it = cache.find({k, key});
      if (it == cache.end()) it = cache.emplace(std::pair{k, key}, apply_word(part, base[k])).first;
      term *= it->second;
    }
    sum += term;
  }
  return sum;
}

Expr leibniz_expand_mixed(const std::vector<int>& partials, const std::vector<int>& boosts,
                          const std::vector<std::string>& factors, int n) {
  const int m = static_cast<int>(factors.size());
  if (m < 1) throw std::invalid_argument("need at least one factor");
  MultiIndex Iw, Jw;
  for (int p : partials) Iw.word.push_back(Generator::partial(p));
  for (int b : boosts) Jw.word.push_back(Generator::boost(b));
  const auto pI = enumerate_partitions(Iw, m);
  const auto pJ = enumerate_partitions(Jw, m);
  Expr sum(n);
  for (const auto& a : pI) {
    for (const auto& b : pJ) {
      Expr term(n, Rational(1));
      for (int k = 0; k < m; ++k) {
        std::vector<int> Ik, Jk;
        for (const auto& [pos, g] : a.parts[k]) Ik.push_back(g.index);
        for (const auto& [pos, g] : b.parts[k]) Jk.push_back(g.index);
        term *= Expr::atom(Atom::derivative(factors[k], Ik, Jk), n);
      }
      sum += term;
    }
  }
  return sum;
}

Expr faa_di_bruno(const MultiIndex& I, const std::string& f, const std::string& u, int n) {
  if (I.empty()) throw std::invalid_argument("Faa di Bruno expansion needs |I| >= 1");
  const Expr base = Expr::function(u, n);
  Expr sum(n);
  const int N = static_cast<int>(I.order());
  for (int k = 1; k <= N; ++k) {
    Expr inner(n);
    for (const auto& p : enumerate_star_partitions(I, k)) {
      Expr prod(n, Rational(1));
      for (const auto& part : p.parts) prod *= apply_word(realization(part), base);
      inner += prod;
    }
    sum += Expr::atom(Atom::composition(f, k, u), n) * inner;
  }
  return sum;
}

// --- Commutator tables --------------------------------------------------------

namespace {

std::mutex g_gamma_mutex;
std::map<std::pair<std::vector<int>, std::vector<int>>, CommutatorEntry> g_gamma_cache;

void add_entry(CommutatorEntry& e, std::vector<int> I, std::vector<int> J, const Rational& c) {
  if (c.is_zero()) return;
  std::sort(I.begin(), I.end());
  auto [it, inserted] = e.try_emplace({std::move(I), std::move(J)}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) e.erase(it);
  }
}

// [L_a, d^I] = sum over k of -d^{I with I_k commuted}.
CommutatorEntry single_boost(int a, const std::vector<int>& I) {
  CommutatorEntry e;
  for (std::size_t k = 0; k < I.size(); ++k) {
    int repl = 0;
    if (!commuted_partial(a, I[k], repl)) continue;
    std::vector<int> Ip = I;
    Ip[k] = repl;
    add_entry(e, std::move(Ip), {}, Rational(-1));
  }
  return e;
}

CommutatorEntry compute_gamma(const std::vector<int>& J, const std::vector<int>& I) {
  const int a = J.front();
  if (J.size() == 1) return single_boost(a, I);
  const std::vector<int> rest(J.begin() + 1, J.end());
  CommutatorEntry out;
  // L_a [L^J', d^I] = sum G L_a d^{I'} L^{J''}
  //               = sum G (d^{I'} L^{a J''} + [L_a, d^{I'}] L^{J''}).
  for (const auto& [key, g] : gamma_coefficients(rest, I)) {
    const auto& [Ip, Jpp] = key;
    std::vector<int> aJ{a};
    aJ.insert(aJ.end(), Jpp.begin(), Jpp.end());
    add_entry(out, Ip, aJ, g);
    for (const auto& [k2, g2] : single_boost(a, Ip)) add_entry(out, k2.first, Jpp, g * g2);
  }
  // [L_a, d^I] L^J'
  for (const auto& [k2, g2] : single_boost(a, I)) add_entry(out, k2.first, rest, g2);
  return out;
}

}  // namespace

CommutatorEntry gamma_coefficients(const std::vector<int>& J, std::vector<int> I) {
  if (J.empty() || I.empty()) throw std::invalid_argument("commutator needs |J| >= 1 and |I| >= 1");
  std::sort(I.begin(), I.end());
  const auto key = std::make_pair(J, I);
  {
    std::lock_guard<std::mutex> lock(g_gamma_mutex);
    auto it = g_gamma_cache.find(key);
    if (it != g_gamma_cache.end()) return it->second;
  }
  // Computed outside the lock; recursive calls take the lock themselves.
  CommutatorEntry table = compute_gamma(J, I);
  std::lock_guard<std::mutex> lock(g_gamma_mutex);
  return g_gamma_cache.try_emplace(key, std::move(table)).first->second;
}

std::size_t gamma_cache_size() {
  std::lock_guard<std::mutex> lock(g_gamma_mutex);
  return g_gamma_cache.size();
}

// --- Normal forms -------------------------------------------------------------

namespace {

bool term_less(const NormalFormTerm& a, const NormalFormTerm& b) {
  const std::size_t da = a.I.size() + a.J.size();
  const std::size_t db = b.I.size() + b.J.size();
  if (da != db) return da < db;
  if (a.I != b.I) return a.I < b.I;
  return a.J < b.J;
}

}  // namespace

Expr NormalForm::to_expr(const std::string& u) const {
  Expr e(dim);
  for (const auto& term : terms) e += term.coeff * Expr::atom(Atom::derivative(u, term.I, term.J), dim);
  return e;
}

NormalForm NormalForm::from_expr(const Expr& e, const std::string& u) {
  NormalForm nf;
  nf.dim = e.dim();
  for (const auto& [mono, c] : e.terms()) {
    if (mono.size() != 1 || mono[0].second != 1 || mono[0].first.kind != Atom::Kind::Derivative ||
        mono[0].first.function != u)
      throw std::invalid_argument("expression is not linear in derivatives of " + u);
    nf.terms.push_back({Expr(c), mono[0].first.partials, mono[0].first.boosts});
  }
  std::sort(nf.terms.begin(), nf.terms.end(), term_less);
  return nf;
}

std::string partial_word_string(const std::vector<int>& I) {
  std::string out;
  for (int p : I) {
    if (!out.empty()) out += ' ';
    out += p == 0 ? "dt" : "d" + std::to_string(p);
  }
  return out;
}

std::string boost_word_string(const std::vector<int>& J) {
  std::string out;
  for (int b : J) {
    if (!out.empty()) out += ' ';
    out += std::to_string(b);
  }
  return out;
}

std::string NormalForm::to_string(const std::string& u) const {
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& term : terms) {
    std::string c = term.coeff.to_string();
    if (term.coeff.atom_free_part().laurent_terms().size() > 1) c = "(" + c + ")";
    std::string ops = partial_word_string(term.I);
    for (int b : term.J) {
      if (!ops.empty()) ops += ' ';
      ops += "L" + std::to_string(b);
    }
    if (!out.empty()) out += '\n';
    out += c + " · " + (ops.empty() ? "" : ops + " ") + u;
  }
  return out;
}

Expr apply_normal_form(const NormalForm& nf, const Expr& e) {
  Expr out(e.dim());
  for (const auto& term : nf.terms) {
    Expr cur = e;
    for (auto it = term.J.rbegin(); it != term.J.rend(); ++it) cur = boost_definition(*it, cur);
    for (int p : term.I) cur = cur.differentiate(p);
    out += term.coeff * cur;
  }
  return out;
}

NormalForm normal_form(const MultiIndex& K, int dim, bool generalized) {
  if (!generalized && classify(K).k > 0)
    throw std::invalid_argument("unsupported type: adapted generators need generalized mode");
  static const std::string u = "u";
  return NormalForm::from_expr(apply_word(K, Expr::function(u, dim), Mode::BoostForm), u);
}

NormalForm compose(const NormalForm& nf1, const NormalForm& nf2) {
  return NormalForm::from_expr(apply_normal_form(nf1, nf2.to_expr("u")), "u");
}

}  // namespace hypercalc
