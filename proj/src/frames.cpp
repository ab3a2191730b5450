#include "hypercalc/frames.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace hypercalc {

std::string frame_name(Frame f) {
  switch (f) {
    case Frame::Canonical: return "canonical";
    case Frame::SHF: return "SHF";
    case Frame::HF: return "HF";
  }
  return "?";
}

Frame parse_frame(std::string_view name) {
  if (name == "canonical") return Frame::Canonical;
  if (name == "SHF" || name == "shf") return Frame::SHF;
  if (name == "HF" || name == "hf") return Frame::HF;
  throw std::invalid_argument("unknown frame '" + std::string(name) + "'");
}

Matrix identity_matrix(int n) {
  Matrix m(n + 1, std::vector<Expr>(n + 1, Expr(n)));
  for (int i = 0; i <= n; ++i) m[i][i] = Expr(n, Rational(1));
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t N = a.size();
  const int n = a[0][0].dim();
  Matrix c(N, std::vector<Expr>(N, Expr(n)));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < N; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

bool is_identity(const Matrix& m) {
  const int n = static_cast<int>(m.size()) - 1;
  return m == identity_matrix(n);
}

FrameMatrices basis_matrices(Frame f, int n) {
  FrameMatrices fm{identity_matrix(n), identity_matrix(n)};
  if (f == Frame::Canonical) return fm;
  const Expr t = Expr::t(n);
  const Expr s = Expr::s(n);
  for (int a = 1; a <= n; ++a) {
    const Expr xa = Expr::x(a, n);
    if (f == Frame::SHF) {
      fm.phi[a][0] = xa / t;
      fm.psi[a][0] = -(xa / t);
    } else {
      fm.phi[a][0] = xa / t;
      fm.psi[a][0] = -(xa / s);
    }
  }
  if (f == Frame::HF) {
    fm.phi[0][0] = s / t;
    fm.psi[0][0] = t / s;
  }
  return fm;
}

Matrix transition_matrix(Frame from, Frame to, int n) {
  if (from == to) return identity_matrix(n);
  if (from == Frame::Canonical) return basis_matrices(to, n).psi;
  if (to == Frame::Canonical) return basis_matrices(from, n).phi;
  return multiply(transition_matrix(from, Frame::Canonical, n), transition_matrix(Frame::Canonical, to, n));
}

TensorComponents TensorComponents::zero(int rank, int n, Frame frame, Signature sig) {
  if (rank < 1 || rank > 3) throw std::invalid_argument("rank must be 1, 2 or 3");
  TensorComponents T;
  T.rank = rank;
  T.dim = n;
  T.frame = frame;
  T.signature = sig;
  std::size_t count = 1;
  for (int r = 0; r < rank; ++r) count *= n + 1;
  T.entries.assign(count, Expr(n));
  return T;
}

TensorComponents TensorComponents::minkowski(int n, Signature sig) {
  TensorComponents m = zero(2, n, Frame::Canonical, sig);
  const Rational time = sig == Signature::PlusMinus ? Rational(1) : Rational(-1);
  m.at({0, 0}) = Expr(n, time);
  for (int a = 1; a <= n; ++a) m.at({a, a}) = Expr(n, -time);
  return m;
}

std::size_t TensorComponents::flat(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != rank) throw std::invalid_argument("index rank mismatch");
  std::size_t k = 0;
  for (int i : idx) {
    if (i < 0 || i > dim) throw std::out_of_range("index out of range");
    k = k * (dim + 1) + i;
  }
  return k;
}

bool TensorComponents::constant() const {
  for (const auto& e : entries)
    if (!e.is_constant() && !e.is_zero()) return false;
  return true;
}

bool TensorComponents::operator==(const TensorComponents& o) const {
  return rank == o.rank && dim == o.dim && frame == o.frame && entries == o.entries;
}

namespace {

std::vector<int> unflatten(std::size_t k, int rank, int n) {
  std::vector<int> idx(rank);
  for (int r = rank - 1; r >= 0; --r) {
    idx[r] = static_cast<int>(k % (n + 1));
    k /= n + 1;
  }
  return idx;
}

}  // namespace

TensorComponents transform_components(const TensorComponents& T, Frame target) {
  const int n = T.dim;
  TensorComponents out = TensorComponents::zero(T.rank, n, target, T.signature);
  if (T.frame == target) {
    out.entries = T.entries;
    return out;
  }
  const Matrix M = transition_matrix(T.frame, target, n);
  const int N = n + 1;
  // Contract one index at a time: T_k = M^T applied on slot k.
  std::vector<Expr> cur = T.entries;
  for (int slot = 0; slot < T.rank; ++slot) {
    std::vector<Expr> next(cur.size(), Expr(n));
    for (std::size_t k = 0; k < cur.size(); ++k) {
      if (cur[k].is_zero()) continue;
      std::vector<int> idx = unflatten(k, T.rank, n);
      const int from = idx[slot];
      for (int to = 0; to < N; ++to) {
        if (M[from][to].is_zero()) continue;
        idx[slot] = to;
        std::size_t j = 0;
        for (int i : idx) j = j * N + i;
        next[j] += M[from][to] * cur[k];
      }
    }
    cur = std::move(next);
  }
  out.entries = std::move(cur);
  return out;
}

Polynomial contraction_polynomial(const TensorComponents& T) {
  if (!T.constant()) throw std::invalid_argument("unsupported: null-form test needs constant entries");
  Polynomial p;
  for (std::size_t k = 0; k < T.entries.size(); ++k) {
    if (T.entries[k].is_zero()) continue;
    Monomial m;
    for (int i : unflatten(k, T.rank, T.dim)) ++m.exp[i];
    p.add_term(m, *T.entries[k].constant_value());
  }
  return p;
}

Polynomial reduce_on_null_cone(const Polynomial& p, int n) {
  Polynomial q;
  for (int a = 1; a <= n; ++a) q += Polynomial::variable(a, 2);
  Polynomial cur = p;
  while (cur.max_exponent(0) >= 2) {
    Polynomial next;
    for (const auto& [m, c] : cur.terms()) {
      if (m.exp[0] < 2) {
        next.add_term(m, c);
        continue;
      }
      Monomial rest = m;
      rest.exp[0] = static_cast<std::int16_t>(m.exp[0] - 2);
      next += q.times_monomial(rest).scaled(c);
    }
    cur = std::move(next);
  }
  return cur;
}

std::string NullCertificate::residual_string() const {
  static const std::array<std::string, kMaxVars> names = {"xi0", "xi1", "xi2", "xi3", "xi4",
                                                          "xi5", "xi6", "xi7", "xi8", "xi9"};
  return residual.to_string(names);
}

NullCertificate is_null_form(const TensorComponents& T) {
  NullCertificate c;
  c.residual = reduce_on_null_cone(contraction_polynomial(T), T.dim);
  c.is_null = c.residual.is_zero();
  return c;
}

double probe_null_cone(const TensorComponents& T, int samples, unsigned long long seed) {
  const Polynomial p = contraction_polynomial(T);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  std::array<double, kMaxVars> xi{};
  for (int k = 0; k < samples; ++k) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (int a = 1; a <= T.dim; ++a) {
        xi[a] = gauss(rng);
        norm += xi[a] * xi[a];
      }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (int a = 1; a <= T.dim; ++a) xi[a] /= norm;
    xi[0] = 1.0;
    worst = std::max(worst, std::abs(p.evaluate(xi)));
  }
  return worst;
}

GoodComponent good_component(const TensorComponents& T) {
  if (T.rank < 2) throw std::invalid_argument("good component needs rank 2 or 3");
  if (!is_null_form(T).is_null) throw std::invalid_argument("no good-component guarantee");
  const int n = T.dim;
  TensorComponents canonical = T.frame == Frame::Canonical ? T : transform_components(T, Frame::Canonical);
  TensorComponents shf = transform_components(canonical, Frame::SHF);
  GoodComponent gc{shf.at(std::vector<int>(T.rank, 0)), Expr::s(n).pow(2) / Expr::t(n).pow(2), Expr(n), Expr(n)};
  gc.g = gc.shf_component * Expr::t(n).pow(2) * Expr::s(n).pow(-2);
  gc.check = Expr::t(n).pow(2) * gc.shf_component - Expr::s(n).pow(2) * gc.g;
  return gc;
}

std::vector<std::pair<std::vector<int>, Expr>> hf_weighted_components(const TensorComponents& T) {
  TensorComponents canonical = T.frame == Frame::Canonical ? T : transform_components(T, Frame::Canonical);
  TensorComponents hf = transform_components(canonical, Frame::HF);
  const int n = T.dim;
  const Expr st = Expr::s(n) / Expr::t(n);
  std::vector<std::pair<std::vector<int>, Expr>> out;
  for (std::size_t k = 0; k < hf.entries.size(); ++k) {
    std::vector<int> idx = unflatten(k, T.rank, n);
    int zeros = 0;
    for (int i : idx) zeros += i == 0;
    out.emplace_back(idx, st.pow(zeros) * hf.entries[k]);
  }
  return out;
}

std::string index_key(const std::vector<int>& idx) {
  std::string k;
  for (int i : idx) k += static_cast<char>('0' + i);
  return k;
}

TensorComponents parse_tensor_record(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed tensor record: ") + e.what());
  }
  const int rank = j.value("rank", 2);
  const int n = j.value("dim", 3);
  const std::string sig = j.value("signature", std::string("pm"));
  if (sig != "pm" && sig != "mp") throw std::invalid_argument("signature must be pm or mp");
  const Frame frame = parse_frame(j.value("frame", std::string("canonical")));
  TensorComponents T = TensorComponents::zero(rank, n, frame, sig == "pm" ? Signature::PlusMinus : Signature::MinusPlus);
  if (j.contains("entries")) {
    for (const auto& [key, value] : j["entries"].items()) {
      if (static_cast<int>(key.size()) != rank) throw std::invalid_argument("entry key '" + key + "' has wrong rank");
      std::vector<int> idx;
      for (char c : key) {
        if (c < '0' || c > '9') throw std::invalid_argument("entry key '" + key + "' is not numeric");
        idx.push_back(c - '0');
      }
      const std::string v = value.is_string() ? value.get<std::string>() : value.dump();
      T.at(idx) = Expr(n, Rational::parse(v));
    }
  }
  return T;
}

}  // namespace hypercalc
