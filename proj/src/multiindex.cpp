#include "hypercalc/multiindex.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hypercalc {

int Generator::flat_id(int n) const {
  switch (family) {
    case Family::Boost: return index;
    case Family::Partial: return n + 1 + index;
    case Family::Adapted: return 2 * n + 2 + index;
    case Family::Hyperbolic: return 3 * n + 2 + index;
  }
  return 0;
}

Generator Generator::from_flat(int id, int n) {
  if (id < 1 || id > 4 * n + 2) throw std::out_of_range("index out of range");
  if (id <= n) return boost(id);
  if (id <= 2 * n + 1) return partial(id - n - 1);
  if (id <= 3 * n + 2) return adapted(id - 2 * n - 2);
  return hyperbolic(id - 3 * n - 2);
}

bool Generator::valid(int n) const {
  switch (family) {
    case Family::Boost:
    case Family::Hyperbolic: return index >= 1 && index <= n;
    case Family::Partial:
    case Family::Adapted: return index >= 0 && index <= n;
  }
  return false;
}

std::string Generator::to_string() const {
  switch (family) {
    case Family::Boost: return "L" + std::to_string(index);
    case Family::Partial: return index == 0 ? "dt" : "d" + std::to_string(index);
    case Family::Adapted: return "a" + std::to_string(index);
    case Family::Hyperbolic: return "h" + std::to_string(index);
  }
  return "?";
}

Generator Generator::parse(std::string_view tok, int n) {
  if (tok == "dt") return partial(0);
  if (tok.size() < 2 || tok.find_first_not_of("0123456789", 1) != std::string_view::npos)
    throw std::invalid_argument("unknown generator '" + std::string(tok) + "'");
  const int idx = std::stoi(std::string(tok.substr(1)));
  Generator g;
  switch (tok[0]) {
    case 'L': g = boost(idx); break;
    case 'd': g = partial(idx); break;
    case 'a': g = adapted(idx); break;
    case 'h': g = hyperbolic(idx); break;
    default: throw std::invalid_argument("unknown generator '" + std::string(tok) + "'");
  }
  if (!g.valid(n)) throw std::out_of_range("index out of range");
  return g;
}

std::string MultiIndex::to_string() const {
  std::string out;
  for (const auto& g : word) {
    if (!out.empty()) out += ' ';
    out += g.to_string();
  }
  return out;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  MultiIndex r = *this;
  r.word.insert(r.word.end(), o.word.begin(), o.word.end());
  return r;
}

MultiIndex parse_word(std::string_view text, int n) {
  MultiIndex I;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) I.word.push_back(Generator::parse(tok, n));
  return I;
}

std::vector<Generator> alphabet(int n) {
  std::vector<Generator> out;
  for (int id = 1; id <= 4 * n + 2; ++id) out.push_back(Generator::from_flat(id, n));
  return out;
}

OperatorType& OperatorType::operator+=(const OperatorType& o) {
  j += o.j;
  i += o.i;
  k += o.k;
  l += o.l;
  return *this;
}

OperatorType classify(const MultiIndex& I) {
  OperatorType t;
  for (const auto& g : I.word) {
    switch (g.family) {
      case Family::Boost: ++t.j; break;
      case Family::Partial: ++t.i; break;
      case Family::Adapted: ++t.k; break;
      case Family::Hyperbolic: ++t.l; break;
    }
  }
  return t;
}

GraphSet graph(const MultiIndex& I) {
  GraphSet g;
  for (std::size_t p = 0; p < I.word.size(); ++p) g.emplace(static_cast<int>(p) + 1, I.word[p]);
  return g;
}

MultiIndex realization(const GraphSet& A) {
  MultiIndex I;
  for (const auto& [pos, g] : A) I.word.push_back(g);
  return I;
}

int min_position(const GraphSet& A) {
  if (A.empty()) throw std::invalid_argument("empty graph set has no minimum");
  return A.begin()->first;
}

namespace {

std::strong_ordering compare_parts(const std::vector<GraphSet>& a, const std::vector<GraphSet>& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    // Compare by position lists; generators are fixed by position.
    std::vector<int> pa, pb;
    for (const auto& [k, v] : a[i]) pa.push_back(k);
    for (const auto& [k, v] : b[i]) pb.push_back(k);
    if (pa != pb) return pa <=> pb;
    for (auto ia = a[i].begin(), ib = b[i].begin(); ia != a[i].end(); ++ia, ++ib)
      if (ia->second != ib->second) return ia->second <=> ib->second;
  }
  return std::strong_ordering::equal;
}

}  // namespace

std::strong_ordering Partition::compare(const Partition& o) const { return compare_parts(parts, o.parts); }
std::strong_ordering StarPartition::compare(const StarPartition& o) const {
  return compare_parts(parts, o.parts);
}

void StarPartition::canonicalize() {
  std::sort(parts.begin(), parts.end(),
            [](const GraphSet& a, const GraphSet& b) { return min_position(a) < min_position(b); });
}

bool StarPartition::is_canonical() const {
  for (const auto& p : parts)
    if (p.empty()) return false;
  for (std::size_t i = 1; i < parts.size(); ++i)
    if (!(min_position(parts[i - 1]) < min_position(parts[i]))) return false;
  return true;
}

std::vector<Partition> enumerate_partitions(const GraphSet& A, int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  std::vector<std::pair<int, Generator>> elems(A.begin(), A.end());
  const std::size_t N = elems.size();
  std::vector<int> slot(N, 0);
  std::vector<Partition> out;
  while (true) {
    Partition p;
    p.parts.resize(m);
    for (std::size_t k = 0; k < N; ++k) p.parts[slot[k]].emplace(elems[k]);
    out.push_back(std::move(p));
    // Odometer increment, last position fastest.
    std::size_t k = N;
    while (k > 0) {
      --k;
      if (++slot[k] < m) break;
      slot[k] = 0;
      if (k == 0) return out;
    }
    if (N == 0) return out;
  }
}

std::vector<Partition> enumerate_partitions(const MultiIndex& I, int m) {
  return enumerate_partitions(graph(I), m);
}

std::vector<StarPartition> enumerate_star_partitions(const GraphSet& A, int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  std::vector<std::pair<int, Generator>> elems(A.begin(), A.end());
  const int N = static_cast<int>(elems.size());
  std::vector<StarPartition> out;
  if (m > N) return out;
  // Restricted growth strings a_0 = 0, a_k <= 1 + max(a_0..a_{k-1}), using
  // exactly m distinct values; depth-first in lexicographic order.
  std::vector<int> rgs(N, 0);
  auto emit = [&] {
    StarPartition p;
    p.parts.resize(m);
    for (int k = 0; k < N; ++k) p.parts[rgs[k]].emplace(elems[k]);
    out.push_back(std::move(p));
  };
  auto rec = [&](auto&& self, int k, int used) -> void {
    if (k == N) {
      if (used == m) emit();
      return;
    }
    // Not enough positions left to open the remaining blocks.
    if (m - used > N - k) return;
    const int top = std::min(used, m - 1);
    for (int v = 0; v <= top; ++v) {
      rgs[k] = v;
      self(self, k + 1, std::max(used, v + 1));
    }
  };
  rec(rec, 0, 0);
  return out;
}

std::vector<StarPartition> enumerate_star_partitions(const MultiIndex& I, int m) {
  return enumerate_star_partitions(graph(I), m);
}

namespace {

bool has_position(const std::vector<GraphSet>& parts, int position) {
  return part_containing(parts, position) >= 0;
}

}  // namespace

int part_containing(const std::vector<GraphSet>& parts, int position) {
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (parts[i].count(position)) return static_cast<int>(i);
  return -1;
}

Partition insert_extend(const Partition& p, int position, const Generator& g, int l) {
  const int m = static_cast<int>(p.parts.size());
  if (l < 1 || l > m) throw std::out_of_range("slot out of range");
  if (has_position(p.parts, position)) throw std::invalid_argument("position collision");
  Partition r = p;
  r.parts[l - 1].emplace(position, g);
  return r;
}

StarPartition insert_extend(const StarPartition& p, int position, const Generator& g, int l) {
  const int m = static_cast<int>(p.parts.size());
  if (l < 0 || l > m) throw std::out_of_range("slot out of range");
  if (has_position(p.parts, position)) throw std::invalid_argument("position collision");
  StarPartition r = p;
  if (l == 0)
    r.parts.push_back(GraphSet{{position, g}});
  else
    r.parts[l - 1].emplace(position, g);
  r.canonicalize();
  return r;
}

Partition remove_position(const Partition& p, int position) {
  Partition r = p;
  const int k = part_containing(r.parts, position);
  if (k < 0) throw std::invalid_argument("position not present");
  r.parts[k].erase(position);
  return r;
}

StarPartition remove_position(const StarPartition& p, int position) {
  StarPartition r = p;
  const int k = part_containing(r.parts, position);
  if (k < 0) throw std::invalid_argument("position not present");
  r.parts[k].erase(position);
  if (r.parts[k].empty()) r.parts.erase(r.parts.begin() + k);
  r.canonicalize();
  return r;
}

std::string to_string(const GraphSet& A) {
  std::string out = "{";
  bool first = true;
  for (const auto& [pos, g] : A) {
    if (!first) out += ",";
    first = false;
    out += "(" + std::to_string(pos) + "," + g.to_string() + ")";
  }
  return out + "}";
}

std::string to_string(const Partition& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    if (i) out += ", ";
    out += to_string(p.parts[i]);
  }
  return out + ")";
}

std::string to_string(const StarPartition& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    if (i) out += ", ";
    out += to_string(p.parts[i]);
  }
  return out + "}";
}

long long stirling2(int n, int k) {
  if (n < 0 || k < 0) return 0;
  std::vector<std::vector<long long>> S(n + 1, std::vector<long long>(k + 1, 0));
  S[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= std::min(i, k); ++j) S[i][j] = j * S[i - 1][j] + S[i - 1][j - 1];
  return S[n][k];
}

}  // namespace hypercalc
