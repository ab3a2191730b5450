#include "hypercalc/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "hypercalc/estimates.hpp"
#include "hypercalc/frames.hpp"
#include "hypercalc/identities.hpp"
#include "hypercalc/operators.hpp"
#include "hypercalc/parse.hpp"

namespace hypercalc::cli {

using nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(const ordered_json& j, std::string& o) {
  using V = ordered_json::value_t;
  switch (j.type()) {
    case V::object: {
      o += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) o += ',';
        first = false;
        o += ordered_json(it.key()).dump();
        o += ':';
        write_json(it.value(), o);
      }
      o += '}';
      break;
    }
    case V::array: {
      o += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) o += ',';
        write_json(j[i], o);
      }
      o += ']';
      break;
    }
    case V::number_float: {
      const double d = j.get<double>();
      o += std::isfinite(d) ? real(d) : "null";
      break;
    }
    default:
      o += j.dump();
  }
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Info: return "info";
  }
  return "info";
}

ordered_json point_json(const Point& p) {
  return ordered_json{{"t", p.t}, {"x", p.x}};
}

std::string point_text(const Point& p) {
  std::string out = "t=" + real(p.t) + " x=(";
  for (std::size_t a = 0; a < p.x.size(); ++a) out += (a ? "," : "") + real(p.x[a]);
  return out + ")";
}

std::string pad(std::string s, std::size_t width) {
  // Width in code points so "·" and "∅" align like ASCII.
  std::size_t cps = 0;
  for (unsigned char c : s) cps += (c & 0xC0) != 0x80;
  if (cps < width) s.append(width - cps, ' ');
  return s;
}

struct Globals {
  int dim = 3;
  bool json = false;
  std::string grid;
  double tol = 1e-6;
  unsigned long long seed = 1;
  std::string signature = "pm";
  bool signature_given = false;
};

struct GridSpec {
  int radial = 0, angular = 0, slices = 0;
};

// "RxAxS" or "RxA"; '×' accepted for 'x'.
GridSpec parse_grid(std::string text, bool allow_two) {
  for (std::size_t p; (p = text.find("\xC3\x97")) != std::string::npos;) text.replace(p, 2, "x");
  std::vector<int> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, 'x');) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--grid expects RxAxS with positive integers, got '" + text + "'");
    }
    if (used != item.size() || v <= 0) throw UsageError("--grid expects RxAxS with positive integers, got '" + text + "'");
    parts.push_back(v);
  }
  if (parts.size() != 3 && !(allow_two && parts.size() == 2))
    throw UsageError("--grid expects RxAxS with positive integers, got '" + text + "'");
  return {parts[0], parts[1], parts.size() == 3 ? parts[2] : 0};
}

Signature signature_of(const Globals& g) { return g.signature == "mp" ? Signature::MinusPlus : Signature::PlusMinus; }

std::vector<std::string> tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == ',' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

int index_token(const std::string& tok, int lo, int dim, const std::string& what) {
  std::size_t used = 0;
  int v = -1;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw UsageError("bad " + what + " index '" + tok + "'");
  }
  if (used != tok.size()) throw UsageError("bad " + what + " index '" + tok + "'");
  if (v < lo || v > dim) throw UsageError(what + " index out of range: '" + tok + "'");
  return v;
}

// Boost indices: "1 2" or "L1 L2".
std::vector<int> parse_boosts(const std::string& text, int dim) {
  std::vector<int> J;
  for (const auto& tok : tokens(text)) J.push_back(index_token(tok[0] == 'L' ? tok.substr(1) : tok, 1, dim, "boost"));
  return J;
}

// Partial indices: "dt d1", "d0 d2" or "0 2".
std::vector<int> parse_partials(const std::string& text, int dim) {
  std::vector<int> I;
  for (const auto& tok : tokens(text)) {
    if (tok == "dt") I.push_back(0);
    else I.push_back(index_token(tok[0] == 'd' ? tok.substr(1) : tok, 0, dim, "partial"));
  }
  return I;
}

std::string word_or_empty(const std::string& s) { return s.empty() ? "∅" : s; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json normal_form_json(const NormalForm& nf) {
  ordered_json terms = ordered_json::array();
  for (const auto& t : nf.terms)
    terms.push_back({{"coeff", t.coeff.to_string()}, {"I", partial_word_string(t.I)}, {"J", boost_word_string(t.J)}});
  return terms;
}

// ---------------------------------------------------------------------------
// Subcommands

struct ExpandArgs {
  std::string word;
  int factors = 2;
  std::string outer;
  std::vector<std::string> bind;
  int power = 0;
};

Report do_expand(const Globals& g, const ExpandArgs& a) {
  Report r;
  r.subcommand = "expand";
  const MultiIndex I = parse_word(a.word, g.dim);
  const bool faa = !a.outer.empty();
  Expr expansion(g.dim);
  std::vector<std::string> ids;
  if (faa) {
    if (I.empty()) throw UsageError("Faa di Bruno expansion needs a non-empty word");
    expansion = faa_di_bruno(I, a.outer, "u", g.dim);
    ids.push_back("u");
  } else {
    if (a.factors < 1) throw UsageError("--factors must be positive");
    for (int k = 1; k <= a.factors; ++k) ids.push_back("u" + std::to_string(k));
    expansion = leibniz_expand(I, ids, g.dim);
  }
  r.payload["word"] = I.to_string();
  r.payload["rule"] = faa ? "faa-di-bruno" : "leibniz";
  r.payload["expansion"] = expansion.to_string();
  r.text = expansion.to_string() + "\n";
  if (!a.bind.empty()) {
    if (a.bind.size() != ids.size())
      throw UsageError("--bind needs " + std::to_string(ids.size()) + " expression(s)");
    if (faa && a.power < 0) throw UsageError("--power must be non-negative");
    Bindings b;
    Expr direct(g.dim, Rational(1));
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const Expr v = parse_expression(a.bind[k], g.dim);
      b.functions.emplace(ids[k], v);
      direct *= v;
    }
    if (faa) {
      b.outer.emplace(a.outer, OuterFunction::power(a.power));
      direct = direct.pow(a.power);
    }
    const Expr bound = expansion.bind(b);
    const Expr oracle = apply_word(I, direct, Mode::Canonical);
    const bool equal = bound == oracle;
    r.payload["bound"] = bound.to_string();
    r.payload["direct"] = oracle.to_string();
    r.payload["equal"] = equal;
    r.text += "bound:  " + bound.to_string() + "\ndirect: " + oracle.to_string() + "\n";
    r.status = equal ? Status::Pass : Status::Fail;
  }
  return r;
}

Report do_normal_form(const Globals& g, const std::string& word, bool generalized) {
  Report r;
  r.subcommand = "normal-form";
  const NormalForm nf = normal_form(parse_word(word, g.dim), g.dim, generalized);
  r.payload["terms"] = normal_form_json(nf);
  r.text = nf.to_string() + "\n";
  return r;
}

Report do_commute(const Globals& g, const std::string& Jtext, const std::string& Itext) {
  Report r;
  r.subcommand = "commute";
  const std::vector<int> J = parse_boosts(Jtext, g.dim);
  const std::vector<int> I = parse_partials(Itext, g.dim);
  ordered_json entries = ordered_json::array();
  std::vector<std::array<std::string, 3>> rows;
  for (const auto& [key, gamma] : gamma_coefficients(J, I)) {
    entries.push_back(
        {{"I", partial_word_string(key.first)}, {"J", boost_word_string(key.second)}, {"gamma", gamma.to_string()}});
    rows.push_back({word_or_empty(partial_word_string(key.first)), word_or_empty(boost_word_string(key.second)),
                    gamma.to_string()});
  }
  r.payload["J"] = boost_word_string(J);
  r.payload["I"] = partial_word_string(I);
  r.payload["entries"] = entries;
  if (rows.empty()) r.text = "{}\n";
  for (const auto& row : rows) r.text += "(" + row[0] + ", " + row[1] + "): " + row[2] + "\n";
  return r;
}

Report do_partitions(const Globals& g, const std::string& word, int m, bool star) {
  Report r;
  r.subcommand = "partitions";
  if (m < 0) throw UsageError("--m must be non-negative");
  const MultiIndex I = parse_word(word, g.dim);
  ordered_json list = ordered_json::array();
  std::size_t count = 0;
  if (star) {
    for (const auto& p : enumerate_star_partitions(I, m)) {
      list.push_back(to_string(p));
      r.text += to_string(p) + "\n";
      ++count;
    }
  } else {
    for (const auto& p : enumerate_partitions(I, m)) {
      list.push_back(to_string(p));
      r.text += to_string(p) + "\n";
      ++count;
    }
  }
  const int N = static_cast<int>(I.order());
  long long expected = 1;
  if (star) {
    expected = stirling2(N, m);
  } else {
    for (int k = 0; k < N; ++k) expected *= m;
  }
  r.payload["partitions"] = list;
  r.payload["count"] = count;
  r.payload["expected_count"] = expected;
  r.text += "count " + std::to_string(count) + " (" + (star ? "S(N,m)" : "m^N") + " = " + std::to_string(expected) +
            ")\n";
  r.status = static_cast<long long>(count) == expected ? Status::Pass : Status::Fail;
  return r;
}

Report do_check_null(const Globals& g, const std::string& path, int samples) {
  Report r;
  r.subcommand = "check-null";
  TensorComponents T = parse_tensor_record(read_file(path));
  if (g.signature_given) T.signature = signature_of(g);
  const NullCertificate cert = is_null_form(T);
  const double probe = probe_null_cone(T, samples, g.seed);
  const bool probe_null = probe <= 1e-9;
  const bool agree = probe_null == cert.is_null;
  r.payload["rank"] = T.rank;
  r.payload["dim"] = T.dim;
  r.payload["null"] = cert.is_null;
  r.payload["residual"] = cert.residual_string();
  r.payload["probe_max"] = probe;
  r.payload["probe_samples"] = samples;
  r.payload["agree"] = agree;
  r.text = std::string("null form: ") + (cert.is_null ? "yes" : "no") + "\nresidual on the null cone: " +
           cert.residual_string() + "\nprobe max |T(xi..)| over " + std::to_string(samples) + " samples: " +
           real(probe) + "\n";
  if (cert.is_null && T.rank >= 2) {
    const GoodComponent gc = good_component(T);
    r.payload["shf_00"] = gc.shf_component.to_string();
    r.payload["g"] = gc.g.to_string();
    r.text += "SHF 0..0 component: " + gc.shf_component.to_string() + " = (s/t)^2 * (" + gc.g.to_string() + ")\n";
  }
  r.status = agree ? Status::Pass : Status::Fail;
  return r;
}

void hessian_row(const HessianIdentity& h, Report& r, ordered_json& list) {
  const bool ok = h.residual.is_zero();
  list.push_back({{"alpha", h.alpha},
                  {"beta", h.beta},
                  {"display", h.display.to_string()},
                  {"normal_form", normal_form_json(h.rhs)},
                  {"residual", h.residual.to_string()}});
  r.text += "d" + std::to_string(h.alpha) + " d" + std::to_string(h.beta) + " u =\n" + h.display.to_string() +
            "\n  normal form:\n" + h.rhs.to_string() + "\n  residual: " + h.residual.to_string() + "\n";
  if (!ok) r.status = Status::Fail;
}

Report do_hessian(const Globals& g, int alpha, int beta) {
  Report r;
  r.subcommand = "hessian";
  r.status = Status::Pass;
  ordered_json list = ordered_json::array();
  if (alpha >= 0 || beta >= 0) {
    if (alpha < 0 || beta < 0) throw UsageError("--alpha and --beta go together");
    if (alpha > g.dim || beta > g.dim) throw UsageError("index exceeds --dim");
    hessian_row(hessian_decompose(alpha, beta, g.dim), r, list);
  } else {
    for (int a = 0; a <= g.dim; ++a)
      for (int b = a; b <= g.dim; ++b)
        if (a != 0 || b != 0) hessian_row(hessian_decompose(a, b, g.dim), r, list);
  }
  r.payload["identities"] = list;
  return r;
}

Report do_box(const Globals& g) {
  Report r;
  r.subcommand = "box";
  const BoxDecomposition d = dalembert_decompose(g.dim);
  r.payload["principal"] = d.principal.to_string();
  r.payload["A_display"] = d.A_display.to_string();
  r.payload["A"] = normal_form_json(d.A);
  r.payload["residual"] = d.residual.to_string();
  r.text = "Box u = (" + d.principal.to_string() + ") · dt dt u + t^-1 A u\nA =\n" + d.A_display.to_string() +
           "\n  normal form:\n" + d.A.to_string() + "\nresidual: " + d.residual.to_string() + "\n";
  r.status = d.residual.is_zero() ? Status::Pass : Status::Fail;
  return r;
}

struct BoundArgs {
  std::string suite = "s-over-t";
  std::optional<double> declared;
  int order = 1;
  double s0 = 2.0, s1 = 10.0;
  int k_range = 2;
  std::string tensor;
  bool angular = false;
};

Report do_verify_bounds(const Globals& g, const BoundArgs& a) {
  Report r;
  r.subcommand = "verify-bounds";
  SampleGrid grid;
  if (!g.grid.empty()) {
    const GridSpec gs = parse_grid(g.grid, false);
    grid.radial = gs.radial;
    grid.angular = gs.angular;
    grid.s_values = gs.slices;
  }
  grid.seed = g.seed;
  if (a.order < 0) throw UsageError("--order must be non-negative");
  if (!(a.s0 > 1.0) || !(a.s1 >= a.s0) || !std::isfinite(a.s1)) throw UsageError("need 1 < s0 <= s1 < inf");
  Region region{g.dim, a.s0, a.s1, a.angular};
  std::vector<BoundReport> reports;
  if (a.suite == "s-over-t") {
    reports = s_over_t_suite(region, grid, a.order);
  } else if (a.suite == "power") {
    reports = power_suite(region, grid, a.k_range, a.order);
  } else if (a.suite == "one-minus-r-over-t") {
    reports = one_minus_r_over_t_suite(region, grid, a.order);
  } else {
    const TensorComponents T =
        a.tensor.empty() ? TensorComponents::minkowski(g.dim, signature_of(g)) : parse_tensor_record(read_file(a.tensor));
    reports = null_suite(T, region, grid, a.order);
  }
  ordered_json list = ordered_json::array();
  std::size_t width = 4;
  for (const auto& b : reports) width = std::max(width, b.name.size());
  r.text = pad("name", width + 2) + pad("empirical_C", 26) + pad("verdict", 9) + "argmax\n";
  bool any_fail = false, all_pass = !reports.empty();
  for (auto& b : reports) {
    if (a.declared) {
      b.declared_C = a.declared;
      b.verdict = judge_constant(b.empirical_C, *a.declared);
    }
    any_fail = any_fail || b.verdict == Verdict::Fail;
    all_pass = all_pass && b.verdict == Verdict::Pass;
    ordered_json rec{{"name", b.name},
                     {"empirical_C", b.empirical_C},
                     {"argmax_point", point_json(b.argmax)},
                     {"samples", b.samples}};
    rec["declared_C"] = b.declared_C ? ordered_json(*b.declared_C) : ordered_json(nullptr);
    rec["verdict"] = verdict_name(b.verdict);
    list.push_back(std::move(rec));
    r.text += pad(b.name, width + 2) + pad(real(b.empirical_C), 26) + pad(verdict_name(b.verdict), 9) +
              point_text(b.argmax) + "\n";
  }
  r.payload["suite"] = a.suite;
  r.payload["grid"] = {{"s_values", grid.s_values},
                       {"radial", grid.radial},
                       {"angular", grid.angular},
                       {"scattered", grid.scattered},
                       {"seed", grid.seed},
                       {"s0", a.s0},
                       {"s1", a.s1},
                       {"angular_region", a.angular}};
  r.payload["reports"] = list;
  r.status = any_fail ? Status::Fail : (all_pass ? Status::Pass : Status::Info);
  return r;
}

struct EnergyArgs {
  std::string u;
  double s = std::sqrt(3.0);
  double c = 0.0;
  int N = -1;
  int max_levels = 4;
};

Report do_energy(const Globals& g, const EnergyArgs& a) {
  Report r;
  r.subcommand = "energy";
  Quadrature q{128, 256};
  if (!g.grid.empty()) {
    const GridSpec gs = parse_grid(g.grid, true);
    q = {gs.radial, gs.angular};
  }
  if (!(g.tol > 0)) throw UsageError("--tol must be positive");
  if (a.max_levels < 1) throw UsageError("--levels must be positive");
  const Expr u = parse_expression(a.u, g.dim);
  const EnergyReport e = energy_refined(u, a.s, a.c, q, g.tol, a.max_levels);
  constexpr double kPointwise = 1e-12;
  const bool forms_agree = e.max_pointwise_discrepancy <= kPointwise;
  const bool converged = e.warning || e.rel_change <= g.tol;
  r.payload["u"] = u.to_string();
  r.payload["s"] = e.s;
  r.payload["c"] = e.c;
  r.payload["value"] = e.value;
  r.payload["form1"] = e.form1;
  r.payload["form2"] = e.form2;
  r.payload["form3"] = e.form3;
  r.payload["max_pointwise_discrepancy"] = e.max_pointwise_discrepancy;
  r.payload["pointwise_tolerance"] = kPointwise;
  r.payload["empty_domain"] = e.warning;
  r.payload["levels"] = e.levels;
  r.payload["rel_change"] = e.rel_change;
  r.payload["resolution"] = {{"radial", e.resolution.radial}, {"angular", e.resolution.angular}};
  r.text = "E_c(s, u) = " + real(e.value) + "\n  form1 " + real(e.form1) + "\n  form2 " + real(e.form2) +
           "\n  form3 " + real(e.form3) + "\n  max pointwise discrepancy " + real(e.max_pointwise_discrepancy) +
           "\n  refinement levels " + std::to_string(e.levels) + ", last relative change " + real(e.rel_change) +
           " at " + std::to_string(e.resolution.radial) + "x" + std::to_string(e.resolution.angular) + "\n";
  if (e.warning) r.text += "  warning: empty slice (s <= 1)\n";
  bool monotone = true;
  if (a.N >= 0) {
    ordered_json h = ordered_json::array();
    double prev = 0.0;
    for (int n = 0; n <= a.N; ++n) {
      const double v = energy_hierarchy(u, a.s, n, a.c, e.resolution);
      monotone = monotone && v >= prev && v >= 0.0;
      prev = v;
      h.push_back({{"N", n}, {"value", v}});
      r.text += "  E^" + std::to_string(n) + " = " + real(v) + "\n";
    }
    r.payload["hierarchy"] = h;
    r.payload["monotone"] = monotone;
  }
  r.status = forms_agree && converged && monotone ? Status::Pass : Status::Fail;
  return r;
}

Report do_identities(const Globals& g) {
  Report r;
  r.subcommand = "identities";
  ordered_json list = ordered_json::array();
  r.text = pad("suite", 24) + pad("cases", 8) + pad("failures", 10) + pad("seconds", 10) + "detail\n";
  bool ok = true;
  for (const auto& s : run_identity_suites(g.dim, g.seed)) {
    ok = ok && s.passed();
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", s.seconds);
    list.push_back({{"name", s.name},
                    {"cases", s.cases},
                    {"failures", s.failures},
                    {"passed", s.passed()},
                    {"detail", s.detail}});
    r.text += pad(s.name, 24) + pad(std::to_string(s.cases), 8) + pad(std::to_string(s.failures), 10) +
              pad(secs, 10) + s.detail + "\n";
  }
  r.payload["suites"] = list;
  r.status = ok ? Status::Pass : Status::Fail;
  return r;
}

}  // namespace

std::string dump_json(const ordered_json& j) {
  std::string out;
  write_json(j, out);
  return out;
}

std::string format_report(const Report& r, bool json) {
  if (json) {
    ordered_json j;
    j["schema_version"] = 1;
    for (auto it = r.payload.begin(); it != r.payload.end(); ++it) j[it.key()] = it.value();
    j["subcommand"] = r.subcommand;
    j["status"] = status_name(r.status);
    return dump_json(j) + "\n";
  }
  std::string out = r.text;
  if (r.status == Status::Pass) out += "PASS\n";
  if (r.status == Status::Fail) out += "FAIL\n";
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact calculus of boosts, partials and hyperboloidal frames", "hypercalc"};
  app.require_subcommand(1);
  Globals g;

  app.add_option("--dim", g.dim, "spatial dimension n")->check(CLI::Range(1, kMaxDim));
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--grid", g.grid, "RxAxS sampling grid (bounds) or RxA quadrature (energy)");
  app.add_option("--tol", g.tol, "relative refinement tolerance");
  app.add_option("--seed", g.seed, "seed for every random draw");
  auto* sig = app.add_option("--signature", g.signature, "metric signature")->check(CLI::IsMember({"pm", "mp"}));

  ExpandArgs ex;
  auto* expand = app.add_subcommand("expand", "Leibniz or Faa di Bruno expansion of a word");
  expand->add_option("word", ex.word, "generator word, e.g. \"L1 dt h2\"")->required();
  expand->add_option("--factors", ex.factors, "number of factors m for the Leibniz rule");
  expand->add_option("--outer", ex.outer, "outer function name; switches to Faa di Bruno");
  expand->add_option("--bind", ex.bind, "concrete expressions for the factors (or u)");
  expand->add_option("--power", ex.power, "with --outer and --bind, take f(y) = y^p")->default_val(2);

  std::string nf_word;
  bool generalized = false;
  auto* nf = app.add_subcommand("normal-form", "rewrite a word as sum c d^I L^J");
  nf->add_option("word", nf_word)->required();
  nf->add_flag("--generalized", generalized, "allow adapted letters");

  std::string cJ, cI;
  auto* commute = app.add_subcommand("commute", "Gamma table of [L^J, d^I]");
  commute->add_option("--J", cJ, "boost indices, e.g. \"1 2\"")->required();
  commute->add_option("--I", cI, "partials, e.g. \"dt d1\"")->required();

  std::string p_word;
  int p_m = 1;
  bool p_star = false;
  auto* parts = app.add_subcommand("partitions", "enumerate D_m(I) or D*_m(I)");
  parts->add_option("word", p_word)->required();
  parts->add_option("--m", p_m, "number of parts")->required();
  parts->add_flag("--star", p_star, "non-empty parts ordered by minimum position");

  std::string null_path;
  int null_samples = 1000;
  auto* check_null = app.add_subcommand("check-null", "null-form certificate for a constant tensor record");
  check_null->add_option("file", null_path, "tensor record (JSON)")->required();
  check_null->add_option("--samples", null_samples, "null-cone probe samples")->check(CLI::PositiveNumber);

  int h_alpha = -1, h_beta = -1;
  auto* hessian = app.add_subcommand("hessian", "Hessian decompositions and residuals");
  hessian->add_option("--alpha", h_alpha)->check(CLI::NonNegativeNumber);
  hessian->add_option("--beta", h_beta)->check(CLI::NonNegativeNumber);

  auto* box_cmd = app.add_subcommand("box", "d'Alembertian decomposition and residual");

  BoundArgs ba;
  double declared = 0.0;
  auto* bounds = app.add_subcommand("verify-bounds", "empirical constants of the bound suites");
  bounds->add_option("--suite", ba.suite)->check(CLI::IsMember({"s-over-t", "power", "one-minus-r-over-t", "null"}));
  auto* declare = bounds->add_option("--declare-C", declared, "declared constant; turns INFO into PASS/FAIL");
  bounds->add_option("--order", ba.order, "max |I|+|J|");
  bounds->add_option("--s0", ba.s0);
  bounds->add_option("--s1", ba.s1);
  bounds->add_option("--k-range", ba.k_range, "power suite: k, l in [-K, K]");
  bounds->add_option("--tensor", ba.tensor, "null suite: tensor record instead of Minkowski");
  bounds->add_flag("--angular", ba.angular, "restrict to t/2 < r < t");

  EnergyArgs ea;
  auto* energy_cmd = app.add_subcommand("energy", "hyperbolic energy E_c(s, u) and its hierarchy");
  energy_cmd->add_option("--u", ea.u, "closed-form u, e.g. \"t^2 + x1\"")->required();
  energy_cmd->add_option("--s", ea.s, "hyperboloid parameter");
  energy_cmd->add_option("--c", ea.c, "mass");
  energy_cmd->add_option("--N", ea.N, "also report E^0..E^N");
  energy_cmd->add_option("--levels", ea.max_levels, "max refinement levels");

  auto* identities = app.add_subcommand("identities", "run the exact symbolic identity suites");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }
  g.signature_given = sig->count() > 0;
  if (declare->count()) ba.declared = declared;

  Report r;
  try {
    if (*expand) r = do_expand(g, ex);
    else if (*nf) r = do_normal_form(g, nf_word, generalized);
    else if (*commute) r = do_commute(g, cJ, cI);
    else if (*parts) r = do_partitions(g, p_word, p_m, p_star);
    else if (*check_null) r = do_check_null(g, null_path, null_samples);
    else if (*hessian) r = do_hessian(g, h_alpha, h_beta);
    else if (*box_cmd) r = do_box(g);
    else if (*bounds) r = do_verify_bounds(g, ba);
    else if (*energy_cmd) r = do_energy(g, ea);
    else if (*identities) r = do_identities(g);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  out << format_report(r, g.json);
  return r.status == Status::Fail ? 1 : 0;
}

}  // namespace hypercalc::cli
