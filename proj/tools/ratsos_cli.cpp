// ratsos: decide definiteness and build exact rational SOS certificates.
//
// Exit codes
//   check    0 positive definite, 10 semidefinite, 20 not nonnegative
//   certify  0 certificate, 20 not nonnegative, 30 infeasible, 31 exhausted
//   lift     as certify
//   verify   0 verified, 1 not verified
//   any      2 usage / parse / format error, 70 internal error

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "ratsos/ratsos.hpp"

namespace {

using namespace ratsos;

constexpr int kOk = 0;
constexpr int kNotVerified = 1;
constexpr int kUsage = 2;
constexpr int kSemidefinite = 10;
constexpr int kNegative = 20;
constexpr int kInfeasible = 30;
constexpr int kExhausted = 31;
constexpr int kInternal = 70;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string file;
  std::string vars = "x";
  std::string strategy = "auto";
  std::string diag_grid;
  std::string core_grid;
  std::uint64_t seed = 0;
  std::uint64_t max_points = 1000000;
  std::string pin;
  std::string output = "text";
  std::string out_path;
  bool trace = false;
  std::string certificate_file;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

Rational parse_rational(const std::string& s, const std::string& what) {
  try {
    return Rational::parse(trim(s));
  } catch (const std::exception&) {
    throw UsageError("bad rational '" + s + "' in " + what);
  }
}

std::vector<Rational> parse_grid(const std::string& s, const std::string& what) {
  std::vector<Rational> g;
  for (const auto& item : split(s, ',')) g.push_back(parse_rational(item, what));
  return g;
}

OutputFormat format_of(const Options& o) {
  if (o.output == "text") return OutputFormat::text;
  if (o.output == "structured" || o.output == "json") return OutputFormat::structured;
  throw UsageError("--output must be text or structured");
}

std::string polynomial_text(const Options& o) {
  if (!o.file.empty() && !o.input.empty()) throw UsageError("give the polynomial either inline or with --file");
  const std::string text = o.file.empty() ? o.input : read_file(o.file);
  if (trim(text).empty()) throw UsageError("no polynomial given");
  return trim(text);
}

/// One search configuration per attempt; "auto" escalates core_zero -> full_grid.
std::vector<SearchConfig> configs_of(const Options& o) {
  SearchConfig base;
  if (!o.diag_grid.empty()) base.diagonal_grid = parse_grid(o.diag_grid, "--diag-grid");
  if (!o.core_grid.empty()) base.core_grid = parse_grid(o.core_grid, "--core-grid");
  if (o.max_points == 0) throw UsageError("--max-points must be positive");
  base.max_points = o.max_points;
  base.seed = o.seed;
  for (const auto& d : base.diagonal_grid)
    if (d.sign() < 0) throw UsageError("--diag-grid values must be nonnegative");
  if (o.strategy == "auto") {
    SearchConfig a = base, b = base;
    a.strategy = Strategy::core_zero;
    b.strategy = Strategy::full_grid;
    return {a, b};
  }
  const auto s = strategy_from_string(o.strategy);
  if (!s) throw UsageError("unknown strategy '" + o.strategy + "'");
  base.strategy = *s;
  return {base};
}

/// "d1,d2,...;sq:slot=v,..." with multipliers listed highest square first.
Assignment parse_pin(const std::string& pin) {
  Assignment a;
  const auto halves = split(pin, ';');
  if (halves.size() > 2) throw UsageError("--pin takes at most one ';'");
  if (!halves[0].empty()) a.diagonal = parse_grid(halves[0], "--pin");
  if (halves.size() == 2 && !halves[1].empty()) {
    for (const auto& item : split(halves[1], ',')) {
      const auto colon = item.find(':');
      const auto eq = item.find('=');
      if (colon == std::string::npos || eq == std::string::npos || eq < colon)
        throw UsageError("core entries look like square:slot=value, got '" + item + "'");
      try {
        const auto sq = static_cast<std::uint32_t>(std::stoul(item.substr(0, colon)));
        const auto slot = static_cast<std::uint32_t>(std::stoul(item.substr(colon + 1, eq - colon - 1)));
        a.core[{sq, slot}] = parse_rational(item.substr(eq + 1), "--pin");
      } catch (const std::logic_error&) {
        throw UsageError("bad core entry '" + item + "'");
      }
    }
  }
  return a;
}

void emit(const std::string& text) { std::cout << text << "\n"; }

void write_document(const Options& o, const CertificateDocument& doc) {
  if (o.out_path.empty()) return;
  std::ofstream out(o.out_path);
  if (!out) throw UsageError("cannot write " + o.out_path);
  out << render_structured(doc) << "\n";
}

int report_certificate(const Options& o, const MultiCertificate& cert, const MultiPoly& p,
                       const std::string& input, nlohmann::json trace) {
  if (!verify(cert, p)) {
    std::cerr << "internal error: certificate failed verification\n";
    return kInternal;
  }
  const CertificateDocument doc{input, p.variables(), cert, true};
  write_document(o, doc);
  if (format_of(o) == OutputFormat::structured) {
    nlohmann::json j = to_json(doc);
    if (!trace.is_null()) j["trace"] = std::move(trace);
    emit(j.dump(2));
  } else {
    emit(render_text(cert));
  }
  return kOk;
}

int report_negative(const Options& o, const std::vector<std::string>& vars, const std::vector<Rational>& point,
                    const Rational& value) {
  if (format_of(o) == OutputFormat::structured) {
    nlohmann::json j;
    j["result"] = "not_nonnegative";
    nlohmann::json pt = nlohmann::json::object();
    for (std::size_t i = 0; i < vars.size(); ++i) pt[vars[i]] = point[i].fraction_str();
    j["point"] = pt;
    j["value"] = value.fraction_str();
    emit(j.dump(2));
  } else {
    std::string s = "not nonnegative: value " + value.str() + " at";
    for (std::size_t i = 0; i < vars.size(); ++i) s += " " + vars[i] + "=" + point[i].str();
    emit(s);
  }
  return kNegative;
}

int report_witness(const Options& o, const InfeasibilityWitness& w) {
  if (format_of(o) == OutputFormat::structured) {
    nlohmann::json j;
    j["result"] = "infeasible";
    j["exponent"] = w.exponent;
    j["forced_value"] = w.forced_value.fraction_str();
    j["explanation"] = w.explanation;
    emit(j.dump(2));
  } else {
    emit("infeasible: " + w.explanation);
  }
  return kInfeasible;
}

int report_exhausted(const Options& o, std::uint64_t points, const std::string& reason) {
  if (format_of(o) == OutputFormat::structured) {
    nlohmann::json j;
    j["result"] = "exhausted";
    j["points_tested"] = points;
    j["reason"] = reason;
    emit(j.dump(2));
  } else {
    emit("exhausted after " + std::to_string(points) + " points: " + reason);
  }
  return kExhausted;
}

int report_rejection(const Options& o, const Rejection& r) {
  const std::string why = std::string(to_string(r.reason)) + " at t^" + std::to_string(r.exponent) +
                          " (value " + r.value.str() + ")";
  if (format_of(o) == OutputFormat::structured) {
    nlohmann::json j;
    j["result"] = "rejected";
    j["reason"] = to_string(r.reason);
    j["exponent"] = r.exponent;
    j["value"] = r.value.fraction_str();
    emit(j.dump(2));
  } else {
    emit("pinned point rejected: " + why);
  }
  return kExhausted;
}

void print_trace(const Options& o, const std::string& line) {
  if (format_of(o) == OutputFormat::text) emit(line);
}

int certify_uni(const Options& o, const MultiPoly& mp, const std::string& input) {
  const UniPoly p = to_unipoly(mp);
  const std::string& var = mp.variables()[0];
  nlohmann::json trace;
  if (!o.pin.empty()) {
    if (p.degree() > 0 && p.degree() % 2 != 0) throw UsageError("--pin needs an even-degree polynomial");
    const Layout layout = o.strategy == "banded" ? Layout::banded : Layout::standard;
    const SupportSet support = SupportSet::dense(static_cast<std::uint32_t>(std::max(0, p.degree() / 2)));
    auto r = border_solve(p, support, parse_pin(o.pin), layout);
    if (auto* rej = std::get_if<Rejection>(&r)) return report_rejection(o, *rej);
    UniCertificate c = std::get<SolveOutcome>(r).certificate;
    c.strategy = "pinned";
    return report_certificate(o, to_multi(c, var), mp, input, trace);
  }
  const DefinitenessReport rep = classify(p);
  if (rep.classification == Definiteness::NotNonnegative)
    return report_negative(o, {var}, {*rep.witness}, p.eval(*rep.witness));
  UniResult last;
  for (const auto& cfg : configs_of(o)) {
    if (o.trace) print_trace(o, std::string("trying ") + to_string(cfg.strategy));
    last = certify_univariate(p, cfg);
    if (!std::holds_alternative<Exhausted>(last)) break;
  }
  if (auto* c = std::get_if<UniCertificate>(&last)) return report_certificate(o, to_multi(*c, var), mp, input, trace);
  if (auto* w = std::get_if<InfeasibilityWitness>(&last)) return report_witness(o, *w);
  if (auto* n = std::get_if<NegativeValue>(&last)) return report_negative(o, {var}, {n->x}, n->value);
  const auto& e = std::get<Exhausted>(last);
  return report_exhausted(o, e.points_tested, e.reason);
}

nlohmann::json trace_json(const ProjectionTrace& t) {
  nlohmann::json j;
  j["powers"] = t.powers.exponents();
  j["projected"] = t.projected.str("t");
  j["support"] = t.support.powers();
  j["lift_failures"] = t.lift_failures;
  return j;
}

void print_projection(const Options& o, const ProjectionTrace& t) {
  print_trace(o, "powers: " + t.powers.str());
  print_trace(o, "projected: " + t.projected.str("t"));
  if (!t.support.empty()) print_trace(o, "support: " + t.support.str());
}

int certify_multi(const Options& o, const MultiPoly& p, const std::string& input, bool show_trace) {
  if (!o.pin.empty()) {
    ProjectionTrace t;
    t.powers = power_sequence(p);
    t.projected = substitute_powers(p, t.powers);
    t.support = power_selection(p, t.powers);
    if (show_trace) print_projection(o, t);
    const Layout layout = o.strategy == "banded" ? Layout::banded : Layout::standard;
    auto r = border_solve(t.projected, t.support, parse_pin(o.pin), layout);
    if (auto* rej = std::get_if<Rejection>(&r)) return report_rejection(o, *rej);
    UniCertificate c = std::get<SolveOutcome>(r).certificate;
    c.strategy = "pinned";
    MultiCertificate lifted;
    try {
      lifted = lift_certificate(c, t.powers, p);
    } catch (const LiftError& e) {
      emit(std::string("lift failed: ") + e.what());
      return kExhausted;
    }
    return report_certificate(o, lifted, p, input, show_trace ? trace_json(t) : nlohmann::json());
  }
  MultiResult last;
  ProjectionTrace t;
  bool printed = false;
  for (const auto& cfg : configs_of(o)) {
    t = ProjectionTrace{};
    last = certify_multivariate(p, cfg, &t);
    if (show_trace && !printed) {
      print_projection(o, t);
      printed = true;
    }
    if (o.trace) print_trace(o, std::string("tried ") + to_string(cfg.strategy) + ", lift failures " +
                                    std::to_string(t.lift_failures));
    if (!std::holds_alternative<Exhausted>(last)) break;
  }
  if (auto* c = std::get_if<MultiCertificate>(&last))
    return report_certificate(o, *c, p, input, show_trace ? trace_json(t) : nlohmann::json());
  if (auto* w = std::get_if<InfeasibilityWitness>(&last)) return report_witness(o, *w);
  if (auto* n = std::get_if<NegativePoint>(&last)) return report_negative(o, p.variables(), n->point, n->value);
  const auto& e = std::get<Exhausted>(last);
  return report_exhausted(o, e.points_tested, e.reason);
}

MultiPoly read_polynomial(const Options& o, std::string& text) {
  text = polynomial_text(o);
  return parse_poly(text, parse_variable_list(o.vars));
}

int cmd_check(const Options& o) {
  std::string text;
  const MultiPoly mp = read_polynomial(o, text);
  if (mp.nvars() != 1) throw UsageError("check needs a univariate polynomial");
  const DefinitenessReport r = classify(to_unipoly(mp));
  emit(render_report(r, format_of(o)));
  switch (r.classification) {
    case Definiteness::PositiveDefinite: return kOk;
    case Definiteness::PositiveSemiDefinite: return kSemidefinite;
    case Definiteness::NotNonnegative: return kNegative;
  }
  return kInternal;
}

int cmd_certify(const Options& o, bool lift) {
  std::string text;
  const MultiPoly p = read_polynomial(o, text);
  if (p.nvars() == 1) return certify_uni(o, p, text);
  return certify_multi(o, p, text, lift || o.trace);
}

int cmd_verify(const Options& o) {
  const CertificateDocument doc = parse_structured(read_file(o.certificate_file));
  const std::string text = o.input.empty() && o.file.empty() ? doc.input : polynomial_text(o);
  const MultiPoly p = parse_poly(text, doc.variables);
  const bool ok = verify(doc.certificate, p);
  emit(ok ? "verified" : "not verified");
  return ok ? kOk : kNotVerified;
}

void add_search_flags(CLI::App* sub, Options& o) {
  sub->add_option("--strategy", o.strategy, "auto, core_zero, full_grid, monte_carlo or banded");
  sub->add_option("--diag-grid", o.diag_grid, "comma-separated multiplier grid");
  sub->add_option("--core-grid", o.core_grid, "comma-separated interior grid");
  sub->add_option("--seed", o.seed, "Monte Carlo seed");
  sub->add_option("--max-points", o.max_points, "grid points per strategy");
  sub->add_option("--pin", o.pin, "fixed point: \"d1,d2,...;square:slot=value,...\"");
  sub->add_option("--out", o.out_path, "also write the structured certificate here");
  sub->add_flag("--trace", o.trace, "print pipeline stages");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Exact rational sum-of-squares certificates"};
  app.require_subcommand(1);
  app.add_option("--output", o.output, "text or structured")->capture_default_str();

  auto* check = app.add_subcommand("check", "classify a univariate polynomial");
  auto* certify = app.add_subcommand("certify", "find and verify a certificate");
  auto* lift = app.add_subcommand("lift", "multivariate certificate with the projection trace");
  auto* verify_cmd = app.add_subcommand("verify", "check a structured certificate");
  for (auto* sub : {check, certify, lift}) {
    sub->add_option("polynomial", o.input, "polynomial text");
    sub->add_option("-f,--file", o.file, "read the polynomial from a file");
    sub->add_option("--vars", o.vars, "comma-separated variable names")->capture_default_str();
    sub->add_option("--output", o.output, "text or structured");
  }
  add_search_flags(certify, o);
  add_search_flags(lift, o);
  verify_cmd->add_option("certificate", o.certificate_file, "structured certificate file")->required();
  verify_cmd->add_option("polynomial", o.input, "polynomial text (default: the document's input)");
  verify_cmd->add_option("-f,--file", o.file, "read the polynomial from a file");
  verify_cmd->add_option("--output", o.output, "text or structured");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(o);
    if (*certify) return cmd_certify(o, false);
    if (*lift) return cmd_certify(o, true);
    if (*verify_cmd) return cmd_verify(o);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "malformed certificate: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const SupportSelectionError& e) {
    std::cerr << e.what() << "\n";
    return kExhausted;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
