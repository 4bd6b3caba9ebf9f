#pragma once

// Text and structured (JSON) encodings of certificates and reports.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratsos/certificate.hpp"
#include "ratsos/multipoly.hpp"
#include "ratsos/positivity.hpp"
#include "ratsos/unipoly.hpp"

namespace ratsos {

enum class OutputFormat { text, structured };

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline MultiCertificate to_multi(const UniCertificate& c, const std::string& var = "x") {
  MultiCertificate m;
  m.scale = c.scale;
  m.constant = c.constant;
  m.support = c.support;
  m.strategy = c.strategy;
  for (const auto& t : c.terms) m.terms.push_back({t.multiplier, from_unipoly(t.poly, {var})});
  return m;
}

inline UniCertificate to_uni(const MultiCertificate& m) {
  UniCertificate c;
  c.scale = m.scale;
  c.constant = m.constant;
  c.support = m.support;
  c.strategy = m.strategy;
  for (const auto& t : m.terms) c.terms.push_back({t.multiplier, to_unipoly(t.poly)});
  return c;
}

namespace detail {

inline std::string poly_text(const UniPoly& p, const std::string& var) { return p.str(var); }
inline std::string poly_text(const MultiPoly& p, const std::string&) { return p.str(); }

}  // namespace detail

/// Human-readable form "scale*(b1*(q1)^2 + ... + c0)", parseable back as a polynomial.
template <class Poly>
std::string render_text(const SosCertificate<Poly>& cert, const std::string& var = "x") {
  std::string body;
  for (const auto& t : cert.terms) {
    if (!body.empty()) body += " + ";
    if (t.multiplier != Rational(1)) body += t.multiplier.str() + "*";
    body += "(" + detail::poly_text(t.poly, var) + ")^2";
  }
  if (!cert.constant.is_zero() || body.empty()) {
    if (!body.empty()) body += " + ";
    body += cert.constant.str();
  }
  if (cert.scale == Rational(1)) return body;
  return cert.scale.str() + "*(" + body + ")";
}

inline nlohmann::json poly_to_json(const MultiPoly& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it)
    arr.push_back({{"exponent", it->first}, {"coefficient", it->second.fraction_str()}});
  return arr;
}

namespace detail {

inline Rational json_rational(const nlohmann::json& j, const std::string& field) {
  if (!j.is_string()) throw FormatError("field '" + field + "' must be a \"num/den\" string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw FormatError("field '" + field + "': " + e.what());
  }
}

inline const nlohmann::json& require(const nlohmann::json& j, const std::string& field) {
  if (!j.is_object() || !j.contains(field)) throw FormatError("missing field '" + field + "'");
  return j.at(field);
}

}  // namespace detail

inline MultiPoly poly_from_json(const nlohmann::json& arr, const std::vector<std::string>& vars) {
  if (!arr.is_array()) throw FormatError("polynomial must be an array of terms");
  MultiPoly p(vars);
  for (const auto& term : arr) {
    const auto& ej = detail::require(term, "exponent");
    if (!ej.is_array() || ej.size() != vars.size())
      throw FormatError("exponent must list one nonnegative integer per variable");
    Exponent e;
    for (const auto& d : ej) {
      if (!d.is_number_unsigned()) throw FormatError("exponents must be nonnegative integers");
      const auto v = d.get<std::uint64_t>();
      if (v > 0xFFFFFFFFULL) throw FormatError("exponent too large");
      e.push_back(static_cast<std::uint32_t>(v));
    }
    const Rational c = detail::json_rational(detail::require(term, "coefficient"), "coefficient");
    if (c.is_zero()) throw FormatError("zero coefficients are not stored");
    if (!p.coeff(e).is_zero()) throw FormatError("duplicate exponent in polynomial");
    p.add_term(e, c);
  }
  return p;
}

/// What the CLI writes and reads: the certificate plus its context.
struct CertificateDocument {
  std::string input;
  std::vector<std::string> variables;
  MultiCertificate certificate;
  bool verified = false;

  friend bool operator==(const CertificateDocument&, const CertificateDocument&) = default;
};

inline nlohmann::json to_json(const CertificateDocument& doc) {
  nlohmann::json j;
  j["format"] = "ratsos-certificate";
  j["version"] = 1;
  j["input"] = doc.input;
  j["variables"] = doc.variables;
  j["scale"] = doc.certificate.scale.fraction_str();
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : doc.certificate.terms)
    terms.push_back({{"multiplier", t.multiplier.fraction_str()}, {"polynomial", poly_to_json(t.poly)}});
  j["terms"] = terms;
  j["constant"] = doc.certificate.constant.fraction_str();
  j["support"] = doc.certificate.support.powers();
  j["strategy"] = doc.certificate.strategy;
  j["verified"] = doc.verified;
  return j;
}

inline CertificateDocument document_from_json(const nlohmann::json& j) {
  using detail::require;
  if (!j.is_object()) throw FormatError("certificate must be a JSON object");
  if (j.contains("format") && j["format"] != "ratsos-certificate") throw FormatError("unknown format tag");
  CertificateDocument doc;
  const auto& in = require(j, "input");
  if (!in.is_string()) throw FormatError("field 'input' must be a string");
  doc.input = in.get<std::string>();
  const auto& vars = require(j, "variables");
  if (!vars.is_array()) throw FormatError("field 'variables' must be an array");
  for (const auto& v : vars) {
    if (!v.is_string()) throw FormatError("variable names must be strings");
    doc.variables.push_back(v.get<std::string>());
  }
  auto& cert = doc.certificate;
  cert.scale = detail::json_rational(require(j, "scale"), "scale");
  const auto& terms = require(j, "terms");
  if (!terms.is_array()) throw FormatError("field 'terms' must be an array");
  for (const auto& t : terms)
    cert.terms.push_back({detail::json_rational(require(t, "multiplier"), "multiplier"),
                          poly_from_json(require(t, "polynomial"), doc.variables)});
  cert.constant = detail::json_rational(require(j, "constant"), "constant");
  const auto& sup = require(j, "support");
  if (!sup.is_array()) throw FormatError("field 'support' must be an array");
  std::vector<std::uint32_t> powers;
  for (const auto& s : sup) {
    if (!s.is_number_unsigned()) throw FormatError("support powers must be nonnegative integers");
    powers.push_back(s.get<std::uint32_t>());
  }
  try {
    cert.support = SupportSet(powers);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  const auto& strat = require(j, "strategy");
  if (!strat.is_string()) throw FormatError("field 'strategy' must be a string");
  cert.strategy = strat.get<std::string>();
  const auto& ver = require(j, "verified");
  if (!ver.is_boolean()) throw FormatError("field 'verified' must be a boolean");
  doc.verified = ver.get<bool>();
  return doc;
}

inline std::string render_structured(const CertificateDocument& doc) { return to_json(doc).dump(2); }

inline CertificateDocument parse_structured(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  return document_from_json(j);
}

/// Renders a certificate in either format.
inline std::string render_certificate(const MultiCertificate& cert, OutputFormat format,
                                      const std::vector<std::string>& variables = {},
                                      const std::string& input = "", bool verified = false) {
  if (format == OutputFormat::text) return render_text(cert);
  return render_structured(CertificateDocument{input, variables, cert, verified});
}

inline std::string render_certificate(const UniCertificate& cert, OutputFormat format, const std::string& var = "x",
                                      const std::string& input = "", bool verified = false) {
  if (format == OutputFormat::text) return render_text(cert, var);
  return render_structured(CertificateDocument{input, {var}, to_multi(cert, var), verified});
}

inline std::string render_report(const DefinitenessReport& r, OutputFormat format) {
  if (format == OutputFormat::structured) {
    nlohmann::json j;
    j["classification"] = to_string(r.classification);
    j["real_root_count"] = r.real_root_count;
    j["witness"] = r.witness ? nlohmann::json(r.witness->fraction_str()) : nlohmann::json(nullptr);
    return j.dump(2);
  }
  std::string s = std::string(to_string(r.classification)) + "\nreal roots: " + std::to_string(r.real_root_count);
  if (r.witness) s += "\nwitness: " + r.witness->str();
  return s;
}

}  // namespace ratsos
