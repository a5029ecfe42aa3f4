#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vop/corpus.hpp"

namespace vop::io {

// ordered_json keeps insertion order, which together with the canonical term
// orders below makes every document byte-reproducible.
using json = nlohmann::ordered_json;

inline json to_json(const Scalar& s) {
  json out = json::array();
  for (const auto& [m, c] : s.terms())
    out.push_back({rat_to_string(c), m.alpha, m.beta});
  return out;
}

namespace detail {
inline unsigned small_index(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long>() < 0 || j.get<long>() > 1 << 20)
    throw SpecError(std::string(what) + " must be a small nonnegative integer");
  return unsigned(j.get<long>());
}
}  // namespace detail

inline Scalar scalar_from_json(const json& j) {
  if (!j.is_array()) throw SpecError("scalar must be an array of terms");
  Scalar out;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_string())
      throw SpecError("scalar term must be [coeff, alpha_exp, beta_exp]");
    Scalar term(rat_from_string(t[0].get<std::string>()));
    term *= sym_alpha().pow(detail::small_index(t[1], "exponent"));
    term *= sym_beta().pow(detail::small_index(t[2], "exponent"));
    out += term;
  }
  return out;
}

template <class Tag>
json to_json(const BasicPoly<Tag>& p) {
  json out = json::array();
  for (int i = p.degree(); i >= 0; --i)
    if (!p.coeff(unsigned(i)).is_zero())
      out.push_back({i, to_json(p.coeff(unsigned(i)))});
  return out;
}

template <class Tag>
BasicPoly<Tag> poly_from_json(const json& j) {
  if (!j.is_array()) throw SpecError("polynomial must be an array of [power, scalar]");
  BasicPoly<Tag> out;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2)
      throw SpecError("polynomial term must be [power, scalar]");
    out += BasicPoly<Tag>::monomial(detail::small_index(t[0], "power"),
                                    scalar_from_json(t[1]));
  }
  return out;
}

inline json to_json(const DiffOp& op) {
  json out = json::array();
  for (const auto& [k, p] : op.terms())
    out.push_back({{"order", k}, {"coeff", to_json(p)}});
  return out;
}

inline json to_json(const ShiftOp& op) {
  json out = json::array();
  for (auto it = op.terms().rbegin(); it != op.terms().rend(); ++it)
    out.push_back({{"offset", it->first}, {"coeff", to_json(it->second)}});
  return out;
}

inline json q_to_json(const QPoly& q) {
  json out = json::array();
  for (int i = 1; i <= q.degree(); ++i)
    if (q.poly().coeff(unsigned(i)) != 0)
      out.push_back({rat_to_string(q.poly().coeff(unsigned(i))), i});
  return out;
}

inline QPoly q_from_json(const json& j) {
  if (!j.is_array()) throw SpecError("'q' must be an array of [coeff, power] terms");
  RatPoly p;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_string() ||
        !t[1].is_number_integer())
      throw SpecError("'q' term must be [\"coeff\", power]");
    long power = t[1].get<long>();
    if (power < 0) throw SpecError("'q' powers must be nonnegative");
    p += RatPoly::monomial(unsigned(power), rat_from_string(t[0].get<std::string>()));
  }
  return QPoly(p);  // rejects a nonzero constant term
}

inline json to_json(const FamilySpec& spec) {
  json params = json::object();
  auto put = [&](const char* name, const std::optional<ParamChoice>& p) {
    if (p) params[name] = p->is_symbolic ? "symbolic" : rat_to_string(p->value);
  };
  put("alpha", spec.alpha);
  put("beta", spec.beta);
  return json{{"kind", std::string(kind_name(spec.kind))},
              {"q", q_to_json(spec.q)},
              {"params", params},
              {"N", spec.table_size}};
}

inline FamilySpec spec_from_json(const json& j) {
  if (!j.is_object()) throw SpecError("spec must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "kind" && key != "q" && key != "params" && key != "N")
      throw SpecError("unknown spec field '" + key + "'");
  }
  if (!j.contains("kind") || !j["kind"].is_string())
    throw SpecError("spec field 'kind' must be one of weyl|sl2|cubic");
  if (!j.contains("q")) throw SpecError("spec field 'q' is required");

  FamilySpec spec;
  spec.kind = kind_from_name(j["kind"].get<std::string>());
  spec.q = q_from_json(j["q"]);
  if (j.contains("N")) {
    if (!j["N"].is_number_integer()) throw SpecError("spec field 'N' must be an integer");
    spec.table_size = j["N"].get<int>();
  }

  std::optional<ParamChoice> alpha, beta;
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw SpecError("'params' must be an object");
    for (const auto& [name, value] : j["params"].items()) {
      std::optional<ParamChoice>* slot = nullptr;
      if (name == "alpha") slot = &alpha;
      else if (name == "beta") slot = &beta;
      else throw SpecError("unknown parameter '" + name + "' in params");
      if (!value.is_string())
        throw SpecError("params." + name + " must be \"symbolic\" or a rational string");
      std::string v = value.get<std::string>();
      *slot = (v == "symbolic") ? ParamChoice::symbolic()
                                : ParamChoice::fixed(rat_from_string(v));
    }
  }
  // Declared parameters default to symbolic; undeclared ones must be absent.
  if (spec.declares_alpha() && !alpha) alpha = ParamChoice::symbolic();
  if (spec.declares_beta() && !beta) beta = ParamChoice::symbolic();
  if (!spec.declares_alpha() && alpha)
    throw SpecError("family '" + std::string(kind_name(spec.kind)) +
                    "' declares no parameter alpha");
  if (!spec.declares_beta() && beta)
    throw SpecError("family '" + std::string(kind_name(spec.kind)) +
                    "' declares no parameter beta");
  spec.alpha = alpha;
  spec.beta = beta;
  spec.validate();
  return spec;
}

inline json to_json(const CheckResult& c) {
  json out{{"id", c.id},
           {"status", std::string(status_name(c.status))},
           {"paper_ref", c.ref}};
  if (c.status == CheckStatus::mismatch)
    out["label"] = c.kind == CheckKind::paper_claim ? "paper-discrepancy" : "engine-error";
  if (c.witness) {
    json w = json::object();
    if (c.witness->n >= 0) w["n"] = c.witness->n;
    w["lhs"] = c.witness->lhs;
    w["rhs"] = c.witness->rhs;
    w["diff"] = c.witness->diff;
    out["witness"] = w;
  }
  return out;
}

inline json checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back(to_json(c));
  return arr;
}

inline json summary_json(const Report& r) {
  return json{{"match", r.matches},
              {"mismatch", r.engine_mismatches},
              {"paper_discrepancy", r.paper_discrepancies}};
}

inline json report_to_json(const Report& r) {
  return json{{"checks", checks_to_json(r.checks)}, {"summary", summary_json(r)}};
}

inline json table_document(const FamilySpec& spec, const PolyTable& table) {
  json polys = json::array();
  for (int n = 0; n <= table.max_index(); ++n) polys.push_back(to_json(table.at(n)));
  return json{{"spec", to_json(spec)},
              {"N", table.max_index()},
              {"fingerprint", table.spec_key()},
              {"table", polys}};
}

inline std::pair<FamilySpec, PolyTable> table_document_parse(const json& j) {
  if (!j.is_object() || !j.contains("spec") || !j.contains("table"))
    throw SpecError("table document needs 'spec' and 'table' fields");
  FamilySpec spec = spec_from_json(j["spec"]);
  if (!j["table"].is_array() || j["table"].empty())
    throw SpecError("'table' must be a nonempty array of polynomials");
  std::vector<XPoly> polys;
  for (const auto& p : j["table"]) {
    XPoly entry = poly_from_json<XVarTag>(p);
    for (int i = 0; i <= entry.degree(); ++i) {
      const Scalar& c = entry.coeff(unsigned(i));
      if ((c.uses(Param::alpha) && !spec.declares_alpha()) ||
          (c.uses(Param::beta) && !spec.declares_beta()))
        throw SpecError("table entry " + std::to_string(polys.size()) +
                        " mentions a parameter the family does not declare");
    }
    polys.push_back(std::move(entry));
  }
  FamilySpec sized = spec;
  sized.table_size = int(polys.size()) - 1;
  PolyTable table(std::move(polys), spec_fingerprint(sized));
  if (j.contains("fingerprint") &&
      (!j["fingerprint"].is_string() ||
       j["fingerprint"].get<std::string>() != table.spec_key()))
    throw SpecError("table fingerprint does not match its spec");
  return {std::move(spec), std::move(table)};
}

inline json recurrence_document(const FamilySpec& spec, const RecurrenceTable& r) {
  json rows = json::array();
  for (std::size_t n = 0; n < r.gamma.size(); ++n) {
    json gammas = json::array();
    for (const auto& g : r.gamma[n]) gammas.push_back(to_json(g));
    rows.push_back({{"n", n}, {"gamma", gammas}});
  }
  return json{{"spec", to_json(spec)},
              {"N", r.gamma.size()},
              {"bandwidth", r.bandwidth},
              {"rows", rows}};
}

inline json functionals_document(const FamilySpec& spec, int bandwidth,
                                 const FunctionalTable& ft,
                                 const std::vector<CheckResult>& checks) {
  json moments = json::array();
  for (std::size_t k = 0; k < ft.moments.size(); ++k) {
    json values = json::array();
    for (const auto& v : ft.moments[k]) values.push_back(to_json(v));
    moments.push_back({{"k", k}, {"values", values}});
  }
  return json{{"spec", to_json(spec)},
              {"bandwidth", bandwidth},
              {"moments", moments},
              {"checks", checks_to_json(checks)}};
}

/// Text rendering carries the same facts as the JSON documents.
inline std::string checks_to_text(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << "[" << status_name(c.status) << "] " << c.id;
    if (c.status == CheckStatus::mismatch)
      os << " ("
         << (c.kind == CheckKind::paper_claim ? "paper-discrepancy" : "engine-error")
         << ")";
    os << "  ref: " << c.ref << "\n";
    if (c.witness) {
      if (c.witness->n >= 0) os << "    n:    " << c.witness->n << "\n";
      os << "    lhs:  " << c.witness->lhs << "\n";
      os << "    rhs:  " << c.witness->rhs << "\n";
      os << "    diff: " << c.witness->diff << "\n";
    }
  }
  return os.str();
}

inline std::string report_to_text(const Report& r) {
  std::ostringstream os;
  os << checks_to_text(r.checks);
  os << "summary: match=" << r.matches << " mismatch=" << r.engine_mismatches
     << " paper-discrepancy=" << r.paper_discrepancies << "\n";
  return os.str();
}

}  // namespace vop::io
