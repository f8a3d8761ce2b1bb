#include "sheafctx/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sheafctx {

namespace {

using nlohmann::json;

std::string join_labels(const std::vector<std::string>& labels) {
  std::string out;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) out += "|";
    out += labels[i];
  }
  return out;
}

std::vector<std::string> split_key(const std::string& key) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream is(key);
  while (std::getline(is, piece, '|')) out.push_back(piece);
  return out;
}

MeasurementScenario scenario_from_json(const json& j) {
  if (!j.is_object() || !j.contains("measurements") || !j.contains("outcomes") ||
      !j.contains("cover")) {
    fail(ErrorCode::ParseError, "scenario needs measurements, outcomes, and cover");
  }
  return MeasurementScenario::validate(
      j.at("measurements").get<std::vector<std::string>>(),
      j.at("outcomes").get<std::vector<std::string>>(),
      j.at("cover").get<std::vector<std::vector<std::string>>>());
}

json scenario_to_json(const MeasurementScenario& s) {
  json j;
  j["measurements"] = s.measurements();
  j["outcomes"] = s.outcomes();
  json cover = json::array();
  for (const auto& c : s.cover()) cover.push_back(s.context_labels(c));
  j["cover"] = cover;
  return j;
}

// Assignment from a "o1|o2|..." key aligned with the context member order.
Assignment assignment_from_key(const MeasurementScenario& scenario, const Context& ctx,
                               const std::string& key) {
  std::vector<std::string> outs = split_key(key);
  if (outs.size() != ctx.members.size()) {
    fail(ErrorCode::ParseError, "section key '" + key + "' arity mismatch");
  }
  Assignment s;
  s.members = ctx.members;
  for (const auto& label : outs) {
    bool found = false;
    for (int o = 0; o < scenario.outcome_count(); ++o) {
      if (scenario.outcome_label(o) == label) {
        s.outcomes.push_back(o);
        found = true;
        break;
      }
    }
    if (!found) fail(ErrorCode::ParseError, "unknown outcome '" + label + "'");
  }
  return s;
}

std::string assignment_key(const MeasurementScenario& scenario, const Assignment& s) {
  std::vector<std::string> outs;
  for (int o : s.outcomes) outs.push_back(scenario.outcome_label(o));
  return join_labels(outs);
}

// Locates the cover context matching a "m1|m2|..." key.
std::pair<size_t, Context> context_from_key(const MeasurementScenario& scenario,
                                            const std::string& key) {
  Context ctx = scenario.context_of(split_key(key));
  for (size_t i = 0; i < scenario.cover().size(); ++i) {
    if (scenario.cover()[i] == ctx) return {i, ctx};
  }
  fail(ErrorCode::ParseError, "table context '" + key + "' is not a cover context");
}

template <class S, class WeightParser>
EmpiricalModel<S> model_from_json(const MeasurementScenario& scenario, const json& table,
                                  WeightParser parse_weight) {
  if (!table.is_object()) fail(ErrorCode::ParseError, "table must be an object");
  std::vector<std::optional<Distribution<S>>> slots(scenario.cover().size());
  for (const auto& [ctx_key, sections] : table.items()) {
    auto [index, ctx] = context_from_key(scenario, ctx_key);
    typename Distribution<S>::Weights weights;
    if (!sections.is_object()) {
      fail(ErrorCode::ParseError, "context '" + ctx_key + "' weights must be an object");
    }
    for (const auto& [sec_key, value] : sections.items()) {
      weights.emplace(assignment_from_key(scenario, ctx, sec_key), parse_weight(value));
    }
    if (slots[index]) fail(ErrorCode::ParseError, "duplicate context '" + ctx_key + "'");
    slots[index] = Distribution<S>::make(scenario, ctx, std::move(weights));
  }
  std::vector<Distribution<S>> entries;
  for (size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) {
      fail(ErrorCode::ParseError,
           "missing table entry for context {" +
               describe_context(scenario, scenario.cover()[i]) + "}");
    }
    entries.push_back(std::move(*slots[i]));
  }
  return EmpiricalModel<S>::make(scenario, std::move(entries));
}

template <class S, class WeightWriter>
json model_to_json(const EmpiricalModel<S>& model, WeightWriter write_weight) {
  json table = json::object();
  const auto& scenario = model.scenario();
  for (size_t c = 0; c < scenario.cover().size(); ++c) {
    json sections = json::object();
    for (const auto& [s, w] : model.at(c).support()) {
      sections[assignment_key(scenario, s)] = write_weight(w);
    }
    table[join_labels(scenario.context_labels(scenario.cover()[c]))] = sections;
  }
  return table;
}

json parse_json_or_fail(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

SpacetimePoint point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    fail(ErrorCode::ParseError, "spacetime point needs four rational coordinates");
  }
  SpacetimePoint p;
  for (int i = 0; i < 4; ++i) {
    const auto& coord = j.at(i);
    if (coord.is_string()) {
      p.x[i] = parse_rational(coord.get<std::string>());
    } else if (coord.is_number_integer()) {
      p.x[i] = Rational(coord.get<long long>());
    } else {
      fail(ErrorCode::ParseError, "coordinates must be rational strings or integers");
    }
  }
  return p;
}

json point_to_json(const SpacetimePoint& p) {
  json j = json::array();
  for (int i = 0; i < 4; ++i) j.push_back(format_rational(p.x[i]));
  return j;
}

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    fail(ErrorCode::ParseError, "complex entries are [re, im] pairs");
  }
  return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

const MeasurementScenario& ModelDocument::scenario() const {
  if (rational_model) return rational_model->scenario();
  if (double_model) return double_model->scenario();
  if (boolean_model) return boolean_model->scenario();
  fail(ErrorCode::ParseError, "document holds no model");
}

namespace {

// Rewraps stray json access errors (missing keys, wrong types) as parse
// diagnostics at the document boundary.
template <class Fn>
auto with_parse_diagnostics(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

ModelDocument parse_model_document_impl(const std::string& json_text) {
  json j = parse_json_or_fail(json_text);
  if (!j.is_object()) fail(ErrorCode::ParseError, "model document must be an object");
  ModelDocument doc;
  if (j.contains("metadata")) {
    const auto& meta = j.at("metadata");
    if (meta.contains("name")) doc.name = meta.at("name").get<std::string>();
    if (meta.contains("denominator_bound")) {
      doc.denominator_bound = BigInt(meta.at("denominator_bound").get<std::string>());
    }
  }
  if (!j.contains("carrier") || !j.at("carrier").is_string()) {
    fail(ErrorCode::ParseError, "model document must declare its carrier");
  }
  doc.carrier = j.at("carrier").get<std::string>();
  MeasurementScenario scenario = scenario_from_json(j.at("scenario"));
  if (!j.contains("table")) fail(ErrorCode::ParseError, "model document needs a table");

  if (doc.carrier == "rational") {
    doc.rational_model = model_from_json<RationalSemiring>(
        scenario, j.at("table"), [](const json& v) {
          if (!v.is_string()) {
            fail(ErrorCode::ParseError, "rational weights must be \"p/q\" strings");
          }
          return parse_rational(v.get<std::string>());
        });
  } else if (doc.carrier == "double") {
    doc.double_model = model_from_json<DoubleSemiring>(
        scenario, j.at("table"), [](const json& v) {
          if (!v.is_number()) fail(ErrorCode::ParseError, "double weights must be numbers");
          return v.get<double>();
        });
  } else if (doc.carrier == "boolean") {
    doc.boolean_model = model_from_json<BooleanSemiring>(
        scenario, j.at("table"), [](const json& v) {
          if (!v.is_boolean()) fail(ErrorCode::ParseError, "boolean weights must be booleans");
          return v.get<bool>();
        });
  } else {
    fail(ErrorCode::SemiringMismatch, "unknown carrier '" + doc.carrier + "'");
  }
  return doc;
}

}  // namespace

ModelDocument parse_model_document(const std::string& json_text) {
  return with_parse_diagnostics([&] { return parse_model_document_impl(json_text); });
}

std::string serialize_model_document(const ModelDocument& doc) {
  json j;
  j["carrier"] = doc.carrier;
  json meta = json::object();
  if (!doc.name.empty()) meta["name"] = doc.name;
  if (doc.denominator_bound) meta["denominator_bound"] = doc.denominator_bound->str();
  if (!meta.empty()) j["metadata"] = meta;
  j["scenario"] = scenario_to_json(doc.scenario());
  if (doc.rational_model) {
    j["table"] = model_to_json(*doc.rational_model,
                               [](const Rational& w) { return json(format_rational(w)); });
  } else if (doc.double_model) {
    j["table"] = model_to_json(*doc.double_model, [](double w) { return json(w); });
  } else if (doc.boolean_model) {
    j["table"] = model_to_json(*doc.boolean_model, [](bool w) { return json(w); });
  }
  return j.dump(2) + "\n";
}

ModelDocument model_document_from(std::string name,
                                  EmpiricalModel<RationalSemiring> model) {
  ModelDocument doc;
  doc.name = std::move(name);
  doc.carrier = "rational";
  doc.rational_model = std::move(model);
  return doc;
}

ModelDocument model_document_from(std::string name, EmpiricalModel<DoubleSemiring> model) {
  ModelDocument doc;
  doc.name = std::move(name);
  doc.carrier = "double";
  doc.double_model = std::move(model);
  return doc;
}

namespace {

NetDocument parse_net_document_impl(const std::string& json_text) {
  json j = parse_json_or_fail(json_text);
  if (!j.is_object() || !j.contains("sites") || !j.contains("state")) {
    fail(ErrorCode::ParseError, "net document needs sites and a state");
  }
  std::string name;
  if (j.contains("metadata") && j.at("metadata").contains("name")) {
    name = j.at("metadata").at("name").get<std::string>();
  }

  std::vector<LatticeSite> sites;
  for (const auto& sj : j.at("sites")) {
    LatticeSite site;
    site.id = sj.at("id").get<std::string>();
    site.point = point_from_json(sj.at("point"));
    site.local_dim = sj.contains("dim") ? sj.at("dim").get<int>() : 2;
    sites.push_back(std::move(site));
  }

  const auto& state_json = j.at("state");
  std::string kind = state_json.at("kind").get<std::string>();
  QuantumState state = [&] {
    if (kind == "vector") {
      const auto& comps = state_json.at("components");
      CVector u(comps.size());
      for (size_t i = 0; i < comps.size(); ++i) u(i) = complex_from_json(comps.at(i));
      return QuantumState::pure(std::move(u));
    }
    if (kind == "density") {
      const auto& rows = state_json.at("entries");
      CMatrix rho(rows.size(), rows.size());
      for (size_t r = 0; r < rows.size(); ++r) {
        if (rows.at(r).size() != rows.size()) {
          fail(ErrorCode::ParseError, "density entries must be square");
        }
        for (size_t c = 0; c < rows.size(); ++c) {
          rho(r, c) = complex_from_json(rows.at(r).at(c));
        }
      }
      return QuantumState::density(std::move(rho));
    }
    fail(ErrorCode::ParseError, "state kind must be 'vector' or 'density'");
  }();

  std::vector<SheafRegion> regions;
  if (j.contains("regions")) {
    for (const auto& rj : j.at("regions")) {
      SheafRegion region{rj.at("id").get<std::string>(),
                         DoubleCone::make(point_from_json(rj.at("base")),
                                          point_from_json(rj.at("apex"))),
                         {}};
      if (rj.contains("settings")) {
        region.setting_angles_deg = rj.at("settings").get<std::vector<double>>();
      }
      regions.push_back(std::move(region));
    }
  }

  return NetDocument{std::move(name), LatticeNet::make(std::move(sites), std::move(state)),
                     std::move(regions)};
}

}  // namespace

NetDocument parse_net_document(const std::string& json_text) {
  return with_parse_diagnostics([&] { return parse_net_document_impl(json_text); });
}

std::string serialize_net_document(const NetDocument& doc) {
  json j;
  if (!doc.name.empty()) j["metadata"] = json{{"name", doc.name}};
  json sites = json::array();
  for (const auto& s : doc.net.sites()) {
    json sj;
    sj["id"] = s.id;
    sj["point"] = point_to_json(s.point);
    sj["dim"] = s.local_dim;
    sites.push_back(sj);
  }
  j["sites"] = sites;

  json state;
  if (doc.net.state().is_pure()) {
    state["kind"] = "vector";
    json comps = json::array();
    const CVector& u = doc.net.state().vector();
    for (Eigen::Index i = 0; i < u.size(); ++i) comps.push_back(complex_to_json(u(i)));
    state["components"] = comps;
  } else {
    state["kind"] = "density";
    CMatrix rho = doc.net.state().density_matrix();
    json rows = json::array();
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < rho.cols(); ++c) row.push_back(complex_to_json(rho(r, c)));
      rows.push_back(row);
    }
    state["entries"] = rows;
  }
  j["state"] = state;

  json regions = json::array();
  for (const auto& r : doc.regions) {
    json rj;
    rj["id"] = r.id;
    rj["base"] = point_to_json(r.cone.base);
    rj["apex"] = point_to_json(r.cone.apex);
    rj["settings"] = r.setting_angles_deg;
    regions.push_back(rj);
  }
  j["regions"] = regions;
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << content;
}

}  // namespace sheafctx
