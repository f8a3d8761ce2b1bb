#include <cstdlib>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sheafctx/io.hpp"
#include "sheafctx/local_model.hpp"
#include "sheafctx/quantum.hpp"

namespace {

using nlohmann::json;
using namespace sheafctx;

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitUsage = 2;

struct Report {
  json data = json::object();
  std::vector<std::string> lines;

  void line(const std::string& text) { lines.push_back(text); }
  void emit(bool as_json) const {
    if (as_json) {
      std::cout << data.dump(2) << "\n";
    } else {
      for (const auto& l : lines) std::cout << l << "\n";
    }
  }
};

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream is(text);
  while (std::getline(is, piece, ',')) out.push_back(piece);
  return out;
}

std::string rat(const Rational& r) { return format_rational(r); }

int run_scenario_validate(const std::string& path, bool as_json) {
  ModelDocument doc = parse_model_document(read_file(path));
  const MeasurementScenario& s = doc.scenario();
  Report report;
  report.data["valid"] = true;
  report.data["measurements"] = s.measurements().size();
  report.data["outcomes"] = s.outcomes().size();
  report.data["cover_contexts"] = s.cover().size();
  report.line("scenario: valid");
  report.line("  measurements: " + std::to_string(s.measurements().size()));
  report.line("  outcomes:     " + std::to_string(s.outcomes().size()));
  report.line("  cover:        " + std::to_string(s.cover().size()) + " contexts");
  report.emit(as_json);
  return kExitHolds;
}

template <class S>
void fill_nosig_report(const MeasurementScenario& scenario,
                       const CompatibilityVerdict<S>& verdict, Report& report) {
  report.data["no_signalling"] = verdict.holds;
  report.line(std::string("no-signalling: ") + (verdict.holds ? "true" : "false"));
  if (!verdict.holds) {
    report.data["witness"] = describe_witness(scenario, *verdict.witness);
    report.line("  witness: " + describe_witness(scenario, *verdict.witness));
  }
}

int run_check_nosig(const std::string& path, bool as_json) {
  ModelDocument doc = parse_model_document(read_file(path));
  Report report;
  bool holds = false;
  if (doc.rational_model) {
    auto verdict = is_no_signalling(*doc.rational_model);
    holds = verdict.holds;
    fill_nosig_report(doc.scenario(), verdict, report);
  } else if (doc.double_model) {
    auto verdict = is_no_signalling(*doc.double_model);
    holds = verdict.holds;
    fill_nosig_report(doc.scenario(), verdict, report);
  } else {
    auto verdict = is_no_signalling(*doc.boolean_model);
    holds = verdict.holds;
    fill_nosig_report(doc.scenario(), verdict, report);
  }
  report.emit(as_json);
  return holds ? kExitHolds : kExitFails;
}

int run_find_local(const std::string& path, const std::string& bound_text, bool as_json) {
  ModelDocument doc = parse_model_document(read_file(path));
  Report report;
  EmpiricalModel<RationalSemiring>* model = nullptr;
  std::optional<EmpiricalModel<RationalSemiring>> rationalized;
  if (doc.rational_model) {
    model = &*doc.rational_model;
  } else if (doc.double_model) {
    BigInt bound(bound_text);
    RationalizedModel r = rationalize_model(*doc.double_model, bound);
    report.data["rationalization"] = {
        {"denominator_bound", bound.str()},
        {"max_perturbation", r.max_perturbation}};
    report.line("rationalized with denominator bound " + bound.str() +
                " (max perturbation " + std::to_string(r.max_perturbation) + ")");
    rationalized = std::move(r.model);
    model = &*rationalized;
  } else {
    fail(ErrorCode::NonRationalModel, "find-local needs a rational or double carrier");
  }

  LocalModelResult result = find_local_model(*model);
  report.data["feasible"] = result.feasible;
  if (result.feasible) {
    report.line("local model: feasible");
    json weights = json::object();
    for (const auto& [g, w] : result.global->support()) {
      weights[describe_assignment(model->scenario(), g)] = rat(w);
    }
    report.data["global_distribution"] = weights;
    report.line("  global distribution over " +
                std::to_string(result.global->support().size()) + " deterministic assignments:");
    for (const auto& [g, w] : result.global->support()) {
      report.line("    [" + describe_assignment(model->scenario(), g) + "] = " + rat(w));
    }
  } else {
    report.line("local model: infeasible");
    report.line("  Farkas certificate (y.A <= 0, y.b > 0):");
    json rows = json::array();
    for (size_t r = 0; r < result.rows.size(); ++r) {
      if (result.certificate[r].is_zero()) continue;
      const auto& row = result.rows[r];
      std::string where =
          "{" + describe_context(model->scenario(),
                                 model->scenario().cover()[row.cover_index]) +
          "} [" + describe_assignment(model->scenario(), row.section) + "]";
      rows.push_back({{"row", where}, {"y", rat(result.certificate[r])}});
      report.line("    " + where + ": " + rat(result.certificate[r]));
    }
    report.data["certificate"] = rows;
  }
  report.emit(as_json);
  return result.feasible ? kExitHolds : kExitFails;
}

int run_bell(const std::string& path, const std::string& pairs, bool as_json) {
  std::vector<std::string> labels = split_csv(pairs);
  if (labels.size() != 3) {
    fail(ErrorCode::ParseError, "--pairs needs exactly three labels a,b,c");
  }
  ModelDocument doc = parse_model_document(read_file(path));
  Report report;
  bool violated = false;
  if (doc.rational_model) {
    auto table = correlation_table(*doc.rational_model);
    auto v = check_bell_inequality(table, labels[0], labels[1], labels[2]);
    violated = v.violated;
    report.data["lhs"] = rat(v.lhs);
    report.data["rhs"] = rat(v.rhs);
    report.data["rhs_cross_particle"] = rat(v.rhs_cross);
    report.data["violated"] = v.violated;
    report.line("Bell inequality |E(ab)-E(cb)| <= 1-E(ac) with (a,b,c) = (" + pairs + ")");
    report.line("  lhs = " + rat(v.lhs));
    report.line("  rhs = " + rat(v.rhs) + "   (cross-particle variant: " + rat(v.rhs_cross) + ")");
    report.line(std::string("  verdict: ") + (v.violated ? "violated" : "holds"));
  } else if (doc.double_model) {
    auto table = correlation_table(*doc.double_model);
    auto v = check_bell_inequality(table, labels[0], labels[1], labels[2]);
    violated = v.violated;
    report.data["lhs"] = v.lhs;
    report.data["rhs"] = v.rhs;
    report.data["rhs_cross_particle"] = v.rhs_cross;
    report.data["violated"] = v.violated;
    report.line("Bell inequality |E(ab)-E(cb)| <= 1-E(ac) with (a,b,c) = (" + pairs + ")");
    report.line("  lhs = " + std::to_string(v.lhs));
    report.line("  rhs = " + std::to_string(v.rhs));
    report.line(std::string("  verdict: ") + (v.violated ? "violated" : "holds"));
  } else {
    fail(ErrorCode::NonRationalModel, "bell check needs a rational or double carrier");
  }
  report.emit(as_json);
  return violated ? kExitFails : kExitHolds;
}

EmpiricalModel<DoubleSemiring> singlet_chsh_model(double a1, double a2, double b1,
                                                  double b2) {
  CMatrix id = identity(2);
  auto obs_a = [&](const std::string& label, double deg) {
    return LabeledObservable{label,
                             kron(spin_observable(coplanar_direction(deg)), id)};
  };
  auto obs_b = [&](const std::string& label, double deg) {
    return LabeledObservable{label,
                             kron(id, spin_observable(coplanar_direction(deg)))};
  };
  LabeledObservable a1o = obs_a("a1", a1), a2o = obs_a("a2", a2);
  LabeledObservable b1o = obs_b("b1", b1), b2o = obs_b("b2", b2);
  std::vector<ObservableContext> contexts;
  contexts.push_back(ObservableContext::make({a1o, b1o}));
  contexts.push_back(ObservableContext::make({a1o, b2o}));
  contexts.push_back(ObservableContext::make({a2o, b1o}));
  contexts.push_back(ObservableContext::make({a2o, b2o}));
  return born_model(singlet_state(), contexts);
}

int run_quantum_singlet(const std::string& angles_text, bool as_json) {
  std::vector<std::string> parts = split_csv(angles_text);
  if (parts.size() != 4) {
    fail(ErrorCode::ParseError, "--angles needs four comma-separated degrees");
  }
  double angles[4];
  for (int i = 0; i < 4; ++i) angles[i] = std::stod(parts[i]);

  auto model = singlet_chsh_model(angles[0], angles[1], angles[2], angles[3]);
  auto table = correlation_table(model);
  double e11 = table.at("a1", "b1"), e12 = table.at("a1", "b2");
  double e21 = table.at("a2", "b1"), e22 = table.at("a2", "b2");
  double combos[4] = {e11 + e12 + e21 - e22, e11 + e12 - e21 + e22,
                      e11 - e12 + e21 + e22, -e11 + e12 + e21 + e22};
  double best = 0;
  for (double c : combos) best = std::max(best, std::abs(c));
  auto nosig = is_no_signalling(model);

  Report report;
  report.data["correlations"] = {{"E(a1,b1)", e11}, {"E(a1,b2)", e12},
                                 {"E(a2,b1)", e21}, {"E(a2,b2)", e22}};
  report.data["chsh_max_abs"] = best;
  report.data["no_signalling"] = nosig.holds;
  report.line("singlet CHSH model at a1=" + parts[0] + " a2=" + parts[1] +
              " b1=" + parts[2] + " b2=" + parts[3] + " degrees");
  report.line("  E(a1,b1)=" + std::to_string(e11) + "  E(a1,b2)=" + std::to_string(e12));
  report.line("  E(a2,b1)=" + std::to_string(e21) + "  E(a2,b2)=" + std::to_string(e22));
  report.line("  max |CHSH combination| = " + std::to_string(best));
  report.line(std::string("  no-signalling: ") + (nosig.holds ? "true" : "false"));
  report.line(std::string("  CHSH classical bound 2: ") +
              (best > 2.0 ? "violated" : "satisfied"));
  report.emit(as_json);
  return best > 2.0 ? kExitFails : kExitHolds;
}

int run_chsh_scan(int step, bool as_json) {
  BellScanResult scan = max_bell_violation(singlet_state(), step);
  Report report;
  report.data["best_abs"] = scan.best_abs;
  report.data["best_value"] = scan.best_value;
  report.data["angles"] = scan.angles;
  report.data["tsirelson_bound"] = 2.0 * std::numbers::sqrt2;
  report.line("CHSH scan on the singlet, step " + std::to_string(step) + " degrees");
  report.line("  best |phi(B)| = " + std::to_string(scan.best_abs) + " at a1=" +
              std::to_string(scan.angles[0]) + " a2=" + std::to_string(scan.angles[1]) +
              " b1=" + std::to_string(scan.angles[2]) + " b2=" +
              std::to_string(scan.angles[3]));
  report.line("  Tsirelson ceiling 2*sqrt(2) = " +
              std::to_string(2.0 * std::numbers::sqrt2));
  report.line(std::string("  classical bound 2: ") +
              (scan.best_abs > 2.0 ? "violated" : "satisfied"));
  report.emit(as_json);
  return scan.best_abs > 2.0 ? kExitFails : kExitHolds;
}

int run_aqft_check(const std::string& path, bool as_json) {
  NetDocument doc = parse_net_document(read_file(path));
  Report report;
  bool all_ok = true;

  std::vector<DoubleCone> cones;
  for (const auto& r : doc.regions) cones.push_back(r.cone);
  NetAxiomReport axioms = check_net_axioms(doc.net, cones);
  report.data["isotony"] = axioms.isotony_ok;
  report.data["microcausality"] = axioms.microcausality_ok;
  report.data["covariance"] =
      axioms.covariance == NetAxiomReport::Covariance::Ok ? "ok"
      : axioms.covariance == NetAxiomReport::Covariance::Failed ? "failed"
                                                                : "not-applicable";
  all_ok = all_ok && axioms.all_ok();
  report.line("net axioms:");
  report.line(std::string("  isotony:        ") + (axioms.isotony_ok ? "ok" : "FAILED") +
              " (" + std::to_string(axioms.isotony_pairs) + " nested pairs)");
  report.line(std::string("  microcausality: ") +
              (axioms.microcausality_ok ? "ok" : "FAILED") + " (" +
              std::to_string(axioms.microcausality_pairs) + " spacelike pairs)");
  report.line(std::string("  covariance:     ") +
              (axioms.covariance == NetAxiomReport::Covariance::Ok ? "ok"
               : axioms.covariance == NetAxiomReport::Covariance::Failed
                   ? "FAILED"
                   : "not-applicable") +
              " (" + std::to_string(axioms.covariance_translations) + " translations)");

  // Split and Schlieder on every disjoint region pair, with the sigma3
  // "+1" projector on each region's first site as the default witness.
  json pair_checks = json::array();
  CMatrix plus = (identity(2) + pauli(3)) / 2.0;
  for (size_t i = 0; i < doc.regions.size(); ++i) {
    for (size_t j = 0; j < doc.regions.size(); ++j) {
      if (i == j) continue;
      auto sites_i = doc.net.region_sites(doc.regions[i].cone);
      auto sites_j = doc.net.region_sites(doc.regions[j].cone);
      if (sites_i.empty() || sites_j.empty()) continue;
      bool disjoint = true;
      for (int s : sites_i) {
        for (int t : sites_j) {
          if (s == t) disjoint = false;
        }
      }
      if (!disjoint || i > j) continue;
      SplitResult split = split_check(doc.net, doc.regions[i].cone, doc.regions[j].cone);
      SchliederResult schlieder =
          schlieder_check(doc.net, {sites_i.front()}, {sites_j.front()}, plus, plus);
      all_ok = all_ok && split.ok && schlieder.nonzero;
      json entry;
      entry["pair"] = {doc.regions[i].id, doc.regions[j].id};
      entry["split"] = split.ok;
      entry["schlieder_dimension"] = schlieder.dimension;
      pair_checks.push_back(entry);
      report.line("pair (" + doc.regions[i].id + ", " + doc.regions[j].id + "):");
      report.line(std::string("  split property:     ") + (split.ok ? "ok" : "FAILED") +
                  " (interpolating factor on " +
                  std::to_string(split.factor_sites.size()) + " sites)");
      report.line("  Schlieder property:  " +
                  std::string(schlieder.nonzero ? "ok" : "FAILED") +
                  " (intersection dimension " + std::to_string(schlieder.dimension) + ")");
    }
  }
  report.data["pairs"] = pair_checks;

  // Local states on nested region pairs.
  json local_checks = json::array();
  for (size_t i = 0; i < doc.regions.size(); ++i) {
    for (size_t j = 0; j < doc.regions.size(); ++j) {
      if (i == j || !cone_subset(doc.regions[i].cone, doc.regions[j].cone)) continue;
      auto sites_i = doc.net.region_sites(doc.regions[i].cone);
      auto sites_j = doc.net.region_sites(doc.regions[j].cone);
      if (sites_i.empty()) continue;
      long dim = 1;
      for (int s : sites_i) dim *= doc.net.sites()[s].local_dim;
      CVector ground = CVector::Zero(dim);
      ground(0) = 1.0;
      LocalStateResult local =
          local_state_check(doc.net, doc.regions[i].cone, doc.regions[j].cone,
                            QuantumState::pure(ground));
      all_ok = all_ok && local.ok;
      json entry;
      entry["pair"] = {doc.regions[i].id, doc.regions[j].id};
      entry["ok"] = local.ok;
      entry["max_deviation"] = local.max_deviation;
      local_checks.push_back(entry);
      report.line("local state (" + doc.regions[i].id + " inside " + doc.regions[j].id +
                  "): " + (local.ok ? "ok" : "FAILED") + " (max deviation " +
                  std::to_string(local.max_deviation) + ")");
    }
  }
  report.data["local_states"] = local_checks;
  report.data["all_ok"] = all_ok;
  report.line(std::string("overall: ") + (all_ok ? "ok" : "FAILED"));
  report.emit(as_json);
  return all_ok ? kExitHolds : kExitFails;
}

int run_aqft_sheaf(const std::string& path, bool with_lp, const std::string& bound_text,
                   bool as_json) {
  NetDocument doc = parse_net_document(read_file(path));
  SpacetimeSheafResult sheaf = spacetime_sheaf(doc.net, doc.regions);
  Report report;
  json entries = json::array();
  for (const auto& entry : sheaf.entries) {
    std::string tuple;
    for (size_t k = 0; k < entry.region_tuple.size(); ++k) {
      if (k) tuple += ",";
      tuple += doc.regions[entry.region_tuple[k]].id;
    }
    json ej;
    ej["regions"] = tuple;
    ej["contexts"] = entry.model.scenario().cover().size();
    ej["no_signalling"] = entry.no_signalling.holds;
    std::string line = "regions {" + tuple + "}: " +
                       std::to_string(entry.model.scenario().cover().size()) +
                       " contexts, no-signalling " +
                       (entry.no_signalling.holds ? "true" : "false");
    if (with_lp) {
      RationalizedModel r = rationalize_model(entry.model, BigInt(bound_text));
      LocalModelResult lp = find_local_model(r.model);
      ej["local_model_feasible"] = lp.feasible;
      line += std::string(", local model ") + (lp.feasible ? "feasible" : "infeasible");
    }
    entries.push_back(ej);
    report.line(line);
  }
  report.data["entries"] = entries;
  report.data["all_no_signalling"] = sheaf.all_no_signalling;
  report.line(std::string("spacetime no-signalling: ") +
              (sheaf.all_no_signalling ? "true" : "false"));
  report.emit(as_json);
  return sheaf.all_no_signalling ? kExitHolds : kExitFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sheafctx: sheaf-theoretic contextuality and lattice AQFT toolkit"};
  app.require_subcommand(1);

  std::string format = "text";
  if (const char* env = std::getenv("SHEAFCTX_FORMAT")) format = env;
  app.add_option("--format", format, "report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string model_path, net_path, pairs, angles;
  std::string denom_bound = "1000000";
  int step = 45;
  bool sheaf_lp = false;

  auto* scenario_cmd = app.add_subcommand("scenario", "scenario operations");
  auto* validate_cmd = scenario_cmd->add_subcommand("validate", "validate a model document");
  validate_cmd->add_option("file", model_path, "model document")->required();

  auto* model_cmd = app.add_subcommand("model", "empirical model checks");
  auto* nosig_cmd = model_cmd->add_subcommand("check-nosig", "no-signalling verdict");
  nosig_cmd->add_option("file", model_path, "model document")->required();
  auto* local_cmd = model_cmd->add_subcommand("find-local", "local-model LP decision");
  local_cmd->add_option("file", model_path, "model document")->required();
  local_cmd->add_option("--denom-bound", denom_bound,
                        "denominator bound for rationalizing double carriers");
  auto* bell_cmd = model_cmd->add_subcommand("bell", "Bell inequality on a correlation triple");
  bell_cmd->add_option("file", model_path, "model document")->required();
  bell_cmd->add_option("--pairs", pairs, "labels a,b,c")->required();

  auto* quantum_cmd = app.add_subcommand("quantum", "quantum realizations");
  auto* singlet_cmd = quantum_cmd->add_subcommand("singlet", "singlet CHSH model");
  singlet_cmd->add_option("--angles", angles, "a1,a2,b1,b2 in degrees")->required();
  auto* scan_cmd = quantum_cmd->add_subcommand("chsh-scan", "grid-search CHSH on the singlet");
  scan_cmd->add_option("--step", step, "grid step in degrees (divides 360)");

  auto* aqft_cmd = app.add_subcommand("aqft", "lattice local-net checks");
  auto* check_cmd = aqft_cmd->add_subcommand("check", "axioms, split, Schlieder, local states");
  check_cmd->add_option("file", net_path, "net document")->required();
  auto* sheaf_cmd = aqft_cmd->add_subcommand("sheaf", "spacetime sheaf of empirical models");
  sheaf_cmd->add_option("file", net_path, "net document")->required();
  sheaf_cmd->add_flag("--find-local", sheaf_lp, "also run the local-model LP per entry");
  sheaf_cmd->add_option("--denom-bound", denom_bound, "denominator bound for the LP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const bool as_json = format == "json";
  try {
    if (validate_cmd->parsed()) return run_scenario_validate(model_path, as_json);
    if (nosig_cmd->parsed()) return run_check_nosig(model_path, as_json);
    if (local_cmd->parsed()) return run_find_local(model_path, denom_bound, as_json);
    if (bell_cmd->parsed()) return run_bell(model_path, pairs, as_json);
    if (singlet_cmd->parsed()) return run_quantum_singlet(angles, as_json);
    if (scan_cmd->parsed()) return run_chsh_scan(step, as_json);
    if (check_cmd->parsed()) return run_aqft_check(net_path, as_json);
    if (sheaf_cmd->parsed()) return run_aqft_sheaf(net_path, sheaf_lp, denom_bound, as_json);
    std::cerr << "error: no subcommand\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }
}
