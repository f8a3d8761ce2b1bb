#include "sheafctx/local_model.hpp"

#include <algorithm>
#include <cmath>

namespace sheafctx {

LinearSystem<Rational> local_model_system(const EmpiricalModel<RationalSemiring>& e,
                                          std::vector<LocalModelRow>* rows_out) {
  const MeasurementScenario& scenario = e.scenario();
  const std::vector<Assignment> globals = scenario.sections(scenario.full_context());

  std::vector<LocalModelRow> rows;
  for (size_t c = 0; c < scenario.cover().size(); ++c) {
    for (const auto& s : scenario.sections(scenario.cover()[c])) {
      rows.push_back({c, s});
    }
  }

  auto sys = LinearSystem<Rational>::zero(static_cast<int>(rows.size()),
                                          static_cast<int>(globals.size()));
  for (int r = 0; r < sys.rows; ++r) {
    const auto& row = rows[r];
    const Context& ctx = scenario.cover()[row.cover_index];
    for (int g = 0; g < sys.cols; ++g) {
      if (restrict_to(globals[g], ctx) == row.section) sys.at(r, g) = 1;
    }
    sys.rhs[r] = e.at(row.cover_index).weight(row.section);
  }
  if (rows_out) *rows_out = std::move(rows);
  return sys;
}

LocalModelResult find_local_model(const EmpiricalModel<RationalSemiring>& e) {
  const MeasurementScenario& scenario = e.scenario();
  const Context full = scenario.full_context();
  const std::vector<Assignment> globals = scenario.sections(full);

  LocalModelResult result;
  auto sys = local_model_system(e, &result.rows);

  Feasibility<Rational> lp = solve_feasibility(sys);
  result.feasible = lp.feasible;
  if (lp.feasible) {
    Distribution<RationalSemiring>::Weights weights;
    for (int g = 0; g < sys.cols; ++g) {
      if (!lp.solution[g].is_zero()) weights.emplace(globals[g], lp.solution[g]);
    }
    result.global = Distribution<RationalSemiring>::make(scenario, full, std::move(weights));
  } else {
    result.certificate = std::move(lp.certificate);
  }
  return result;
}

HiddenVariableModel<RationalSemiring> to_hidden_variable_model(
    const MeasurementScenario& scenario, const Distribution<RationalSemiring>& global) {
  std::vector<std::string> labels;
  std::vector<Rational> weights;
  std::vector<std::vector<Distribution<RationalSemiring>>> per_lambda;
  for (const auto& [g, w] : global.support()) {
    labels.push_back("lambda[" + describe_assignment(scenario, g) + "]");
    weights.push_back(w);
    std::vector<Distribution<RationalSemiring>> row;
    for (const auto& c : scenario.cover()) {
      row.push_back(Distribution<RationalSemiring>::point(scenario, restrict_to(g, c)));
    }
    per_lambda.push_back(std::move(row));
  }
  return HiddenVariableModel<RationalSemiring>::make(scenario, std::move(labels),
                                                     std::move(weights), std::move(per_lambda));
}

EmpiricalModel<RationalSemiring> model_from_global(
    const MeasurementScenario& scenario, const Distribution<RationalSemiring>& global) {
  std::vector<Distribution<RationalSemiring>> table;
  for (const auto& c : scenario.cover()) table.push_back(marginal(scenario, global, c));
  return EmpiricalModel<RationalSemiring>::make(scenario, std::move(table));
}

CorrelationFeasibility correlation_model_feasible(const std::vector<std::string>& labels,
                                                  const CorrelationTable<Rational>& table) {
  const int k = static_cast<int>(labels.size());
  const int atoms = 1 << k;

  CorrelationFeasibility result;
  result.labels = labels;

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  }

  auto sys = LinearSystem<Rational>::zero(static_cast<int>(pairs.size()) + 1, atoms);
  auto sign = [](int atom, int label) { return (atom >> label) & 1 ? -1 : 1; };
  for (size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    for (int a = 0; a < atoms; ++a) {
      sys.at(static_cast<int>(p), a) = sign(a, i) * sign(a, j);
    }
    sys.rhs[p] = table.at(labels[i], labels[j]);
  }
  for (int a = 0; a < atoms; ++a) sys.at(static_cast<int>(pairs.size()), a) = 1;
  sys.rhs[pairs.size()] = 1;

  Feasibility<Rational> lp = solve_feasibility(sys);
  result.feasible = lp.feasible;
  if (lp.feasible) {
    result.atom_weights = std::move(lp.solution);
  } else {
    result.certificate = std::move(lp.certificate);
  }
  return result;
}

namespace {

// Per-weight continued-fraction rationalization with per-context
// renormalization. Sound for any alphabet, but independently rounded
// weights lose exact overlap agreement.
RationalizedModel rationalize_per_weight(const EmpiricalModel<DoubleSemiring>& e,
                                         const BigInt& denominator_bound) {
  std::vector<Distribution<RationalSemiring>> table;
  double max_perturbation = 0.0;
  for (size_t c = 0; c < e.scenario().cover().size(); ++c) {
    Distribution<RationalSemiring>::Weights weights;
    Rational total(0);
    for (const auto& [s, w] : e.at(c).support()) {
      Rational approx = rationalize(std::max(w, 0.0), denominator_bound);
      if (!approx.is_zero()) weights.emplace(s, approx);
      total += approx;
    }
    if (total.is_zero()) {
      fail(ErrorCode::NotNormalized, "context weights rationalize to zero");
    }
    for (auto& [s, w] : weights) {
      w /= total;
      max_perturbation = std::max(max_perturbation,
                                  std::abs(to_double(w) - e.at(c).weight(s)));
    }
    table.push_back(Distribution<RationalSemiring>::make(
        e.scenario(), e.scenario().cover()[c], std::move(weights)));
  }
  return RationalizedModel{
      EmpiricalModel<RationalSemiring>::make(e.scenario(), std::move(table)),
      denominator_bound, max_perturbation};
}

// Binary-alphabet path: rationalize the subset moments
//   E_T = sum_s w(s) prod_{m in T} sign(s(m))
// once per subset T (first cover context containing it) and rebuild every
// weight through the exact inclusion-exclusion transform
//   w(s) = 2^{-|C|} (1 + sum_T E_T prod_{m in T} sign(s(m))).
// Overlapping contexts then share their marginal moments exactly, so the
// rationalized model is no-signalling as an identity, not within epsilon,
// and normalization is automatic. Falls back if any weight reconstructs
// negative.
std::optional<RationalizedModel> rationalize_moments(
    const EmpiricalModel<DoubleSemiring>& e, const BigInt& denominator_bound) {
  const MeasurementScenario& scenario = e.scenario();
  auto sign_of = [](int outcome_index) { return outcome_index == 0 ? 1 : -1; };

  std::map<std::vector<int>, Rational> moments;  // by sorted measurement subset
  for (size_t c = 0; c < scenario.cover().size(); ++c) {
    const Context& ctx = scenario.cover()[c];
    const int k = ctx.size();
    for (int mask = 1; mask < (1 << k); ++mask) {
      std::vector<int> subset;
      for (int i = 0; i < k; ++i) {
        if (mask & (1 << i)) subset.push_back(ctx.members[i]);
      }
      if (moments.count(subset)) continue;  // first containing context wins
      double value = 0.0;
      for (const auto& [s, w] : e.at(c).support()) {
        int sgn = 1;
        for (int i = 0; i < k; ++i) {
          if (mask & (1 << i)) sgn *= sign_of(s.outcomes[i]);
        }
        value += sgn * w;
      }
      moments.emplace(std::move(subset), rationalize(value, denominator_bound));
    }
  }

  std::vector<Distribution<RationalSemiring>> table;
  double max_perturbation = 0.0;
  for (size_t c = 0; c < scenario.cover().size(); ++c) {
    const Context& ctx = scenario.cover()[c];
    const int k = ctx.size();
    const Rational norm(1, BigInt(1) << k);
    Distribution<RationalSemiring>::Weights weights;
    for (const auto& s : scenario.sections(ctx)) {
      Rational acc(1);
      for (int mask = 1; mask < (1 << k); ++mask) {
        std::vector<int> subset;
        int sgn = 1;
        for (int i = 0; i < k; ++i) {
          if (mask & (1 << i)) {
            subset.push_back(ctx.members[i]);
            sgn *= sign_of(s.outcomes[i]);
          }
        }
        acc += Rational(sgn) * moments.at(subset);
      }
      Rational w = norm * acc;
      if (w < 0) return std::nullopt;
      max_perturbation =
          std::max(max_perturbation, std::abs(to_double(w) - e.at(c).weight(s)));
      if (!w.is_zero()) weights.emplace(s, w);
    }
    table.push_back(
        Distribution<RationalSemiring>::make(scenario, ctx, std::move(weights)));
  }
  return RationalizedModel{
      EmpiricalModel<RationalSemiring>::make(scenario, std::move(table)),
      denominator_bound, max_perturbation};
}

}  // namespace

RationalizedModel rationalize_model(const EmpiricalModel<DoubleSemiring>& e,
                                    const BigInt& denominator_bound) {
  if (e.scenario().outcome_count() == 2) {
    if (auto shared = rationalize_moments(e, denominator_bound)) {
      return std::move(*shared);
    }
  }
  return rationalize_per_weight(e, denominator_bound);
}

std::vector<Rational> outcome_values(const MeasurementScenario& scenario) {
  std::vector<Rational> values;
  values.reserve(scenario.outcomes().size());
  bool numeric = true;
  for (const auto& label : scenario.outcomes()) {
    try {
      values.push_back(parse_rational(label));
    } catch (const Error&) {
      numeric = false;
      break;
    }
  }
  if (numeric) return values;
  if (scenario.outcome_count() == 2) return {Rational(1), Rational(-1)};
  fail(ErrorCode::OutcomeNotNumeric,
       "outcomes are not numeric and not a two-letter alphabet");
}

namespace {

template <class S, class Value>
CorrelationTable<Value> correlation_table_impl(const EmpiricalModel<S>& e) {
  const MeasurementScenario& scenario = e.scenario();
  std::vector<Rational> values = outcome_values(scenario);
  CorrelationTable<Value> table;
  for (int x = 0; x < scenario.measurement_count(); ++x) {
    for (int y = x + 1; y < scenario.measurement_count(); ++y) {
      Context pair{std::vector<int>{x, y}};
      for (size_t c = 0; c < scenario.cover().size(); ++c) {
        if (!scenario.cover()[c].contains(pair)) continue;
        Value acc{};
        for (const auto& [s, w] : e.at(c).support()) {
          Rational prod = values[s.outcome_of(x)] * values[s.outcome_of(y)];
          if constexpr (std::is_same_v<Value, double>) {
            acc += w * to_double(prod);
          } else {
            acc += w * prod;
          }
        }
        table.set(scenario.measurement_label(x), scenario.measurement_label(y), acc);
        break;  // first containing cover context wins
      }
    }
  }
  return table;
}

}  // namespace

CorrelationTable<Rational> correlation_table(const EmpiricalModel<RationalSemiring>& e) {
  return correlation_table_impl<RationalSemiring, Rational>(e);
}

CorrelationTable<double> correlation_table(const EmpiricalModel<DoubleSemiring>& e) {
  return correlation_table_impl<DoubleSemiring, double>(e);
}

LocalityEvaluation evaluate_locality_assumption(
    const SampleSpaceFactorization& f, const std::vector<Rational>& lambda_dist,
    const std::vector<std::vector<Rational>>& setting_dists) {
  const size_t parties = f.setting_labels.size();
  const size_t lambdas = f.lambda_labels.size();
  if (f.responses.size() != parties || lambda_dist.size() != lambdas ||
      setting_dists.size() != parties) {
    fail(ErrorCode::ScenarioMismatch, "factorization table shape mismatch");
  }
  for (size_t i = 0; i < parties; ++i) {
    if (f.responses[i].size() != lambdas ||
        setting_dists[i].size() != f.setting_labels[i].size()) {
      fail(ErrorCode::ScenarioMismatch, "factorization table shape mismatch");
    }
    for (const auto& per_lambda : f.responses[i]) {
      if (per_lambda.size() != f.setting_labels[i].size()) {
        fail(ErrorCode::ScenarioMismatch, "factorization table shape mismatch");
      }
      for (int r : per_lambda) {
        if (r != 1 && r != -1) {
          fail(ErrorCode::ScenarioMismatch, "responses must be +1 or -1");
        }
      }
    }
  }

  // Measurement per (party, setting); the cover takes one setting per party.
  std::vector<std::string> measurements;
  std::vector<std::vector<int>> measurement_of(parties);
  for (size_t i = 0; i < parties; ++i) {
    for (const auto& setting : f.setting_labels[i]) {
      measurement_of[i].push_back(static_cast<int>(measurements.size()));
      measurements.push_back("P" + std::to_string(i + 1) + ":" + setting);
    }
  }
  std::vector<std::vector<std::string>> cover;
  std::vector<std::vector<size_t>> combos;
  std::vector<size_t> combo(parties, 0);
  while (true) {
    std::vector<std::string> ctx;
    for (size_t i = 0; i < parties; ++i) {
      ctx.push_back(measurements[measurement_of[i][combo[i]]]);
    }
    cover.push_back(ctx);
    combos.push_back(combo);
    size_t pos = parties;
    while (pos > 0 && combo[pos - 1] + 1 == f.setting_labels[pos - 1].size()) {
      combo[--pos] = 0;
    }
    if (pos == 0) break;
    ++combo[pos - 1];
  }

  MeasurementScenario scenario =
      MeasurementScenario::validate(measurements, {"-1", "1"}, cover);
  const int minus_one = 0;  // outcome index of "-1"
  const int plus_one = 1;

  std::vector<Distribution<RationalSemiring>> table;
  for (size_t ci = 0; ci < combos.size(); ++ci) {
    Context ctx = scenario.cover()[ci];
    Distribution<RationalSemiring>::Weights weights;
    for (size_t l = 0; l < lambdas; ++l) {
      Assignment s;
      s.members = ctx.members;
      s.outcomes.assign(ctx.members.size(), 0);
      for (size_t i = 0; i < parties; ++i) {
        int m = measurement_of[i][combos[ci][i]];
        int response = f.responses[i][l][combos[ci][i]];
        int outcome = response == 1 ? plus_one : minus_one;
        for (size_t k = 0; k < s.members.size(); ++k) {
          if (s.members[k] == m) s.outcomes[k] = outcome;
        }
      }
      auto [it, fresh] = weights.emplace(s, lambda_dist[l]);
      if (!fresh) it->second += lambda_dist[l];
    }
    table.push_back(
        Distribution<RationalSemiring>::make(scenario, ctx, std::move(weights)));
  }

  // Party-pair correlations over the full product measure: settings are
  // chosen independently, so the inner sums factor per party given λ.
  CorrelationTable<Rational> correlations;
  for (size_t i = 0; i < parties; ++i) {
    for (size_t j = i + 1; j < parties; ++j) {
      Rational acc(0);
      for (size_t l = 0; l < lambdas; ++l) {
        Rational mean_i(0), mean_j(0);
        for (size_t m = 0; m < f.setting_labels[i].size(); ++m) {
          mean_i += setting_dists[i][m] * Rational(f.responses[i][l][m]);
        }
        for (size_t m = 0; m < f.setting_labels[j].size(); ++m) {
          mean_j += setting_dists[j][m] * Rational(f.responses[j][l][m]);
        }
        acc += lambda_dist[l] * mean_i * mean_j;
      }
      correlations.set("P" + std::to_string(i + 1), "P" + std::to_string(j + 1), acc);
    }
  }

  return LocalityEvaluation{
      EmpiricalModel<RationalSemiring>::make(scenario, std::move(table)),
      std::move(correlations)};
}

}  // namespace sheafctx
