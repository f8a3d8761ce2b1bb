#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sheafctx/empirical.hpp"
#include "sheafctx/simplex.hpp"

namespace sheafctx {

/// Meaning of one LP row: the (cover context, section) equality constraint.
struct LocalModelRow {
  size_t cover_index = 0;
  Assignment section;
};

/// Verdict of the noncontextuality LP: either a global distribution over
/// deterministic assignments reproducing every e_C by marginalization, or
/// an exact-rational Farkas certificate over the constraint rows.
struct LocalModelResult {
  bool feasible = false;
  std::optional<Distribution<RationalSemiring>> global;
  std::vector<Rational> certificate;
  std::vector<LocalModelRow> rows;
};

/// The LP constraint system behind find_local_model: one column per
/// deterministic global assignment (canonical section order), one equality
/// row per (cover context, section).
LinearSystem<Rational> local_model_system(const EmpiricalModel<RationalSemiring>& e,
                                          std::vector<LocalModelRow>* rows = nullptr);

/// Decides local-hidden-variable (factorizable) realizability: weights
/// w_g >= 0 over all deterministic global assignments with, for every cover
/// context C and section s, sum over {g : g|_C = s} of w_g equal to e_C(s).
/// Exact-rational simplex with Bland's rule.
LocalModelResult find_local_model(const EmpiricalModel<RationalSemiring>& e);

/// Factorizable hidden-variable model induced by a global distribution:
/// Λ ranges over the supported assignments, each h_C^λ the point mass at
/// the restriction. Passes realizes / is_factorizable /
/// is_parameter_independent exactly against the marginals of `global`.
HiddenVariableModel<RationalSemiring> to_hidden_variable_model(
    const MeasurementScenario& scenario, const Distribution<RationalSemiring>& global);

/// Empirical model induced by a global distribution (marginals onto the
/// cover contexts); the canonical feasible preimage of find_local_model.
EmpiricalModel<RationalSemiring> model_from_global(
    const MeasurementScenario& scenario, const Distribution<RationalSemiring>& global);

/// One-sample-space correlation system: weights over the 2^k sign atoms of
/// the labels, constrained to reproduce the given pairwise correlations
/// (distinct pairs only) and to sum to one.
struct CorrelationFeasibility {
  bool feasible = false;
  std::vector<std::string> labels;
  std::vector<Rational> atom_weights;   // by atom index; bit i set = label i maps to -1
  std::vector<Rational> certificate;    // over pair rows then the normalization row
};

CorrelationFeasibility correlation_model_feasible(const std::vector<std::string>& labels,
                                                  const CorrelationTable<Rational>& table);

/// Continued-fraction rationalization of a double-carrier model with a
/// per-weight denominator bound, renormalized per context.
struct RationalizedModel {
  EmpiricalModel<RationalSemiring> model;
  BigInt denominator_bound;
  double max_perturbation = 0.0;
};

RationalizedModel rationalize_model(const EmpiricalModel<DoubleSemiring>& e,
                                    const BigInt& denominator_bound);

/// Outcome labels as +/-1 values: numeric labels are parsed, otherwise a
/// two-outcome alphabet maps to (+1, -1) in outcome order.
std::vector<Rational> outcome_values(const MeasurementScenario& scenario);

/// Pairwise correlations E(X_x X_y) of every pair of measurements that
/// share a cover context (first containing context in cover order).
CorrelationTable<Rational> correlation_table(const EmpiricalModel<RationalSemiring>& e);
CorrelationTable<double> correlation_table(const EmpiricalModel<DoubleSemiring>& e);

/// Hidden-variable sample space with per-party response functions
/// depending only on (λ, own setting); the factorized form of the locality
/// assumption. responses[party][lambda][setting] is +1 or -1.
struct SampleSpaceFactorization {
  std::vector<std::string> lambda_labels;
  std::vector<std::vector<std::string>> setting_labels;
  std::vector<std::vector<std::vector<int>>> responses;
};

struct LocalityEvaluation {
  EmpiricalModel<RationalSemiring> model;  // cover: one setting per party, all combos
  CorrelationTable<Rational> party_correlations;  // keys "P1", "P2", ...
};

/// Induced empirical model and party-pair correlations of the product
/// measure on Λ x M_1 x ... x M_n. Always admits a local model.
LocalityEvaluation evaluate_locality_assumption(
    const SampleSpaceFactorization& f, const std::vector<Rational>& lambda_dist,
    const std::vector<std::vector<Rational>>& setting_dists);

}  // namespace sheafctx
