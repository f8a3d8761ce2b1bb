#include <doctest.h>

#include <random>

#include "sheafctx/local_model.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace sheafctx;

namespace {

// Random scenario with binary outcomes over at most four measurements.
MeasurementScenario random_small_scenario(std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0:
      return testing::chsh_scenario();
    case 1:
      return MeasurementScenario::validate({"a", "b", "c"}, {"0", "1"},
                                           {{"a", "b"}, {"b", "c"}, {"a", "c"}});
    default:
      return MeasurementScenario::validate({"x", "y", "z"}, {"0", "1"},
                                           {{"x", "y", "z"}});
  }
}

EmpiricalModel<RationalSemiring> random_model(const MeasurementScenario& s,
                                              std::mt19937_64& rng) {
  std::vector<Distribution<RationalSemiring>> table;
  for (const auto& c : s.cover()) {
    auto sections = s.sections(c);
    auto weights = testing::random_weights(rng, sections.size());
    Distribution<RationalSemiring>::Weights w;
    for (size_t i = 0; i < sections.size(); ++i) {
      if (!weights[i].is_zero()) w.emplace(sections[i], weights[i]);
    }
    table.push_back(Distribution<RationalSemiring>::make(s, c, std::move(w)));
  }
  return EmpiricalModel<RationalSemiring>::make(s, std::move(table));
}

EmpiricalModel<RationalSemiring> random_local_model(const MeasurementScenario& s,
                                                    std::mt19937_64& rng) {
  auto globals = s.sections(s.full_context());
  auto weights = testing::random_weights(rng, globals.size());
  Distribution<RationalSemiring>::Weights w;
  for (size_t i = 0; i < globals.size(); ++i) {
    if (!weights[i].is_zero()) w.emplace(globals[i], weights[i]);
  }
  auto global = Distribution<RationalSemiring>::make(s, s.full_context(), std::move(w));
  return model_from_global(s, global);
}

}  // namespace

TEST_CASE("the product box admits a local model") {
  auto result = find_local_model(testing::product_box());
  REQUIRE(result.feasible);
  // The found global distribution reproduces every context distribution.
  auto e = testing::product_box();
  auto reproduced = model_from_global(e.scenario(), *result.global);
  for (size_t c = 0; c < e.scenario().cover().size(); ++c) {
    CHECK(reproduced.at(c) == e.at(c));
  }
}

TEST_CASE("the PR box is infeasible with a verified certificate") {
  auto e = testing::pr_box();
  auto result = find_local_model(e);
  REQUIRE_FALSE(result.feasible);
  REQUIRE(result.certificate.size() == result.rows.size());
  auto sys = local_model_system(e);
  CHECK(certifies_infeasible(sys, result.certificate));
  // Independent route: brute-force basis enumeration agrees.
  CHECK_FALSE(testing::oracle_feasible(sys));
}

TEST_CASE("the signalling box has no global distribution either") {
  auto result = find_local_model(testing::signalling_box());
  CHECK_FALSE(result.feasible);
}

TEST_CASE("the 0/120/60 triangle model is infeasible") {
  auto result = find_local_model(testing::bell_triangle_model());
  CHECK_FALSE(result.feasible);
}

TEST_CASE("feasible results reconstruct factorizable hidden-variable models") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    MeasurementScenario s = random_small_scenario(rng);
    auto e = random_local_model(s, rng);
    auto result = find_local_model(e);
    REQUIRE(result.feasible);
    auto h = to_hidden_variable_model(s, *result.global);
    CHECK(realizes(h, e).holds);
    CHECK(is_factorizable(h).holds);
    CHECK(is_parameter_independent(h).holds);
  }
}

TEST_CASE("LP verdicts agree with the elimination oracle on small scenarios") {
  std::mt19937_64 rng(515);
  int feasible_seen = 0, infeasible_seen = 0;
  // Fixtures first.
  for (const auto& e : {testing::pr_box(), testing::signalling_box(),
                        testing::product_box(), testing::bell_triangle_model()}) {
    auto sys = local_model_system(e);
    CHECK(find_local_model(e).feasible == testing::oracle_feasible(sys));
  }
  // Random battery: half locally generated (feasible), half arbitrary.
  for (int trial = 0; trial < 14; ++trial) {
    MeasurementScenario s = random_small_scenario(rng);
    auto e = trial % 2 == 0 ? random_local_model(s, rng) : random_model(s, rng);
    auto sys = local_model_system(e);
    bool lp = find_local_model(e).feasible;
    CHECK(lp == testing::oracle_feasible(sys));
    (lp ? feasible_seen : infeasible_seen) += 1;
  }
  CHECK(feasible_seen >= 7);
  CHECK(infeasible_seen >= 1);
}

TEST_CASE("one-space correlation atoms at 0/120/60 admit no joint distribution") {
  // Inner products of coplanar unit vectors at 0, 120, 60 degrees.
  CorrelationTable<Rational> inner;
  inner.set("a", "b", Rational(-1, 2));
  inner.set("b", "c", Rational(1, 2));
  inner.set("a", "c", Rational(1, 2));

  // Constraints E(X_x X_y) = <x, y>: infeasible, certificate verified.
  auto witness = correlation_model_feasible({"a", "b", "c"}, inner);
  REQUIRE_FALSE(witness.feasible);
  CHECK(witness.certificate.size() == 4);  // three pairs + normalization

  // The sign-flipped system E(X_x X_y) = -<x, y> is feasible at these
  // settings; the two readings differ and only the first one witnesses the
  // Bell violation, matching the violated simplified inequality.
  CorrelationTable<Rational> flipped;
  flipped.set("a", "b", Rational(1, 2));
  flipped.set("b", "c", Rational(-1, 2));
  flipped.set("a", "c", Rational(-1, 2));
  auto local = correlation_model_feasible({"a", "b", "c"}, flipped);
  CHECK(local.feasible);
}

TEST_CASE("zero correlations are trivially realizable") {
  CorrelationTable<Rational> t;
  t.set("a", "b", Rational(0));
  t.set("b", "c", Rational(0));
  t.set("a", "c", Rational(0));
  auto result = correlation_model_feasible({"a", "b", "c"}, t);
  REQUIRE(result.feasible);
  Rational total(0);
  for (const auto& w : result.atom_weights) {
    CHECK(w >= 0);
    total += w;
  }
  CHECK(total == Rational(1));
}

TEST_CASE("locality-assumption models always admit local models") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    size_t lambdas = 1 + rng() % 3;
    SampleSpaceFactorization f;
    for (size_t l = 0; l < lambdas; ++l) f.lambda_labels.push_back("l" + std::to_string(l));
    f.setting_labels = {{"m1", "m2"}, {"n1", "n2"}};
    for (int party = 0; party < 2; ++party) {
      std::vector<std::vector<int>> rows;
      for (size_t l = 0; l < lambdas; ++l) {
        rows.push_back({rng() % 2 ? 1 : -1, rng() % 2 ? 1 : -1});
      }
      f.responses.push_back(std::move(rows));
    }
    auto lambda_dist = testing::random_weights(rng, lambdas);
    auto eval = evaluate_locality_assumption(
        f, lambda_dist,
        {testing::random_weights(rng, 2), testing::random_weights(rng, 2)});
    CHECK(is_no_signalling(eval.model).holds);
    CHECK(find_local_model(eval.model).feasible);
  }
}

TEST_CASE("rationalized CHSH singlet model is infeasible") {
  MeasurementScenario s = testing::chsh_scenario({"-1", "1"});
  double w_hi = 0.42677669529663687, w_lo = 0.0732233047033631;
  // Correlations (-s, +s, -s, -s) with s = sqrt(2)/2 across the four
  // contexts: the CHSH facet E11 - E12 + E21 + E22 reaches -2*sqrt(2).
  std::vector<std::vector<double>> same_weight{{w_lo, w_hi}, {w_hi, w_lo},
                                               {w_lo, w_hi}, {w_lo, w_hi}};
  std::vector<Distribution<DoubleSemiring>> table;
  for (size_t c = 0; c < s.cover().size(); ++c) {
    Distribution<DoubleSemiring>::Weights w;
    auto sections = s.sections(s.cover()[c]);
    w.emplace(sections[0], same_weight[c][0]);
    w.emplace(sections[1], same_weight[c][1]);
    w.emplace(sections[2], same_weight[c][1]);
    w.emplace(sections[3], same_weight[c][0]);
    table.push_back(Distribution<DoubleSemiring>::make(s, s.cover()[c], std::move(w)));
  }
  auto e = EmpiricalModel<DoubleSemiring>::make(s, std::move(table));
  auto rationalized = rationalize_model(e, BigInt(1000000));
  CHECK(rationalized.max_perturbation < 1e-10);
  auto result = find_local_model(rationalized.model);
  REQUIRE_FALSE(result.feasible);
  CHECK(certifies_infeasible(local_model_system(rationalized.model), result.certificate));
}
