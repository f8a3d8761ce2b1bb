#pragma once

// Programmatic copies of the shipped box fixtures.

#include "sheafctx/empirical.hpp"

namespace sheafctx::testing {

inline MeasurementScenario chsh_scenario(const std::vector<std::string>& outcomes = {"0",
                                                                                     "1"}) {
  return MeasurementScenario::validate(
      {"a1", "a2", "b1", "b2"}, outcomes,
      {{"a1", "b1"}, {"a1", "b2"}, {"a2", "b1"}, {"a2", "b2"}});
}

// Weight 1/2 on equal outcomes except the (a2, b2) context, which weights
// the unequal ones.
inline EmpiricalModel<RationalSemiring> pr_box() {
  MeasurementScenario s = chsh_scenario();
  std::vector<Distribution<RationalSemiring>> table;
  for (size_t c = 0; c < s.cover().size(); ++c) {
    bool anti = c == 3;
    Distribution<RationalSemiring>::Weights w;
    for (const auto& sec : s.sections(s.cover()[c])) {
      bool equal = sec.outcomes[0] == sec.outcomes[1];
      if (equal != anti) w.emplace(sec, Rational(1, 2));
    }
    table.push_back(Distribution<RationalSemiring>::make(s, s.cover()[c], std::move(w)));
  }
  return EmpiricalModel<RationalSemiring>::make(s, std::move(table));
}

// Deterministic (0,0) under (a1,b1) but (1,1) under (a1,b2): signals in b.
inline EmpiricalModel<RationalSemiring> signalling_box() {
  MeasurementScenario s = chsh_scenario();
  std::vector<Distribution<RationalSemiring>> table;
  table.push_back(Distribution<RationalSemiring>::point(s, s.sections(s.cover()[0])[0]));
  table.push_back(Distribution<RationalSemiring>::point(s, s.sections(s.cover()[1])[3]));
  table.push_back(Distribution<RationalSemiring>::uniform(s, s.cover()[2]));
  table.push_back(Distribution<RationalSemiring>::uniform(s, s.cover()[3]));
  return EmpiricalModel<RationalSemiring>::make(s, std::move(table));
}

// Product of fixed single-measurement distributions.
inline EmpiricalModel<RationalSemiring> product_box() {
  MeasurementScenario s = chsh_scenario();
  auto single = [&](const std::string& label, const Rational& p_zero) {
    Context c = s.context_of({label});
    Distribution<RationalSemiring>::Weights w;
    if (!p_zero.is_zero()) w.emplace(s.sections(c)[0], p_zero);
    if (p_zero != 1) w.emplace(s.sections(c)[1], Rational(1) - p_zero);
    return Distribution<RationalSemiring>::make(s, c, std::move(w));
  };
  std::map<std::string, Distribution<RationalSemiring>> singles;
  singles.emplace("a1", single("a1", Rational(1, 2)));
  singles.emplace("a2", single("a2", Rational(1, 3)));
  singles.emplace("b1", single("b1", Rational(1, 4)));
  singles.emplace("b2", single("b2", Rational(1)));
  std::vector<Distribution<RationalSemiring>> table;
  for (const auto& c : s.cover()) {
    auto labels = s.context_labels(c);
    table.push_back(product(s, singles.at(labels[0]), singles.at(labels[1])));
  }
  return EmpiricalModel<RationalSemiring>::make(s, std::move(table));
}

// Pairwise-correlation model at coplanar settings 0, 120, 60 degrees:
// E(a,b) = -1/2, E(b,c) = E(a,c) = 1/2 with uniform marginals.
inline EmpiricalModel<RationalSemiring> bell_triangle_model() {
  MeasurementScenario s = MeasurementScenario::validate(
      {"a", "b", "c"}, {"-1", "1"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  auto pair_dist = [&](size_t cover_index, const Rational& correlation) {
    const Context& c = s.cover()[cover_index];
    Distribution<RationalSemiring>::Weights w;
    for (const auto& sec : s.sections(c)) {
      int prod = (sec.outcomes[0] == sec.outcomes[1]) ? 1 : -1;
      w.emplace(sec, (Rational(1) + Rational(prod) * correlation) / 4);
    }
    return Distribution<RationalSemiring>::make(s, c, std::move(w));
  };
  std::vector<Distribution<RationalSemiring>> table;
  table.push_back(pair_dist(0, Rational(-1, 2)));
  table.push_back(pair_dist(1, Rational(1, 2)));
  table.push_back(pair_dist(2, Rational(1, 2)));
  return EmpiricalModel<RationalSemiring>::make(s, std::move(table));
}

}  // namespace sheafctx::testing
