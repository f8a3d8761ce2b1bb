#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sheafctx/distribution.hpp"

namespace sheafctx {

/// Family {e_C} of normalized distributions, one per cover context.
template <class S>
class EmpiricalModel {
 public:
  static EmpiricalModel make(MeasurementScenario scenario,
                             std::vector<Distribution<S>> table) {
    if (table.size() != scenario.cover().size()) {
      fail(ErrorCode::ScenarioMismatch, "one distribution per cover context required");
    }
    for (size_t i = 0; i < table.size(); ++i) {
      if (table[i].context() != scenario.cover()[i]) {
        fail(ErrorCode::ScenarioMismatch, "table entry context differs from cover context");
      }
    }
    return EmpiricalModel(std::move(scenario), std::move(table));
  }

  const MeasurementScenario& scenario() const { return scenario_; }
  const std::vector<Distribution<S>>& table() const { return table_; }
  const Distribution<S>& at(size_t cover_index) const { return table_.at(cover_index); }

 private:
  EmpiricalModel(MeasurementScenario scenario, std::vector<Distribution<S>> table)
      : scenario_(std::move(scenario)), table_(std::move(table)) {}
  MeasurementScenario scenario_;
  std::vector<Distribution<S>> table_;
};

/// Hidden-variable model: a normalized weight over Λ and a full family
/// h_C^λ of context distributions for every λ.
template <class S>
class HiddenVariableModel {
 public:
  using Value = typename S::Value;

  static HiddenVariableModel make(MeasurementScenario scenario,
                                  std::vector<std::string> lambda_labels,
                                  std::vector<Value> lambda_weights,
                                  std::vector<std::vector<Distribution<S>>> per_lambda) {
    if (lambda_labels.empty() || lambda_labels.size() != lambda_weights.size() ||
        per_lambda.size() != lambda_labels.size()) {
      fail(ErrorCode::ScenarioMismatch, "hidden-variable table shape mismatch");
    }
    Value total = S::zero();
    for (const auto& w : lambda_weights) total = S::add(total, w);
    if (!S::eq(total, S::one())) {
      fail(ErrorCode::NotNormalized, "hidden-variable weights are not normalized");
    }
    for (const auto& row : per_lambda) {
      if (row.size() != scenario.cover().size()) {
        fail(ErrorCode::ScenarioMismatch, "per-lambda table missing a cover context");
      }
      for (size_t c = 0; c < row.size(); ++c) {
        if (row[c].context() != scenario.cover()[c]) {
          fail(ErrorCode::ScenarioMismatch, "per-lambda entry context mismatch");
        }
      }
    }
    return HiddenVariableModel(std::move(scenario), std::move(lambda_labels),
                               std::move(lambda_weights), std::move(per_lambda));
  }

  const MeasurementScenario& scenario() const { return scenario_; }
  const std::vector<std::string>& lambda_labels() const { return lambda_labels_; }
  const std::vector<Value>& lambda_weights() const { return lambda_weights_; }
  const Distribution<S>& at(size_t lambda, size_t cover_index) const {
    return per_lambda_.at(lambda).at(cover_index);
  }

 private:
  HiddenVariableModel(MeasurementScenario scenario, std::vector<std::string> lambda_labels,
                      std::vector<Value> lambda_weights,
                      std::vector<std::vector<Distribution<S>>> per_lambda)
      : scenario_(std::move(scenario)),
        lambda_labels_(std::move(lambda_labels)),
        lambda_weights_(std::move(lambda_weights)),
        per_lambda_(std::move(per_lambda)) {}

  MeasurementScenario scenario_;
  std::vector<std::string> lambda_labels_;
  std::vector<Value> lambda_weights_;
  std::vector<std::vector<Distribution<S>>> per_lambda_;
};

/// Witness for a failed overlap-compatibility check: the lexicographically
/// first offending (C, C', section) with both marginal values.
template <class S>
struct SignallingWitness {
  size_t context_a = 0;
  size_t context_b = 0;
  std::optional<size_t> lambda;  // set for per-λ (parameter independence) failures
  Assignment section;
  typename S::Value left{};
  typename S::Value right{};
};

template <class S>
struct CompatibilityVerdict {
  bool holds = true;
  std::optional<SignallingWitness<S>> witness;

  explicit operator bool() const { return holds; }
};

template <class S>
std::string describe_witness(const MeasurementScenario& scenario,
                             const SignallingWitness<S>& w) {
  std::ostringstream os;
  os << "contexts {" << describe_context(scenario, scenario.cover()[w.context_a])
     << "} vs {" << describe_context(scenario, scenario.cover()[w.context_b])
     << "} disagree at [" << describe_assignment(scenario, w.section)
     << "]: " << S::to_string(w.left) << " != " << S::to_string(w.right);
  if (w.lambda) os << " (lambda index " << *w.lambda << ")";
  return os.str();
}

namespace detail {

/// Overlap agreement of two context distributions; reports the first
/// offending section in canonical order.
template <class S>
std::optional<std::pair<Assignment, std::pair<typename S::Value, typename S::Value>>>
first_overlap_disagreement(const MeasurementScenario& scenario,
                           const Distribution<S>& left, const Distribution<S>& right) {
  Context overlap = left.context().intersect(right.context());
  Distribution<S> ml = marginal(scenario, left, overlap);
  Distribution<S> mr = marginal(scenario, right, overlap);
  for (const auto& s : scenario.sections(overlap)) {
    auto lv = ml.weight(s);
    auto rv = mr.weight(s);
    if (!S::eq(lv, rv)) return std::make_pair(s, std::make_pair(lv, rv));
  }
  return std::nullopt;
}

}  // namespace detail

/// No-signalling: all pairs of cover contexts agree on their overlap.
template <class S>
CompatibilityVerdict<S> is_no_signalling(const EmpiricalModel<S>& e) {
  const auto& cover = e.scenario().cover();
  for (size_t i = 0; i < cover.size(); ++i) {
    for (size_t j = i + 1; j < cover.size(); ++j) {
      auto bad = detail::first_overlap_disagreement(e.scenario(), e.at(i), e.at(j));
      if (bad) {
        CompatibilityVerdict<S> v;
        v.holds = false;
        v.witness = SignallingWitness<S>{i, j, std::nullopt, bad->first,
                                         bad->second.first, bad->second.second};
        return v;
      }
    }
  }
  return {};
}

/// Parameter independence: overlap agreement per hidden variable.
template <class S>
CompatibilityVerdict<S> is_parameter_independent(const HiddenVariableModel<S>& h) {
  const auto& cover = h.scenario().cover();
  for (size_t l = 0; l < h.lambda_labels().size(); ++l) {
    for (size_t i = 0; i < cover.size(); ++i) {
      for (size_t j = i + 1; j < cover.size(); ++j) {
        auto bad = detail::first_overlap_disagreement(h.scenario(), h.at(l, i), h.at(l, j));
        if (bad) {
          CompatibilityVerdict<S> v;
          v.holds = false;
          v.witness = SignallingWitness<S>{i, j, l, bad->first,
                                           bad->second.first, bad->second.second};
          return v;
        }
      }
    }
  }
  return {};
}

/// Averaging identity e_C(s) = Σ_λ h_C^λ(s)·h_Λ(λ) on every cover context.
template <class S>
CompatibilityVerdict<S> realizes(const HiddenVariableModel<S>& h,
                                 const EmpiricalModel<S>& e) {
  if (h.scenario() != e.scenario()) {
    fail(ErrorCode::ScenarioMismatch, "hidden-variable and empirical scenarios differ");
  }
  const auto& cover = e.scenario().cover();
  for (size_t c = 0; c < cover.size(); ++c) {
    for (const auto& s : e.scenario().sections(cover[c])) {
      typename S::Value averaged = S::zero();
      for (size_t l = 0; l < h.lambda_labels().size(); ++l) {
        averaged = S::add(averaged, S::mul(h.at(l, c).weight(s), h.lambda_weights()[l]));
      }
      if (!S::eq(averaged, e.at(c).weight(s))) {
        CompatibilityVerdict<S> v;
        v.holds = false;
        v.witness = SignallingWitness<S>{c, c, std::nullopt, s, averaged, e.at(c).weight(s)};
        return v;
      }
    }
  }
  return {};
}

/// Factorizability: each h_C^λ equals the product of its own
/// single-measurement marginals.
template <class S>
CompatibilityVerdict<S> is_factorizable(const HiddenVariableModel<S>& h) {
  const auto& cover = h.scenario().cover();
  for (size_t l = 0; l < h.lambda_labels().size(); ++l) {
    for (size_t c = 0; c < cover.size(); ++c) {
      const Distribution<S>& d = h.at(l, c);
      for (const auto& s : h.scenario().sections(cover[c])) {
        typename S::Value factored = S::one();
        for (int m : cover[c].members) {
          Context single{std::vector<int>{m}};
          factored = S::mul(factored,
                            marginal(h.scenario(), d, single).weight(restrict_to(s, single)));
        }
        if (!S::eq(factored, d.weight(s))) {
          CompatibilityVerdict<S> v;
          v.holds = false;
          v.witness = SignallingWitness<S>{c, c, l, s, factored, d.weight(s)};
          return v;
        }
      }
    }
  }
  return {};
}

namespace detail {

inline bool correlation_in_range(const Rational& v) {
  return v >= Rational(-1) && v <= Rational(1);
}
inline bool correlation_in_range(double v) { return std::abs(v) <= 1.0 + kEta; }

}  // namespace detail

/// Symmetric table of pairwise correlation values E(X_x X_y) in [-1, 1],
/// keyed by unordered label pairs.
template <class Value>
class CorrelationTable {
 public:
  void set(const std::string& a, const std::string& b, Value v) {
    if (!detail::correlation_in_range(v)) {
      fail(ErrorCode::InvalidState,
           "correlation for (" + a + ", " + b + ") is outside [-1, 1]");
    }
    entries_[key(a, b)] = v;
  }
  bool has(const std::string& a, const std::string& b) const {
    return entries_.count(key(a, b)) > 0;
  }
  const Value& at(const std::string& a, const std::string& b) const {
    auto it = entries_.find(key(a, b));
    if (it == entries_.end()) {
      fail(ErrorCode::MissingPair, "no correlation for pair (" + a + ", " + b + ")");
    }
    return it->second;
  }
  const std::map<std::pair<std::string, std::string>, Value>& entries() const {
    return entries_;
  }

 private:
  static std::pair<std::string, std::string> key(const std::string& a, const std::string& b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  std::map<std::pair<std::string, std::string>, Value> entries_;
};

/// Bell inequality |E(ab) - E(cb)| <= 1 - E(ac), evaluated on a correlation
/// table. `rhs_cross` carries the cross-particle variant 1 + E(ac) of the
/// right-hand side; the verdict uses `rhs`.
template <class Value>
struct BellVerdict {
  Value lhs{};
  Value rhs{};
  Value rhs_cross{};
  bool violated = false;
};

template <class Value>
BellVerdict<Value> check_bell_inequality(const CorrelationTable<Value>& t,
                                         const std::string& a, const std::string& b,
                                         const std::string& c) {
  BellVerdict<Value> v;
  Value diff = t.at(a, b) - t.at(c, b);
  v.lhs = diff < Value(0) ? Value(-diff) : diff;
  v.rhs = Value(1) - t.at(a, c);
  v.rhs_cross = Value(1) + t.at(a, c);
  v.violated = v.lhs > v.rhs;
  return v;
}

}  // namespace sheafctx
