#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <utility>

#include "sheafctx/scenario.hpp"
#include "sheafctx/semiring.hpp"

namespace sheafctx {

/// Finite-support semiring-valued distribution on the sections of one
/// context, normalized (semiring sum of the weights is the semiring one).
/// Zero weights are dropped, so iteration order over the support is the
/// canonical assignment order.
template <class S>
class Distribution {
 public:
  using Value = typename S::Value;
  using Weights = std::map<Assignment, Value>;

  /// Validates support membership and normalization, drops zeros.
  static Distribution make(const MeasurementScenario& scenario, Context context,
                           Weights weights) {
    Distribution d;
    d.context_ = std::move(context);
    Value total = S::zero();
    for (auto& [s, w] : weights) {
      if (s.domain() != d.context_) {
        fail(ErrorCode::ScenarioMismatch, "weighted assignment outside the context");
      }
      for (size_t i = 0; i < s.members.size(); ++i) {
        if (s.outcomes[i] < 0 || s.outcomes[i] >= scenario.outcome_count()) {
          fail(ErrorCode::UnknownLabel, "assignment outcome out of range");
        }
      }
      if (!S::valid_weight(w)) {
        fail(ErrorCode::NotNormalized, "negative weight " + S::to_string(w));
      }
      total = S::add(total, w);
      if (!S::is_zero(w)) d.weights_.emplace(s, w);
    }
    if (!S::eq(total, S::one())) {
      fail(ErrorCode::NotNormalized,
           "distribution weights sum to " + S::to_string(total));
    }
    return d;
  }

  /// Point mass at one section.
  static Distribution point(const MeasurementScenario& scenario, const Assignment& s) {
    Weights w;
    w.emplace(s, S::one());
    return make(scenario, s.domain(), std::move(w));
  }

  /// Uniform distribution over all sections of the context. Rational
  /// carrier only has exact 1/n weights; not meaningful for booleans
  /// (every section possible), which is still well-formed.
  static Distribution uniform(const MeasurementScenario& scenario, const Context& c);

  const Context& context() const { return context_; }
  const Weights& support() const { return weights_; }

  Value weight(const Assignment& s) const {
    auto it = weights_.find(s);
    return it == weights_.end() ? S::zero() : it->second;
  }

  bool operator==(const Distribution& other) const {
    if (context_ != other.context_) return false;
    // Compare via semiring equality so double carriers use the tolerance.
    for (const auto& [s, w] : weights_) {
      if (!S::eq(w, other.weight(s))) return false;
    }
    for (const auto& [s, w] : other.weights_) {
      if (!S::eq(w, weight(s))) return false;
    }
    return true;
  }

 private:
  Context context_;
  Weights weights_;
};

template <>
inline Distribution<RationalSemiring> Distribution<RationalSemiring>::uniform(
    const MeasurementScenario& scenario, const Context& c) {
  auto all = scenario.sections(c);
  Weights w;
  Rational share(1, static_cast<unsigned>(all.size()));
  for (const auto& s : all) w.emplace(s, share);
  return make(scenario, c, std::move(w));
}

template <>
inline Distribution<DoubleSemiring> Distribution<DoubleSemiring>::uniform(
    const MeasurementScenario& scenario, const Context& c) {
  auto all = scenario.sections(c);
  Weights w;
  for (const auto& s : all) w.emplace(s, 1.0 / static_cast<double>(all.size()));
  return make(scenario, c, std::move(w));
}

// Possibilistic "uniform": every section possible.
template <>
inline Distribution<BooleanSemiring> Distribution<BooleanSemiring>::uniform(
    const MeasurementScenario& scenario, const Context& c) {
  Weights w;
  for (const auto& s : scenario.sections(c)) w.emplace(s, true);
  return make(scenario, c, std::move(w));
}

/// Marginal d|_U: the weight of s sums d over every section restricting to
/// s. Preserves normalization exactly in the rational carrier.
template <class S>
Distribution<S> marginal(const MeasurementScenario& scenario,
                         const Distribution<S>& d, const Context& target) {
  if (!d.context().contains(target)) {
    fail(ErrorCode::NotASubcontext, "marginal target is not a subcontext");
  }
  typename Distribution<S>::Weights out;
  for (const auto& [s, w] : d.support()) {
    Assignment restricted = restrict_to(s, target);
    auto [it, fresh] = out.emplace(restricted, w);
    if (!fresh) it->second = S::add(it->second, w);
  }
  return Distribution<S>::make(scenario, target, std::move(out));
}

/// Push-forward along an explicit map on sections (the distribution functor
/// on morphisms). The map must cover the support; PartialMap otherwise.
template <class S>
Distribution<S> push_forward(const MeasurementScenario& scenario,
                             const std::map<Assignment, Assignment>& f,
                             const Context& target, const Distribution<S>& d) {
  typename Distribution<S>::Weights out;
  for (const auto& [s, w] : d.support()) {
    auto it = f.find(s);
    if (it == f.end()) {
      fail(ErrorCode::PartialMap, "section map undefined on a supported section");
    }
    if (it->second.domain() != target) {
      fail(ErrorCode::PartialMap, "section map lands outside the target context");
    }
    auto [slot, fresh] = out.emplace(it->second, w);
    if (!fresh) slot->second = S::add(slot->second, w);
  }
  return Distribution<S>::make(scenario, target, std::move(out));
}

/// Product distribution on the disjoint union of two contexts; the glued
/// assignment weight is the semiring product of the component weights.
template <class S>
Distribution<S> product(const MeasurementScenario& scenario,
                        const Distribution<S>& d1, const Distribution<S>& d2) {
  if (!d1.context().intersect(d2.context()).empty()) {
    fail(ErrorCode::OverlappingContexts, "product requires disjoint contexts");
  }
  Context glued;
  std::merge(d1.context().members.begin(), d1.context().members.end(),
             d2.context().members.begin(), d2.context().members.end(),
             std::back_inserter(glued.members));
  typename Distribution<S>::Weights out;
  for (const auto& [s1, w1] : d1.support()) {
    for (const auto& [s2, w2] : d2.support()) {
      Assignment glued_s;
      glued_s.members = glued.members;
      glued_s.outcomes.reserve(glued.members.size());
      size_t i = 0, j = 0;
      for (int m : glued.members) {
        if (i < s1.members.size() && s1.members[i] == m) {
          glued_s.outcomes.push_back(s1.outcomes[i++]);
        } else {
          glued_s.outcomes.push_back(s2.outcomes[j++]);
        }
      }
      out.emplace(std::move(glued_s), S::mul(w1, w2));
    }
  }
  return Distribution<S>::make(scenario, glued, std::move(out));
}

}  // namespace sheafctx
