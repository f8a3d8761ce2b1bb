#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "sheafctx/error.hpp"

namespace sheafctx {

/// A set of jointly performable measurements, as sorted indices into the
/// owning scenario's measurement list. The empty context is allowed here
/// (it is the terminal object of the restriction poset) but may not appear
/// in a cover.
struct Context {
  std::vector<int> members;

  auto operator<=>(const Context&) const = default;

  bool contains(const Context& other) const;
  bool strictly_contains(const Context& other) const;
  Context intersect(const Context& other) const;
  bool empty() const { return members.empty(); }
  int size() const { return static_cast<int>(members.size()); }
};

/// A section of the event sheaf: one outcome index per context member,
/// aligned with the sorted member list.
struct Assignment {
  std::vector<int> members;
  std::vector<int> outcomes;

  auto operator<=>(const Assignment&) const = default;

  Context domain() const { return Context{members}; }
  /// Outcome assigned to a measurement, which must be in the domain.
  int outcome_of(int measurement) const;
};

/// Restriction map of the event sheaf: drops every measurement outside
/// `sub`. Throws NotASubcontext when `sub` is not contained in the domain.
Assignment restrict_to(const Assignment& s, const Context& sub);

/// Validated measurement scenario (X, O, M): ordered measurement and
/// outcome labels plus an antichain cover of maximal contexts whose union
/// is X. All canonical enumeration orders derive from the label orders
/// given at construction.
class MeasurementScenario {
 public:
  static MeasurementScenario validate(std::vector<std::string> measurements,
                                      std::vector<std::string> outcomes,
                                      std::vector<std::vector<std::string>> cover);

  const std::vector<std::string>& measurements() const { return measurements_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<Context>& cover() const { return cover_; }

  int measurement_count() const { return static_cast<int>(measurements_.size()); }
  int outcome_count() const { return static_cast<int>(outcomes_.size()); }

  int measurement_index(const std::string& label) const;
  const std::string& measurement_label(int index) const { return measurements_.at(index); }
  const std::string& outcome_label(int index) const { return outcomes_.at(index); }

  /// Context from labels; sorts, rejects duplicates and unknown labels.
  Context context_of(const std::vector<std::string>& labels) const;
  std::vector<std::string> context_labels(const Context& c) const;

  /// The full context containing every measurement.
  Context full_context() const;

  /// All |O|^|U| assignments on U, lexicographic in measurement order then
  /// outcome order. The empty context yields the single empty assignment.
  std::vector<Assignment> sections(const Context& u) const;

  bool operator==(const MeasurementScenario& other) const = default;

 private:
  MeasurementScenario() = default;

  std::vector<std::string> measurements_;
  std::vector<std::string> outcomes_;
  std::vector<Context> cover_;
  std::map<std::string, int> measurement_index_;
};

/// Readable "m1=o1 m2=o2" rendering for witnesses and reports.
std::string describe_assignment(const MeasurementScenario& scenario, const Assignment& s);
std::string describe_context(const MeasurementScenario& scenario, const Context& c);

}  // namespace sheafctx
