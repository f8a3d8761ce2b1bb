#include "sheafctx/scenario.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sheafctx {

bool Context::contains(const Context& other) const {
  return std::includes(members.begin(), members.end(),
                       other.members.begin(), other.members.end());
}

bool Context::strictly_contains(const Context& other) const {
  return members.size() > other.members.size() && contains(other);
}

Context Context::intersect(const Context& other) const {
  Context out;
  std::set_intersection(members.begin(), members.end(),
                        other.members.begin(), other.members.end(),
                        std::back_inserter(out.members));
  return out;
}

int Assignment::outcome_of(int measurement) const {
  auto it = std::lower_bound(members.begin(), members.end(), measurement);
  if (it == members.end() || *it != measurement) {
    fail(ErrorCode::NotASubcontext, "measurement not in assignment domain");
  }
  return outcomes[static_cast<size_t>(it - members.begin())];
}

Assignment restrict_to(const Assignment& s, const Context& sub) {
  Assignment out;
  out.members.reserve(sub.members.size());
  out.outcomes.reserve(sub.members.size());
  size_t i = 0;
  for (int m : sub.members) {
    while (i < s.members.size() && s.members[i] < m) ++i;
    if (i == s.members.size() || s.members[i] != m) {
      fail(ErrorCode::NotASubcontext, "restriction target is not a subcontext");
    }
    out.members.push_back(m);
    out.outcomes.push_back(s.outcomes[i]);
  }
  return out;
}

MeasurementScenario MeasurementScenario::validate(
    std::vector<std::string> measurements, std::vector<std::string> outcomes,
    std::vector<std::vector<std::string>> cover) {
  MeasurementScenario s;
  if (measurements.empty()) fail(ErrorCode::CoverIncomplete, "no measurements");
  if (outcomes.empty()) fail(ErrorCode::CoverIncomplete, "no outcomes");

  s.measurements_ = std::move(measurements);
  s.outcomes_ = std::move(outcomes);
  for (size_t i = 0; i < s.measurements_.size(); ++i) {
    auto [it, fresh] = s.measurement_index_.emplace(s.measurements_[i], static_cast<int>(i));
    if (!fresh) fail(ErrorCode::UnknownLabel, "duplicate measurement label '" + s.measurements_[i] + "'");
  }
  {
    std::set<std::string> seen(s.outcomes_.begin(), s.outcomes_.end());
    if (seen.size() != s.outcomes_.size()) {
      fail(ErrorCode::UnknownLabel, "duplicate outcome label");
    }
  }

  if (cover.empty()) fail(ErrorCode::CoverIncomplete, "empty cover");
  for (const auto& raw : cover) {
    if (raw.empty()) fail(ErrorCode::EmptyContext, "cover contains an empty context");
    s.cover_.push_back(s.context_of(raw));
  }
  for (size_t i = 0; i < s.cover_.size(); ++i) {
    for (size_t j = 0; j < s.cover_.size(); ++j) {
      if (i == j) continue;
      if (s.cover_[j].contains(s.cover_[i]) && s.cover_[i] != s.cover_[j]) {
        fail(ErrorCode::AntichainViolation,
             "context {" + describe_context(s, s.cover_[i]) + "} is strictly inside {" +
                 describe_context(s, s.cover_[j]) + "}");
      }
      if (i < j && s.cover_[i] == s.cover_[j]) {
        fail(ErrorCode::AntichainViolation, "duplicate cover context");
      }
    }
  }
  std::set<int> covered;
  for (const auto& c : s.cover_) covered.insert(c.members.begin(), c.members.end());
  if (covered.size() != s.measurements_.size()) {
    for (int m = 0; m < s.measurement_count(); ++m) {
      if (!covered.count(m)) {
        fail(ErrorCode::CoverIncomplete,
             "measurement '" + s.measurements_[m] + "' not covered");
      }
    }
  }
  return s;
}

int MeasurementScenario::measurement_index(const std::string& label) const {
  auto it = measurement_index_.find(label);
  if (it == measurement_index_.end()) {
    fail(ErrorCode::UnknownLabel, "unknown measurement '" + label + "'");
  }
  return it->second;
}

Context MeasurementScenario::context_of(const std::vector<std::string>& labels) const {
  Context c;
  for (const auto& label : labels) c.members.push_back(measurement_index(label));
  std::sort(c.members.begin(), c.members.end());
  if (std::adjacent_find(c.members.begin(), c.members.end()) != c.members.end()) {
    fail(ErrorCode::UnknownLabel, "repeated measurement in context");
  }
  return c;
}

std::vector<std::string> MeasurementScenario::context_labels(const Context& c) const {
  std::vector<std::string> out;
  out.reserve(c.members.size());
  for (int m : c.members) out.push_back(measurement_label(m));
  return out;
}

Context MeasurementScenario::full_context() const {
  Context c;
  c.members.resize(measurements_.size());
  for (size_t i = 0; i < measurements_.size(); ++i) c.members[i] = static_cast<int>(i);
  return c;
}

std::vector<Assignment> MeasurementScenario::sections(const Context& u) const {
  for (int m : u.members) {
    if (m < 0 || m >= measurement_count()) {
      fail(ErrorCode::UnknownLabel, "context member out of range");
    }
  }
  const int n = u.size();
  const int k = outcome_count();
  std::vector<Assignment> out;
  Assignment current;
  current.members = u.members;
  current.outcomes.assign(n, 0);
  // Odometer with the last position fastest: lexicographic order.
  while (true) {
    out.push_back(current);
    int pos = n - 1;
    while (pos >= 0 && current.outcomes[pos] == k - 1) {
      current.outcomes[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++current.outcomes[pos];
  }
  return out;
}

std::string describe_assignment(const MeasurementScenario& scenario, const Assignment& s) {
  std::ostringstream os;
  for (size_t i = 0; i < s.members.size(); ++i) {
    if (i) os << " ";
    os << scenario.measurement_label(s.members[i]) << "="
       << scenario.outcome_label(s.outcomes[i]);
  }
  if (s.members.empty()) os << "<empty>";
  return os.str();
}

std::string describe_context(const MeasurementScenario& scenario, const Context& c) {
  std::ostringstream os;
  for (size_t i = 0; i < c.members.size(); ++i) {
    if (i) os << ",";
    os << scenario.measurement_label(c.members[i]);
  }
  if (c.members.empty()) os << "<empty>";
  return os.str();
}

}  // namespace sheafctx
