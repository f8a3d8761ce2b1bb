#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sheafctx/empirical.hpp"
#include "sheafctx/quantum.hpp"
#include "sheafctx/rational.hpp"

namespace sheafctx {

/// Point of R^{1,3} with exact rational coordinates, signature (-,+,+,+).
struct SpacetimePoint {
  std::array<Rational, 4> x{};

  bool operator==(const SpacetimePoint&) const = default;
  SpacetimePoint operator+(const SpacetimePoint& o) const;
  SpacetimePoint operator-(const SpacetimePoint& o) const;
};

/// x0^2 - (x1^2 + x2^2 + x3^2), exact.
Rational minkowski_sq(const SpacetimePoint& p);

/// Open double cone (b + V+) ∩ (c - V+); the apex must sit in the open
/// forward lightcone of the base.
struct DoubleCone {
  SpacetimePoint base;
  SpacetimePoint apex;

  static DoubleCone make(SpacetimePoint base, SpacetimePoint apex);
};

/// Closed-cone membership, so boundary sites belong to the region.
bool cone_contains(const DoubleCone& cone, const SpacetimePoint& p);

/// Geometric containment: inner ⊆ outer, decided on the endpoints.
bool cone_subset(const DoubleCone& inner, const DoubleCone& outer);

struct SpacelikeVerdict {
  bool separated = true;
  std::optional<std::pair<size_t, size_t>> witness;  // indices of the offending pair

  explicit operator bool() const { return separated; }
};

/// All cross pairs have negative Minkowski square (exact comparison); on
/// failure returns the first offending index pair.
SpacelikeVerdict spacelike_separated(const std::vector<SpacetimePoint>& s1,
                                     const std::vector<SpacetimePoint>& s2);

/// 1+1-dimensional strict spacelike separation via lightcone coordinates
/// u = x0 - x1, v = x0 + x1, in which a double cone is exactly the box
/// (u(b), u(c)) x (v(b), v(c)): true iff the u- and v-intervals are
/// disjoint with margin > 2ε and in opposite orders.
bool strictly_spacelike_separated(const DoubleCone& o1, const DoubleCone& o2,
                                  const Rational& epsilon);

/// Lightcone box of a 1+1D cone: {u_min, u_max, v_min, v_max}.
std::array<Rational, 4> lightcone_box(const DoubleCone& cone);

struct LatticeSite {
  std::string id;
  SpacetimePoint point;
  int local_dim = 2;
};

/// Finite lattice local net: sites with rational coordinates, a global
/// state on the tensor product over all sites in site-id order, and the
/// region map sending a double cone to the sites it contains (closed
/// inequalities). A(O) is the full matrix factor on those sites.
class LatticeNet {
 public:
  static LatticeNet make(std::vector<LatticeSite> sites, QuantumState global_state);

  const std::vector<LatticeSite>& sites() const { return sites_; }
  const QuantumState& state() const { return state_; }
  std::vector<int> factor_dims() const;
  long total_dim() const;

  /// Sorted indices of the sites inside the cone.
  std::vector<int> region_sites(const DoubleCone& cone) const;

  /// Operator on the listed sites' joint factor, embedded into the full
  /// tensor product.
  CMatrix embed(const CMatrix& op, const std::vector<int>& site_indices) const;

  /// σ1, σ2, σ3 of one site, embedded globally.
  std::vector<CMatrix> site_generators(int site) const;

 private:
  explicit LatticeNet(QuantumState state) : state_(std::move(state)) {}
  std::vector<LatticeSite> sites_;
  QuantumState state_;
};

struct NetAxiomReport {
  bool isotony_ok = true;
  int isotony_pairs = 0;
  std::vector<std::string> isotony_failures;

  bool microcausality_ok = true;
  int microcausality_pairs = 0;
  std::vector<std::string> microcausality_failures;

  enum class Covariance { Ok, Failed, NotApplicable };
  Covariance covariance = Covariance::NotApplicable;
  int covariance_translations = 0;
  std::vector<std::string> covariance_failures;

  bool all_ok() const {
    return isotony_ok && microcausality_ok && covariance != Covariance::Failed;
  }
};

/// Isotony (site-set inclusion under geometric containment), microcausality
/// (exactly vanishing commutators of single-site generators across
/// spacelike-separated cones), and translation covariance (site-permuting
/// lattice translations carry region site sets onto each other).
NetAxiomReport check_net_axioms(const LatticeNet& net, const std::vector<DoubleCone>& cones);

struct SchliederResult {
  bool nonzero = false;
  int dimension = 0;
};

/// Dimension of range(e) ∩ range(f) for projections e, f on the factors of
/// two disjoint site sets, embedded in the full net space; computed as the
/// numerical kernel of (I - ê) + (I - f̂) with threshold 1e-8.
SchliederResult schlieder_check(const LatticeNet& net, const std::vector<int>& sites1,
                                const std::vector<int>& sites2, const CMatrix& e,
                                const CMatrix& f);

struct SplitResult {
  bool ok = false;
  std::vector<int> factor_sites;  // sites of the interpolating type I factor
  double max_commutator = 0.0;
};

/// Interpolating factor M with A(O1) ⊆ M ⊆ A(O2)', realized on the
/// complement of O2's sites and verified by generator commutation.
SplitResult split_check(const LatticeNet& net, const DoubleCone& o1, const DoubleCone& o2);

struct LocalStateResult {
  bool ok = false;
  double max_deviation = 0.0;
  std::string detail;
};

/// Local-state map T = (φ on A(O1)'s factor) ⊗ id: verifies unitality,
/// T(X) = φ(X) I on A(O1), and the module identity T(AB) = T(A)B for B
/// supported outside O2, all within 1e-10. Requires sites(O1) ⊆ sites(O2).
LocalStateResult local_state_check(const LatticeNet& net, const DoubleCone& o1,
                                   const DoubleCone& o2, const QuantumState& phi);

/// Region of the spacetime sheaf: a double cone plus the coplanar spin
/// settings (degrees) measured on the region's first site.
struct SheafRegion {
  std::string id;
  DoubleCone cone;
  std::vector<double> setting_angles_deg;
};

struct SheafEntry {
  std::vector<size_t> region_tuple;  // indices into the region list
  EmpiricalModel<DoubleSemiring> model;
  CompatibilityVerdict<DoubleSemiring> no_signalling;
};

struct SpacetimeSheafResult {
  std::vector<SheafEntry> entries;
  bool all_no_signalling = true;
};

/// The composite sheaf at desk scale: for every nonempty tuple of regions
/// (pairwise strictly separated at lattice level: disjoint site sets and
/// exact spacelike separation), the Born empirical model of the global
/// state on the region-tagged settings, with its no-signalling verdict.
SpacetimeSheafResult spacetime_sheaf(const LatticeNet& net,
                                     const std::vector<SheafRegion>& regions);

}  // namespace sheafctx
