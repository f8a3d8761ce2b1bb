#include "sheafctx/spacetime.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace sheafctx {

SpacetimePoint SpacetimePoint::operator+(const SpacetimePoint& o) const {
  SpacetimePoint out;
  for (int i = 0; i < 4; ++i) out.x[i] = x[i] + o.x[i];
  return out;
}

SpacetimePoint SpacetimePoint::operator-(const SpacetimePoint& o) const {
  SpacetimePoint out;
  for (int i = 0; i < 4; ++i) out.x[i] = x[i] - o.x[i];
  return out;
}

Rational minkowski_sq(const SpacetimePoint& p) {
  return p.x[0] * p.x[0] - p.x[1] * p.x[1] - p.x[2] * p.x[2] - p.x[3] * p.x[3];
}

DoubleCone DoubleCone::make(SpacetimePoint base, SpacetimePoint apex) {
  SpacetimePoint diff = apex - base;
  if (!(minkowski_sq(diff) > 0 && diff.x[0] > 0)) {
    fail(ErrorCode::InvalidCone, "apex must lie in the open forward lightcone of base");
  }
  return DoubleCone{std::move(base), std::move(apex)};
}

namespace {

bool in_closed_forward_cone(const SpacetimePoint& d) {
  return minkowski_sq(d) >= 0 && d.x[0] >= 0;
}

}  // namespace

bool cone_contains(const DoubleCone& cone, const SpacetimePoint& p) {
  return in_closed_forward_cone(p - cone.base) && in_closed_forward_cone(cone.apex - p);
}

bool cone_subset(const DoubleCone& inner, const DoubleCone& outer) {
  return in_closed_forward_cone(inner.base - outer.base) &&
         in_closed_forward_cone(outer.apex - inner.apex);
}

SpacelikeVerdict spacelike_separated(const std::vector<SpacetimePoint>& s1,
                                     const std::vector<SpacetimePoint>& s2) {
  for (size_t i = 0; i < s1.size(); ++i) {
    for (size_t j = 0; j < s2.size(); ++j) {
      if (!(minkowski_sq(s1[i] - s2[j]) < 0)) {
        return SpacelikeVerdict{false, std::make_pair(i, j)};
      }
    }
  }
  return {};
}

std::array<Rational, 4> lightcone_box(const DoubleCone& cone) {
  for (const SpacetimePoint* p : {&cone.base, &cone.apex}) {
    if (!p->x[2].is_zero() || !p->x[3].is_zero()) {
      fail(ErrorCode::NotOnePlusOne, "lightcone boxes require x2 = x3 = 0");
    }
  }
  auto u = [](const SpacetimePoint& p) { return p.x[0] - p.x[1]; };
  auto v = [](const SpacetimePoint& p) { return p.x[0] + p.x[1]; };
  return {u(cone.base), u(cone.apex), v(cone.base), v(cone.apex)};
}

bool strictly_spacelike_separated(const DoubleCone& o1, const DoubleCone& o2,
                                  const Rational& epsilon) {
  if (epsilon < 0) {
    fail(ErrorCode::InvalidCone, "separation margin must be nonnegative");
  }
  auto b1 = lightcone_box(o1);
  auto b2 = lightcone_box(o2);
  const Rational margin = 2 * epsilon;
  // Opposite interval orders: one cone earlier in u and later in v.
  bool case_a = (b2[0] - b1[1] > margin) && (b1[2] - b2[3] > margin);
  bool case_b = (b1[0] - b2[1] > margin) && (b2[2] - b1[3] > margin);
  return case_a || case_b;
}

LatticeNet LatticeNet::make(std::vector<LatticeSite> sites, QuantumState global_state) {
  if (sites.empty()) fail(ErrorCode::InvalidState, "lattice net needs at least one site");
  std::sort(sites.begin(), sites.end(),
            [](const LatticeSite& a, const LatticeSite& b) { return a.id < b.id; });
  for (size_t i = 0; i + 1 < sites.size(); ++i) {
    if (sites[i].id == sites[i + 1].id) {
      fail(ErrorCode::InvalidState, "duplicate site id '" + sites[i].id + "'");
    }
  }
  for (size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].local_dim < 2) {
      fail(ErrorCode::InvalidState, "site local dimension must be at least 2");
    }
    for (size_t j = i + 1; j < sites.size(); ++j) {
      if (sites[i].point == sites[j].point) {
        fail(ErrorCode::InvalidState, "site points must be distinct");
      }
    }
  }
  long dim = 1;
  for (const auto& s : sites) dim *= s.local_dim;
  if (global_state.dim() != dim) {
    fail(ErrorCode::DimensionMismatch, "global state dimension differs from the site product");
  }
  LatticeNet net(std::move(global_state));
  net.sites_ = std::move(sites);
  return net;
}

std::vector<int> LatticeNet::factor_dims() const {
  std::vector<int> dims;
  dims.reserve(sites_.size());
  for (const auto& s : sites_) dims.push_back(s.local_dim);
  return dims;
}

long LatticeNet::total_dim() const {
  long dim = 1;
  for (const auto& s : sites_) dim *= s.local_dim;
  return dim;
}

std::vector<int> LatticeNet::region_sites(const DoubleCone& cone) const {
  std::vector<int> out;
  for (size_t i = 0; i < sites_.size(); ++i) {
    if (cone_contains(cone, sites_[i].point)) out.push_back(static_cast<int>(i));
  }
  return out;
}

CMatrix LatticeNet::embed(const CMatrix& op, const std::vector<int>& site_indices) const {
  return embed_operator(op, site_indices, factor_dims());
}

std::vector<CMatrix> LatticeNet::site_generators(int site) const {
  if (sites_.at(site).local_dim != 2) {
    fail(ErrorCode::DimensionMismatch,
         "generator basis is implemented for qubit sites only");
  }
  std::vector<CMatrix> out;
  for (int k = 1; k <= 3; ++k) out.push_back(embed(pauli(k), {site}));
  return out;
}

NetAxiomReport check_net_axioms(const LatticeNet& net, const std::vector<DoubleCone>& cones) {
  NetAxiomReport report;

  // Isotony: geometric containment must yield site-set inclusion.
  for (size_t i = 0; i < cones.size(); ++i) {
    for (size_t j = 0; j < cones.size(); ++j) {
      if (i == j || !cone_subset(cones[i], cones[j])) continue;
      ++report.isotony_pairs;
      auto inner = net.region_sites(cones[i]);
      auto outer = net.region_sites(cones[j]);
      if (!std::includes(outer.begin(), outer.end(), inner.begin(), inner.end())) {
        report.isotony_ok = false;
        std::ostringstream os;
        os << "cone " << i << " is contained in cone " << j
           << " but its site set is not";
        report.isotony_failures.push_back(os.str());
      }
    }
  }

  // Microcausality: spacelike-separated cones get exactly commuting
  // single-site generators (disjoint tensor factors).
  for (size_t i = 0; i < cones.size(); ++i) {
    for (size_t j = i + 1; j < cones.size(); ++j) {
      auto sites_i = net.region_sites(cones[i]);
      auto sites_j = net.region_sites(cones[j]);
      if (sites_i.empty() || sites_j.empty()) continue;
      std::vector<SpacetimePoint> pts_i, pts_j;
      for (int s : sites_i) pts_i.push_back(net.sites()[s].point);
      for (int s : sites_j) pts_j.push_back(net.sites()[s].point);
      if (!spacelike_separated(pts_i, pts_j)) continue;
      ++report.microcausality_pairs;
      for (int si : sites_i) {
        for (int sj : sites_j) {
          for (const auto& gi : net.site_generators(si)) {
            for (const auto& gj : net.site_generators(sj)) {
              if (max_abs(commutator(gi, gj)) != 0.0) {
                report.microcausality_ok = false;
                std::ostringstream os;
                os << "generators on sites " << net.sites()[si].id << ", "
                   << net.sites()[sj].id << " fail to commute exactly";
                report.microcausality_failures.push_back(os.str());
              }
            }
          }
        }
      }
    }
  }

  // Translation covariance: candidate lattice translations are the nonzero
  // site point differences. A (translation, cone) pair is applicable when
  // every site of the cone translates onto a site; the translated cone's
  // site set must then be exactly the relabeled image. With no applicable
  // pair the axiom is reported NotApplicable.
  std::set<std::array<Rational, 4>> candidates;
  for (const auto& a : net.sites()) {
    for (const auto& b : net.sites()) {
      SpacetimePoint g = b.point - a.point;
      if (g.x != std::array<Rational, 4>{}) candidates.insert(g.x);
    }
  }
  auto site_at = [&](const SpacetimePoint& p) -> int {
    for (size_t j = 0; j < net.sites().size(); ++j) {
      if (net.sites()[j].point == p) return static_cast<int>(j);
    }
    return -1;
  };
  for (const auto& gx : candidates) {
    SpacetimePoint g{gx};
    for (size_t c = 0; c < cones.size(); ++c) {
      std::vector<int> expected;
      bool applicable = true;
      for (int s : net.region_sites(cones[c])) {
        int image = site_at(net.sites()[s].point + g);
        if (image < 0) { applicable = false; break; }
        expected.push_back(image);
      }
      if (!applicable) continue;
      ++report.covariance_translations;
      if (report.covariance == NetAxiomReport::Covariance::NotApplicable) {
        report.covariance = NetAxiomReport::Covariance::Ok;
      }
      std::sort(expected.begin(), expected.end());
      DoubleCone moved = DoubleCone::make(cones[c].base + g, cones[c].apex + g);
      if (net.region_sites(moved) != expected) {
        report.covariance = NetAxiomReport::Covariance::Failed;
        std::ostringstream os;
        os << "cone " << c << " translated by a lattice vector does not land on "
           << "the relabeled site set";
        report.covariance_failures.push_back(os.str());
      }
    }
  }

  return report;
}

SchliederResult schlieder_check(const LatticeNet& net, const std::vector<int>& sites1,
                                const std::vector<int>& sites2, const CMatrix& e,
                                const CMatrix& f) {
  for (int s : sites1) {
    for (int t : sites2) {
      if (s == t) fail(ErrorCode::OverlappingFactors, "site sets must be disjoint");
    }
  }
  const double threshold = 1e-8;
  if (!is_projection(e, threshold) || !is_projection(f, threshold)) {
    fail(ErrorCode::InvalidState, "inputs must be orthogonal projections");
  }
  if (max_abs(e) <= threshold || max_abs(f) <= threshold) {
    fail(ErrorCode::ZeroProjection, "projections must be nonzero");
  }
  CMatrix e_hat = net.embed(e, sites1);
  CMatrix f_hat = net.embed(f, sites2);
  long dim = net.total_dim();
  CMatrix gap = (identity(dim) - e_hat) + (identity(dim) - f_hat);
  int kernel = kernel_dimension(gap, threshold);
  return SchliederResult{kernel > 0, kernel};
}

SplitResult split_check(const LatticeNet& net, const DoubleCone& o1, const DoubleCone& o2) {
  std::vector<int> sites1 = net.region_sites(o1);
  std::vector<int> sites2 = net.region_sites(o2);
  for (int s : sites1) {
    for (int t : sites2) {
      if (s == t) fail(ErrorCode::RegionsShareSites, "regions share a site");
    }
  }
  // Interpolating type I factor on every site outside O2; contains A(O1).
  SplitResult result;
  for (size_t i = 0; i < net.sites().size(); ++i) {
    int idx = static_cast<int>(i);
    if (std::find(sites2.begin(), sites2.end(), idx) == sites2.end()) {
      result.factor_sites.push_back(idx);
    }
  }
  // N1 ⊆ M: generators of A(O1) commute with generators of M' (the factor
  // on M's complement). M ⊆ N2': generators of M commute with A(O2)'s.
  std::vector<int> m_complement;
  for (size_t i = 0; i < net.sites().size(); ++i) {
    int idx = static_cast<int>(i);
    if (std::find(result.factor_sites.begin(), result.factor_sites.end(), idx) ==
        result.factor_sites.end()) {
      m_complement.push_back(idx);
    }
  }
  double worst = 0.0;
  for (int s1 : sites1) {
    for (int sc : m_complement) {
      for (const auto& g1 : net.site_generators(s1)) {
        for (const auto& gc : net.site_generators(sc)) {
          worst = std::max(worst, max_abs(commutator(g1, gc)));
        }
      }
    }
  }
  for (int sm : result.factor_sites) {
    for (int s2 : sites2) {
      for (const auto& gm : net.site_generators(sm)) {
        for (const auto& g2 : net.site_generators(s2)) {
          worst = std::max(worst, max_abs(commutator(gm, g2)));
        }
      }
    }
  }
  result.max_commutator = worst;
  result.ok = worst == 0.0;
  return result;
}

namespace {

// Composes a flat index over the selected factors with one over the rest.
struct FactorSplit {
  std::vector<int> selected;   // positions
  std::vector<int> rest;       // positions
  std::vector<int> dims;       // all factor dims
  long selected_dim = 1;
  long rest_dim = 1;

  FactorSplit(const std::vector<int>& positions, std::vector<int> all_dims)
      : selected(positions), dims(std::move(all_dims)) {
    for (size_t i = 0; i < dims.size(); ++i) {
      int idx = static_cast<int>(i);
      if (std::find(selected.begin(), selected.end(), idx) == selected.end()) {
        rest.push_back(idx);
      }
    }
    for (int p : selected) selected_dim *= dims[p];
    for (int p : rest) rest_dim *= dims[p];
  }

  long global_index(long sel, long rest_idx) const {
    std::vector<int> digits(dims.size(), 0);
    for (auto it = selected.rbegin(); it != selected.rend(); ++it) {
      digits[*it] = static_cast<int>(sel % dims[*it]);
      sel /= dims[*it];
    }
    for (auto it = rest.rbegin(); it != rest.rend(); ++it) {
      digits[*it] = static_cast<int>(rest_idx % dims[*it]);
      rest_idx /= dims[*it];
    }
    long g = 0;
    for (size_t i = 0; i < dims.size(); ++i) g = g * dims[i] + digits[i];
    return g;
  }
};

// Partial expectation against rho on the selected factors:
// B(r, r') = sum_{a,b} rho(a, b) * A(glob(b, r), glob(a, r')).
CMatrix partial_expectation(const CMatrix& a, const CMatrix& rho, const FactorSplit& split) {
  CMatrix out = CMatrix::Zero(split.rest_dim, split.rest_dim);
  for (long r = 0; r < split.rest_dim; ++r) {
    for (long rp = 0; rp < split.rest_dim; ++rp) {
      Complex acc = 0;
      for (long p = 0; p < split.selected_dim; ++p) {
        for (long q = 0; q < split.selected_dim; ++q) {
          acc += rho(p, q) * a(split.global_index(q, r), split.global_index(p, rp));
        }
      }
      out(r, rp) = acc;
    }
  }
  return out;
}

}  // namespace

LocalStateResult local_state_check(const LatticeNet& net, const DoubleCone& o1,
                                   const DoubleCone& o2, const QuantumState& phi) {
  std::vector<int> sites1 = net.region_sites(o1);
  std::vector<int> sites2 = net.region_sites(o2);
  if (sites1.empty()) fail(ErrorCode::InvalidState, "O1 contains no sites");
  if (!std::includes(sites2.begin(), sites2.end(), sites1.begin(), sites1.end())) {
    fail(ErrorCode::InvalidState,
         "local states need the split geometry sites(O1) ⊆ sites(O2)");
  }

  std::vector<int> dims = net.factor_dims();
  FactorSplit split(sites1, dims);
  if (phi.dim() != split.selected_dim) {
    fail(ErrorCode::InvalidState, "state dimension differs from A(O1)'s factor");
  }
  CMatrix rho = phi.density_matrix();

  auto apply_t = [&](const CMatrix& a) {
    return embed_operator(partial_expectation(a, rho, split), split.rest, dims);
  };

  const long dim = net.total_dim();
  LocalStateResult result;
  double worst = 0.0;

  // Unitality.
  worst = std::max(worst, max_abs(CMatrix(apply_t(identity(dim)) - identity(dim))));

  // T(X) = φ(X) I for X in A(O1): single-site Pauli generators.
  std::vector<int> dims1;
  for (int s : sites1) dims1.push_back(dims[s]);
  for (size_t i = 0; i < sites1.size(); ++i) {
    for (int k = 1; k <= 3; ++k) {
      CMatrix local = embed_operator(pauli(k), {static_cast<int>(i)}, dims1);
      Complex value = (rho * local).trace();
      CMatrix global = net.embed(pauli(k), {sites1[i]});
      worst = std::max(worst, max_abs(CMatrix(apply_t(global) - value * identity(dim))));
    }
  }

  // T(AB) = T(A) B for A the global single-site generators and B the
  // generators outside O2.
  std::vector<CMatrix> a_generators;
  for (size_t s = 0; s < net.sites().size(); ++s) {
    for (const auto& g : net.site_generators(static_cast<int>(s))) a_generators.push_back(g);
  }
  std::vector<CMatrix> b_generators;
  for (size_t s = 0; s < net.sites().size(); ++s) {
    int idx = static_cast<int>(s);
    if (std::find(sites2.begin(), sites2.end(), idx) == sites2.end()) {
      for (const auto& g : net.site_generators(idx)) b_generators.push_back(g);
    }
  }
  for (const auto& a : a_generators) {
    for (const auto& b : b_generators) {
      worst = std::max(worst, max_abs(CMatrix(apply_t(a * b) - apply_t(a) * b)));
    }
  }

  // Positivity on the generator set: T(A†A) must stay PSD.
  for (const auto& a : a_generators) {
    CMatrix image = apply_t(dagger(a) * a);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver((image + image.adjoint()) / 2.0);
    worst = std::max(worst, std::max(0.0, -solver.eigenvalues().minCoeff()));
  }

  result.max_deviation = worst;
  result.ok = worst <= 1e-10;
  if (!result.ok) {
    result.detail = "local-state identities deviate by " + std::to_string(worst);
  }
  return result;
}

SpacetimeSheafResult spacetime_sheaf(const LatticeNet& net,
                                     const std::vector<SheafRegion>& regions) {
  if (regions.empty()) {
    fail(ErrorCode::RegionsNotSeparated, "no regions given");
  }
  std::vector<std::vector<int>> region_site_sets;
  for (const auto& r : regions) {
    auto sites = net.region_sites(r.cone);
    if (sites.empty()) {
      fail(ErrorCode::InvalidState, "region '" + r.id + "' contains no sites");
    }
    if (r.setting_angles_deg.empty()) {
      fail(ErrorCode::InvalidState, "region '" + r.id + "' has no settings");
    }
    region_site_sets.push_back(std::move(sites));
  }
  for (size_t i = 0; i < regions.size(); ++i) {
    for (size_t j = i + 1; j < regions.size(); ++j) {
      for (int s : region_site_sets[i]) {
        for (int t : region_site_sets[j]) {
          if (s == t) {
            fail(ErrorCode::RegionsNotSeparated,
                 "regions '" + regions[i].id + "' and '" + regions[j].id +
                     "' share a site");
          }
        }
      }
      std::vector<SpacetimePoint> pts_i, pts_j;
      for (int s : region_site_sets[i]) pts_i.push_back(net.sites()[s].point);
      for (int s : region_site_sets[j]) pts_j.push_back(net.sites()[s].point);
      if (!spacelike_separated(pts_i, pts_j)) {
        fail(ErrorCode::RegionsNotSeparated,
             "regions '" + regions[i].id + "' and '" + regions[j].id +
                 "' are not spacelike separated");
      }
    }
  }

  // Per-region labeled setting observables, measured on the first site.
  std::vector<std::vector<LabeledObservable>> region_settings(regions.size());
  for (size_t r = 0; r < regions.size(); ++r) {
    for (double angle : regions[r].setting_angles_deg) {
      LabeledObservable obs;
      obs.label = regions[r].id + ":" + eigenvalue_label(angle);
      obs.matrix = net.embed(spin_observable(coplanar_direction(angle)),
                             {region_site_sets[r].front()});
      region_settings[r].push_back(std::move(obs));
    }
  }
  for (size_t i = 0; i < regions.size(); ++i) {
    for (size_t j = i + 1; j < regions.size(); ++j) {
      for (const auto& oi : region_settings[i]) {
        for (const auto& oj : region_settings[j]) {
          if (max_abs(commutator(oi.matrix, oj.matrix)) != 0.0) {
            fail(ErrorCode::NonCommutingAcrossRegions,
                 "cross-region observables must commute exactly");
          }
        }
      }
    }
  }

  SpacetimeSheafResult result;
  const size_t count = regions.size();
  for (size_t mask = 1; mask < (size_t{1} << count); ++mask) {
    std::vector<size_t> tuple;
    for (size_t r = 0; r < count; ++r) {
      if (mask & (size_t{1} << r)) tuple.push_back(r);
    }
    // Cover: one setting per region in the tuple, all combinations.
    std::vector<ObservableContext> contexts;
    std::vector<size_t> pick(tuple.size(), 0);
    while (true) {
      std::vector<LabeledObservable> chosen;
      for (size_t k = 0; k < tuple.size(); ++k) {
        chosen.push_back(region_settings[tuple[k]][pick[k]]);
      }
      contexts.push_back(ObservableContext::make(std::move(chosen)));
      size_t pos = tuple.size();
      while (pos > 0 && pick[pos - 1] + 1 == region_settings[tuple[pos - 1]].size()) {
        pick[--pos] = 0;
      }
      if (pos == 0) break;
      ++pick[pos - 1];
    }
    EmpiricalModel<DoubleSemiring> model = born_model(net.state(), contexts);
    CompatibilityVerdict<DoubleSemiring> verdict = is_no_signalling(model);
    if (!verdict.holds) result.all_no_signalling = false;
    result.entries.push_back(SheafEntry{tuple, std::move(model), std::move(verdict)});
  }
  return result;
}

}  // namespace sheafctx
