#include "sheafctx/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <stdexcept>

namespace sheafctx {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kCommuteTol = 1e-10;
constexpr double kClusterTol = 1e-8;
constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

}  // namespace

CMatrix pauli(int index) {
  if (index < 0 || index > 3) {
    fail(ErrorCode::IndexOutOfRange, "pauli index must be 0..3");
  }
  CMatrix m(2, 2);
  switch (index) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

CMatrix spin_observable(const Vector3& a) {
  if (std::abs(a.norm() - 1.0) > kHermitianTol) {
    fail(ErrorCode::NotUnitVector, "spin direction must be a unit vector");
  }
  return a(0) * pauli(1) + a(1) * pauli(2) + a(2) * pauli(3);
}

Vector3 coplanar_direction(double degrees) {
  double rad = degrees * std::numbers::pi / 180.0;
  return Vector3(std::sin(rad), 0.0, std::cos(rad));
}

QuantumState QuantumState::pure(CVector u) {
  if (std::abs(u.norm() - 1.0) > 1e-12) {
    fail(ErrorCode::InvalidState, "pure state vector is not normalized");
  }
  QuantumState s;
  s.pure_ = true;
  s.vector_ = std::move(u);
  return s;
}

QuantumState QuantumState::density(CMatrix rho) {
  if (rho.rows() != rho.cols()) {
    fail(ErrorCode::DimensionMismatch, "density matrix must be square");
  }
  if (!is_hermitian(rho, 1e-12)) {
    fail(ErrorCode::InvalidState, "density matrix is not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-12 || std::abs(rho.trace().imag()) > 1e-12) {
    fail(ErrorCode::InvalidState, "density matrix trace is not one");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho);
  if (solver.eigenvalues().minCoeff() < -1e-10) {
    fail(ErrorCode::InvalidState, "density matrix has a negative eigenvalue");
  }
  QuantumState s;
  s.pure_ = false;
  s.density_ = std::move(rho);
  return s;
}

const CVector& QuantumState::vector() const {
  if (!pure_) fail(ErrorCode::InvalidState, "state is not pure");
  return vector_;
}

CMatrix QuantumState::density_matrix() const {
  return pure_ ? CMatrix(vector_ * vector_.adjoint()) : density_;
}

bool QuantumState::operator==(const QuantumState& other) const {
  if (pure_ != other.pure_ || dim() != other.dim()) return false;
  return pure_ ? vector_ == other.vector_ : density_ == other.density_;
}

QuantumState singlet_state() {
  // e1 = (0,1), e2 = (1,0) in standard component order.
  CVector e1(2), e2(2);
  e1 << 0, 1;
  e2 << 1, 0;
  CVector u = (kron(e1, e2) - kron(e2, e1)) / std::numbers::sqrt2;
  return QuantumState::pure(u);
}

Complex expectation(const QuantumState& state, const CMatrix& a) {
  if (a.rows() != state.dim() || a.cols() != state.dim()) {
    fail(ErrorCode::DimensionMismatch, "observable dimension differs from the state");
  }
  if (state.is_pure()) {
    return state.vector().adjoint() * a * state.vector();
  }
  return (state.density_matrix() * a).trace();
}

double real_expectation(const QuantumState& state, const CMatrix& a) {
  Complex value = expectation(state, a);
  if (std::abs(value.imag()) > 1e-10) {
    fail(ErrorCode::InvalidState, "expectation of a Hermitian observable came out complex");
  }
  return value.real();
}

ObservableContext ObservableContext::make(std::vector<LabeledObservable> observables) {
  ObservableContext ctx;
  for (const auto& obs : observables) {
    if (!is_hermitian(obs.matrix, kHermitianTol)) {
      fail(ErrorCode::InvalidState, "observable '" + obs.label + "' is not Hermitian");
    }
  }
  for (size_t i = 0; i < observables.size(); ++i) {
    for (size_t j = i + 1; j < observables.size(); ++j) {
      if (observables[i].matrix.rows() != observables[j].matrix.rows()) {
        fail(ErrorCode::DimensionMismatch, "context observables have mixed dimensions");
      }
      if (max_abs(commutator(observables[i].matrix, observables[j].matrix)) > kCommuteTol) {
        fail(ErrorCode::NonCommutingContext,
             "observables '" + observables[i].label + "' and '" + observables[j].label +
                 "' do not commute");
      }
    }
  }
  ctx.observables_ = std::move(observables);
  for (const auto& obs : ctx.observables_) {
    const CMatrix& a = obs.matrix;
    const Eigen::Index dim = a.rows();
    std::vector<double> values;
    std::vector<CMatrix> projectors;
    if (max_abs(CMatrix(a * a - identity(dim))) <= kHermitianTol) {
      // Involution (spin observables and their embeddings): closed-form
      // spectral projectors (I ± A)/2, no solver ordering involved.
      CMatrix minus = (identity(dim) - a) / 2.0;
      CMatrix plus = (identity(dim) + a) / 2.0;
      if (max_abs(minus) > kHermitianTol) {
        values.push_back(-1.0);
        projectors.push_back(std::move(minus));
      }
      if (max_abs(plus) > kHermitianTol) {
        values.push_back(1.0);
        projectors.push_back(std::move(plus));
      }
    } else {
      Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
      const auto& evals = solver.eigenvalues();
      const auto& evecs = solver.eigenvectors();
      Eigen::Index i = 0;
      while (i < evals.size()) {
        Eigen::Index start = i;
        double anchor = evals(i);
        CMatrix projector = CMatrix::Zero(dim, dim);
        double sum = 0.0;
        while (i < evals.size() && evals(i) - anchor <= kClusterTol) {
          projector += evecs.col(i) * evecs.col(i).adjoint();
          sum += evals(i);
          ++i;
        }
        values.push_back(sum / static_cast<double>(i - start));
        projectors.push_back(std::move(projector));
      }
    }
    ctx.eigenvalues_.push_back(std::move(values));
    ctx.projectors_.push_back(std::move(projectors));
  }
  return ctx;
}

std::string eigenvalue_label(double value) {
  double rounded = std::round(value);
  if (std::abs(value - rounded) <= 1e-6) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", rounded == 0.0 ? 0.0 : rounded);
    return buf;
  }
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

EmpiricalModel<DoubleSemiring> born_model(const QuantumState& state,
                                          const std::vector<ObservableContext>& contexts) {
  // Shared labels across contexts must carry identical matrices.
  std::vector<std::string> measurement_order;
  std::map<std::string, CMatrix> matrix_of;
  for (const auto& ctx : contexts) {
    for (const auto& obs : ctx.observables()) {
      auto it = matrix_of.find(obs.label);
      if (it == matrix_of.end()) {
        measurement_order.push_back(obs.label);
        matrix_of.emplace(obs.label, obs.matrix);
      } else if (it->second.rows() != obs.matrix.rows() ||
                 max_abs(CMatrix(it->second - obs.matrix)) > kHermitianTol) {
        fail(ErrorCode::InconsistentSharedObservable,
             "label '" + obs.label + "' is bound to two different observables");
      }
    }
  }

  // Outcome alphabet: union of eigenvalue labels, ascending by value.
  std::set<double> eigenvalue_set;
  for (const auto& ctx : contexts) {
    for (size_t o = 0; o < ctx.size(); ++o) {
      for (double v : ctx.eigenvalues(o)) eigenvalue_set.insert(v);
    }
  }
  std::vector<std::string> outcomes;
  std::map<std::string, int> outcome_index;
  for (double v : eigenvalue_set) {
    std::string label = eigenvalue_label(v);
    if (!outcome_index.count(label)) {
      outcome_index.emplace(label, static_cast<int>(outcomes.size()));
      outcomes.push_back(label);
    }
  }

  std::vector<std::vector<std::string>> cover;
  for (const auto& ctx : contexts) {
    std::vector<std::string> labels;
    for (const auto& obs : ctx.observables()) labels.push_back(obs.label);
    cover.push_back(std::move(labels));
  }
  MeasurementScenario scenario =
      MeasurementScenario::validate(measurement_order, outcomes, cover);

  std::vector<Distribution<DoubleSemiring>> table;
  for (size_t ci = 0; ci < contexts.size(); ++ci) {
    const ObservableContext& ctx = contexts[ci];
    const Context& cover_ctx = scenario.cover()[ci];
    Distribution<DoubleSemiring>::Weights weights;

    // Walk every joint eigenvalue tuple of the context.
    std::vector<size_t> pick(ctx.size(), 0);
    while (true) {
      CMatrix joint = CMatrix::Identity(state.dim(), state.dim());
      for (size_t o = 0; o < ctx.size(); ++o) joint = joint * ctx.projector(o, pick[o]);
      double w = real_expectation(state, joint);
      if (w < -1e-10) {
        fail(ErrorCode::InvalidState, "Born weight below the negativity tolerance");
      }
      w = std::max(w, 0.0);
      if (w > 1e-12) {
        Assignment s;
        s.members = cover_ctx.members;
        s.outcomes.assign(cover_ctx.members.size(), 0);
        for (size_t o = 0; o < ctx.size(); ++o) {
          int m = scenario.measurement_index(ctx.observables()[o].label);
          int out = outcome_index.at(eigenvalue_label(ctx.eigenvalues(o)[pick[o]]));
          for (size_t k = 0; k < s.members.size(); ++k) {
            if (s.members[k] == m) s.outcomes[k] = out;
          }
        }
        auto [it, fresh] = weights.emplace(std::move(s), w);
        if (!fresh) it->second += w;
      }
      size_t pos = ctx.size();
      while (pos > 0 && pick[pos - 1] + 1 == ctx.eigenvalues(pos - 1).size()) {
        pick[--pos] = 0;
      }
      if (pos == 0) break;
      ++pick[pos - 1];
    }
    table.push_back(
        Distribution<DoubleSemiring>::make(scenario, cover_ctx, std::move(weights)));
  }
  return EmpiricalModel<DoubleSemiring>::make(scenario, std::move(table));
}

CMatrix bell_operator(const CMatrix& a1, const CMatrix& a2, const CMatrix& b1,
                      const CMatrix& b2) {
  const CMatrix* all[] = {&a1, &a2, &b1, &b2};
  for (const CMatrix* m : all) {
    if (m->rows() != a1.rows() || m->cols() != a1.rows()) {
      fail(ErrorCode::DimensionMismatch, "Bell operator inputs must share one dimension");
    }
    if (!is_hermitian(*m, kHermitianTol)) {
      fail(ErrorCode::InvalidState, "Bell operator inputs must be Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(*m);
    if (solver.eigenvalues().minCoeff() < -1.0 - 1e-9 ||
        solver.eigenvalues().maxCoeff() > 1.0 + 1e-9) {
      fail(ErrorCode::SpectrumOutOfRange, "Bell operator inputs need spectrum in [-1, 1]");
    }
  }
  for (const CMatrix* a : {&a1, &a2}) {
    for (const CMatrix* b : {&b1, &b2}) {
      if (max_abs(commutator(*a, *b)) > kCommuteTol) {
        fail(ErrorCode::NonCommutingParties, "party observables do not commute");
      }
    }
  }
  CMatrix bell = a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(bell);
  double norm = std::max(std::abs(solver.eigenvalues().minCoeff()),
                         std::abs(solver.eigenvalues().maxCoeff()));
  if (norm > kTsirelson + 1e-9) {
    throw std::logic_error("bell_operator: operator norm exceeds the 2*sqrt(2) ceiling");
  }
  return bell;
}

CMatrix bell_operator_from_angles(double a1_deg, double a2_deg, double b1_deg,
                                  double b2_deg) {
  CMatrix id = identity(2);
  auto first = [&](double deg) {
    return CMatrix(kron(spin_observable(coplanar_direction(deg)), id));
  };
  auto second = [&](double deg) {
    return CMatrix(kron(id, spin_observable(coplanar_direction(deg))));
  };
  return bell_operator(first(a1_deg), first(a2_deg), second(b1_deg), second(b2_deg));
}

BellScanResult max_bell_violation(const QuantumState& state, int step_degrees) {
  if (step_degrees <= 0 || 360 % step_degrees != 0) {
    throw std::invalid_argument("grid step must divide 360");
  }
  if (state.dim() != 4) {
    fail(ErrorCode::DimensionMismatch, "Bell scan expects a two-qubit state");
  }
  const int n = 360 / step_degrees;
  CMatrix id = identity(2);
  std::vector<CMatrix> spin(n);
  for (int k = 0; k < n; ++k) {
    spin[k] = spin_observable(coplanar_direction(k * step_degrees));
  }
  // Pairwise correlations E(i, j) = φ(S_i ⊗ S_j).
  std::vector<std::vector<double>> corr(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      corr[i][j] = real_expectation(state, kron(spin[i], spin[j]));
    }
  }
  BellScanResult best;
  for (int a1 = 0; a1 < n; ++a1) {
    for (int a2 = 0; a2 < n; ++a2) {
      for (int b1 = 0; b1 < n; ++b1) {
        for (int b2 = 0; b2 < n; ++b2) {
          double value = corr[a1][b1] + corr[a1][b2] + corr[a2][b1] - corr[a2][b2];
          if (std::abs(value) > best.best_abs) {
            best.best_abs = std::abs(value);
            best.best_value = value;
            best.angles = {a1 * static_cast<double>(step_degrees),
                           a2 * static_cast<double>(step_degrees),
                           b1 * static_cast<double>(step_degrees),
                           b2 * static_cast<double>(step_degrees)};
          }
        }
      }
    }
  }
  if (best.best_abs > kTsirelson + 1e-9) {
    throw std::logic_error("max_bell_violation: value exceeds the 2*sqrt(2) ceiling");
  }
  return best;
}

FiniteSystemPresentation adjoin_formal_element(FiniteSystemPresentation p) {
  p.formal_markers.push_back("*");
  return p;
}

FiniteSystemPresentation strip_formal_element(FiniteSystemPresentation p) {
  if (!p.formal_markers.empty()) p.formal_markers.pop_back();
  return p;
}

bool equal_presentations(const FiniteSystemPresentation& a,
                         const FiniteSystemPresentation& b) {
  if (a.blocks != b.blocks || a.formal_markers != b.formal_markers) return false;
  if (a.contexts.size() != b.contexts.size() || a.states.size() != b.states.size()) {
    return false;
  }
  for (size_t c = 0; c < a.contexts.size(); ++c) {
    if (a.contexts[c].size() != b.contexts[c].size()) return false;
    for (size_t o = 0; o < a.contexts[c].size(); ++o) {
      if (a.contexts[c][o].label != b.contexts[c][o].label) return false;
      if (a.contexts[c][o].matrix.rows() != b.contexts[c][o].matrix.rows() ||
          a.contexts[c][o].matrix.cols() != b.contexts[c][o].matrix.cols() ||
          a.contexts[c][o].matrix != b.contexts[c][o].matrix) {
        return false;
      }
    }
  }
  for (size_t s = 0; s < a.states.size(); ++s) {
    if (!(a.states[s] == b.states[s])) return false;
  }
  return true;
}

bool roundtrip_identity(const FiniteSystemPresentation& p) {
  return equal_presentations(strip_formal_element(adjoin_formal_element(p)), p);
}

SystemRealization system_from_algebra(const FiniteSystemPresentation& p) {
  int dim = 0;
  for (int b : p.blocks) {
    if (b < 1) fail(ErrorCode::InvalidState, "block dimensions must be positive");
    dim += b;
  }
  std::vector<ObservableContext> contexts;
  for (const auto& raw : p.contexts) {
    for (const auto& obs : raw) {
      if (obs.matrix.rows() != dim) {
        fail(ErrorCode::DimensionMismatch,
             "observable dimension differs from the algebra dimension");
      }
    }
    contexts.push_back(ObservableContext::make(raw));
  }

  // Keep only maximal contexts (by label-set inclusion).
  auto label_set = [](const ObservableContext& c) {
    std::set<std::string> s;
    for (const auto& o : c.observables()) s.insert(o.label);
    return s;
  };
  std::vector<ObservableContext> maximal;
  for (size_t i = 0; i < contexts.size(); ++i) {
    std::set<std::string> li = label_set(contexts[i]);
    bool dominated = false;
    for (size_t j = 0; j < contexts.size() && !dominated; ++j) {
      if (i == j) continue;
      std::set<std::string> lj = label_set(contexts[j]);
      bool subset = std::includes(lj.begin(), lj.end(), li.begin(), li.end());
      if (subset && lj.size() > li.size()) dominated = true;
      if (subset && lj == li && j < i) dominated = true;  // dedupe
    }
    if (!dominated) maximal.push_back(contexts[i]);
  }

  // The scenario is state-independent; probe it with the maximally mixed
  // state so presentations without states still realize one.
  CMatrix rho = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  SystemRealization out{born_model(QuantumState::density(rho), maximal).scenario(), {}};
  for (const auto& state : p.states) {
    out.models.push_back(born_model(state, maximal));
  }
  return out;
}

bool is_intertwiner(const CMatrix& j, const Endomorphism& j1, const Endomorphism& j2,
                    const std::vector<CMatrix>& generators) {
  for (const auto& n : generators) {
    CMatrix lhs_factor = j1(n);
    CMatrix rhs_factor = j2(n);
    if (lhs_factor.cols() != j.rows() || j.cols() != rhs_factor.rows()) {
      fail(ErrorCode::DimensionMismatch, "intertwiner dimensions do not compose");
    }
    if (max_abs(CMatrix(lhs_factor * j - j * rhs_factor)) > 1e-10) return false;
  }
  return true;
}

}  // namespace sheafctx
