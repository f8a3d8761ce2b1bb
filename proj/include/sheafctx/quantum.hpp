#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "sheafctx/empirical.hpp"
#include "sheafctx/linalg.hpp"

namespace sheafctx {

/// Pauli matrices σ0..σ3 in the basis convention of the two-level system
/// used throughout: e1 = (0,1), e2 = (1,0).
CMatrix pauli(int index);

/// S_a = a1 σ1 + a2 σ2 + a3 σ3 for a unit 3-vector; eigenvalues +/-1 with
/// spectral projectors (I +/- S_a)/2.
CMatrix spin_observable(const Vector3& a);

/// Coplanar spin direction at the given angle in degrees: (sin θ, 0, cos θ),
/// so 0° is σ3 and 90° is σ1.
Vector3 coplanar_direction(double degrees);

/// A pure unit vector or a density matrix, validated at construction.
class QuantumState {
 public:
  static QuantumState pure(CVector u);
  static QuantumState density(CMatrix rho);

  bool is_pure() const { return pure_; }
  Eigen::Index dim() const { return pure_ ? vector_.size() : density_.rows(); }
  const CVector& vector() const;
  CMatrix density_matrix() const;

  bool operator==(const QuantumState& other) const;

 private:
  QuantumState() = default;
  bool pure_ = false;
  CVector vector_;
  CMatrix density_;
};

/// The singlet (e1 ⊗ e2 - e2 ⊗ e1)/√2 with e1 = (0,1), e2 = (1,0).
QuantumState singlet_state();

/// φ(A) = <u, A u> for pure states, Tr(ρ A) otherwise.
Complex expectation(const QuantumState& state, const CMatrix& a);

/// Expectation of a Hermitian observable; rejects imaginary parts above
/// 1e-10 as a consistency guard.
double real_expectation(const QuantumState& state, const CMatrix& a);

struct LabeledObservable {
  std::string label;
  CMatrix matrix;
};

/// A pairwise-commuting family of Hermitian observables with their
/// clustered eigenvalues (ascending) and spectral projectors.
class ObservableContext {
 public:
  static ObservableContext make(std::vector<LabeledObservable> observables);

  const std::vector<LabeledObservable>& observables() const { return observables_; }
  const std::vector<double>& eigenvalues(size_t obs) const { return eigenvalues_.at(obs); }
  const CMatrix& projector(size_t obs, size_t eig) const {
    return projectors_.at(obs).at(eig);
  }
  size_t size() const { return observables_.size(); }

 private:
  ObservableContext() = default;
  std::vector<LabeledObservable> observables_;
  std::vector<std::vector<double>> eigenvalues_;
  std::vector<std::vector<CMatrix>> projectors_;
};

/// Canonical outcome label of an eigenvalue (integers rendered exactly).
std::string eigenvalue_label(double value);

/// Born-rule empirical model: the weight of a joint eigenvalue section is
/// the state expectation of the product of the spectral projectors.
/// Measurements are labeled by the observables (first-appearance order);
/// outcomes are the union of eigenvalue labels, sorted ascending.
EmpiricalModel<DoubleSemiring> born_model(const QuantumState& state,
                                          const std::vector<ObservableContext>& contexts);

/// a1 b1 + a1 b2 + a2 b1 - a2 b2 for commuting party observables with
/// spectrum in [-1, 1]; Hermitian with operator norm at most 2√2.
CMatrix bell_operator(const CMatrix& a1, const CMatrix& a2, const CMatrix& b1,
                      const CMatrix& b2);

/// Bell operator from coplanar spin settings on a two-qubit system, with
/// the a's on the first factor and the b's on the second.
CMatrix bell_operator_from_angles(double a1_deg, double a2_deg, double b1_deg,
                                  double b2_deg);

struct BellScanResult {
  double best_value = 0.0;          // signed φ(B) at the best settings
  double best_abs = 0.0;            // |φ(B)|, the reported maximum
  std::array<double, 4> angles{};   // a1, a2, b1, b2 in degrees
};

/// Grid search of |φ(B)| over coplanar spin settings with the given step
/// (degrees, must divide 360) on a two-qubit state.
BellScanResult max_bell_violation(const QuantumState& state, int step_degrees);

/// Finite-dimensional system presentation: matrix-algebra block dimensions,
/// measurement contexts given as raw labeled observables, states, and the
/// formal-element bookkeeping used by the adjoin/strip functors.
struct FiniteSystemPresentation {
  std::vector<int> blocks;
  std::vector<std::vector<LabeledObservable>> contexts;
  std::vector<QuantumState> states;
  std::vector<std::string> formal_markers;
};

/// The *-adjoining functor F: appends a fresh formal element marker.
FiniteSystemPresentation adjoin_formal_element(FiniteSystemPresentation p);
/// The stripping functor G: removes the most recent marker, if any.
FiniteSystemPresentation strip_formal_element(FiniteSystemPresentation p);

bool equal_presentations(const FiniteSystemPresentation& a,
                         const FiniteSystemPresentation& b);

/// G∘F returns the presentation unchanged, field by field.
bool roundtrip_identity(const FiniteSystemPresentation& p);

struct SystemRealization {
  MeasurementScenario scenario;
  std::vector<EmpiricalModel<DoubleSemiring>> models;  // one per state
};

/// Scenario whose measurements are the observable labels, cover the maximal
/// given contexts; every state maps through born_model.
SystemRealization system_from_algebra(const FiniteSystemPresentation& p);

/// Endomorphism of a matrix algebra, given as an explicit matrix map.
using Endomorphism = std::function<CMatrix(const CMatrix&)>;

/// j1(N) J = J j2(N) within 1e-10 on every generator.
bool is_intertwiner(const CMatrix& j, const Endomorphism& j1, const Endomorphism& j2,
                    const std::vector<CMatrix>& generators);

}  // namespace sheafctx
