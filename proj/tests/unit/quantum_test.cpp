#include <doctest.h>

#include <numbers>
#include <random>

#include "sheafctx/local_model.hpp"
#include "sheafctx/quantum.hpp"

using namespace sheafctx;

namespace {

Vector3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vector3 v(gauss(rng), gauss(rng), gauss(rng));
  while (v.norm() < 1e-3) v = Vector3(gauss(rng), gauss(rng), gauss(rng));
  return v.normalized();
}

std::vector<ObservableContext> chsh_contexts(double a1, double a2, double b1, double b2) {
  CMatrix id = identity(2);
  auto party_a = [&](const std::string& label, double deg) {
    return LabeledObservable{label, kron(spin_observable(coplanar_direction(deg)), id)};
  };
  auto party_b = [&](const std::string& label, double deg) {
    return LabeledObservable{label, kron(id, spin_observable(coplanar_direction(deg)))};
  };
  auto a1o = party_a("a1", a1), a2o = party_a("a2", a2);
  auto b1o = party_b("b1", b1), b2o = party_b("b2", b2);
  return {ObservableContext::make({a1o, b1o}), ObservableContext::make({a1o, b2o}),
          ObservableContext::make({a2o, b1o}), ObservableContext::make({a2o, b2o})};
}

}  // namespace

TEST_CASE("Pauli matrices multiply as expected") {
  CHECK(max_abs(CMatrix(pauli(1) * pauli(1) - pauli(0))) == 0.0);
  CHECK(max_abs(CMatrix(pauli(1) * pauli(2) - Complex(0, 1) * pauli(3))) == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(is_hermitian(pauli(i), 0.0));
  CHECK_THROWS_AS(pauli(4), Error);
}

TEST_CASE("spin observables recover the Pauli axes") {
  CHECK(max_abs(CMatrix(spin_observable(Vector3(0, 0, 1)) - pauli(3))) == 0.0);
  CHECK(max_abs(CMatrix(spin_observable(Vector3(1, 0, 0)) - pauli(1))) == 0.0);
  CHECK_THROWS_AS(spin_observable(Vector3(1, 1, 0)), Error);
}

TEST_CASE("spin projectors resolve the identity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Vector3 a = random_unit(rng);
    CMatrix s = spin_observable(a);
    CHECK(max_abs(CMatrix(s * s - identity(2))) < 1e-12);
    CMatrix plus = (identity(2) + s) / 2.0;
    CMatrix minus = (identity(2) - s) / 2.0;
    CHECK(max_abs(CMatrix(plus + minus - identity(2))) < 1e-12);
    CHECK(max_abs(CMatrix(plus * minus)) < 1e-12);
  }
}

TEST_CASE("the singlet carries correlation minus the inner product") {
  QuantumState u = singlet_state();
  CHECK(std::abs(u.vector().norm() - 1.0) < 1e-12);
  CHECK(std::abs(real_expectation(u, identity(4)) - 1.0) < 1e-12);
  CHECK(std::abs(real_expectation(u, kron(pauli(3), pauli(3))) + 1.0) < 1e-10);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    Vector3 a = random_unit(rng), b = random_unit(rng);
    double corr = real_expectation(u, kron(spin_observable(a), spin_observable(b)));
    CHECK(std::abs(corr + a.dot(b)) < 1e-10);
  }
}

TEST_CASE("orthogonal directions decorrelate the singlet") {
  QuantumState u = singlet_state();
  double corr = real_expectation(u, kron(spin_observable(Vector3(0, 0, 1)),
                                         spin_observable(Vector3(1, 0, 0))));
  CHECK(std::abs(corr) < 1e-12);
}

TEST_CASE("expectation rejects mismatched dimensions and handles densities") {
  QuantumState mixed = QuantumState::density(CMatrix::Identity(4, 4) / 4.0);
  CHECK(std::abs(real_expectation(mixed, identity(4)) - 1.0) < 1e-12);
  CHECK_THROWS_AS(expectation(mixed, identity(2)), Error);
}

TEST_CASE("Born weights follow the closed-form singlet law") {
  std::mt19937_64 rng(8);
  QuantumState u = singlet_state();
  CMatrix id = identity(2);
  for (int trial = 0; trial < 10; ++trial) {
    Vector3 a = random_unit(rng), b = random_unit(rng);
    auto ctx = ObservableContext::make(
        {{"A", kron(spin_observable(a), id)}, {"B", kron(id, spin_observable(b))}});
    auto model = born_model(u, {ctx});
    // p(+,+) = (1 - <a,b>)/4
    const auto& d = model.at(0);
    Assignment plus_plus;
    plus_plus.members = model.scenario().cover()[0].members;
    int plus_index = 1;  // outcomes sorted ascending: "-1", "1"
    plus_plus.outcomes = {plus_index, plus_index};
    CHECK(d.weight(plus_plus) == doctest::Approx((1.0 - a.dot(b)) / 4.0).epsilon(1e-9));
  }
}

TEST_CASE("equal settings kill the same-outcome weight") {
  QuantumState u = singlet_state();
  CMatrix id = identity(2);
  Vector3 a(0, 0, 1);
  auto ctx = ObservableContext::make(
      {{"A", kron(spin_observable(a), id)}, {"B", kron(id, spin_observable(a))}});
  auto model = born_model(u, {ctx});
  Assignment plus_plus;
  plus_plus.members = model.scenario().cover()[0].members;
  plus_plus.outcomes = {1, 1};
  CHECK(model.at(0).weight(plus_plus) == 0.0);  // dropped from the support
}

TEST_CASE("the CHSH Born model is no-signalling and its weights are sound") {
  auto model = born_model(singlet_state(), chsh_contexts(0, 90, 45, 135));
  CHECK(is_no_signalling(model).holds);
  for (const auto& d : model.table()) {
    double total = 0;
    for (const auto& [sec, w] : d.support()) {
      CHECK(w >= 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("born_model rejects non-commuting and inconsistent contexts") {
  CHECK_THROWS_AS(ObservableContext::make({{"x", pauli(1)}, {"z", pauli(3)}}), Error);
  auto c1 = ObservableContext::make({{"x", pauli(1)}});
  auto c2 = ObservableContext::make({{"x", pauli(3)}});
  try {
    born_model(QuantumState::density(CMatrix::Identity(2, 2) / 2.0), {c1, c2});
    FAIL("expected InconsistentSharedObservable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentSharedObservable);
  }
}

TEST_CASE("projectors of a context sum to the identity") {
  auto ctx = ObservableContext::make(
      {{"A", kron(spin_observable(Vector3(0, 0, 1)), identity(2))},
       {"B", kron(identity(2), spin_observable(Vector3(1, 0, 0)))}});
  for (size_t o = 0; o < ctx.size(); ++o) {
    CMatrix sum = CMatrix::Zero(4, 4);
    for (size_t e = 0; e < ctx.eigenvalues(o).size(); ++e) sum += ctx.projector(o, e);
    CHECK(max_abs(CMatrix(sum - identity(4))) < 1e-10);
  }
  // Joint projectors over all outcome tuples resolve the identity too.
  CMatrix joint_sum = CMatrix::Zero(4, 4);
  for (size_t ea = 0; ea < ctx.eigenvalues(0).size(); ++ea) {
    for (size_t eb = 0; eb < ctx.eigenvalues(1).size(); ++eb) {
      joint_sum += ctx.projector(0, ea) * ctx.projector(1, eb);
    }
  }
  CHECK(max_abs(CMatrix(joint_sum - identity(4))) < 1e-10);
}

TEST_CASE("Born models are no-signalling across randomized spin settings") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> angle(0.0, 360.0);
  for (int trial = 0; trial < 10; ++trial) {
    auto model = born_model(
        singlet_state(),
        chsh_contexts(angle(rng), angle(rng), angle(rng), angle(rng)));
    CHECK(is_no_signalling(model).holds);
  }
}

TEST_CASE("collapsed Bell operator stays within the classical bound") {
  CMatrix a = kron(spin_observable(Vector3(0, 0, 1)), identity(2));
  CMatrix b = kron(identity(2), spin_observable(Vector3(1, 0, 0)));
  CMatrix bell = bell_operator(a, a, b, b);
  CHECK(max_abs(CMatrix(bell - 2.0 * a * b)) < 1e-12);
  CHECK(std::abs(real_expectation(singlet_state(), bell)) <= 2.0 + 1e-12);
}

TEST_CASE("slot order 90/0/45/135 reaches -2*sqrt(2) on the singlet") {
  CMatrix bell = bell_operator_from_angles(90, 0, 45, 135);
  double value = real_expectation(singlet_state(), bell);
  CHECK(value == doctest::Approx(-2.0 * std::numbers::sqrt2).epsilon(1e-9));
  CHECK(std::abs(value) > 2.0);
  // The written slot order 0/90/45/135 collapses to zero instead; the
  // optimum at these four angles lives in a relabeled slot assignment.
  CHECK(real_expectation(singlet_state(), bell_operator_from_angles(0, 90, 45, 135)) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("Bell operators respect the Tsirelson ceiling") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> angle(0.0, 360.0);
  for (int trial = 0; trial < 25; ++trial) {
    CMatrix bell = bell_operator_from_angles(angle(rng), angle(rng), angle(rng), angle(rng));
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(bell);
    double norm = std::max(std::abs(solver.eigenvalues().minCoeff()),
                           std::abs(solver.eigenvalues().maxCoeff()));
    CHECK(norm <= 2.0 * std::numbers::sqrt2 + 1e-9);
  }
}

TEST_CASE("bell_operator validates its party structure") {
  CMatrix same_factor_a = kron(pauli(1), identity(2));
  CMatrix same_factor_b = kron(pauli(3), identity(2));
  try {
    bell_operator(same_factor_a, same_factor_a, same_factor_b, same_factor_b);
    FAIL("expected NonCommutingParties");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonCommutingParties);
  }
  CMatrix too_big = 2.0 * kron(pauli(1), identity(2));
  CMatrix fine = kron(identity(2), pauli(3));
  try {
    bell_operator(too_big, too_big, fine, fine);
    FAIL("expected SpectrumOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpectrumOutOfRange);
  }
}

TEST_CASE("the 45-degree grid finds the Tsirelson value") {
  auto scan = max_bell_violation(singlet_state(), 45);
  CHECK(scan.best_abs == doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-9));
}

TEST_CASE("grid refinement never loses value") {
  auto coarse = max_bell_violation(singlet_state(), 90);
  auto mid = max_bell_violation(singlet_state(), 45);
  auto fine = max_bell_violation(singlet_state(), 15);
  CHECK(coarse.best_abs <= mid.best_abs + 1e-12);
  CHECK(mid.best_abs <= fine.best_abs + 1e-12);
}

TEST_CASE("the maximally mixed state shows no violation") {
  QuantumState mixed = QuantumState::density(CMatrix::Identity(4, 4) / 4.0);
  auto scan = max_bell_violation(mixed, 45);
  CHECK(scan.best_abs == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("product states stay within the classical bound and stay local") {
  CVector up(2);
  up << 1, 0;
  QuantumState prod = QuantumState::pure(kron(up, up));
  auto scan = max_bell_violation(prod, 45);
  CHECK(scan.best_abs <= 2.0 + 1e-9);

  auto model = born_model(prod, chsh_contexts(0, 90, 45, 135));
  auto rationalized = rationalize_model(model, BigInt(1000000));
  CHECK(find_local_model(rationalized.model).feasible);
}

TEST_CASE("system_from_algebra: mixed state is uniform on both axes") {
  FiniteSystemPresentation p;
  p.blocks = {2};
  p.contexts = {{{"sz", pauli(3)}}, {{"sx", pauli(1)}}};
  p.states = {QuantumState::density(CMatrix::Identity(2, 2) / 2.0)};
  auto system = system_from_algebra(p);
  REQUIRE(system.models.size() == 1);
  CHECK(system.scenario.cover().size() == 2);
  for (size_t c = 0; c < 2; ++c) {
    for (const auto& [sec, w] : system.models[0].at(c).support()) {
      CHECK(w == doctest::Approx(0.5).epsilon(1e-10));
    }
  }
}

TEST_CASE("system_from_algebra: a sigma3 eigenstate is deterministic on sz only") {
  CVector up(2);
  up << 1, 0;  // basis vector e2 = (1,0); sigma3 eigenvalue +1
  FiniteSystemPresentation p;
  p.blocks = {2};
  p.contexts = {{{"sz", pauli(3)}}, {{"sx", pauli(1)}}};
  p.states = {QuantumState::pure(up)};
  auto system = system_from_algebra(p);
  const auto& sz_dist = system.models[0].at(0);
  CHECK(sz_dist.support().size() == 1);
  const auto& sx_dist = system.models[0].at(1);
  CHECK(sx_dist.support().size() == 2);
  for (const auto& [sec, w] : sx_dist.support()) {
    CHECK(w == doctest::Approx(0.5).epsilon(1e-10));
  }
}

TEST_CASE("system_from_algebra keeps only maximal contexts") {
  FiniteSystemPresentation p;
  p.blocks = {4};
  CMatrix sz1 = kron(pauli(3), identity(2));
  CMatrix sz2 = kron(identity(2), pauli(3));
  p.contexts = {{{"z1", sz1}}, {{"z1", sz1}, {"z2", sz2}}};
  p.states = {};
  auto system = system_from_algebra(p);
  CHECK(system.scenario.cover().size() == 1);
  CHECK(system.scenario.cover()[0].size() == 2);
}

TEST_CASE("system_from_algebra reproduces the singlet CHSH pipeline") {
  FiniteSystemPresentation p;
  p.blocks = {4};
  CMatrix id = identity(2);
  auto a = [&](double deg) { return kron(spin_observable(coplanar_direction(deg)), id); };
  auto b = [&](double deg) { return kron(id, spin_observable(coplanar_direction(deg))); };
  p.contexts = {{{"a1", a(0)}, {"b1", b(45)}},
                {{"a1", a(0)}, {"b2", b(135)}},
                {{"a2", a(90)}, {"b1", b(45)}},
                {{"a2", a(90)}, {"b2", b(135)}}};
  p.states = {singlet_state()};
  auto system = system_from_algebra(p);
  auto direct = born_model(singlet_state(), chsh_contexts(0, 90, 45, 135));
  REQUIRE(system.models.size() == 1);
  for (size_t c = 0; c < 4; ++c) {
    CHECK(system.models[0].at(c) == direct.at(c));
  }
  CHECK(is_no_signalling(system.models[0]).holds);
}

TEST_CASE("adjoin-then-strip is the identity on presentations") {
  FiniteSystemPresentation p;
  p.blocks = {2};
  p.contexts = {{{"sz", pauli(3)}}};
  p.states = {singlet_state()};
  CHECK(roundtrip_identity(p));

  FiniteSystemPresentation marked = p;
  marked.formal_markers = {"unrelated"};
  CHECK(roundtrip_identity(marked));

  auto once = strip_formal_element(adjoin_formal_element(p));
  auto twice = strip_formal_element(adjoin_formal_element(once));
  CHECK(equal_presentations(once, twice));
}

TEST_CASE("intertwiner checks") {
  Endomorphism ident = [](const CMatrix& n) { return n; };
  CHECK(is_intertwiner(identity(2), ident, ident, {pauli(1), pauli(2), pauli(3)}));

  // Swap conjugation exchanges the tensor factors.
  CMatrix swap(4, 4);
  swap << 1, 0, 0, 0,
          0, 0, 1, 0,
          0, 1, 0, 0,
          0, 0, 0, 1;
  Endomorphism left = [](const CMatrix& n) { return kron(n, identity(2)); };
  Endomorphism right = [](const CMatrix& n) { return kron(identity(2), n); };
  CHECK(is_intertwiner(swap, left, right, {pauli(1), pauli(2), pauli(3)}));

  // sigma1 does not intertwine the identity endomorphism against sigma3.
  CHECK_FALSE(is_intertwiner(pauli(1), ident, ident, {pauli(3)}));
}
