#include "wigline/hilbert.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wigline;
using namespace wigline::testing;
using std::numbers::pi;

TEST_CASE("fock space validates truncation and displacement bound") {
  CHECK_THROWS_AS(FockSpace(1), std::invalid_argument);
  const FockSpace space(64);
  CHECK(space.displacement_within_bound(2.0));          // 4 + 12 <= 64
  CHECK_FALSE(space.displacement_within_bound(8.0));    // 64 + 48 > 64
  CHECK(space.displacement_within_bound(Complex(0.0, -5.0)));  // 25 + 30 <= 64
}

TEST_CASE("hermitian label is enforced at construction") {
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(OperatorMatrix::hermitian(bad), std::invalid_argument);
  Matrix almost = Matrix::Identity(2, 2);
  almost(0, 1) = Complex(0.0, 5e-12);  // beyond the 1e-12 deviation budget
  CHECK_THROWS_AS(OperatorMatrix::hermitian(almost), std::invalid_argument);
  CHECK(OperatorMatrix::hermitian(Matrix::Identity(3, 3)).kind == MatrixKind::Hermitian);
}

TEST_CASE("annihilation ladder and number operator") {
  const FockSpace space(8);
  const Matrix a = annihilation(space).m;
  for (int n = 1; n < 8; ++n) CHECK(std::abs(a(n - 1, n) - std::sqrt(double(n))) < 1e-14);
  CHECK(max_abs((a.adjoint() * a) - number_operator(space).m) < 1e-13);
  // canonical commutator holds away from the truncation edge
  const Matrix comm = a * a.adjoint() - a.adjoint() * a;
  CHECK(max_abs(comm.topLeftCorner(7, 7) - Matrix::Identity(7, 7)) < 1e-13);
}

TEST_CASE("parity flips odd fock levels and conjugates a to -a") {
  const FockSpace space(16);
  const Matrix p = parity(space).m;
  CHECK(p(0, 0) == Complex(1.0));
  CHECK(p(1, 1) == Complex(-1.0));
  CHECK(max_abs(p * p - Matrix::Identity(16, 16)) == 0.0);
  const Matrix a = annihilation(space).m;
  CHECK(max_abs(p * a * p + a) == 0.0);
}

TEST_CASE("displacement operator basics") {
  const FockSpace space(64);
  const Complex alpha(0.7, -0.4);
  const Matrix d = displacement(space, alpha).m;
  const Matrix id = Matrix::Identity(64, 64);

  CHECK(max_abs(d.adjoint() * d - id) < 1e-12);
  CHECK(max_abs(displacement(space, 0.0).m - id) < 1e-13);
  CHECK(max_abs(d * displacement(space, -alpha).m - id) < 1e-11);

  // column 0 carries the coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!)
  double factorial = 1.0;
  Complex power = 1.0;
  for (int n = 0; n < 6; ++n) {
    const Complex expected = std::exp(-std::norm(alpha) / 2.0) * power / std::sqrt(factorial);
    CHECK(std::abs(d(n, 0) - expected) < 1e-12);
    power *= alpha;
    factorial *= double(n + 1);
  }

  // D(a)^dag A D(a) = A + a holds only deep in the bulk: the corner defect of
  // the truncated [a, a^dag] leaks inward by roughly |a| sqrt(n_fock) levels
  const Matrix a_disp = d.adjoint() * annihilation(space).m * d;
  const Matrix shifted = annihilation(space).m + alpha * id;
  CHECK(max_abs((a_disp - shifted).topLeftCorner(16, 16)) < 1e-10);
}

TEST_CASE("pauli matrices satisfy the cyclic algebra in (g,e) ordering") {
  const Matrix sx = pauli(PauliAxis::X).m;
  const Matrix sy = pauli(PauliAxis::Y).m;
  const Matrix sz = pauli(PauliAxis::Z).m;
  CHECK(sz(0, 0) == Complex(-1.0));  // ground state has sigma_z = -1
  CHECK(sz(1, 1) == Complex(1.0));
  CHECK(max_abs(sx * sy - kI * sz) == 0.0);
  CHECK(max_abs(sy * sz - kI * sx) == 0.0);
  CHECK(max_abs(sz * sx - kI * sy) == 0.0);
}

TEST_CASE("tensor product uses qubit-major layout") {
  const FockSpace space(4);
  const OperatorMatrix joint = tensor(pauli(PauliAxis::Z), number_operator(space));
  // index q*n_fock + n: the g-block carries -n, the e-block +n
  CHECK(joint.m(2, 2) == Complex(-2.0));
  CHECK(joint.m(4 + 2, 4 + 2) == Complex(2.0));
  CHECK(joint.dim() == 8);
  CHECK(joint.kind == MatrixKind::Hermitian);
}

TEST_CASE("matrix exponential of hermitian operators") {
  const double t = 0.37;
  const Matrix u = expm_hermitian(pauli(PauliAxis::Z), t).m;
  CHECK(std::abs(u(0, 0) - std::exp(kI * t)) < 1e-14);   // e^{-i(-1)t}
  CHECK(std::abs(u(1, 1) - std::exp(-kI * t)) < 1e-14);

  std::mt19937 rng(11);
  const OperatorMatrix h = random_hermitian(32, rng);
  const Matrix u1 = expm_hermitian(h, 0.8).m;
  const Matrix u2 = expm_hermitian(h, 0.5).m * expm_hermitian(h, 0.3).m;
  CHECK(max_abs(u1 - u2) < 1e-12);
  CHECK(max_abs(u1.adjoint() * u1 - Matrix::Identity(32, 32)) < 1e-12);

  const HermitianPropagator prop(h);
  const Vector psi = random_pure(32, rng);
  CHECK((prop.apply(0.8, psi) - u1 * psi).norm() < 1e-12);
  CHECK_THROWS_AS(HermitianPropagator(annihilation(FockSpace(4))), std::invalid_argument);
}

TEST_CASE("joint state layout and populations") {
  const FockSpace space(6);
  Vector field = Vector::Zero(6);
  field(3) = 1.0;
  const JointState state(1, field);
  CHECK(state.amp(6 + 3) == Complex(1.0));
  CHECK(state.population_excited() == doctest::Approx(1.0));
  CHECK(state.population_ground() == doctest::Approx(0.0));
  CHECK(state.fock_population(3) == doctest::Approx(1.0));
  CHECK(state.mean_photon_number() == doctest::Approx(3.0));
  CHECK(state.tail_population() == doctest::Approx(0.0));

  CHECK_THROWS_AS(JointState(2, field), std::invalid_argument);
  Vector unnormalized = 2.0 * field;
  CHECK_THROWS_AS(JointState(0, unnormalized), std::runtime_error);
}

TEST_CASE("density matrix validation catches each defect") {
  std::mt19937 rng(5);
  const DensityMatrix rho = random_density(8, 4, rng);
  CHECK_NOTHROW(rho.validate());
  CHECK(rho.trace_real() == doctest::Approx(1.0));

  Matrix scaled = 2.0 * rho.rho;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(scaled), std::runtime_error);

  Matrix skew = rho.rho;
  skew(0, 1) += Complex(0.0, 1e-6);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(skew), std::runtime_error);

  Matrix negative = Matrix::Zero(4, 4);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(negative), std::runtime_error);
}

TEST_CASE("partial trace over the qubit") {
  const FockSpace space(4);
  // maximally entangled (|g,0> + |e,1>)/sqrt(2): field marginal is diag(1/2, 1/2)
  Vector amp = Vector::Zero(8);
  amp(0) = 1.0 / std::sqrt(2.0);
  amp(4 + 1) = 1.0 / std::sqrt(2.0);
  JointState bell;
  bell.amp = amp;
  bell.n_fock = 4;
  const DensityMatrix marginal = partial_trace_qubit(bell);
  CHECK(marginal.rho(0, 0).real() == doctest::Approx(0.5));
  CHECK(marginal.rho(1, 1).real() == doctest::Approx(0.5));
  CHECK(std::abs(marginal.rho(0, 1)) < 1e-15);

  const DensityMatrix joint = DensityMatrix::from_pure(amp);
  const DensityMatrix via_matrix = partial_trace_qubit(joint, 4);
  CHECK(max_abs(via_matrix.rho - marginal.rho) < 1e-14);

  // product state traces to the pure field component
  std::mt19937 rng(7);
  const Vector field = random_pure(4, rng);
  const JointState product(0, field);
  const DensityMatrix pure_marginal = partial_trace_qubit(product);
  CHECK(max_abs(pure_marginal.rho - (field * field.adjoint())) < 1e-14);
}
