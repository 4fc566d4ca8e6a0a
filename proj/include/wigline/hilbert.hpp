#pragma once

// Truncated qubit+oscillator Hilbert space: states, operators, matrix exponentials.
//
// Conventions used throughout:
//   joint basis index = qubit_index * n_fock + fock_index, qubit 0 = |g>, 1 = |e>
//   sigma_z |e> = +|e>, sigma_z |g> = -|g>
//   D(alpha) = exp(alpha a^dag - conj(alpha) a)
//   parity P = exp(i pi a^dag a) = diag((-1)^n)

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wigline {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Oscillator truncation. Amplitudes are reliable while the displaced photon
// number stays well below n_fock; displacement_within_bound encodes the
// working rule |alpha|^2 + 6|alpha| <= n_fock.
struct FockSpace {
  int n_fock;

  explicit FockSpace(int n) : n_fock(n) {
    if (n < 2) throw std::invalid_argument("FockSpace: n_fock must be >= 2");
  }
  bool displacement_within_bound(Complex alpha) const {
    const double r = std::abs(alpha);
    return r * r + 6.0 * r <= static_cast<double>(n_fock);
  }
};

enum class MatrixKind { Hermitian, Unitary, General };

// Dense operator tagged with its algebraic role. The Hermitian tag is checked
// at construction (max-abs deviation of M - M^dag below 1e-12).
struct OperatorMatrix {
  Matrix m;
  MatrixKind kind = MatrixKind::General;

  static OperatorMatrix hermitian(Matrix mat);
  static OperatorMatrix unitary(Matrix mat);
  static OperatorMatrix general(Matrix mat);

  int dim() const { return static_cast<int>(m.rows()); }
  OperatorMatrix adjoint() const { return {m.adjoint(), kind}; }
};

// Frame bookkeeping for states: amplitudes are expressed in a frame rotating
// at rotation_frequency via R(t) = exp(+i w (t - reference_time) (N + sigma_z/2)).
// All frames in this codebase share reference_time = 0 (lab and rotating frames
// coincide at t = 0); rotation_frequency = 0 means the lab frame.
struct FrameTag {
  double rotation_frequency = 0.0;
  double reference_time = 0.0;
};

// Pure state of qubit (x) oscillator, dimension 2 * n_fock.
struct JointState {
  Vector amp;
  int n_fock = 0;
  FrameTag frame;
  double norm_tolerance = 1e-10;

  JointState() = default;
  // product state |qubit> (x) |field>; qubit_level 0 = g, 1 = e
  JointState(int qubit_level, const Vector& field, FrameTag tag = {});

  double norm() const { return amp.norm(); }
  void check_norm() const;
  void renormalize() { amp /= amp.norm(); }

  int dim() const { return 2 * n_fock; }
  Complex& at(int qubit, int n) { return amp(qubit * n_fock + n); }
  Complex at(int qubit, int n) const { return amp(qubit * n_fock + n); }

  double population_ground() const;
  double population_excited() const;
  double fock_population(int n) const;        // summed over qubit levels
  double tail_population() const;             // top two Fock levels
  double mean_photon_number() const;
  Vector qubit_block(int qubit) const;        // field amplitudes for one qubit level
};

// Field density matrix with validity checks: unit trace (1e-10), Hermitian
// (1e-12), eigenvalues >= -1e-10.
struct DensityMatrix {
  Matrix rho;

  static DensityMatrix from_pure(const Vector& psi);
  static DensityMatrix from_matrix(Matrix rho);   // validates

  int dim() const { return static_cast<int>(rho.rows()); }
  double trace_real() const { return rho.trace().real(); }
  void validate() const;
  double expectation_real(const Matrix& op) const { return (rho * op).trace().real(); }
};

enum class PauliAxis { X, Y, Z };

// elementary operators on the oscillator space
OperatorMatrix annihilation(const FockSpace& space);
OperatorMatrix number_operator(const FockSpace& space);
OperatorMatrix parity(const FockSpace& space);
OperatorMatrix displacement(const FockSpace& space, Complex alpha);

// 2x2 Pauli matrices in the (g, e) ordering
OperatorMatrix pauli(PauliAxis axis);
OperatorMatrix identity_op(int dim);

// Kronecker product, left factor owns the slower index (qubit-major layout
// when called as tensor(qubit_op, field_op)).
OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b);

// exp(-i H t) for Hermitian H via eigendecomposition
OperatorMatrix expm_hermitian(const OperatorMatrix& h, double t);

// Cached eigendecomposition of a Hermitian operator; propagator(t) is cheap
// after the one-time solve.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const OperatorMatrix& h);
  Matrix propagator(double t) const;
  Vector apply(double t, const Vector& psi) const;

 private:
  Eigen::VectorXd eigenvalues_;
  Matrix eigenvectors_;
};

DensityMatrix partial_trace_qubit(const JointState& state);
DensityMatrix partial_trace_qubit(const DensityMatrix& joint, int n_fock);

}  // namespace wigline
