#include "wigline/hilbert.hpp"

#include <cmath>

namespace wigline {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

OperatorMatrix OperatorMatrix::hermitian(Matrix mat) {
  require(mat.rows() == mat.cols(), "OperatorMatrix: matrix must be square");
  const double dev = max_abs(mat - mat.adjoint());
  if (dev > 1e-12)
    throw std::invalid_argument("OperatorMatrix: Hermitian label violated, deviation " +
                                std::to_string(dev));
  return {std::move(mat), MatrixKind::Hermitian};
}

OperatorMatrix OperatorMatrix::unitary(Matrix mat) {
  require(mat.rows() == mat.cols(), "OperatorMatrix: matrix must be square");
  return {std::move(mat), MatrixKind::Unitary};
}

OperatorMatrix OperatorMatrix::general(Matrix mat) {
  require(mat.rows() == mat.cols(), "OperatorMatrix: matrix must be square");
  return {std::move(mat), MatrixKind::General};
}

JointState::JointState(int qubit_level, const Vector& field, FrameTag tag)
    : n_fock(static_cast<int>(field.size())), frame(tag) {
  require(qubit_level == 0 || qubit_level == 1, "JointState: qubit_level must be 0 or 1");
  require(n_fock >= 2, "JointState: field dimension must be >= 2");
  amp = Vector::Zero(2 * n_fock);
  amp.segment(qubit_level * n_fock, n_fock) = field;
  check_norm();
}

void JointState::check_norm() const {
  const double n = norm();
  if (std::abs(n - 1.0) > norm_tolerance)
    throw std::runtime_error("JointState: norm " + std::to_string(n) + " outside tolerance");
}

double JointState::population_ground() const { return amp.head(n_fock).squaredNorm(); }

double JointState::population_excited() const { return amp.tail(n_fock).squaredNorm(); }

double JointState::fock_population(int n) const {
  return std::norm(at(0, n)) + std::norm(at(1, n));
}

double JointState::tail_population() const {
  return fock_population(n_fock - 1) + fock_population(n_fock - 2);
}

double JointState::mean_photon_number() const {
  double nbar = 0.0;
  for (int n = 1; n < n_fock; ++n) nbar += n * fock_population(n);
  return nbar;
}

Vector JointState::qubit_block(int qubit) const { return amp.segment(qubit * n_fock, n_fock); }

DensityMatrix DensityMatrix::from_pure(const Vector& psi) {
  const double n2 = psi.squaredNorm();
  require(n2 > 0.0, "DensityMatrix: zero state");
  DensityMatrix out{(psi * psi.adjoint()) / n2};
  return out;
}

DensityMatrix DensityMatrix::from_matrix(Matrix rho) {
  DensityMatrix out{std::move(rho)};
  out.validate();
  return out;
}

void DensityMatrix::validate() const {
  require(rho.rows() == rho.cols(), "DensityMatrix: matrix must be square");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw std::runtime_error("DensityMatrix: trace deviates from 1");
  if (max_abs(rho - rho.adjoint()) > 1e-12)
    throw std::runtime_error("DensityMatrix: not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10)
    throw std::runtime_error("DensityMatrix: negative eigenvalue");
}

OperatorMatrix annihilation(const FockSpace& space) {
  Matrix a = Matrix::Zero(space.n_fock, space.n_fock);
  for (int n = 1; n < space.n_fock; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return OperatorMatrix::general(std::move(a));
}

OperatorMatrix number_operator(const FockSpace& space) {
  Matrix n = Matrix::Zero(space.n_fock, space.n_fock);
  for (int k = 0; k < space.n_fock; ++k) n(k, k) = static_cast<double>(k);
  return OperatorMatrix::hermitian(std::move(n));
}

OperatorMatrix parity(const FockSpace& space) {
  Matrix p = Matrix::Zero(space.n_fock, space.n_fock);
  for (int k = 0; k < space.n_fock; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return OperatorMatrix::unitary(std::move(p));
}

OperatorMatrix displacement(const FockSpace& space, Complex alpha) {
  // D(alpha) = exp(alpha a^dag - conj(alpha) a) = exp(-i H) with Hermitian
  // generator H = i (alpha a^dag - conj(alpha) a).
  const Matrix a = annihilation(space).m;
  Matrix gen = kI * (alpha * a.adjoint() - std::conj(alpha) * a);
  return OperatorMatrix::unitary(expm_hermitian(OperatorMatrix::hermitian(std::move(gen)), 1.0).m);
}

OperatorMatrix pauli(PauliAxis axis) {
  Matrix s = Matrix::Zero(2, 2);
  switch (axis) {
    case PauliAxis::X:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case PauliAxis::Y:
      // (g, e) ordering with sigma_z = diag(-1, +1) requires
      // sigma_y = [[0, i], [-i, 0]] to keep sigma_x sigma_y = i sigma_z
      s(0, 1) = kI;
      s(1, 0) = -kI;
      break;
    case PauliAxis::Z:
      s(0, 0) = -1.0;
      s(1, 1) = 1.0;
      break;
  }
  return OperatorMatrix::hermitian(std::move(s));
}

OperatorMatrix identity_op(int dim) {
  return OperatorMatrix::unitary(Matrix::Identity(dim, dim));
}

OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b) {
  const int ra = a.dim();
  const int rb = b.dim();
  Matrix out(ra * rb, ra * rb);
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < ra; ++j) out.block(i * rb, j * rb, rb, rb) = a.m(i, j) * b.m;
  MatrixKind kind = MatrixKind::General;
  if (a.kind == b.kind) kind = a.kind;
  return {std::move(out), kind};
}

OperatorMatrix expm_hermitian(const OperatorMatrix& h, double t) {
  return OperatorMatrix::unitary(HermitianPropagator(h).propagator(t));
}

HermitianPropagator::HermitianPropagator(const OperatorMatrix& h) {
  if (h.kind != MatrixKind::Hermitian)
    throw std::invalid_argument("HermitianPropagator: operator must carry the Hermitian label");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("HermitianPropagator: eigensolver failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Matrix HermitianPropagator::propagator(double t) const {
  Vector phases(eigenvalues_.size());
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k)
    phases(k) = std::exp(-kI * eigenvalues_(k) * t);
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

Vector HermitianPropagator::apply(double t, const Vector& psi) const {
  Vector coeffs = eigenvectors_.adjoint() * psi;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k)
    coeffs(k) *= std::exp(-kI * eigenvalues_(k) * t);
  return eigenvectors_ * coeffs;
}

DensityMatrix partial_trace_qubit(const JointState& state) {
  const Vector g = state.qubit_block(0);
  const Vector e = state.qubit_block(1);
  Matrix rho = g * g.adjoint() + e * e.adjoint();
  // round off the tiny anti-Hermitian residue from the outer products
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return DensityMatrix{std::move(rho)};
}

DensityMatrix partial_trace_qubit(const DensityMatrix& joint, int n_fock) {
  if (joint.dim() != 2 * n_fock)
    throw std::invalid_argument("partial_trace_qubit: dimension mismatch");
  Matrix rho = joint.rho.block(0, 0, n_fock, n_fock) +
               joint.rho.block(n_fock, n_fock, n_fock, n_fock);
  return DensityMatrix{std::move(rho)};
}

}  // namespace wigline
