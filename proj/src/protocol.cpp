#include "wigline/protocol.hpp"

#include "wigline/device.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace wigline {

namespace {

using std::numbers::pi;

// equatorial Bloch rotation exp(-i (theta/2) n.sigma) about
// n = (cos phi, -sin phi, 0); n.sigma = [[0, e^{-i phi}], [e^{i phi}, 0]]
// in the (g, e) ordering
Matrix bloch_rotation(double theta, double phi) {
  Matrix r(2, 2);
  const double c = std::cos(theta / 2.0);
  const Complex s = -kI * std::sin(theta / 2.0);
  r(0, 0) = c;
  r(0, 1) = s * std::exp(-kI * phi);
  r(1, 0) = s * std::exp(kI * phi);
  r(1, 1) = c;
  return r;
}

// diag(e^{i theta n}) on the field
Matrix field_rotor(const FockSpace& space, double theta) {
  Matrix r = Matrix::Zero(space.n_fock, space.n_fock);
  for (int n = 0; n < space.n_fock; ++n) r(n, n) = std::exp(kI * theta * static_cast<double>(n));
  return r;
}

// diag over (q, n) of e^{i theta (n + s_q/2)}, s_g = -1, s_e = +1
Matrix joint_rotor(const FockSpace& space, double theta) {
  const int nf = space.n_fock;
  Matrix r = Matrix::Zero(2 * nf, 2 * nf);
  for (int q = 0; q < 2; ++q) {
    const double s_half = (q == 1) ? 0.5 : -0.5;
    for (int n = 0; n < nf; ++n)
      r(q * nf + n, q * nf + n) = std::exp(kI * theta * (static_cast<double>(n) + s_half));
  }
  return r;
}

Complex segment_one_drive(const ProtocolParams& p, Complex alpha, double t_D) {
  // phase fixed by alpha = -i eps t_D; amplitude |eps_D| by construction
  if (t_D == 0.0) return Complex(p.eps_D_mag, 0.0);
  return kI * alpha / t_D;
}

RegimeStatus classify(double ratio) {
  if (ratio <= 0.1) return RegimeStatus::Ok;
  if (ratio <= 0.5) return RegimeStatus::Marginal;
  return RegimeStatus::Violated;
}

}  // namespace

ProtocolParams::ProtocolParams(SystemParams system, double eps_D, int m_commensurate, double phi_1,
                               double phi_2, int fock_dim)
    : sys(system),
      eps_D_mag(eps_D),
      m(m_commensurate),
      phi1(phi_1),
      phi2(phi_2),
      n_fock(fock_dim) {
  sys.validate();
  if (sys.delta == 0.0) throw std::invalid_argument("ProtocolParams: delta must be nonzero");
  if (eps_D_mag <= 0.0) throw std::invalid_argument("ProtocolParams: eps_D must be positive");
  if (m <= 0) throw std::invalid_argument("ProtocolParams: m must be a positive integer");
  if (n_fock < 2) throw std::invalid_argument("ProtocolParams: n_fock must be >= 2");
  eps_half_mag = sys.delta * sys.delta / (8.0 * static_cast<double>(m) * sys.g);
}

bool ProtocolParams::wigner_mode() const {
  const double d = std::remainder(phi1 - phi2 - pi / 2.0, 2.0 * pi);
  return std::abs(d) < 1e-12;
}

StepTimes step_times(const ProtocolParams& p, Complex alpha) {
  if (p.eps_D_mag <= 0.0 || p.eps_half_mag <= 0.0)
    throw std::invalid_argument("step_times: drive amplitudes must be positive");
  StepTimes t;
  t.t_D = std::abs(alpha) / p.eps_D_mag;
  t.t_half = pi * p.sys.delta / (4.0 * p.sys.g * p.eps_half_mag);
  t.t_P = pi * p.sys.delta / (2.0 * p.sys.g * p.sys.g);
  return t;
}

std::vector<DriveSegment> build_schedule(const ProtocolParams& p, Complex alpha) {
  const StepTimes t = step_times(p, alpha);
  const double chi = p.sys.g * p.sys.g / p.sys.delta;
  const double omega_0 = p.sys.qubit_frequency();
  return {
      {p.sys.omega - chi, segment_one_drive(p, alpha, t.t_D), t.t_D, SegmentLabel::Displace},
      {omega_0, p.eps_half_mag * std::exp(kI * p.phi1), t.t_half, SegmentLabel::HalfPiPulse},
      {omega_0, 0.0, t.t_P, SegmentLabel::FreeDispersive},
      {omega_0, p.eps_half_mag * std::exp(kI * p.phi2), t.t_half, SegmentLabel::HalfPiPulse},
  };
}

BetaPhi beta_of(const ProtocolParams& p, Complex alpha) {
  const StepTimes t = step_times(p, alpha);
  const double delta = p.sys.delta;
  BetaPhi out;
  out.phi = (t.t_D + t.t_half / 2.0) * delta + p.sys.g * p.sys.g * t.t_D / delta + pi / 2.0 -
            p.phi1;
  out.beta = alpha + (2.0 * p.eps_half_mag / delta) * std::sin(t.t_half * delta / 2.0) *
                         std::exp(-kI * out.phi);
  return out;
}

Complex half_pulse_displacement(Complex eps, double delta, double t_half) {
  return -eps * (1.0 - std::exp(-kI * delta * t_half)) / delta;
}

OperatorMatrix analytic_total_unitary(const ProtocolParams& p, Complex alpha) {
  const FockSpace space(p.n_fock);
  const StepTimes t = step_times(p, alpha);
  const double delta = p.sys.delta;
  const double g = p.sys.g;
  const OperatorMatrix id2 = identity_op(2);
  const OperatorMatrix id_f = identity_op(p.n_fock);

  // U1: field displacement written directly (equals the step-1 drive outcome)
  const Matrix u1 = tensor(id2, displacement(space, alpha)).m;

  // U_hat: frame switch from omega - g^2/Delta to omega_0 accumulated over t_D
  const Matrix u_switch = joint_rotor(space, (delta + g * g / delta) * t.t_D);

  // pi/2 pulses: qubit rotation, residual field displacement, field rotor
  const auto half_pulse = [&](double phi_j) {
    const Complex eps = p.eps_half_mag * std::exp(kI * phi_j);
    const Matrix rot = tensor(id2, OperatorMatrix::general(
                                       field_rotor(space, delta * t.t_half))).m;
    const Matrix disp =
        tensor(id2, displacement(space, half_pulse_displacement(eps, delta, t.t_half))).m;
    const Matrix qubit =
        tensor(OperatorMatrix::general(bloch_rotation(pi / 2.0, phi_j)), id_f).m;
    return Matrix(rot * disp * qubit);
  };

  // U3: dispersive parity kernel e^{-i (pi/2)(n + 1/2) sigma_z} with the
  // deterministic field phase e^{i (pi Delta^2 / 2 g^2) n} in front
  const double kappa = pi * delta * delta / (2.0 * g * g);
  const int nf = p.n_fock;
  Matrix u3 = Matrix::Zero(2 * nf, 2 * nf);
  for (int q = 0; q < 2; ++q) {
    const double sz = (q == 1) ? 1.0 : -1.0;
    for (int n = 0; n < nf; ++n)
      u3(q * nf + n, q * nf + n) = std::exp(kI * kappa * static_cast<double>(n)) *
                                   std::exp(-kI * (pi / 2.0) * (n + 0.5) * sz);
  }

  Matrix total = half_pulse(p.phi2) * u3 * half_pulse(p.phi1) * u_switch * u1;
  return OperatorMatrix::unitary(std::move(total));
}

RegimeStatus RegimeReport::worst() const {
  RegimeStatus w = RegimeStatus::Ok;
  for (const RegimeCheck& c : checks)
    if (static_cast<int>(c.status) > static_cast<int>(w)) w = c.status;
  return w;
}

RegimeReport validate_regime(const ProtocolParams& p, const DensityMatrix& rho_field,
                             Complex alpha) {
  const FockSpace space(rho_field.dim());
  RegimeReport report;
  report.nbar_initial = rho_field.expectation_real(number_operator(space).m);
  const Complex a_mean = (rho_field.rho * annihilation(space).m).trace();
  report.nbar_displaced = report.nbar_initial + 2.0 * (std::conj(alpha) * a_mean).real() +
                          std::norm(alpha);

  const double delta = std::abs(p.sys.delta);
  const double g = p.sys.g;
  report.checks[0] = {"dispersive", g * std::sqrt(report.nbar_displaced + 1.0) / delta,
                      RegimeStatus::Ok};
  report.checks[1] = {"displacement_drive", p.eps_D_mag / (g + delta * delta / (2.0 * g)),
                      RegimeStatus::Ok};
  const double denom = p.eps_half_mag / g - 0.5;
  report.checks[2] = {"half_pulse_occupation",
                      denom > 0.0 ? report.nbar_displaced / denom
                                  : std::numeric_limits<double>::infinity(),
                      RegimeStatus::Ok};
  for (RegimeCheck& c : report.checks) c.status = classify(c.ratio);
  return report;
}

TomographyOutcome measure_wigner_point(const DensityMatrix& rho_field, const ProtocolParams& p,
                                       Complex alpha, Engine engine) {
  rho_field.validate();
  if (rho_field.dim() != p.n_fock)
    throw std::invalid_argument("measure_wigner_point: field dimension mismatch");
  const FockSpace space(p.n_fock);
  if (!space.displacement_within_bound(alpha))
    warn("measure_wigner_point: displacement " + std::to_string(std::abs(alpha)) +
         " strains truncation n_fock=" + std::to_string(p.n_fock));

  const StepTimes t = step_times(p, alpha);
  TomographyOutcome out;
  out.beta = beta_of(p, alpha).beta;
  out.point = -out.beta;
  out.generalized_quadrature = !p.wigner_mode();
  out.duration = t.total();
  out.duration_ns = to_nanoseconds(out.duration);
  out.regime = validate_regime(p, rho_field, alpha);

  if (engine == Engine::Analytic) {
    const Matrix u = analytic_total_unitary(p, alpha).m;
    // qubit starts in |g>: embed rho in the g-block of the joint space
    const int nf = p.n_fock;
    Matrix joint = Matrix::Zero(2 * nf, 2 * nf);
    joint.topLeftCorner(nf, nf) = rho_field.rho;
    joint = u * joint * u.adjoint();
    out.p_g = joint.topLeftCorner(nf, nf).trace().real();
    out.p_e = joint.bottomRightCorner(nf, nf).trace().real();
    double tail = 0.0;
    for (int q = 0; q < 2; ++q)
      tail += joint(q * nf + nf - 1, q * nf + nf - 1).real() +
              joint(q * nf + nf - 2, q * nf + nf - 2).real();
    out.tail_population = tail;
  } else {
    // mixed input: evolve each eigencomponent as a pure trajectory
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_field.rho);
    const std::vector<DriveSegment> schedule = build_schedule(p, alpha);
    double p_e = 0.0, p_g = 0.0, tail = 0.0;
    for (int k = 0; k < rho_field.dim(); ++k) {
      const double weight = solver.eigenvalues()(k);
      if (weight < 1e-12) continue;
      Vector field = solver.eigenvectors().col(k);
      field /= field.norm();
      JointState state(0, field);
      ScheduleDiagnostics diag;
      state = evolve_schedule(std::move(state), p.sys, schedule, engine, &diag);
      p_e += weight * state.population_excited();
      p_g += weight * state.population_ground();
      tail += weight * state.tail_population();
    }
    out.p_e = p_e;
    out.p_g = p_g;
    out.tail_population = tail;
  }

  out.w_est = (out.p_e - out.p_g) / pi;
  out.unreliable = out.tail_population > 1e-4;
  return out;
}

}  // namespace wigline
