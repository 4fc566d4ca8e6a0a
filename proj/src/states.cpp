#include "wigline/states.hpp"

#include "wigline/device.hpp"

#include <cmath>
#include <numbers>

namespace wigline {

namespace {

using std::numbers::pi;

// fidelity of a pure state against the two-branch superposition
// (|mu> + e^{i phi} |-mu>)/N(phi), maximized over phi
struct PhaseFit {
  double phi = 0.0;
  double fidelity = 0.0;
};

PhaseFit fit_cat_phase(const FockSpace& space, const Vector& psi, Complex mu) {
  const Vector plus = coherent_state(space, mu);
  const Vector minus = coherent_state(space, -mu);
  const Complex u = plus.dot(psi);   // <mu|psi>
  const Complex v = minus.dot(psi);  // <-mu|psi>
  const double overlap = std::exp(-2.0 * std::norm(mu));  // Re<mu|-mu>

  const auto fidelity_at = [&](double phi) {
    const double num = std::norm(u + std::exp(-kI * phi) * v);
    const double n2 = 2.0 * (1.0 + overlap * std::cos(phi));
    return num / n2;
  };

  // coarse grid, then ternary refinement in the winning bracket
  const int grid = 4096;
  PhaseFit best;
  for (int k = 0; k < grid; ++k) {
    const double phi = 2.0 * pi * k / grid;
    const double f = fidelity_at(phi);
    if (f > best.fidelity) best = {phi, f};
  }
  double lo = best.phi - 2.0 * pi / grid;
  double hi = best.phi + 2.0 * pi / grid;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (fidelity_at(m1) < fidelity_at(m2))
      lo = m1;
    else
      hi = m2;
  }
  best.phi = std::remainder((lo + hi) / 2.0, 2.0 * pi);
  best.fidelity = fidelity_at(best.phi);
  return best;
}

}  // namespace

Vector fock_state(const FockSpace& space, int n) {
  if (n < 0 || n >= space.n_fock)
    throw std::invalid_argument("fock_state: level outside truncation");
  Vector v = Vector::Zero(space.n_fock);
  v(n) = 1.0;
  return v;
}

Vector coherent_state(const FockSpace& space, Complex alpha) {
  if (!space.displacement_within_bound(alpha))
    warn("coherent_state: amplitude " + std::to_string(std::abs(alpha)) +
         " strains truncation n_fock=" + std::to_string(space.n_fock));
  Vector v(space.n_fock);
  // amplitudes alpha^n/sqrt(n!) built by recurrence, then normalized; the
  // explicit e^{-|alpha|^2/2} prefactor would underflow long before the
  // truncation bound does
  v(0) = 1.0;
  for (int n = 1; n < space.n_fock; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  v /= v.norm();
  return v;
}

Vector cat_state(const FockSpace& space, Complex alpha0, double relative_phase, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("cat_state: sign must be +1 or -1");
  const Complex branch = static_cast<double>(sign) * std::exp(kI * relative_phase);
  Vector v = coherent_state(space, alpha0) + branch * coherent_state(space, -alpha0);
  const double n = v.norm();
  if (n < 1e-12) throw std::invalid_argument("cat_state: degenerate superposition");
  return v / n;
}

Vector make_state(const FockSpace& space, const StateSpec& spec) {
  switch (spec.kind) {
    case StateSpec::Kind::Vacuum:
      return fock_state(space, 0);
    case StateSpec::Kind::Fock:
      return fock_state(space, spec.fock_n);
    case StateSpec::Kind::Coherent:
      return coherent_state(space, spec.coherent_alpha);
    case StateSpec::Kind::Cat:
      return cat_state(space, spec.cat_alpha0, spec.cat_phase, spec.cat_sign);
  }
  throw std::invalid_argument("make_state: unknown state kind");
}

double wigner_direct(const DensityMatrix& rho, Complex alpha) {
  const FockSpace space(rho.dim());
  if (!space.displacement_within_bound(alpha))
    warn("wigner_direct: displacement " + std::to_string(std::abs(alpha)) +
         " strains truncation n_fock=" + std::to_string(rho.dim()));
  const Matrix d = displacement(space, alpha).m;
  const Complex value = (rho.rho * d * parity(space).m * d.adjoint()).trace() / pi;
  if (std::abs(value.imag()) > 1e-10)
    throw std::runtime_error("wigner_direct: imaginary residue above tolerance");
  return value.real();
}

double wigner_analytic(const StateSpec& spec, Complex alpha) {
  switch (spec.kind) {
    case StateSpec::Kind::Vacuum:
      return std::exp(-2.0 * std::norm(alpha)) / pi;
    case StateSpec::Kind::Fock: {
      const double x = 4.0 * std::norm(alpha);
      const double sign = (spec.fock_n % 2 == 0) ? 1.0 : -1.0;
      return sign * std::laguerre(static_cast<unsigned>(spec.fock_n), x) *
             std::exp(-2.0 * std::norm(alpha)) / pi;
    }
    case StateSpec::Kind::Coherent:
      return std::exp(-2.0 * std::norm(alpha - spec.coherent_alpha)) / pi;
    case StateSpec::Kind::Cat: {
      const Complex a0 = spec.cat_alpha0;
      const double s = static_cast<double>(spec.cat_sign);
      const double phi = spec.cat_phase;
      const double gauss_p = std::exp(-2.0 * std::norm(alpha - a0));
      const double gauss_m = std::exp(-2.0 * std::norm(alpha + a0));
      const double fringe_arg = 4.0 * (alpha * std::conj(a0)).imag() + phi;
      const double fringe = 2.0 * s * std::exp(-2.0 * std::norm(alpha)) * std::cos(fringe_arg);
      const double n2 = 2.0 * (1.0 + s * std::exp(-2.0 * std::norm(a0)) * std::cos(phi));
      return (gauss_p + gauss_m + fringe) / (pi * n2);
    }
  }
  throw std::invalid_argument("wigner_analytic: unknown state kind");
}

PreparedState prepare_coherent(const ProtocolParams& p, Complex alpha) {
  const FockSpace space(p.n_fock);
  PreparedState out;
  const double t_D = std::abs(alpha) / p.eps_D_mag;
  out.duration = t_D;
  out.duration_ns = to_nanoseconds(t_D);

  const Vector target = coherent_state(space, alpha);
  if (t_D == 0.0) {
    out.field = target;
    out.fidelity = 1.0;
    return out;
  }
  const double chi = p.sys.g * p.sys.g / p.sys.delta;
  const std::vector<DriveSegment> schedule = {
      {p.sys.omega - chi, kI * alpha / t_D, t_D, SegmentLabel::Displace}};
  JointState state(0, fock_state(space, 0));
  state = evolve_schedule(std::move(state), p.sys, schedule, Engine::Exact);
  const DensityMatrix rho = partial_trace_qubit(state);
  out.field = state.qubit_block(0);
  const double gnorm = out.field.norm();
  if (gnorm > 1e-6) out.field /= gnorm;
  out.fidelity = (target.adjoint() * rho.rho * target)(0, 0).real();
  return out;
}

PreparedState prepare_fock_one(const ProtocolParams& p, double eps_pi_mag, int m_pi) {
  if (m_pi <= 0) throw std::invalid_argument("prepare_fock_one: m_pi must be positive");
  const double expected = p.sys.delta * p.sys.delta / (4.0 * static_cast<double>(m_pi) * p.sys.g);
  if (std::abs(eps_pi_mag - expected) > 1e-9 * std::abs(expected))
    throw std::invalid_argument("prepare_fock_one: eps_pi inconsistent with commensurability");

  const FockSpace space(p.n_fock);
  const double t_pi = pi * p.sys.delta / (2.0 * p.sys.g * eps_pi_mag);
  const double t_Ra = pi / (2.0 * p.sys.g);
  const double omega_0 = p.sys.qubit_frequency();

  // dispersive pi-pulse: qubit g -> e while the commensurate drive returns
  // the field to vacuum
  JointState state(0, fock_state(space, 0));
  const std::vector<DriveSegment> pulse = {
      {omega_0, Complex(eps_pi_mag, 0.0), t_pi, SegmentLabel::Custom}};
  state = evolve_schedule(std::move(state), p.sys, pulse, Engine::Exact);

  // instantaneous flux switch to resonance: same omega_0 drive frame, delta = 0
  SystemParams resonant = p.sys;
  resonant.delta = 0.0;
  const std::vector<DriveSegment> rabi = {
      {resonant.qubit_frequency(), 0.0, t_Ra, SegmentLabel::Custom}};
  state = evolve_schedule(std::move(state), resonant, rabi, Engine::Exact, nullptr, t_pi);

  PreparedState out;
  out.duration = t_pi + t_Ra;
  out.duration_ns = to_nanoseconds(out.duration);
  const DensityMatrix rho = partial_trace_qubit(state);
  const Vector target = fock_state(space, 1);
  out.fidelity = (target.adjoint() * rho.rho * target)(0, 0).real();
  out.field = state.qubit_block(0);
  const double gnorm = out.field.norm();
  if (gnorm > 1e-6) out.field /= gnorm;
  return out;
}

CatPreparation prepare_cat(const ProtocolParams& p, Complex alpha0, Engine engine) {
  const FockSpace space(p.n_fock);
  const Vector initial = coherent_state(space, alpha0);
  const double kappa = pi * p.sys.delta * p.sys.delta / (2.0 * p.sys.g * p.sys.g);

  JointState state(0, initial);
  if (engine == Engine::Analytic) {
    state.amp = analytic_total_unitary(p, 0.0).m * state.amp;
  } else {
    const std::vector<DriveSegment> schedule = build_schedule(p, 0.0);
    state = evolve_schedule(std::move(state), p.sys, schedule, engine);
  }

  CatPreparation out;
  out.cat_amplitude = alpha0 * std::exp(kI * (kappa - pi / 2.0));

  const StepTimes t = step_times(p, 0.0);
  const double duration = t.total();
  for (int q = 0; q < 2; ++q) {
    Vector branch = state.qubit_block(q);
    PreparedState& slot = (q == 0) ? out.ground_outcome : out.excited_outcome;
    double& phase_slot = (q == 0) ? out.fitted_phase_ground : out.fitted_phase_excited;
    slot.success_probability = branch.squaredNorm();
    slot.duration = duration;
    slot.duration_ns = to_nanoseconds(duration);
    if (slot.success_probability < 1e-12) continue;  // degenerate branch
    branch /= branch.norm();
    slot.field = branch;
    const PhaseFit fit = fit_cat_phase(space, branch, out.cat_amplitude);
    slot.fidelity = fit.fidelity;
    phase_slot = fit.phi;
  }
  return out;
}

}  // namespace wigline
