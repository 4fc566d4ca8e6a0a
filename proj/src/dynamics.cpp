#include "wigline/dynamics.hpp"

#include "wigline/device.hpp"

#include <cmath>
#include <string>

namespace wigline {

OperatorMatrix jc_drive_hamiltonian(const SystemParams& sys, const DriveSegment& seg,
                                    const FockSpace& space) {
  sys.validate();
  const Matrix a = annihilation(space).m;
  const Matrix num = number_operator(space).m;
  const Matrix id_f = Matrix::Identity(space.n_fock, space.n_fock);
  const Matrix sz = pauli(PauliAxis::Z).m;
  Matrix sminus = Matrix::Zero(2, 2);
  sminus(0, 1) = 1.0;  // |g><e|

  const OperatorMatrix id2 = identity_op(2);
  const double det_f = sys.omega - seg.omega_d;
  const double det_q = sys.qubit_frequency() - seg.omega_d;

  Matrix h = det_f * tensor(id2, OperatorMatrix::general(num)).m;
  h += 0.5 * det_q * tensor(OperatorMatrix::general(sz), OperatorMatrix::general(id_f)).m;
  h += sys.g * (tensor(OperatorMatrix::general(sminus), OperatorMatrix::general(a.adjoint())).m +
                tensor(OperatorMatrix::general(sminus.transpose()), OperatorMatrix::general(a)).m);
  h += tensor(id2, OperatorMatrix::general(seg.epsilon * a.adjoint() +
                                           std::conj(seg.epsilon) * a)).m;
  return OperatorMatrix::hermitian(std::move(h));
}

OperatorMatrix effective_hamiltonian(const SystemParams& sys, const DriveSegment& seg,
                                     const FockSpace& space, double nbar_advisory) {
  sys.validate();
  if (sys.delta == 0.0)
    throw std::invalid_argument("effective_hamiltonian: delta must be nonzero");
  const double ratio = sys.g * std::sqrt(nbar_advisory + 1.0) / std::abs(sys.delta);
  if (ratio > 0.1)
    warn("effective_hamiltonian: dispersive ratio g*sqrt(nbar+1)/|delta| = " +
         std::to_string(ratio) + " exceeds 0.1");

  const Matrix a = annihilation(space).m;
  const Matrix num = number_operator(space).m;
  const Matrix id_f = Matrix::Identity(space.n_fock, space.n_fock);
  const OperatorMatrix id2 = identity_op(2);
  const double chi = sys.g * sys.g / sys.delta;
  const double omega_x = (2.0 * sys.g / sys.delta) * seg.epsilon.real();
  const double omega_y = -(2.0 * sys.g / sys.delta) * seg.epsilon.imag();

  Matrix h = (sys.omega - seg.omega_d) * tensor(id2, OperatorMatrix::general(num)).m;
  h += tensor(id2, OperatorMatrix::general(seg.epsilon * a.adjoint() +
                                           std::conj(seg.epsilon) * a)).m;
  h += 0.5 * omega_x * tensor(pauli(PauliAxis::X), OperatorMatrix::general(id_f)).m;
  h += 0.5 * omega_y * tensor(pauli(PauliAxis::Y), OperatorMatrix::general(id_f)).m;
  // Omega_z = omega_0 - omega_d + chi (2 a^dag a + 1), photon-number dependent
  Matrix z_field = (sys.qubit_frequency() - seg.omega_d) * id_f + chi * (2.0 * num + id_f);
  h += 0.5 * tensor(pauli(PauliAxis::Z), OperatorMatrix::general(std::move(z_field))).m;
  return OperatorMatrix::hermitian(std::move(h));
}

JointState propagate(const OperatorMatrix& h, double t, JointState state, double* norm_drift) {
  if (h.dim() != state.dim())
    throw std::invalid_argument("propagate: Hamiltonian dimension " + std::to_string(h.dim()) +
                                " does not match state dimension " + std::to_string(state.dim()));
  if (t < 0.0) throw std::invalid_argument("propagate: negative duration");
  if (h.kind != MatrixKind::Hermitian)
    throw std::invalid_argument("propagate: Hamiltonian must carry the Hermitian label");
  if (norm_drift) *norm_drift = 0.0;
  if (t == 0.0) return state;
  state.amp = HermitianPropagator(h).apply(t, state.amp);
  const double drift = std::abs(state.norm() - 1.0);
  if (norm_drift) *norm_drift = drift;
  if (drift > 1e-12) state.renormalize();
  return state;
}

JointState frame_shift(JointState state, double delta_freq, double t) {
  if (delta_freq == 0.0) return state;
  for (int q = 0; q < 2; ++q) {
    const double s_half = (q == 1) ? 0.5 : -0.5;
    for (int n = 0; n < state.n_fock; ++n)
      state.at(q, n) *= std::exp(kI * delta_freq * (static_cast<double>(n) + s_half) * t);
  }
  state.frame.rotation_frequency += delta_freq;
  return state;
}

JointState evolve_schedule(JointState state, const SystemParams& sys,
                           std::span<const DriveSegment> segments, Engine engine,
                           ScheduleDiagnostics* diagnostics, double start_time) {
  if (segments.empty()) throw std::invalid_argument("evolve_schedule: empty schedule");
  if (engine == Engine::Analytic)
    throw std::invalid_argument("evolve_schedule: Analytic engine has no schedule form");
  const FockSpace space(state.n_fock);

  double now = start_time;
  double total = 0.0;
  double max_drift = 0.0;
  if (diagnostics) diagnostics->segment_tail_population.clear();

  for (const DriveSegment& seg : segments) {
    if (seg.duration < 0.0) throw std::invalid_argument("evolve_schedule: negative duration");
    if (seg.duration == 0.0) {
      // zero-duration segments contribute nothing, not even a frame change
      if (diagnostics) diagnostics->segment_tail_population.push_back(state.tail_population());
      continue;
    }
    if (seg.omega_d != state.frame.rotation_frequency)
      state = frame_shift(std::move(state), seg.omega_d - state.frame.rotation_frequency, now);

    OperatorMatrix h = (engine == Engine::Exact)
                           ? jc_drive_hamiltonian(sys, seg, space)
                           : effective_hamiltonian(sys, seg, space, state.mean_photon_number());
    double drift = 0.0;
    state = propagate(h, seg.duration, std::move(state), &drift);
    max_drift = std::max(max_drift, drift);

    now += seg.duration;
    total += seg.duration;
    if (diagnostics) diagnostics->segment_tail_population.push_back(state.tail_population());
  }

  if (diagnostics) {
    diagnostics->total_time = total;
    diagnostics->end_time = now;
    diagnostics->max_norm_drift = max_drift;
  }
  return state;
}

}  // namespace wigline
