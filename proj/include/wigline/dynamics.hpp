#pragma once

// Hamiltonian construction and piecewise-constant propagation.
//
// Every drive segment is evaluated in the frame co-rotating at its own drive
// frequency omega_d (both subsystems), which makes the segment Hamiltonian
// time-independent and the eigendecomposition propagator exact. Frame changes
// between segments are explicit diagonal unitaries (frame_shift). All frames
// are anchored so that they coincide with the lab frame at t = 0.

#include "wigline/hilbert.hpp"

#include <span>
#include <vector>

namespace wigline {

// field frequency omega is the unit of frequency throughout (value 1);
// delta = omega_0 - omega
struct SystemParams {
  double omega = 1.0;
  double delta = 0.0;
  double g = 0.0;

  double qubit_frequency() const { return omega + delta; }
  void validate() const {
    if (g <= 0.0) throw std::invalid_argument("SystemParams: g must be positive");
  }
};

enum class SegmentLabel { Displace, HalfPiPulse, FreeDispersive, Custom };

struct DriveSegment {
  double omega_d = 1.0;
  Complex epsilon = 0.0;
  double duration = 0.0;
  SegmentLabel label = SegmentLabel::Custom;
};

enum class Engine { Exact, Effective, Analytic };

// Jaynes-Cummings + drive in the frame co-rotating at seg.omega_d:
//   H = (omega - omega_d) a^dag a + (omega_0 - omega_d) sigma_z/2
//       + g (a^dag sigma_- + a sigma_+) + (eps a^dag + conj(eps) a)
OperatorMatrix jc_drive_hamiltonian(const SystemParams& sys, const DriveSegment& seg,
                                    const FockSpace& space);

// Dispersive effective Hamiltonian in the same frame:
//   H = (omega - omega_d) a^dag a + (eps a^dag + conj(eps) a) + (1/2) Omega . sigma
//   Omega = ((2g/Delta) Re eps, -(2g/Delta) Im eps,
//            omega_0 - omega_d + (g^2/Delta)(2 a^dag a + 1))
// Warns when g sqrt(nbar_advisory + 1) / |Delta| > 0.1.
OperatorMatrix effective_hamiltonian(const SystemParams& sys, const DriveSegment& seg,
                                     const FockSpace& space, double nbar_advisory = 0.0);

// exp(-i H t) applied to the state; renormalizes when the norm drifts by more
// than 1e-12; frame tag untouched. norm_drift, when supplied, receives the
// raw |norm - 1| before any renormalization.
JointState propagate(const OperatorMatrix& h, double t, JointState state,
                     double* norm_drift = nullptr);

// Moves the state to a frame rotating delta_freq faster, at absolute time t:
// multiplies each |q, n> amplitude by exp(i delta_freq (n + s_q/2) t) with
// s_g = -1, s_e = +1, and advances the frame tag. Populations untouched.
JointState frame_shift(JointState state, double delta_freq, double t);

struct ScheduleDiagnostics {
  std::vector<double> segment_tail_population;  // top-two-Fock population after each segment
  double total_time = 0.0;                      // sum of segment durations
  double end_time = 0.0;                        // start_time + total_time
  double max_norm_drift = 0.0;
};

// Folds propagate over the segments with frame_shift inserted at every
// boundary where omega_d changes. start_time is the absolute time at which
// the schedule begins (needed for frame anchoring when composing schedules).
// The returned state is left in the frame of the last segment.
JointState evolve_schedule(JointState state, const SystemParams& sys,
                           std::span<const DriveSegment> segments, Engine engine,
                           ScheduleDiagnostics* diagnostics = nullptr, double start_time = 0.0);

}  // namespace wigline
