#pragma once

// Reference field states, the direct Wigner evaluator W(alpha) =
// (1/pi) Tr[rho D(alpha) P D(-alpha)], closed-form Wigner oracles, and
// protocol-based preparation of coherent, single-photon, and cat states.

#include "wigline/protocol.hpp"

namespace wigline {

// pure field states on the truncated space, normalized
Vector fock_state(const FockSpace& space, int n);
Vector coherent_state(const FockSpace& space, Complex alpha);
// (|alpha0> + sign e^{i phase} |-alpha0>) / N, sign in {+1, -1}
Vector cat_state(const FockSpace& space, Complex alpha0, double relative_phase, int sign);

// parameterized state family shared with the scan front end
struct StateSpec {
  enum class Kind { Vacuum, Fock, Coherent, Cat };
  Kind kind = Kind::Vacuum;
  int fock_n = 0;
  Complex coherent_alpha = 0.0;
  Complex cat_alpha0 = 0.0;
  double cat_phase = 0.0;
  int cat_sign = -1;
};

Vector make_state(const FockSpace& space, const StateSpec& spec);

// matrix evaluation of W; asserts the imaginary residue is below 1e-10
double wigner_direct(const DensityMatrix& rho, Complex alpha);

// closed forms (Gaussians, Laguerre, two-Gaussian cat with interference)
double wigner_analytic(const StateSpec& spec, Complex alpha);

struct PreparedState {
  Vector field;                     // normalized field vector; empty when the
                                    // projective branch has ~zero probability
  double fidelity = 0.0;            // vs the analytic target
  double duration = 0.0;            // units of 1/omega
  double duration_ns = 0.0;
  double success_probability = 1.0; // projective preparations only
};

// step-1 displacement drive from |g,0>, Exact engine; fidelity vs coherent(alpha)
PreparedState prepare_coherent(const ProtocolParams& p, Complex alpha);

// dispersive pi-pulse (commensurate |eps_pi| = Delta^2/(4 m_pi g)), then an
// instantaneous switch to resonance for half a vacuum Rabi cycle t_Ra = pi/(2g);
// fidelity of the traced field vs fock(1)
PreparedState prepare_fock_one(const ProtocolParams& p, double eps_pi_mag, int m_pi);

struct CatPreparation {
  PreparedState ground_outcome;    // field conditioned on measuring |g>
  PreparedState excited_outcome;   // field conditioned on measuring |e>
  double fitted_phase_ground = 0.0;
  double fitted_phase_excited = 0.0;
  Complex cat_amplitude = 0.0;     // analytic target amplitude mu
};

// runs the full encoding on |g> (x) |alpha0> with alpha = 0 and projects the
// qubit; fidelities are against (|mu> + e^{i phi} |-mu>)/N with phi fitted
// (phase conventions accumulate across frames) and mu = alpha0 e^{i(kappa - pi/2)}
// fixed by the deterministic field phases of the encoding
CatPreparation prepare_cat(const ProtocolParams& p, Complex alpha0, Engine engine = Engine::Exact);

}  // namespace wigline
