#pragma once

// Four-step phase-space encoding: displacement of the field by alpha, a pi/2
// qubit pulse, free dispersive evolution for t_P = pi Delta / (2 g^2), and a
// second pi/2 pulse. For phi1 - phi2 = pi/2 the excited/ground population
// difference of the qubit afterwards equals pi W(-beta) of the initial field
// state, with beta = alpha when the pi/2 pulse length is commensurate
// (t_half Delta / 2 = m pi).

#include "wigline/dynamics.hpp"

#include <array>
#include <numbers>
#include <string>
#include <vector>

namespace wigline {

// nanosecond conversions assume a 2 pi x 10 GHz line mode
inline constexpr double kLineFrequencyRadPerSec = 2.0 * std::numbers::pi * 1.0e10;
inline double to_nanoseconds(double t_sim) { return t_sim / kLineFrequencyRadPerSec * 1.0e9; }

struct ProtocolParams {
  SystemParams sys;
  double eps_D_mag = 0.0;    // displacement drive amplitude, units of omega
  int m = 0;                 // pi/2-pulse commensurability integer
  double eps_half_mag = 0.0; // derived: delta^2 / (8 m g)
  double phi1 = 0.0;
  double phi2 = 0.0;
  int n_fock = 64;
  double kappa_inv_ns = 0.0; // cavity lifetime, metadata only
  double gamma_inv_ns = 0.0; // qubit lifetime, metadata only

  // eps_half_mag is always derived from m; free choices of |eps_pi/2| are not
  // representable, which keeps beta = alpha exact
  ProtocolParams(SystemParams system, double eps_D, int m_commensurate, double phi_1, double phi_2,
                 int fock_dim);

  bool wigner_mode() const;  // phi1 - phi2 = pi/2 (mod 2pi)
};

struct StepTimes {
  double t_D = 0.0;
  double t_half = 0.0;
  double t_P = 0.0;
  double total() const { return t_D + 2.0 * t_half + t_P; }
};

// t_D = |alpha|/|eps_D|, t_half = pi Delta/(4 g |eps_half|), t_P = pi Delta/(2 g^2)
StepTimes step_times(const ProtocolParams& p, Complex alpha);

// The four drive segments. Segment 1 runs at omega_d = omega - g^2/Delta with
// its phase chosen so that -i eps t_D = alpha; segments 2-4 run at omega_0.
std::vector<DriveSegment> build_schedule(const ProtocolParams& p, Complex alpha);

struct BetaPhi {
  Complex beta;
  double phi;
};

// beta = alpha + (2|eps_half|/Delta) sin(t_half Delta/2) e^{-i phi},
// phi = (t_D + t_half/2) Delta + g^2 t_D / Delta + pi/2 - phi1.
// The sine vanishes by construction (m integer), so beta = alpha up to rounding.
BetaPhi beta_of(const ProtocolParams& p, Complex alpha);

// displacement picked up by the field during a pi/2 pulse of drive eps at
// detuning Delta: -eps (1 - e^{-i Delta t_half}) / Delta; zero for m integer
Complex half_pulse_displacement(Complex eps, double delta, double t_half);

// Closed-form product of the five step operators (displacement, frame switch,
// two dressed pi/2 pulses, dispersive parity evolution) on the joint space.
OperatorMatrix analytic_total_unitary(const ProtocolParams& p, Complex alpha);

enum class RegimeStatus { Ok, Marginal, Violated };

struct RegimeCheck {
  std::string name;
  double ratio = 0.0;
  RegimeStatus status = RegimeStatus::Ok;
};

struct RegimeReport {
  double nbar_initial = 0.0;
  double nbar_displaced = 0.0;
  std::array<RegimeCheck, 3> checks;
  RegimeStatus worst() const;
};

struct TomographyOutcome {
  Complex point;           // -beta, where W is estimated
  Complex beta;
  double p_e = 0.0;
  double p_g = 0.0;
  double w_est = 0.0;      // (p_e - p_g) / pi
  double tail_population = 0.0;
  bool unreliable = false; // tail population above 1e-4
  bool generalized_quadrature = false;  // phi1 - phi2 != pi/2
  double duration = 0.0;   // units of 1/omega
  double duration_ns = 0.0;
  RegimeReport regime;
};

// Runs the encoding on |g> (x) rho_field and reads the qubit populations.
// Exact/Effective evolve the schedule per eigencomponent of rho_field;
// Analytic conjugates by analytic_total_unitary.
TomographyOutcome measure_wigner_point(const DensityMatrix& rho_field, const ProtocolParams& p,
                                       Complex alpha, Engine engine);

// Ratio checks behind the dispersive treatment, evaluated with the displaced
// mean photon number nbar + 2 Re(conj(alpha) <a>) + |alpha|^2:
//   dispersive:    g sqrt(nbar_disp + 1) / |Delta|
//   displacement:  |eps_D| / (g + Delta^2 / 2g)
//   half_pulse:    nbar_disp / (|eps_half|/g - 1/2)
// ok <= 0.1 < marginal <= 0.5 < violated.
RegimeReport validate_regime(const ProtocolParams& p, const DensityMatrix& rho_field,
                             Complex alpha);

}  // namespace wigline
