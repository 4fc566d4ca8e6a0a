#pragma once

// Cooper-pair-box device layer: maps circuit parameters (charging and
// Josephson energies, gate charge, line impedance) onto the two-level
// qubit frequency and coupling used by the dynamics.
//
// Unit convention: the simulation core works with hbar = 1 and all
// frequencies in units of the line frequency omega. Physical-unit (SI)
// conversion is confined to this module: coupling_g and thermal_occupation
// take SI inputs, everything else is unit-agnostic (energy in == angular
// frequency out when the inputs are expressed in units of hbar*omega).

#include "wigline/hilbert.hpp"

#include <functional>

namespace wigline {

// CODATA 2018 exact values
inline constexpr double kHbar = 1.054571817e-34;        // J s
inline constexpr double kBoltzmann = 1.380649e-23;      // J / K
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C

// Advisory warnings (regime checks) are reported through this sink; they
// never abort a computation. Default sink prints to stderr.
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);  // empty sink restores the default
void warn(const std::string& message);

struct CPBParams {
  double E_C;        // charging energy
  double E_J0;       // single-junction Josephson energy
  double flux_ratio; // Phi / Phi_0
  double n_g_dc;     // dc gate charge
  int n_cut;         // charge basis spans n in [-n_cut, n_cut]

  void validate() const;
};

struct LineParams {
  double omega;                      // line mode angular frequency, rad/s
  double length_capacitance_product; // L * c, farads
  double C_g;                        // gate capacitance, farads
  double C_Sigma;                    // island total capacitance, farads

  void validate() const;
};

// E_J = 2 E_J0 cos(pi Phi/Phi_0); sign retained
double josephson_energy(double E_J0, double flux_ratio);

// two-level splitting sqrt(E_J^2 + [4 E_C (1 - 2 n_g_dc)]^2), hbar = 1;
// warns outside the charge regime E_C >= 4 E_J
double qubit_frequency(double E_C, double E_J, double n_g_dc);

// qubit-line coupling (e C_g / C_Sigma) sqrt(hbar omega / L c) / hbar, rad/s
double coupling_g(const LineParams& line);

// full CPB Hamiltonian 4 E_C (n - n_g)^2 - E_J cos(Theta) in the charge
// basis, dimension 2 n_cut + 1; cos(Theta) is symmetric nearest-neighbour
// hopping with amplitude 1/2
OperatorMatrix charge_hamiltonian(const CPBParams& p);

// gap between the two lowest eigenvalues of charge_hamiltonian; the
// brute-force check on the two-level reduction
double charge_gap(const CPBParams& p);

// Bose-Einstein occupation 1/(exp(hbar omega / k T) - 1); SI inputs
double thermal_occupation(double temperature, double omega);

}  // namespace wigline
