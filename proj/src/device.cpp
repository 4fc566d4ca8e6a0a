#include "wigline/device.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>

namespace wigline {

namespace {

std::mutex g_warn_mutex;
WarningSink g_warn_sink;

}  // namespace

void set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  g_warn_sink = std::move(sink);
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  if (g_warn_sink)
    g_warn_sink(message);
  else
    std::cerr << "[wigline] warning: " << message << "\n";
}

void CPBParams::validate() const {
  if (E_C <= 0.0) throw std::invalid_argument("CPBParams: E_C must be positive");
  if (E_J0 < 0.0) throw std::invalid_argument("CPBParams: E_J0 must be non-negative");
  if (n_cut < 3) throw std::invalid_argument("CPBParams: n_cut must be >= 3");
}

void LineParams::validate() const {
  if (omega <= 0.0 || length_capacitance_product <= 0.0 || C_g <= 0.0 || C_Sigma <= 0.0)
    throw std::invalid_argument("LineParams: all parameters must be positive");
  if (C_g > C_Sigma)
    throw std::invalid_argument("LineParams: C_g must not exceed C_Sigma");
}

double josephson_energy(double E_J0, double flux_ratio) {
  return 2.0 * E_J0 * std::cos(std::numbers::pi * flux_ratio);
}

double qubit_frequency(double E_C, double E_J, double n_g_dc) {
  if (E_C < 4.0 * std::abs(E_J))
    warn("qubit_frequency: outside charge regime (E_C < 4 E_J), two-level reduction degraded");
  const double charge_term = 4.0 * E_C * (1.0 - 2.0 * n_g_dc);
  return std::sqrt(E_J * E_J + charge_term * charge_term);
}

double coupling_g(const LineParams& line) {
  line.validate();
  const double rms_voltage = std::sqrt(kHbar * line.omega / line.length_capacitance_product);
  return (kElementaryCharge / kHbar) * (line.C_g / line.C_Sigma) * rms_voltage;
}

OperatorMatrix charge_hamiltonian(const CPBParams& p) {
  p.validate();
  const double E_J = josephson_energy(p.E_J0, p.flux_ratio);
  const int dim = 2 * p.n_cut + 1;
  Matrix h = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double n = static_cast<double>(k - p.n_cut);
    h(k, k) = 4.0 * p.E_C * (n - p.n_g_dc) * (n - p.n_g_dc);
    if (k + 1 < dim) {
      h(k, k + 1) = -E_J / 2.0;
      h(k + 1, k) = -E_J / 2.0;
    }
  }
  return OperatorMatrix::hermitian(std::move(h));
}

double charge_gap(const CPBParams& p) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(charge_hamiltonian(p).m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(1) - solver.eigenvalues()(0);
}

double thermal_occupation(double temperature, double omega) {
  if (temperature <= 0.0) throw std::invalid_argument("thermal_occupation: T must be positive");
  return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temperature));
}

}  // namespace wigline
