#pragma once

// Shared helpers for the unit and acceptance suites. All randomness is seeded
// explicitly so every run sees the same draws.

#include "wigline/device.hpp"
#include "wigline/hilbert.hpp"

#include <random>
#include <string>
#include <vector>

namespace wigline::testing {

// capture advisories instead of printing them
struct WarningCapture {
  std::vector<std::string> messages;
  WarningCapture() {
    set_warning_sink([this](const std::string& m) { messages.push_back(m); });
  }
  ~WarningCapture() { set_warning_sink({}); }
};

inline Matrix random_matrix(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

inline OperatorMatrix random_hermitian(int dim, std::mt19937& rng) {
  const Matrix m = random_matrix(dim, rng);
  return OperatorMatrix::hermitian(((m + m.adjoint()) / 2.0).eval());
}

// random mixed state supported on Fock levels 0..support-1, embedded in a
// larger truncated space
inline DensityMatrix random_density(int n_fock, int support, std::mt19937& rng) {
  const Matrix g = random_matrix(support, rng);
  Matrix block = g * g.adjoint();
  block /= block.trace().real();
  Matrix rho = Matrix::Zero(n_fock, n_fock);
  rho.topLeftCorner(support, support) = block;
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return DensityMatrix{std::move(rho)};
}

inline Vector random_pure(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  v /= v.norm();
  return v;
}

}  // namespace wigline::testing
