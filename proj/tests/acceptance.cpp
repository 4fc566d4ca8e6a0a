// Acceptance gate: one line per criterion, exit code = number of failures.
// Each block re-derives its expectations from closed forms or the direct
// Wigner evaluator; tolerances are fixed here and nowhere else.

#include "wigline/device.hpp"
#include "wigline/dynamics.hpp"
#include "wigline/protocol.hpp"
#include "wigline/scan.hpp"
#include "wigline/states.hpp"

#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace wigline;
using std::numbers::pi;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int index, const std::string& label, bool ok, const std::string& detail) {
  std::printf("[%s] %d. %s (%s)\n", ok ? "PASS" : "FAIL", index, label.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
  va_list args;
  va_start(args, f);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

const SystemParams kSet1{1.0, 0.1, 5e-3};
const SystemParams kSet2{1.0, 0.3, 5e-3};

ProtocolParams set1_params(int n_fock) { return {kSet1, 0.025, 10, pi / 2.0, 0.0, n_fock}; }
ProtocolParams set2_params(int n_fock) { return {kSet2, 0.025, 8, pi / 2.0, 0.0, n_fock}; }

// ---- 1. population difference vs displaced-parity trace ----------------

void criterion_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const int n_fock = 64;
  const FockSpace space(n_fock);
  const Matrix par = parity(space).m;
  std::mt19937 rng(1001);
  std::uniform_real_distribution<double> phase(-pi, pi);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);

  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double phi1 = phase(rng);
    const double phi2 = phase(rng);
    const ProtocolParams p{kSet2, 0.025, 8, phi1, phi2, n_fock};
    const Complex alpha(coord(rng), coord(rng));
    const DensityMatrix rho = testing::random_density(n_fock, 6, rng);

    const TomographyOutcome out = measure_wigner_point(rho, p, alpha, Engine::Analytic);
    const Matrix d = displacement(space, out.beta).m;
    const Complex trace = (rho.rho * d.adjoint() * par * d).trace();
    const double rhs = std::sin(phi1 - phi2) * trace.real();
    worst = std::max(worst, std::abs((out.p_e - out.p_g) - rhs));
    worst = std::max(worst, std::abs(trace.imag()));
  }
  const double dt = seconds_since(t0);
  report(1, "population difference matches the displaced-parity trace", worst <= 1e-9 && dt < 10.0,
         fmt("50 random mixed states, max deviation %.2e, %.1f s", worst, dt));
}

// ---- 2. parity readout at the origin -----------------------------------

// Known gap: the full engine evolves the half-pi pulse segments dynamically,
// where each Fock level n sees the drive detuned by chi*(2n+1). For the
// narrow-detuning set this is an O(1) fraction of the Rabi rate across the
// alpha_0=2 cat (mean photon number 4 against eps/g - 1/2 = 4.5), so the
// readout misses the 5e-2 target by ~5x; the wide set misses 5e-3 by ~2x.
// Both numbers are stable in n_fock. Replacing the pulse segments with
// instantaneous rotations would land at 1.5e-2 / 8.3e-4 and pass; the
// thresholds are kept and the dynamical numbers are reported as measured.

void criterion_parity_points() {
  const int n_fock = 64;
  const FockSpace space(n_fock);
  const DensityMatrix states[3] = {
      DensityMatrix::from_pure(fock_state(space, 0)),
      DensityMatrix::from_pure(fock_state(space, 1)),
      DensityMatrix::from_pure(cat_state(space, 2.0, 0.0, -1))};
  const double targets[3] = {1.0 / pi, -1.0 / pi, -1.0 / pi};

  double worst_analytic = 0.0, worst_exact1 = 0.0, worst_exact2 = 0.0;
  for (int s = 0; s < 3; ++s) {
    for (const bool set1 : {true, false}) {
      const ProtocolParams p = set1 ? set1_params(n_fock) : set2_params(n_fock);
      const double w_an = measure_wigner_point(states[s], p, 0.0, Engine::Analytic).w_est;
      const double w_ex = measure_wigner_point(states[s], p, 0.0, Engine::Exact).w_est;
      worst_analytic = std::max(worst_analytic, std::abs(w_an - targets[s]));
      (set1 ? worst_exact1 : worst_exact2) =
          std::max(set1 ? worst_exact1 : worst_exact2, std::abs(w_ex - targets[s]));
    }
  }
  const bool ok = worst_analytic <= 1e-9 && worst_exact2 <= 5e-3 && worst_exact1 <= 5e-2;
  report(2, "origin parity readout for vacuum, one photon, odd cat", ok,
         fmt("analytic %.2e <= 1e-9, full engine %.2e vs 5e-2 (narrow detuning), "
             "%.2e vs 5e-3 (wide)",
             worst_analytic, worst_exact1, worst_exact2));
}

// ---- 3. real-axis reconstruction ---------------------------------------

// Known gap: near |x| = 4 the displaced field occupies Fock levels up to
// n ~ 30, where the residual parity phase (pi/2)(g/Delta)^2 (n+1)^2 over the
// free segment plus the pulse detuning push the wide-set error to 3.9-4.4e-2
// against the 3e-2 target (on |x| <= 3 the same scans stay below 1.5e-2).
// Tail ordering between the parameter sets and the runtime bound still hold.

std::vector<ScanResult> g_line_scans;  // reused by criterion 7's bound check

ScanResult line_scan(const char* preset, const char* state) {
  ScanConfig cfg;
  apply_preset(cfg, preset);
  cfg.state_text = state;
  cfg.state = parse_state(cfg.state_text);
  cfg.grid = parse_line_grid("-4:4:0.2");
  cfg.engine = Engine::Exact;
  cfg.n_fock = 128;
  return run_scan(cfg);
}

double max_err(const ScanResult& r, double min_abs_x = 0.0) {
  double worst = 0.0;
  for (const ScanRow& row : r.rows)
    if (std::abs(row.point.real()) >= min_abs_x) worst = std::max(worst, row.abs_err);
  return worst;
}

void criterion_line_reconstruction() {
  const auto t0 = std::chrono::steady_clock::now();
  g_line_scans.push_back(line_scan("set2", "vacuum"));
  g_line_scans.push_back(line_scan("set2", "fock:1"));
  g_line_scans.push_back(line_scan("set2", "cat:2,-"));
  g_line_scans.push_back(line_scan("set1", "cat:2,-"));

  const double vacuum_err = max_err(g_line_scans[0]);
  const double fock_err = max_err(g_line_scans[1]);
  const double cat_err = max_err(g_line_scans[2]);
  const double tail_set2 = max_err(g_line_scans[2], 2.5);
  const double tail_set1 = max_err(g_line_scans[3], 2.5);
  const double dt = seconds_since(t0);

  const bool ok = vacuum_err <= 3e-2 && fock_err <= 3e-2 && cat_err <= 3e-2 &&
                  tail_set1 > tail_set2 && dt < 300.0;
  report(3, "real-axis reconstruction against the direct evaluator", ok,
         fmt("max err vs 3e-2: vacuum %.2e, one photon %.2e, cat %.2e; "
             "cat tails %.2e > %.2e; %.0f s",
             vacuum_err, fock_err, cat_err, tail_set1, tail_set2, dt));
}

// ---- 4. protocol timing ------------------------------------------------

void criterion_timing() {
  const double t_p1 = to_nanoseconds(step_times(set1_params(16), 0.0).t_P);
  const double t_p2 = to_nanoseconds(step_times(set2_params(16), 0.0).t_P);
  const PreparedState photon = prepare_fock_one(set2_params(32), 0.3, 15);
  const bool ok = std::abs(t_p1 - 100.0) <= 0.5 && std::abs(t_p2 - 300.0) <= 1.5 &&
                  std::abs(photon.duration_ns - 10.0) <= 0.5;
  report(4, "free-evolution and photon-preparation timings", ok,
         fmt("t_P %.4f ns / %.4f ns, photon preparation %.4f ns", t_p1, t_p2,
             photon.duration_ns));
}

// ---- 5. drive-amplitude table -----------------------------------------

void criterion_amplitude_table() {
  const double eps1 = set1_params(16).eps_half_mag;
  const double eps2 = set2_params(16).eps_half_mag;
  const bool ok = std::abs(eps1 - 0.025) <= 1e-12 && std::abs(eps2 - 0.28125) <= 1e-12 &&
                  std::abs(eps1 - 0.025) <= 5e-4 && std::abs(eps2 - 0.281) <= 5e-4;
  report(5, "half-pi drive amplitudes reconstructed from the commensurability integers", ok,
         fmt("%.6f and %.6f", eps1, eps2));
}

// ---- 6. charge-qubit oracles ------------------------------------------

void criterion_device_oracles() {
  double worst_rel = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double e_j = 0.01 * double(i);  // E_J/E_C up to 0.1
    for (int j = 0; j <= 4; ++j) {
      const double n_g = 0.4 + 0.05 * double(j);
      const CPBParams cpb{1.0, e_j / 2.0, 0.0, n_g, 10};  // zero flux: E_J = 2 E_J0
      const double gap = charge_gap(cpb);
      const double analytic = qubit_frequency(1.0, e_j, n_g);
      worst_rel = std::max(worst_rel, std::abs(gap - analytic) / analytic);
    }
  }

  const double t_kelvin = kHbar * kLineFrequencyRadPerSec / (4.8 * kBoltzmann);
  const double nbar = thermal_occupation(t_kelvin, kLineFrequencyRadPerSec);
  const bool ok = worst_rel <= 0.01 && std::abs(nbar - 0.00830) <= 1e-5;
  report(6, "charge-basis gap and thermal occupation", ok,
         fmt("max relative gap error %.2e, occupation %.7f", worst_rel, nbar));
}

// ---- 7. numerical hygiene ----------------------------------------------

void criterion_hygiene() {
  std::mt19937 rng(7001);

  double worst_unitarity = 0.0;
  for (const int dim : {64, 128, 256}) {
    const HermitianPropagator prop(testing::random_hermitian(dim, rng));
    const Matrix u = prop.propagator(17.3);
    worst_unitarity = std::max(
        worst_unitarity, max_abs((u.adjoint() * u - Matrix::Identity(dim, dim)).eval()));
  }
  const Matrix d = displacement(FockSpace(128), Complex(1.5, -2.0)).m;
  worst_unitarity = std::max(
      worst_unitarity, max_abs((d.adjoint() * d - Matrix::Identity(128, 128)).eval()));

  // populations ignore any later frame choice
  const FockSpace space(16);
  const std::vector<DriveSegment> segs = {
      {1.0 - 2.5e-4, Complex(0.0, 0.05), 20.0, SegmentLabel::Displace},
      {1.3, Complex(0.02, 0.01), 35.0, SegmentLabel::HalfPiPulse},
      {1.3, 0.0, 80.0, SegmentLabel::FreeDispersive}};
  JointState state(0, fock_state(space, 0));
  state = evolve_schedule(std::move(state), kSet2, segs, Engine::Exact);
  const double pe = state.population_excited();
  const double pg = state.population_ground();
  double worst_frame = 0.0;
  for (const double df : {-0.83, 0.21, 1.7}) {
    const JointState shifted = frame_shift(state, df, 135.0);
    worst_frame = std::max(worst_frame, std::abs(shifted.population_excited() - pe));
    worst_frame = std::max(worst_frame, std::abs(shifted.population_ground() - pg));
  }

  double worst_bound = 0.0;
  for (const ScanResult& scan : g_line_scans)
    for (const ScanRow& row : scan.rows) worst_bound = std::max(worst_bound, std::abs(row.w_est));

  ScanConfig cfg;
  apply_preset(cfg, "set2");
  cfg.grid = parse_line_grid("-1:1:0.5");
  cfg.n_fock = 32;
  cfg.parallelism = 1;
  std::ostringstream first, second, threaded;
  emit_csv(run_scan(cfg), first);
  emit_csv(run_scan(cfg), second);
  cfg.parallelism = 3;
  emit_csv(run_scan(cfg), threaded);
  const bool deterministic = first.str() == second.str() && first.str() == threaded.str();

  const bool ok = worst_unitarity <= 1e-10 && worst_frame <= 1e-12 &&
                  worst_bound <= 1.0 / pi + 1e-6 && deterministic;
  report(7, "unitarity, frame invariance, estimate bound, determinism", ok,
         fmt("unitarity %.2e, frame drift %.2e, max |w_est| %.6f, identical csv %s",
             worst_unitarity, worst_frame, worst_bound, deterministic ? "yes" : "no"));
}

// ---- 8. state preparation ----------------------------------------------

void criterion_preparation() {
  const ProtocolParams p64 = set2_params(64);

  double worst_coherent = 1.0;
  for (const Complex alpha : {Complex(0.5, 0.0), Complex(-2.0, 0.0), Complex(0.0, 2.0),
                              Complex(1.0, 1.0), Complex(-1.4, 1.4)}) {
    worst_coherent = std::min(worst_coherent, prepare_coherent(p64, alpha).fidelity);
  }

  const double photon = prepare_fock_one(p64, 0.3, 15).fidelity;

  const CatPreparation cats = prepare_cat(set2_params(128), 2.0, Engine::Exact);
  const double prob_sum = cats.ground_outcome.success_probability +
                          cats.excited_outcome.success_probability;
  const double worst_cat = std::min(cats.ground_outcome.fidelity,
                                    cats.excited_outcome.fidelity);

  const bool ok = worst_coherent >= 0.99 && photon >= 0.98 &&
                  std::abs(prob_sum - 1.0) <= 1e-10 && worst_cat >= 0.98;
  report(8, "coherent, single-photon, and cat preparation fidelities", ok,
         fmt("coherent >= %.4f, photon %.4f, cat >= %.4f, probability sum 1%+.1e",
             worst_coherent, photon, worst_cat, prob_sum - 1.0));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_oracle_equivalence();
  criterion_parity_points();
  criterion_line_reconstruction();
  criterion_timing();
  criterion_amplitude_table();
  criterion_device_oracles();
  criterion_hygiene();
  criterion_preparation();
  std::printf("%d/8 criteria passed in %.0f s\n", 8 - failures, seconds_since(t0));
  return failures;
}
