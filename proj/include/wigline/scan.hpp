#pragma once

// Batch front end: parameter presets, flat key=value configs, grid scans with
// a bounded worker pool, and deterministic CSV/JSON emission of estimated vs
// directly evaluated Wigner values.

#include "wigline/states.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace wigline {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  enum class Kind { Line, Grid2D };
  Kind kind = Kind::Line;
  // line: points x + 0i for x in [x_min, x_max] stepping x_step
  double x_min = -4.0;
  double x_max = 4.0;
  double x_step = 0.2;
  // grid2d: re + i*im, im outer loop, re inner
  double re_min = -4.0, re_max = 4.0, re_step = 0.2;
  double im_min = -4.0, im_max = 4.0, im_step = 0.2;

  // empty when min exceeds max; step must be positive
  std::vector<Complex> points() const;
  std::string describe() const;
};

struct ScanConfig {
  std::string preset = "set2";  // set1 | set2 | custom
  double delta = 0.3;
  double g = 5e-3;
  double eps_D = 0.025;
  int m = 8;
  double phi1 = std::numbers::pi / 2.0;
  double phi2 = 0.0;
  double kappa_inv_ns = 1000.0;
  double gamma_inv_ns = 2000.0;
  StateSpec state;
  std::string state_text = "vacuum";
  GridSpec grid;
  Engine engine = Engine::Exact;
  int n_fock = 128;
  std::string out_csv;
  std::string out_json;
  int parallelism = 0;  // 0: environment default

  ProtocolParams protocol_params() const;
};

// Table presets. set1: delta=0.1, |eps_half|=0.025 (m=10), kappa^-1=160 ns;
// set2: delta=0.3, |eps_half|=0.28125 (m=8), kappa^-1=1000 ns. Both share
// g=5e-3, |eps_D|=0.025, gamma^-1=2 us, omega = 2 pi x 10 GHz.
void apply_preset(ScanConfig& cfg, const std::string& name);

StateSpec parse_state(const std::string& text);
Engine parse_engine(const std::string& text);
GridSpec parse_line_grid(const std::string& text);    // "min:max:step"
GridSpec parse_grid2d(const std::string& text);       // "remin:remax:restep,immin:immax:imstep"

// one key=value assignment; keys documented in the README
void apply_key_value(ScanConfig& cfg, const std::string& key, const std::string& value);

// flat key=value file, # comments; errors cite the line number
ScanConfig load_config(std::istream& in, const std::string& source_name);
ScanConfig load_config_file(const std::string& path);

struct ScanRow {
  Complex point;
  double w_est = 0.0;
  double w_oracle = 0.0;
  double abs_err = 0.0;
  double p_e = 0.0;
  double p_g = 0.0;
  double tail_population = 0.0;
  bool unreliable = false;
  double duration_ns = 0.0;
};

struct ScanResult {
  ScanConfig config;
  double eps_half_mag = 0.0;  // resolved from m
  RegimeReport regime;        // evaluated at the most-displaced grid point
  std::vector<ScanRow> rows;  // grid order, independent of scheduling
};

// Evaluates measure_wigner_point at alpha = -x for every grid point x (the
// estimate lands at point -beta = x) alongside the direct Wigner value.
ScanResult run_scan(const ScanConfig& cfg);

// columns: point_re,point_im,w_est,w_oracle,abs_err,p_e,p_g,tail_population,
// flag_unreliable,duration_ns; 17 significant digits
void emit_csv(const ScanResult& result, std::ostream& out);
// rows plus a header block echoing the resolved config and regime summary
void emit_json(const ScanResult& result, std::ostream& out);
// reads emit_json output back; row data round-trips bit-exactly
ScanResult load_json(std::istream& in);

// requested > 0 wins; else WIGLINE_PARALLELISM; else 1
int resolve_parallelism(int requested);

// index-sharded work loop; results must go to pre-indexed slots so output
// never depends on scheduling
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

std::string format_double(double v);  // %.17g, shared by CSV and JSON emitters

}  // namespace wigline
