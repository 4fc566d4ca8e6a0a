// Command-line front end: scan (Wigner reconstruction vs direct evaluation),
// prepare (coherent / single-photon / cat preparation), validate (regime
// ratio report). Exit codes: 0 success, 2 configuration error, 3 runtime
// failure.

#include "wigline/scan.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace wigline;

Complex parse_complex_arg(const std::string& text, const std::string& what) {
  const size_t comma = text.find(',');
  try {
    if (comma == std::string::npos) return Complex(std::stod(text), 0.0);
    return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
  } catch (const std::exception&) {
    throw ConfigError(what + ": cannot parse complex number '" + text + "'");
  }
}

void write_or_throw(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  emit(out);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

int command_scan(const ScanConfig& cfg) {
  const ScanResult result = run_scan(cfg);
  if (!cfg.out_csv.empty())
    write_or_throw(cfg.out_csv, [&](std::ostream& o) { emit_csv(result, o); });
  if (!cfg.out_json.empty())
    write_or_throw(cfg.out_json, [&](std::ostream& o) { emit_json(result, o); });
  if (cfg.out_csv.empty() && cfg.out_json.empty()) emit_csv(result, std::cout);

  int unreliable = 0;
  for (const ScanRow& r : result.rows) unreliable += r.unreliable ? 1 : 0;
  std::cerr << "scan: " << result.rows.size() << " points, " << unreliable
            << " flagged unreliable, worst regime status "
            << (result.regime.worst() == RegimeStatus::Ok        ? "ok"
                : result.regime.worst() == RegimeStatus::Marginal ? "marginal"
                                                                  : "violated")
            << "\n";
  return 0;
}

void print_prepared(const std::string& label, const PreparedState& st) {
  std::cout << label << ": fidelity " << format_double(st.fidelity) << ", duration "
            << format_double(st.duration_ns) << " ns, probability "
            << format_double(st.success_probability) << "\n";
}

int command_prepare(const std::string& kind, const ScanConfig& cfg, Complex alpha, double alpha0,
                    double eps_pi, int m_pi, Engine engine) {
  const ProtocolParams p = cfg.protocol_params();
  if (kind == "coherent") {
    print_prepared("coherent", prepare_coherent(p, alpha));
  } else if (kind == "fock1") {
    print_prepared("fock1", prepare_fock_one(p, eps_pi, m_pi));
  } else if (kind == "cat") {
    const CatPreparation cat = prepare_cat(p, alpha0, engine);
    print_prepared("cat (qubit g, odd branch)", cat.ground_outcome);
    print_prepared("cat (qubit e, even branch)", cat.excited_outcome);
    std::cout << "target amplitude " << format_double(cat.cat_amplitude.real()) << "+"
              << format_double(cat.cat_amplitude.imag()) << "i, fitted phases g "
              << format_double(cat.fitted_phase_ground) << ", e "
              << format_double(cat.fitted_phase_excited) << "\n";
  } else {
    throw ConfigError("unknown preparation kind '" + kind + "' (coherent|fock1|cat)");
  }
  return 0;
}

int command_validate(const ScanConfig& cfg, Complex alpha) {
  const ProtocolParams p = cfg.protocol_params();
  const FockSpace space(cfg.n_fock);
  const DensityMatrix rho = DensityMatrix::from_pure(make_state(space, cfg.state));
  const RegimeReport report = validate_regime(p, rho, alpha);
  std::cout << "nbar_initial " << format_double(report.nbar_initial) << "\n";
  std::cout << "nbar_displaced " << format_double(report.nbar_displaced) << "\n";
  for (const RegimeCheck& c : report.checks) {
    const char* status = c.status == RegimeStatus::Ok        ? "ok"
                         : c.status == RegimeStatus::Marginal ? "marginal"
                                                              : "violated";
    std::cout << c.name << " ratio " << format_double(c.ratio) << " " << status << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transmission-line field tomography simulator"};
  app.require_subcommand(1);

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "reconstruct W over a grid");
  std::string config_path, preset_text, state_text, line_text, grid2d_text, engine_text;
  std::string out_csv, out_json;
  int n_fock = 0, parallelism = 0;
  std::vector<std::string> overrides;
  scan_cmd->add_option("--config", config_path, "key=value config file");
  scan_cmd->add_option("--preset", preset_text, "set1|set2|custom");
  scan_cmd->add_option("--state", state_text, "vacuum | fock:n | coherent:re[,im] | cat:a0,+/-");
  scan_cmd->add_option("--line", line_text, "real-axis grid min:max:step");
  scan_cmd->add_option("--grid2d", grid2d_text, "2D grid remin:remax:restep,immin:immax:imstep");
  scan_cmd->add_option("--engine", engine_text, "exact|effective|analytic");
  scan_cmd->add_option("--n-fock", n_fock, "Fock truncation");
  scan_cmd->add_option("--out", out_csv, "CSV output path (default: stdout)");
  scan_cmd->add_option("--json", out_json, "JSON output path");
  scan_cmd->add_option("--parallelism", parallelism, "worker threads (default WIGLINE_PARALLELISM or 1)");
  scan_cmd->add_option("--set", overrides, "extra key=value overrides")->take_all();

  // prepare
  auto* prep_cmd = app.add_subcommand("prepare", "simulate a state preparation");
  std::string kind, prep_preset = "set2", prep_engine_text = "exact", alpha_text = "1";
  double alpha0 = 2.0, eps_pi = 0.3;
  int m_pi = 15, prep_n_fock = 128;
  prep_cmd->add_option("--kind", kind, "coherent|fock1|cat")->required();
  prep_cmd->add_option("--preset", prep_preset, "set1|set2");
  prep_cmd->add_option("--alpha", alpha_text, "coherent amplitude re[,im]");
  prep_cmd->add_option("--alpha0", alpha0, "cat amplitude");
  prep_cmd->add_option("--eps-pi", eps_pi, "pi-pulse drive amplitude (fock1)");
  prep_cmd->add_option("--m-pi", m_pi, "pi-pulse commensurability integer (fock1)");
  prep_cmd->add_option("--n-fock", prep_n_fock, "Fock truncation");
  prep_cmd->add_option("--engine", prep_engine_text, "exact|analytic (cat only)");

  // validate
  auto* val_cmd = app.add_subcommand("validate", "report regime-check ratios");
  std::string val_preset = "set1", val_state = "vacuum", val_alpha_text = "0";
  int val_n_fock = 128;
  val_cmd->add_option("--preset", val_preset, "set1|set2");
  val_cmd->add_option("--state", val_state, "field state under test");
  val_cmd->add_option("--alpha", val_alpha_text, "protocol displacement re[,im]");
  val_cmd->add_option("--n-fock", val_n_fock, "Fock truncation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (scan_cmd->parsed()) {
      ScanConfig cfg;
      if (!config_path.empty()) cfg = load_config_file(config_path);
      if (!preset_text.empty()) apply_preset(cfg, preset_text);
      if (!state_text.empty()) apply_key_value(cfg, "state", state_text);
      if (!line_text.empty()) apply_key_value(cfg, "line", line_text);
      if (!grid2d_text.empty()) apply_key_value(cfg, "grid2d", grid2d_text);
      if (!engine_text.empty()) apply_key_value(cfg, "engine", engine_text);
      if (n_fock > 0) cfg.n_fock = n_fock;
      if (parallelism > 0) cfg.parallelism = parallelism;
      if (!out_csv.empty()) cfg.out_csv = out_csv;
      if (!out_json.empty()) cfg.out_json = out_json;
      for (const std::string& kv : overrides) {
        const size_t eq = kv.find('=');
        if (eq == std::string::npos) throw wigline::ConfigError("--set expects key=value");
        apply_key_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
      return command_scan(cfg);
    }
    if (prep_cmd->parsed()) {
      ScanConfig cfg;
      apply_preset(cfg, prep_preset);
      cfg.n_fock = prep_n_fock;
      return command_prepare(kind, cfg, parse_complex_arg(alpha_text, "--alpha"), alpha0, eps_pi,
                             m_pi, parse_engine(prep_engine_text));
    }
    if (val_cmd->parsed()) {
      ScanConfig cfg;
      apply_preset(cfg, val_preset);
      cfg.n_fock = val_n_fock;
      apply_key_value(cfg, "state", val_state);
      return command_validate(cfg, parse_complex_arg(val_alpha_text, "--alpha"));
    }
  } catch (const wigline::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
