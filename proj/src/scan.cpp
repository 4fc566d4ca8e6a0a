#include "wigline/scan.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace wigline {

namespace {

double parse_double(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": cannot parse number '" + text + "'");
  }
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": cannot parse integer '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

// "min:max:step" with step sign-free; negative bounds keep their '-'
void parse_range(const std::string& text, double& lo, double& hi, double& step,
                 const std::string& what) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError(what + ": expected min:max:step, got '" + text + "'");
  lo = parse_double(parts[0], what);
  hi = parse_double(parts[1], what);
  step = parse_double(parts[2], what);
  if (step <= 0.0) throw ConfigError(what + ": step must be positive");
}

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::Exact: return "exact";
    case Engine::Effective: return "effective";
    case Engine::Analytic: return "analytic";
  }
  return "exact";
}

const char* status_name(RegimeStatus s) {
  switch (s) {
    case RegimeStatus::Ok: return "ok";
    case RegimeStatus::Marginal: return "marginal";
    case RegimeStatus::Violated: return "violated";
  }
  return "ok";
}

RegimeStatus parse_status(const std::string& s) {
  if (s == "ok") return RegimeStatus::Ok;
  if (s == "marginal") return RegimeStatus::Marginal;
  if (s == "violated") return RegimeStatus::Violated;
  throw ConfigError("unknown regime status '" + s + "'");
}

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return format_double(v);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<Complex> GridSpec::points() const {
  const auto axis = [](double lo, double hi, double step) {
    std::vector<double> xs;
    if (lo > hi) return xs;  // empty range is a valid zero-row scan
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    xs.reserve(count);
    for (int k = 0; k < count; ++k) xs.push_back(lo + k * step);
    return xs;
  };
  std::vector<Complex> pts;
  if (kind == Kind::Line) {
    for (double x : axis(x_min, x_max, x_step)) pts.emplace_back(x, 0.0);
  } else {
    for (double y : axis(im_min, im_max, im_step))
      for (double x : axis(re_min, re_max, re_step)) pts.emplace_back(x, y);
  }
  return pts;
}

std::string GridSpec::describe() const {
  if (kind == Kind::Line)
    return "line:" + format_double(x_min) + ":" + format_double(x_max) + ":" +
           format_double(x_step);
  return "grid2d:" + format_double(re_min) + ":" + format_double(re_max) + ":" +
         format_double(re_step) + "," + format_double(im_min) + ":" + format_double(im_max) +
         ":" + format_double(im_step);
}

ProtocolParams ScanConfig::protocol_params() const {
  ProtocolParams p(SystemParams{1.0, delta, g}, eps_D, m, phi1, phi2, n_fock);
  p.kappa_inv_ns = kappa_inv_ns;
  p.gamma_inv_ns = gamma_inv_ns;
  return p;
}

void apply_preset(ScanConfig& cfg, const std::string& name) {
  if (name == "set1") {
    cfg.preset = name;
    cfg.delta = 0.1;
    cfg.g = 5e-3;
    cfg.eps_D = 0.025;
    cfg.m = 10;  // |eps_half| = delta^2/(8 m g) = 0.025
    cfg.kappa_inv_ns = 160.0;
    cfg.gamma_inv_ns = 2000.0;
  } else if (name == "set2") {
    cfg.preset = name;
    cfg.delta = 0.3;
    cfg.g = 5e-3;
    cfg.eps_D = 0.025;
    cfg.m = 8;  // |eps_half| = 0.28125
    cfg.kappa_inv_ns = 1000.0;
    cfg.gamma_inv_ns = 2000.0;
  } else if (name == "custom") {
    cfg.preset = name;  // keep whatever numbers the caller sets
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
}

StateSpec parse_state(const std::string& text) {
  StateSpec spec;
  if (text == "vacuum") {
    spec.kind = StateSpec::Kind::Vacuum;
    return spec;
  }
  const size_t colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string args = (colon == std::string::npos) ? "" : text.substr(colon + 1);
  if (head == "fock") {
    spec.kind = StateSpec::Kind::Fock;
    spec.fock_n = parse_int(args, "state fock");
    if (spec.fock_n < 0) throw ConfigError("state fock: level must be non-negative");
    return spec;
  }
  if (head == "coherent") {
    spec.kind = StateSpec::Kind::Coherent;
    const std::vector<std::string> parts = split(args, ',');
    if (parts.empty() || parts.size() > 2)
      throw ConfigError("state coherent: expected coherent:re[,im]");
    const double re = parse_double(parts[0], "state coherent");
    const double im = parts.size() == 2 ? parse_double(parts[1], "state coherent") : 0.0;
    spec.coherent_alpha = Complex(re, im);
    return spec;
  }
  if (head == "cat") {
    spec.kind = StateSpec::Kind::Cat;
    const std::vector<std::string> parts = split(args, ',');
    if (parts.size() != 2) throw ConfigError("state cat: expected cat:alpha0,sign");
    spec.cat_alpha0 = parse_double(parts[0], "state cat");
    if (parts[1] == "+")
      spec.cat_sign = 1;
    else if (parts[1] == "-")
      spec.cat_sign = -1;
    else
      throw ConfigError("state cat: sign must be '+' or '-'");
    spec.cat_phase = 0.0;
    return spec;
  }
  throw ConfigError("unknown state '" + text + "'");
}

Engine parse_engine(const std::string& text) {
  if (text == "exact") return Engine::Exact;
  if (text == "effective") return Engine::Effective;
  if (text == "analytic") return Engine::Analytic;
  throw ConfigError("unknown engine '" + text + "'");
}

GridSpec parse_line_grid(const std::string& text) {
  GridSpec grid;
  grid.kind = GridSpec::Kind::Line;
  parse_range(text, grid.x_min, grid.x_max, grid.x_step, "line");
  return grid;
}

GridSpec parse_grid2d(const std::string& text) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 2)
    throw ConfigError("grid2d: expected remin:remax:restep,immin:immax:imstep");
  GridSpec grid;
  grid.kind = GridSpec::Kind::Grid2D;
  parse_range(parts[0], grid.re_min, grid.re_max, grid.re_step, "grid2d re");
  parse_range(parts[1], grid.im_min, grid.im_max, grid.im_step, "grid2d im");
  return grid;
}

void apply_key_value(ScanConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "preset") {
    apply_preset(cfg, value);
  } else if (key == "state") {
    cfg.state = parse_state(value);
    cfg.state_text = value;
  } else if (key == "engine") {
    cfg.engine = parse_engine(value);
  } else if (key == "line") {
    cfg.grid = parse_line_grid(value);
  } else if (key == "grid2d") {
    cfg.grid = parse_grid2d(value);
  } else if (key == "n_fock") {
    cfg.n_fock = parse_int(value, "n_fock");
  } else if (key == "out_csv") {
    cfg.out_csv = value;
  } else if (key == "out_json") {
    cfg.out_json = value;
  } else if (key == "parallelism") {
    cfg.parallelism = parse_int(value, "parallelism");
  } else if (key == "delta") {
    cfg.delta = parse_double(value, "delta");
  } else if (key == "g") {
    cfg.g = parse_double(value, "g");
  } else if (key == "eps_d") {
    cfg.eps_D = parse_double(value, "eps_d");
  } else if (key == "m") {
    cfg.m = parse_int(value, "m");
  } else if (key == "phi1") {
    cfg.phi1 = parse_double(value, "phi1");
  } else if (key == "phi2") {
    cfg.phi2 = parse_double(value, "phi2");
  } else if (key == "kappa_inv_ns") {
    cfg.kappa_inv_ns = parse_double(value, "kappa_inv_ns");
  } else if (key == "gamma_inv_ns") {
    cfg.gamma_inv_ns = parse_double(value, "gamma_inv_ns");
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ScanConfig load_config(std::istream& in, const std::string& source_name) {
  ScanConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto strip = [](std::string s) {
      const size_t a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const size_t b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": expected key=value");
    try {
      apply_key_value(cfg, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

ScanConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return load_config(in, path);
}

int resolve_parallelism(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WIGLINE_PARALLELISM")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::min(std::max(workers, 1), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

ScanResult run_scan(const ScanConfig& cfg) {
  const ProtocolParams p = cfg.protocol_params();
  const FockSpace space(cfg.n_fock);
  const DensityMatrix rho = DensityMatrix::from_pure(make_state(space, cfg.state));
  const std::vector<Complex> points = cfg.grid.points();

  ScanResult result;
  result.config = cfg;
  result.eps_half_mag = p.eps_half_mag;

  // regime summary at the most-displaced point of the grid
  Complex worst = 0.0;
  for (const Complex& x : points)
    if (std::abs(x) > std::abs(worst)) worst = x;
  result.regime = validate_regime(p, rho, -worst);

  result.rows.resize(points.size());
  const int workers = resolve_parallelism(cfg.parallelism);
  parallel_for(static_cast<int>(points.size()), workers, [&](int i) {
    const Complex x = points[i];
    const TomographyOutcome outcome = measure_wigner_point(rho, p, -x, cfg.engine);
    ScanRow row;
    row.point = outcome.point;
    row.w_est = outcome.w_est;
    row.w_oracle = wigner_direct(rho, outcome.point);
    row.abs_err = std::abs(row.w_est - row.w_oracle);
    row.p_e = outcome.p_e;
    row.p_g = outcome.p_g;
    row.tail_population = outcome.tail_population;
    row.unreliable = outcome.unreliable;
    row.duration_ns = outcome.duration_ns;
    result.rows[i] = row;
  });
  return result;
}

void emit_csv(const ScanResult& result, std::ostream& out) {
  out << "point_re,point_im,w_est,w_oracle,abs_err,p_e,p_g,tail_population,"
         "flag_unreliable,duration_ns\n";
  for (const ScanRow& r : result.rows) {
    out << format_double(r.point.real()) << ',' << format_double(r.point.imag()) << ','
        << format_double(r.w_est) << ',' << format_double(r.w_oracle) << ','
        << format_double(r.abs_err) << ',' << format_double(r.p_e) << ','
        << format_double(r.p_g) << ',' << format_double(r.tail_population) << ','
        << (r.unreliable ? 1 : 0) << ',' << format_double(r.duration_ns) << '\n';
  }
}

void emit_json(const ScanResult& result, std::ostream& out) {
  const ScanConfig& cfg = result.config;
  out << "{\n  \"config\": {\n";
  out << "    \"preset\": \"" << cfg.preset << "\",\n";
  out << "    \"state\": \"" << cfg.state_text << "\",\n";
  out << "    \"engine\": \"" << engine_name(cfg.engine) << "\",\n";
  out << "    \"grid\": \"" << cfg.grid.describe() << "\",\n";
  out << "    \"n_fock\": " << cfg.n_fock << ",\n";
  out << "    \"delta\": " << json_number(cfg.delta) << ",\n";
  out << "    \"g\": " << json_number(cfg.g) << ",\n";
  out << "    \"eps_d\": " << json_number(cfg.eps_D) << ",\n";
  out << "    \"m\": " << cfg.m << ",\n";
  out << "    \"eps_half\": " << json_number(result.eps_half_mag) << ",\n";
  out << "    \"phi1\": " << json_number(cfg.phi1) << ",\n";
  out << "    \"phi2\": " << json_number(cfg.phi2) << ",\n";
  out << "    \"kappa_inv_ns\": " << json_number(cfg.kappa_inv_ns) << ",\n";
  out << "    \"gamma_inv_ns\": " << json_number(cfg.gamma_inv_ns) << "\n";
  out << "  },\n";
  out << "  \"regime\": {\n";
  out << "    \"nbar_initial\": " << json_number(result.regime.nbar_initial) << ",\n";
  out << "    \"nbar_displaced\": " << json_number(result.regime.nbar_displaced) << ",\n";
  out << "    \"checks\": [\n";
  for (size_t k = 0; k < result.regime.checks.size(); ++k) {
    const RegimeCheck& c = result.regime.checks[k];
    out << "      {\"name\": \"" << c.name << "\", \"ratio\": " << json_number(c.ratio)
        << ", \"status\": \"" << status_name(c.status) << "\"}"
        << (k + 1 < result.regime.checks.size() ? "," : "") << "\n";
  }
  out << "    ]\n  },\n";
  out << "  \"rows\": [\n";
  for (size_t i = 0; i < result.rows.size(); ++i) {
    const ScanRow& r = result.rows[i];
    out << "    {\"point_re\": " << format_double(r.point.real())
        << ", \"point_im\": " << format_double(r.point.imag())
        << ", \"w_est\": " << format_double(r.w_est)
        << ", \"w_oracle\": " << format_double(r.w_oracle)
        << ", \"abs_err\": " << format_double(r.abs_err)
        << ", \"p_e\": " << format_double(r.p_e) << ", \"p_g\": " << format_double(r.p_g)
        << ", \"tail_population\": " << format_double(r.tail_population)
        << ", \"flag_unreliable\": " << (r.unreliable ? 1 : 0)
        << ", \"duration_ns\": " << format_double(r.duration_ns) << "}"
        << (i + 1 < result.rows.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
}

ScanResult load_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cannot parse JSON: ") + e.what());
  }
  ScanResult result;
  try {
    const auto& cfg = j.at("config");
    result.config.preset = cfg.at("preset").get<std::string>();
    result.config.state_text = cfg.at("state").get<std::string>();
    result.config.state = parse_state(result.config.state_text);
    result.config.engine = parse_engine(cfg.at("engine").get<std::string>());
    const std::string grid_text = cfg.at("grid").get<std::string>();
    if (grid_text.rfind("line:", 0) == 0)
      result.config.grid = parse_line_grid(grid_text.substr(5));
    else if (grid_text.rfind("grid2d:", 0) == 0)
      result.config.grid = parse_grid2d(grid_text.substr(7));
    else
      throw ConfigError("unknown grid description '" + grid_text + "'");
    result.config.n_fock = cfg.at("n_fock").get<int>();
    result.config.delta = cfg.at("delta").get<double>();
    result.config.g = cfg.at("g").get<double>();
    result.config.eps_D = cfg.at("eps_d").get<double>();
    result.config.m = cfg.at("m").get<int>();
    result.eps_half_mag = cfg.at("eps_half").get<double>();
    result.config.phi1 = cfg.at("phi1").get<double>();
    result.config.phi2 = cfg.at("phi2").get<double>();
    result.config.kappa_inv_ns = cfg.at("kappa_inv_ns").get<double>();
    result.config.gamma_inv_ns = cfg.at("gamma_inv_ns").get<double>();

    const auto& regime = j.at("regime");
    result.regime.nbar_initial = regime.at("nbar_initial").get<double>();
    result.regime.nbar_displaced = regime.at("nbar_displaced").get<double>();
    const auto& checks = regime.at("checks");
    for (size_t k = 0; k < result.regime.checks.size() && k < checks.size(); ++k) {
      RegimeCheck& c = result.regime.checks[k];
      c.name = checks[k].at("name").get<std::string>();
      c.ratio = checks[k].at("ratio").is_null()
                    ? std::numeric_limits<double>::infinity()
                    : checks[k].at("ratio").get<double>();
      c.status = parse_status(checks[k].at("status").get<std::string>());
    }

    for (const auto& row_json : j.at("rows")) {
      ScanRow row;
      row.point = Complex(row_json.at("point_re").get<double>(),
                          row_json.at("point_im").get<double>());
      row.w_est = row_json.at("w_est").get<double>();
      row.w_oracle = row_json.at("w_oracle").get<double>();
      row.abs_err = row_json.at("abs_err").get<double>();
      row.p_e = row_json.at("p_e").get<double>();
      row.p_g = row_json.at("p_g").get<double>();
      row.tail_population = row_json.at("tail_population").get<double>();
      row.unreliable = row_json.at("flag_unreliable").get<int>() != 0;
      row.duration_ns = row_json.at("duration_ns").get<double>();
      result.rows.push_back(row);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("JSON missing or malformed field: ") + e.what());
  }
  return result;
}

}  // namespace wigline
