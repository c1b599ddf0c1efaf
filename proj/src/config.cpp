#include "cerashape/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "cerashape/error.hpp"
#include "format.hpp"

namespace cerashape {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::ValidationError, key + ": '" + text + "' is not a number");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::ValidationError, key + ": '" + text + "' is not an integer");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorCode::ValidationError, key + ": '" + text + "' is not a boolean");
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split_list(text)) out.push_back(to_double(key, part));
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

std::string_view mode_name(SweepMode mode) {
  switch (mode) {
    case SweepMode::WeightedSum: return "wsm";
    case SweepMode::Descent: return "moda";
    case SweepMode::Both: return "both";
  }
  return "both";
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"preset", [](RunConfig& c, const std::string&, const std::string& v) { c.preset = v; }},
      {"n_x", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_x = to_int(k, v); }},
      {"n_y", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_y = to_int(k, v); }},
      {"n_B", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_B = to_int(k, v); }},
      {"E", [](RunConfig& c, const std::string& k, const std::string& v) { c.E = to_double(k, v); }},
      {"nu", [](RunConfig& c, const std::string& k, const std::string& v) { c.nu = to_double(k, v); }},
      {"m", [](RunConfig& c, const std::string& k, const std::string& v) { c.m = to_double(k, v); }},
      {"sigma0", [](RunConfig& c, const std::string& k, const std::string& v) { c.sigma0 = to_double(k, v); }},
      {"gtilde",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const auto parts = to_doubles(k, v);
         if (parts.size() == 1) {
           c.gtilde = {parts[0], 0.0};
         } else if (parts.size() == 2) {
           c.gtilde = {parts[0], parts[1]};
         } else {
           throw Error(ErrorCode::ValidationError, k + ": expected 'gx' or 'gx, gy'");
         }
       }},
      {"xi", [](RunConfig& c, const std::string& k, const std::string& v) { c.xi = to_double(k, v); }},
      {"beta", [](RunConfig& c, const std::string& k, const std::string& v) { c.beta = to_double(k, v); }},
      {"eps", [](RunConfig& c, const std::string& k, const std::string& v) { c.eps = to_double(k, v); }},
      {"max_iter", [](RunConfig& c, const std::string& k, const std::string& v) { c.max_iter = to_int(k, v); }},
      {"max_armijo", [](RunConfig& c, const std::string& k, const std::string& v) { c.max_armijo = to_int(k, v); }},
      {"delta_factor",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.delta_factor = to_double(k, v); }},
      {"n_phi", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_phi = to_int(k, v); }},
      {"mode",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "wsm") {
           c.mode = SweepMode::WeightedSum;
         } else if (v == "moda") {
           c.mode = SweepMode::Descent;
         } else if (v == "both") {
           c.mode = SweepMode::Both;
         } else {
           throw Error(ErrorCode::ValidationError, k + ": expected wsm, moda or both");
         }
       }},
      {"omegas", [](RunConfig& c, const std::string& k, const std::string& v) { c.omegas = to_doubles(k, v); }},
      {"omega_bars",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.omega_bars = to_doubles(k, v); }},
      {"gradient_mode",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "adjoint") {
           c.gradient_mode = GradientMode::Adjoint;
         } else if (v == "fd") {
           c.gradient_mode = GradientMode::FiniteDifference;
         } else {
           throw Error(ErrorCode::ValidationError, k + ": expected adjoint or fd");
         }
       }},
      {"output_dir", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"workers", [](RunConfig& c, const std::string& k, const std::string& v) { c.workers = to_int(k, v); }},
      {"bump_amplitude",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.bump_amplitude = to_double(k, v); }},
      {"right_offset",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.right_offset = to_double(k, v); }},
      {"fix_ends", [](RunConfig& c, const std::string& k, const std::string& v) { c.fix_ends = to_bool(k, v); }},
      {"fd_eps", [](RunConfig& c, const std::string& k, const std::string& v) { c.fd_eps = to_double(k, v); }},
  };
  return table;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw Error(ErrorCode::ValidationError, key + ": " + what);
}

}  // namespace

void RunConfig::validate() const {
  require(preset == "straight_joint" || preset == "s_joint", "preset", "expected straight_joint or s_joint");
  require(n_x >= 2, "n_x", "must be >= 2");
  require(n_y >= 2, "n_y", "must be >= 2");
  require(n_B >= 4 && n_B < n_x, "n_B", "must satisfy 4 <= n_B < n_x for cubic splines");
  require(E > 0.0, "E", "must be positive");
  require(nu > 0.0 && nu < 0.5, "nu", "must lie in (0, 0.5)");
  require(m >= 1.0, "m", "must be >= 1");
  require(sigma0 > 0.0, "sigma0", "must be positive");
  require(xi >= 0.0, "xi", "must be nonnegative");
  require(beta > 0.0 && beta < 1.0, "beta", "must lie in (0, 1)");
  require(eps > 0.0, "eps", "must be positive");
  require(max_iter >= 1, "max_iter", "must be positive");
  require(max_armijo >= 0, "max_armijo", "must be nonnegative");
  require(delta_factor > 0.0 && delta_factor <= 1.0, "delta_factor", "must lie in (0, 1]");
  require(n_phi >= 4 && n_phi % 2 == 0, "n_phi", "must be even and >= 4");
  for (double w : omegas) require(w > 0.0 && w < 1.0, "omegas", "every omega must lie in (0, 1)");
  for (double s : omega_bars) require(s > 0.0, "omega_bars", "every omega_bar must be positive");
  require(workers >= 1, "workers", "must be positive");
  require(bump_amplitude >= 0.0, "bump_amplitude", "must be nonnegative");
  require(fd_eps > 0.0, "fd_eps", "must be positive");
}

LoadedConfig parse_config(const std::string& text) {
  LoadedConfig loaded;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw Error(ErrorCode::ValidationError, key + ": unknown key");
    if (!seen.insert(key).second) throw Error(ErrorCode::ValidationError, key + ": given twice");
    it->second(loaded.config, key, value);
  }
  if (!seen.count("sigma0")) {
    loaded.warnings.push_back("sigma0 not set; using the calibration default " +
                              format_double(loaded.config.sigma0) + " Pa");
  }
  loaded.config.validate();
  return loaded;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string write_config(const RunConfig& c) {
  std::ostringstream out;
  out << "preset = " << c.preset << '\n'
      << "n_x = " << c.n_x << '\n'
      << "n_y = " << c.n_y << '\n'
      << "n_B = " << c.n_B << '\n'
      << "E = " << format_double(c.E) << '\n'
      << "nu = " << format_double(c.nu) << '\n'
      << "m = " << format_double(c.m) << '\n'
      << "sigma0 = " << format_double(c.sigma0) << '\n'
      << "gtilde = " << format_double(c.gtilde[0]) << ", " << format_double(c.gtilde[1]) << '\n'
      << "xi = " << format_double(c.xi) << '\n'
      << "beta = " << format_double(c.beta) << '\n'
      << "eps = " << format_double(c.eps) << '\n'
      << "max_iter = " << c.max_iter << '\n'
      << "max_armijo = " << c.max_armijo << '\n'
      << "delta_factor = " << format_double(c.delta_factor) << '\n'
      << "n_phi = " << c.n_phi << '\n'
      << "mode = " << mode_name(c.mode) << '\n'
      << "omegas = " << join(c.omegas) << '\n'
      << "omega_bars = " << join(c.omega_bars) << '\n'
      << "gradient_mode = " << (c.gradient_mode == GradientMode::Adjoint ? "adjoint" : "fd") << '\n'
      << "output_dir = " << c.output_dir << '\n'
      << "workers = " << c.workers << '\n'
      << "bump_amplitude = " << format_double(c.bump_amplitude) << '\n'
      << "right_offset = " << format_double(c.right_offset) << '\n'
      << "fix_ends = " << (c.fix_ends ? "true" : "false") << '\n'
      << "fd_eps = " << format_double(c.fd_eps) << '\n';
  return out.str();
}

}  // namespace cerashape
