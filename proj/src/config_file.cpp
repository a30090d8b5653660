#include "rsnoum/config_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rsnoum {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size() || !std::isfinite(x)) throw std::invalid_argument("not a finite number: " + s);
  return x;
}

long long to_integer(const std::string& s) {
  std::size_t used = 0;
  const long long x = std::stoll(s, &used);
  if (used != s.size()) throw std::invalid_argument("not an integer: " + s);
  return x;
}

std::vector<double> to_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(item));
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

}  // namespace

ExperimentPlan parse_plan(std::istream& in) {
  ExperimentPlan plan;

  bool degrees = false;
  std::vector<double> azimuth;
  std::vector<double> off_nadir;
  std::set<std::string> seen;

  using Setter = std::function<void(const std::string&)>;
  SystemConfig& c = plan.config;
  const std::map<std::string, Setter> setters = {
      {"nt_x", [&](const std::string& v) { c.nt_x = static_cast<int>(to_integer(v)); }},
      {"nt_y", [&](const std::string& v) { c.nt_y = static_cast<int>(to_integer(v)); }},
      {"altitude_km", [&](const std::string& v) { c.altitude = to_double(v) * 1e3; }},
      {"coverage_radius_km", [&](const std::string& v) { c.coverage_radius = to_double(v) * 1e3; }},
      {"carrier_freq_ghz", [&](const std::string& v) { c.carrier_freq = to_double(v) * 1e9; }},
      {"bandwidth_mhz", [&](const std::string& v) { c.bandwidth = to_double(v) * 1e6; }},
      {"tx_gain_dbi", [&](const std::string& v) { c.tx_gain = db_to_linear(to_double(v)); }},
      {"rx_gain_dbi", [&](const std::string& v) { c.rx_gain = db_to_linear(to_double(v)); }},
      {"sys_noise_temp_k", [&](const std::string& v) { c.sys_noise_temp = to_double(v); }},
      {"noise_var", [&](const std::string& v) { c.noise_var = to_double(v); }},
      {"tx_power_w", [&](const std::string& v) { c.tx_power = to_double(v); }},
      {"rician_k_db", [&](const std::string& v) { c.rician_k = db_to_linear(to_double(v)); }},
      {"demand_uc",
       [&](const std::string& v) {
         const auto xs = to_doubles(v);
         plan.demands.unicast = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
       }},
      {"demand_mc", [&](const std::string& v) { plan.demands.multicast = to_double(v); }},
      {"eta_mc", [&](const std::string& v) { plan.eta_override = to_double(v); }},
      {"schemes",
       [&](const std::string& v) {
         plan.schemes.clear();
         for (const auto& s : split_list(v)) {
           const auto id = parse_scheme(s);
           if (!id) throw std::invalid_argument("unknown scheme: " + s);
           plan.schemes.push_back(*id);
         }
       }},
      {"csit",
       [&](const std::string& v) {
         plan.csit.clear();
         for (const auto& s : split_list(v)) {
           const auto m = parse_csit(s);
           if (!m) throw std::invalid_argument("unknown CSIT mode: " + s);
           plan.csit.push_back(*m);
         }
       }},
      {"realizations", [&](const std::string& v) { plan.realizations = static_cast<int>(to_integer(v)); }},
      {"seed", [&](const std::string& v) { plan.base_seed = static_cast<std::uint64_t>(to_integer(v)); }},
      {"alpha", [&](const std::string& v) { plan.solver.smoothing.alpha = to_double(v); }},
      {"alpha_growth", [&](const std::string& v) { plan.solver.smoothing.alpha_growth = to_double(v); }},
      {"max_escalations",
       [&](const std::string& v) { plan.solver.smoothing.max_escalations = static_cast<int>(to_integer(v)); }},
      {"epsilon", [&](const std::string& v) { plan.solver.stop.epsilon = to_double(v); }},
      {"t_max", [&](const std::string& v) { plan.solver.stop.t_max = static_cast<int>(to_integer(v)); }},
      {"init",
       [&](const std::string& v) {
         if (v == "deterministic") plan.init = InitMode::Deterministic;
         else if (v == "random") plan.init = InitMode::Random;
         else throw std::invalid_argument("init must be deterministic or random");
       }},
      {"angle_unit",
       [&](const std::string& v) {
         if (v != "deg" && v != "rad") throw std::invalid_argument("angle_unit must be deg or rad");
         degrees = v == "deg";
       }},
      {"user_azimuth", [&](const std::string& v) { azimuth = to_doubles(v); }},
      {"user_off_nadir", [&](const std::string& v) { off_nadir = to_doubles(v); }},
      {"sweep",
       [&](const std::string& v) {
         const auto axis = parse_sweep_axis(v);
         if (!axis) throw std::invalid_argument("unknown sweep axis: " + v);
         plan.sweep = *axis;
       }},
      {"sweep_values", [&](const std::string& v) { plan.sweep_values = to_doubles(v); }},
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw std::invalid_argument(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw std::invalid_argument(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw std::invalid_argument(where + "duplicate key '" + key + "'");
    try {
      it->second(value);
    } catch (const std::exception& e) {
      throw std::invalid_argument(where + key + ": " + e.what());
    }
  }

  if (azimuth.size() != off_nadir.size()) {
    throw std::invalid_argument("user_azimuth and user_off_nadir need the same number of entries");
  }
  const double to_rad = degrees ? kPi / 180.0 : 1.0;
  for (std::size_t k = 0; k < azimuth.size(); ++k) {
    const double phi = off_nadir[k] * to_rad;
    if (!(phi >= 0.0 && phi < kPi / 2.0)) throw std::invalid_argument("user_off_nadir must lie in [0, 90) degrees");
    plan.fixed_users.push_back(user_at(c.altitude * std::tan(phi), azimuth[k] * to_rad, c));
  }
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return parse_plan(in);
}

std::string format_plan(const ExperimentPlan& plan) {
  const SystemConfig& c = plan.config;
  std::ostringstream out;
  out << "nt_x = " << c.nt_x << "\n"
      << "nt_y = " << c.nt_y << "\n"
      << "altitude_km = " << fmt(c.altitude / 1e3) << "\n"
      << "coverage_radius_km = " << fmt(c.coverage_radius / 1e3) << "\n"
      << "carrier_freq_ghz = " << fmt(c.carrier_freq / 1e9) << "\n"
      << "bandwidth_mhz = " << fmt(c.bandwidth / 1e6) << "\n"
      << "tx_gain_dbi = " << fmt(linear_to_db(c.tx_gain)) << "\n"
      << "rx_gain_dbi = " << fmt(linear_to_db(c.rx_gain)) << "\n"
      << "sys_noise_temp_k = " << fmt(c.sys_noise_temp) << "\n"
      << "noise_var = " << fmt(c.noise_var) << "\n"
      << "tx_power_w = " << fmt(c.tx_power) << "\n"
      << "rician_k_db = " << fmt(linear_to_db(c.rician_k)) << "\n";
  std::vector<std::string> items;
  for (double x : plan.demands.unicast) items.push_back(fmt(x));
  out << "demand_uc = " << join(items) << "\n"
      << "demand_mc = " << fmt(plan.demands.multicast) << "\n";
  if (plan.eta_override) out << "eta_mc = " << fmt(*plan.eta_override) << "\n";
  items.clear();
  for (SchemeId s : plan.schemes) items.emplace_back(scheme_name(s));
  out << "schemes = " << join(items) << "\n";
  items.clear();
  for (CsitMode m : plan.csit) items.emplace_back(csit_name(m));
  out << "csit = " << join(items) << "\n"
      << "realizations = " << plan.realizations << "\n"
      << "seed = " << plan.base_seed << "\n"
      << "alpha = " << fmt(plan.solver.smoothing.alpha) << "\n"
      << "alpha_growth = " << fmt(plan.solver.smoothing.alpha_growth) << "\n"
      << "max_escalations = " << plan.solver.smoothing.max_escalations << "\n"
      << "epsilon = " << fmt(plan.solver.stop.epsilon) << "\n"
      << "t_max = " << plan.solver.stop.t_max << "\n"
      << "init = " << (plan.init == InitMode::Random ? "random" : "deterministic") << "\n";
  if (!plan.fixed_users.empty()) {
    std::vector<std::string> az;
    std::vector<std::string> phi;
    for (const auto& u : plan.fixed_users) {
      az.push_back(fmt(u.azimuth));
      phi.push_back(fmt(u.off_nadir));
    }
    out << "angle_unit = rad\n"
        << "user_azimuth = " << join(az) << "\n"
        << "user_off_nadir = " << join(phi) << "\n";
  }
  out << "sweep = " << sweep_axis_name(plan.sweep) << "\n";
  if (!plan.sweep_values.empty()) {
    items.clear();
    for (double x : plan.sweep_values) items.push_back(fmt(x));
    out << "sweep_values = " << join(items) << "\n";
  }
  return out.str();
}

}  // namespace rsnoum
