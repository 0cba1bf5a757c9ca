#include "nlpf/config.hpp"

#include "nlpf/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace nlpf {

namespace {

using Table = std::map<std::string, std::map<std::string, std::string>>;

Table defaults() {
  Table t;
  t["grid"] = {{"dim", "1"}, {"nodes", "33"}, {"length", "1"}, {"ny", "33"}, {"ly", "1"}};
  t["model"] = {{"ell", "1"}, {"eta", "1"}, {"epsilon", "1"}, {"T", "1"}, {"N", "20"}, {"theta_min", "1e-6"}};
  t["kernel"] = {{"type", "gaussian"}, {"sigma", "0.1"}, {"radius", "0.3"}, {"amplitude", "1"}};
  t["nonlinearity"] = {{"beta", "cubic"}, {"beta_coeff", "1"}, {"pi", "linear"}, {"pi_kappa", "1"}, {"pi_c", "0"}};
  t["source"] = {{"type", "bump"}, {"value", "0"}, {"amplitude", "2"}, {"width", "0.15"},
                 {"cx", "0.5"},    {"cy", "0.5"},   {"omega", "3"}};
  const std::map<std::string, std::string> field{{"type", "constant"}, {"value", "0"}, {"base", "0"},
                                                 {"amplitude", "0"},   {"mode", "1"},  {"width", "0.15"},
                                                 {"cx", "0.5"},        {"cy", "0.5"}};
  t["theta0"] = field;
  t["theta0"]["type"] = "cosine";
  t["theta0"]["base"] = "1";
  t["theta0"]["amplitude"] = "0.5";
  t["phi0"] = field;
  t["phi0"]["type"] = "cosine";
  t["phi0"]["amplitude"] = "0.5";
  t["v0"] = field;
  t["solver"] = {{"fp_rel_tol", "1e-9"},       {"fp_max_iter", "200"},        {"kappa_safety", "0.5"},
                 {"elliptic_rel_tol", "1e-10"}, {"elliptic_max_newton", "200"}, {"tau_start", "0.1"},
                 {"tau_factor", "4"},           {"tau_min", "1e-10"},          {"scalar_tol", "1e-14"}};
  t["study"] = {{"h_divisors", "16,32,64,128"}, {"eps_list", "0.1,0.05,0.025,0.0125"}, {"h_base", "1"},
                {"h_safety", "0.25"}};
  t["random"] = {{"seed", "1"}};
  return t;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string where(const std::string& section, const std::string& key) { return "[" + section + "] " + key; }

double to_double(const std::string& section, const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty() || !std::isfinite(v))
    throw ConfigError(where(section, key) + ": not a finite number: '" + text + "'");
  return v;
}

template <class Int>
Int to_int(const std::string& section, const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  Int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw ConfigError(where(section, key) + ": not an integer: '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Resolved {
 public:
  explicit Resolved(Table t) : t_(std::move(t)) {}
  const std::string& str(const std::string& s, const std::string& k) const { return t_.at(s).at(k); }
  double num(const std::string& s, const std::string& k) const { return to_double(s, k, str(s, k)); }
  int integer(const std::string& s, const std::string& k) const { return to_int<int>(s, k, str(s, k)); }
  const Table& table() const { return t_; }

 private:
  Table t_;
};

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

GridFunction make_field(const Resolved& r, const std::string& sec, const Grid& grid, std::uint64_t seed,
                        std::uint64_t salt) {
  const std::string type = trim(r.str(sec, "type"));
  GridFunction out = grid.zeros();
  if (type == "constant") return grid.constant(r.num(sec, "value"));
  const double base = r.num(sec, "base");
  const double amp = r.num(sec, "amplitude");
  if (type == "cosine") {
    const double mode = r.num(sec, "mode");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.coords(i);
      double c = std::cos(mode * std::numbers::pi * x[0] / grid.length(0));
      if (grid.dim() == 2) c *= std::cos(mode * std::numbers::pi * x[1] / grid.length(1));
      out[static_cast<Eigen::Index>(i)] = base + amp * c;
    }
  } else if (type == "bump") {
    const double w = r.num(sec, "width");
    if (!(w > 0.0)) throw ConfigError(where(sec, "width") + ": must be positive");
    const double cx = r.num(sec, "cx"), cy = r.num(sec, "cy");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.coords(i);
      double d2 = (x[0] - cx) * (x[0] - cx);
      if (grid.dim() == 2) d2 += (x[1] - cy) * (x[1] - cy);
      out[static_cast<Eigen::Index>(i)] = base + amp * std::exp(-d2 / (2.0 * w * w));
    }
  } else if (type == "random") {
    std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * salt);
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = base + amp * (2.0 * unit_uniform(rng) - 1.0);
  } else {
    throw ConfigError(where(sec, "type") + ": unknown preset '" + type + "' (constant, cosine, bump, random)");
  }
  return out;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::uint64_t* seed_override) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  Table table = defaults();
  for (const auto& [section, body] : tree) {
    auto it = table.find(section);
    if (it == table.end()) throw ConfigError("config: unknown section or top-level key '" + section + "'");
    for (const auto& [key, value] : body) {
      auto kt = it->second.find(key);
      if (kt == it->second.end()) throw ConfigError("config: unknown key " + where(section, key));
      kt->second = trim(value.data());
    }
  }
  if (seed_override) table["random"]["seed"] = std::to_string(*seed_override);
  const Resolved r(std::move(table));

  RunConfig cfg;
  cfg.seed = to_int<std::uint64_t>("random", "seed", r.str("random", "seed"));

  const int dim = r.integer("grid", "dim");
  const int nodes = r.integer("grid", "nodes");
  if (nodes < 2) throw ConfigError("[grid] nodes: at least 2 are required");
  if (dim == 1) {
    cfg.spec.grid = Grid(nodes, r.num("grid", "length"));
  } else if (dim == 2) {
    const int ny = r.integer("grid", "ny");
    if (ny < 2) throw ConfigError("[grid] ny: at least 2 are required");
    cfg.spec.grid = Grid(nodes, ny, r.num("grid", "length"), r.num("grid", "ly"));
  } else {
    throw ConfigError("[grid] dim: must be 1 or 2");
  }
  const Grid& grid = cfg.spec.grid;

  cfg.spec.ell = r.num("model", "ell");
  cfg.spec.eta = r.num("model", "eta");
  cfg.spec.epsilon = r.num("model", "epsilon");
  cfg.spec.T = r.num("model", "T");
  cfg.spec.theta_min_input = r.num("model", "theta_min");
  cfg.N = r.integer("model", "N");
  if (cfg.N < 1) throw ConfigError("[model] N: must be at least 1");

  const std::string ktype = r.str("kernel", "type");
  if (ktype == "gaussian") {
    cfg.spec.kernel = kernels::gaussian(r.num("kernel", "sigma"), r.num("kernel", "radius"), r.num("kernel", "amplitude"));
  } else if (ktype == "hat") {
    cfg.spec.kernel = kernels::hat(r.num("kernel", "radius"), r.num("kernel", "amplitude"));
  } else if (ktype == "zero") {
    cfg.spec.kernel = kernels::zero();
  } else {
    throw ConfigError("[kernel] type: unknown preset '" + ktype + "' (gaussian, hat, zero)");
  }

  const std::string beta = r.str("nonlinearity", "beta");
  if (beta == "cubic") {
    cfg.spec.nonlin = nonlinearities::cubic(r.num("nonlinearity", "beta_coeff"));
  } else if (beta == "linear") {
    cfg.spec.nonlin = nonlinearities::linear(r.num("nonlinearity", "beta_coeff"));
  } else if (beta == "zero") {
    cfg.spec.nonlin = nonlinearities::zero_beta();
  } else {
    throw ConfigError("[nonlinearity] beta: unknown preset '" + beta + "' (cubic, linear, zero)");
  }
  const std::string pi = r.str("nonlinearity", "pi");
  if (pi == "linear") {
    nonlinearities::set_linear_pi(cfg.spec.nonlin, r.num("nonlinearity", "pi_kappa"), r.num("nonlinearity", "pi_c"));
  } else if (pi == "zero") {
    nonlinearities::set_zero_pi(cfg.spec.nonlin);
  } else {
    throw ConfigError("[nonlinearity] pi: unknown preset '" + pi + "' (linear, zero)");
  }

  const std::string stype = r.str("source", "type");
  if (stype == "zero") {
    cfg.spec.source = sources::zero();
  } else if (stype == "constant") {
    cfg.spec.source = sources::constant(r.num("source", "value"));
  } else if (stype == "bump") {
    cfg.spec.source = sources::bump(r.num("source", "amplitude"), r.num("source", "width"), r.num("source", "cx"),
                                    r.num("source", "cy"), r.num("source", "omega"));
  } else {
    throw ConfigError("[source] type: unknown preset '" + stype + "' (zero, constant, bump)");
  }

  cfg.spec.theta0 = make_field(r, "theta0", grid, cfg.seed, 1);
  cfg.spec.phi0 = make_field(r, "phi0", grid, cfg.seed, 2);
  cfg.spec.v0 = make_field(r, "v0", grid, cfg.seed, 3);

  StepperSettings& st = cfg.stepper;
  st.fp_rel_tol = r.num("solver", "fp_rel_tol");
  st.fp_max_iter = r.integer("solver", "fp_max_iter");
  st.kappa_safety = r.num("solver", "kappa_safety");
  st.elliptic.rel_tol = r.num("solver", "elliptic_rel_tol");
  st.elliptic.max_newton = r.integer("solver", "elliptic_max_newton");
  st.elliptic.tau_start = r.num("solver", "tau_start");
  st.elliptic.tau_factor = r.num("solver", "tau_factor");
  st.elliptic.tau_min = r.num("solver", "tau_min");
  st.scalar.tol_rel = r.num("solver", "scalar_tol");
  if (!(st.fp_rel_tol > 0.0) || st.fp_max_iter < 1) throw ConfigError("[solver] fixed-point settings must be positive");
  if (!(st.kappa_safety > 0.0 && st.kappa_safety < 1.0)) throw ConfigError("[solver] kappa_safety: must lie in (0, 1)");
  if (!(st.elliptic.tau_factor > 1.0) || !(st.elliptic.tau_min > 0.0) || !(st.elliptic.tau_start >= st.elliptic.tau_min))
    throw ConfigError("[solver] tau schedule: need tau_factor > 1 and tau_start >= tau_min > 0");

  cfg.study.h_divisors.clear();
  for (const std::string& s : split_list(r.str("study", "h_divisors")))
    cfg.study.h_divisors.push_back(to_int<int>("study", "h_divisors", s));
  cfg.study.eps_list.clear();
  for (const std::string& s : split_list(r.str("study", "eps_list")))
    cfg.study.eps_list.push_back(to_double("study", "eps_list", s));
  cfg.study.rule.h_base = r.num("study", "h_base");
  cfg.study.rule.safety = r.num("study", "h_safety");

  std::ostringstream canon;
  for (const auto& [section, keys] : r.table())
    for (const auto& [key, value] : keys) {
      canon << section << '.' << key << '=';
      double d = 0.0;
      const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
      if (ec == std::errc{} && p == value.data() + value.size() && value.find(',') == std::string::npos)
        canon << fmt17(d);
      else
        canon << value;
      canon << '\n';
    }
  cfg.resolved_text = canon.str();
  return cfg;
}

RunConfig load_config(const std::string& path, const std::uint64_t* seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in, seed_override);
}

std::string canonical_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << cfg.resolved_text;
  auto field = [&](const char* name, const GridFunction& u) {
    std::string bytes;
    for (Eigen::Index i = 0; i < u.size(); ++i) bytes += fmt17(u[i]) + ",";
    out << "data." << name << '=' << fnv1a_hex(bytes) << '\n';
  };
  field("theta0", cfg.spec.theta0);
  field("phi0", cfg.spec.phi0);
  field("v0", cfg.spec.v0);
  return out.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nlpf
