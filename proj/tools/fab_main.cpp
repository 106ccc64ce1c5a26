// fab - command-line front end for the fractional Adams-Bashforth solver.
//
// Subcommands:
//   simulate   integrate a system and write trajectory CSV + manifest JSON
//   converge   error table for the t^beta benchmark over a list of step sizes
//   phi        truncation-error factor grid as CSV
//   check      uniqueness / contraction report as JSON on stdout
//
// Exit codes: 0 success, 1 usage or configuration error, 2 truncated run.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fab/analysis.hpp"
#include "fab/core_math.hpp"
#include "fab/integrators.hpp"
#include "fab/io.hpp"
#include "fab/systems.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitTruncated = 2;

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
  return cfg;
}

// Flags win over the config file; the config file wins over defaults.
template <typename T>
T resolve(const std::optional<T>& flag, const json& cfg, const char* key, T fallback) {
  if (flag) return *flag;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
  }
  return fallback;
}

template <typename T>
T resolve_required(const std::optional<T>& flag, const json& cfg, const char* key) {
  if (flag) return *flag;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
  }
  throw ConfigError(std::string("missing required setting '") + key + "'");
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs,
                                           const json& cfg) {
  std::map<std::string, double> params;
  if (cfg.contains("params")) {
    if (!cfg.at("params").is_object()) throw ConfigError("config key 'params' must be an object");
    for (const auto& [k, v] : cfg.at("params").items()) {
      if (!v.is_number()) throw ConfigError("config param '" + k + "' must be numeric");
      params[k] = v.get<double>();
    }
  }
  for (const auto& kv : kvs) {
    const auto pos = kv.find('=');
    if (pos == std::string::npos || pos == 0)
      throw ConfigError("--param expects key=value, got '" + kv + "'");
    try {
      params[kv.substr(0, pos)] = fab::parse_double(kv.substr(pos + 1));
    } catch (const std::invalid_argument&) {
      throw ConfigError("--param value for '" + kv.substr(0, pos) + "' is not a number");
    }
  }
  return params;
}

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto pos = csv.find(',', start);
    const auto piece = csv.substr(start, pos == std::string::npos ? std::string::npos
                                                                  : pos - start);
    try {
      out.push_back(fab::parse_double(piece));
    } catch (const std::invalid_argument&) {
      throw ConfigError(std::string("bad entry in ") + what + ": '" + piece + "'");
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (out.empty()) throw ConfigError(std::string(what) + " must not be empty");
  return out;
}

std::int64_t steps_for(double t_final, double h) {
  if (!(h > 0.0) || !(t_final > 0.0)) throw ConfigError("h and t-final must be positive");
  const double ratio = t_final / h;
  const auto n = static_cast<std::int64_t>(std::llround(ratio));
  if (n < 1 ||
      std::abs(ratio - static_cast<double>(n)) >
          8.0 * std::numeric_limits<double>::epsilon() * ratio)
    throw ConfigError("t-final must be an integer multiple of h");
  return n;
}

std::filesystem::path manifest_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  if (p.extension() == ".csv") p.replace_extension();
  p += ".manifest.json";
  return p;
}

struct SimulateOpts {
  std::optional<std::string> system, scheme, variant, bootstrap, out, ic, config;
  std::optional<double> alpha, h, t_final;
  std::optional<int> refine;
  std::vector<std::string> params;
};

int cmd_simulate(const SimulateOpts& o) {
  const json cfg = o.config ? load_config(*o.config) : json::object();

  const auto system_name = resolve_required<std::string>(o.system, cfg, "system");
  const double alpha_v = resolve_required<double>(o.alpha, cfg, "alpha");
  const double h = resolve_required<double>(o.h, cfg, "h");
  const double t_final = resolve_required<double>(o.t_final, cfg, "t_final");
  const auto out_path = resolve_required<std::string>(o.out, cfg, "out");
  const auto scheme_s = resolve<std::string>(o.scheme, cfg, "scheme", "two_step");
  const auto variant_s = resolve<std::string>(o.variant, cfg, "variant", "corrected");
  const auto bootstrap_s = resolve<std::string>(o.bootstrap, cfg, "bootstrap", "rk4_classical");
  const int refine = resolve<int>(o.refine, cfg, "refine", 8);

  const auto params = parse_params(o.params, cfg);
  const fab::SystemSpec system = fab::builtin_system(system_name, params);

  fab::State ic = system.default_ic;
  if (o.ic) {
    const auto vals = parse_double_list(*o.ic, "--ic");
    ic = fab::State(vals.begin(), vals.end());
  } else if (cfg.contains("ic")) {
    ic = cfg.at("ic").get<std::vector<double>>();
  }
  if (static_cast<int>(ic.size()) != system.dimension)
    throw ConfigError("initial state must have dimension " + std::to_string(system.dimension));

  const fab::Order order(alpha_v);
  const fab::Grid grid{h, steps_for(t_final, h)};
  const fab::Scheme scheme = fab::scheme_from_string(scheme_s);
  const fab::WeightVariant variant = fab::weight_variant_from_string(variant_s);
  const fab::BootstrapMethod boot = fab::bootstrap_from_string(bootstrap_s);
  if (scheme != fab::Scheme::reference && grid.n_steps < 2)
    throw ConfigError("two-step schemes need at least 2 steps");

  fab::Trajectory traj;
  switch (scheme) {
    case fab::Scheme::two_step:
      traj = fab::integrate_two_step(system, ic, grid, order, variant, boot);
      break;
    case fab::Scheme::full_history:
      traj = fab::integrate_full_history(system, ic, grid, order, boot);
      break;
    case fab::Scheme::reference:
      traj = fab::integrate_reference(system, ic, grid, order, refine);
      break;
  }

  json config_echo = {{"system", system_name}, {"params", params},
                      {"alpha", alpha_v},      {"h", h},
                      {"t_final", t_final},    {"scheme", scheme_s},
                      {"variant", variant_s},  {"bootstrap", bootstrap_s},
                      {"refine", refine},      {"ic", ic},
                      {"out", out_path}};

  fab::write_text_atomic(out_path, fab::trajectory_csv(traj));
  fab::write_text_atomic(manifest_path(out_path),
                         fab::make_manifest(traj, config_echo).dump(2) + "\n");

  if (traj.meta.truncated) {
    std::cerr << "run truncated at step " << traj.meta.truncation_step << " ("
              << traj.meta.truncation_reason << "); partial trajectory written\n";
    return kExitTruncated;
  }
  return kExitOk;
}

struct ConvergeOpts {
  std::optional<std::string> system, scheme, variant, bootstrap, out, h_list, config;
  std::optional<double> alpha, beta, t_final;
};

int cmd_converge(const ConvergeOpts& o) {
  const json cfg = o.config ? load_config(*o.config) : json::object();
  const auto system_name = resolve<std::string>(o.system, cfg, "system", "tbeta");
  if (system_name != "tbeta")
    throw ConfigError("converge requires --system tbeta (the closed-form benchmark)");
  const double alpha_v = resolve_required<double>(o.alpha, cfg, "alpha");
  const double beta = resolve_required<double>(o.beta, cfg, "beta");
  const double t_final = resolve_required<double>(o.t_final, cfg, "t_final");
  const auto out_path = resolve_required<std::string>(o.out, cfg, "out");
  const auto h_csv = resolve_required<std::string>(o.h_list, cfg, "h");
  const auto scheme_s = resolve<std::string>(o.scheme, cfg, "scheme", "two_step");
  const auto variant_s = resolve<std::string>(o.variant, cfg, "variant", "corrected");
  const auto bootstrap_s = resolve<std::string>(o.bootstrap, cfg, "bootstrap", "rk4_classical");

  const auto h_list = parse_double_list(h_csv, "--h");
  const auto table = fab::convergence_table(
      fab::Order(alpha_v), beta, h_list, t_final, fab::scheme_from_string(scheme_s),
      fab::weight_variant_from_string(variant_s), fab::bootstrap_from_string(bootstrap_s));

  std::string csv = "h,max_abs_error,observed_order\n";
  for (const auto& row : table) {
    csv += fab::format_double(row.h);
    csv += ',';
    csv += fab::format_double(row.max_abs_error);
    csv += ',';
    if (row.observed_order) csv += fab::format_double(*row.observed_order);
    csv += '\n';
  }
  fab::write_text_atomic(out_path, csv);
  return kExitOk;
}

struct PhiOpts {
  std::optional<std::string> alphas, out, config;
  std::optional<int> n_max;
  std::optional<double> h;
  bool with_error_bounds = false;
};

int cmd_phi(const PhiOpts& o) {
  const json cfg = o.config ? load_config(*o.config) : json::object();
  const int n_max = resolve_required<int>(o.n_max, cfg, "n_max");
  const double h = resolve_required<double>(o.h, cfg, "h");
  const auto out_path = resolve_required<std::string>(o.out, cfg, "out");
  const auto alphas = parse_double_list(resolve_required<std::string>(o.alphas, cfg, "alphas"),
                                        "--alphas");
  if (n_max < 1) throw ConfigError("--n-max must be >= 1");
  if (!(h > 0.0)) throw ConfigError("--h must be positive");

  // bound column: Phi(n, a) h^(a+2) / 2, the local-error plot quantity;
  // --with-error-bounds appends the M = 1 remainder and classical bounds
  std::string csv = o.with_error_bounds ? "n,alpha,phi,bound,remainder,classical\n"
                                        : "n,alpha,phi,bound\n";
  for (const double a : alphas) {
    const fab::Order order(a);
    for (int n = 1; n <= n_max; ++n) {
      const double phi = fab::phi_factor(n, order);
      csv += std::to_string(n);
      csv += ',';
      csv += fab::format_double(a);
      csv += ',';
      csv += fab::format_double(phi);
      csv += ',';
      csv += fab::format_double(phi * std::pow(h, a + 2.0) / 2.0);
      if (o.with_error_bounds) {
        csv += ',';
        csv += fab::format_double(fab::remainder_bound(1.0, h, n, order));
        csv += ',';
        csv += fab::format_double(fab::classical_ab2_bound(1.0, h));
      }
      csv += '\n';
    }
  }
  fab::write_text_atomic(out_path, csv);
  return kExitOk;
}

struct CheckOpts {
  std::optional<double> L, M, b, alpha, c;
  std::optional<std::string> config;
};

int cmd_check(const CheckOpts& o) {
  const json cfg = o.config ? load_config(*o.config) : json::object();
  const double L = resolve_required<double>(o.L, cfg, "L");
  const double M = resolve_required<double>(o.M, cfg, "M");
  const double b = resolve_required<double>(o.b, cfg, "b");
  const double alpha_v = resolve_required<double>(o.alpha, cfg, "alpha");
  std::optional<double> c = o.c;
  if (!c && cfg.contains("c")) c = cfg.at("c").get<double>();

  const auto rep = fab::contraction_check(L, M, b, fab::Order(alpha_v), c);
  json out = {{"lipschitz_L", rep.lipschitz_L},
              {"sup_M", rep.sup_M},
              {"radius_b", rep.radius_b},
              {"alpha", rep.alpha},
              {"c_contraction", rep.c_contraction},
              {"c_welldefined", rep.c_welldefined},
              {"c_max", rep.c_max},
              {"guarantee", rep.guarantee}};
  if (rep.satisfied_at) {
    out["satisfied_at"] = *rep.satisfied_at;
    out["satisfied"] = *rep.satisfied;
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fab - fractional Adams-Bashforth solver for nonlocal "
               "Mittag-Leffler-kernel derivatives"};
  app.require_subcommand(1);

  SimulateOpts sim;
  auto* simulate = app.add_subcommand("simulate", "integrate a system and write CSV + manifest");
  simulate->add_option("--system", sim.system, "builtin system name");
  simulate->add_option("--param", sim.params, "parameter override key=value (repeatable)");
  simulate->add_option("--alpha", sim.alpha, "fractional order in (0,1]");
  simulate->add_option("--h", sim.h, "step size");
  simulate->add_option("--t-final", sim.t_final, "final time (integer multiple of h)");
  simulate->add_option("--scheme", sim.scheme, "two_step | full_history | reference");
  simulate->add_option("--variant", sim.variant, "corrected | as_printed");
  simulate->add_option("--bootstrap", sim.bootstrap, "rk4_classical | fractional_euler");
  simulate->add_option("--refine", sim.refine, "sub-mesh factor for the reference scheme");
  simulate->add_option("--ic", sim.ic, "initial state, comma-separated");
  simulate->add_option("--out", sim.out, "output CSV path");
  simulate->add_option("--config", sim.config, "JSON config file (flags override)");

  ConvergeOpts conv;
  auto* converge = app.add_subcommand("converge", "error table for the t^beta benchmark");
  converge->add_option("--system", conv.system, "must be tbeta");
  converge->add_option("--beta", conv.beta, "exponent of the benchmark RHS");
  converge->add_option("--alpha", conv.alpha, "fractional order in (0,1]");
  converge->add_option("--h", conv.h_list, "step sizes, comma-separated, decreasing");
  converge->add_option("--t-final", conv.t_final, "final time");
  converge->add_option("--scheme", conv.scheme, "two_step | full_history | reference");
  converge->add_option("--variant", conv.variant, "corrected | as_printed");
  converge->add_option("--bootstrap", conv.bootstrap, "rk4_classical | fractional_euler");
  converge->add_option("--out", conv.out, "output CSV path");
  converge->add_option("--config", conv.config, "JSON config file (flags override)");

  PhiOpts phi;
  auto* phic = app.add_subcommand("phi", "truncation-error factor grid");
  phic->add_option("--n-max", phi.n_max, "largest step index");
  phic->add_option("--alphas", phi.alphas, "orders, comma-separated");
  phic->add_option("--h", phi.h, "step size used for the bound column");
  phic->add_flag("--with-error-bounds", phi.with_error_bounds,
                 "append M=1 remainder and classical bound columns");
  phic->add_option("--out", phi.out, "output CSV path");
  phic->add_option("--config", phi.config, "JSON config file (flags override)");

  CheckOpts chk;
  auto* check = app.add_subcommand("check", "uniqueness / contraction report");
  check->add_option("--L", chk.L, "Lipschitz constant of f");
  check->add_option("--M", chk.M, "bound on |f| over the compact");
  check->add_option("--b", chk.b, "radius of the state ball");
  check->add_option("--alpha", chk.alpha, "fractional order in (0,1]");
  check->add_option("--c", chk.c, "interval length to test");
  check->add_option("--config", chk.config, "JSON config file (flags override)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (converge->parsed()) return cmd_converge(conv);
    if (phic->parsed()) return cmd_phi(phi);
    if (check->parsed()) return cmd_check(chk);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
