#include "fab/systems.hpp"

#include <cmath>
#include <stdexcept>

namespace fab {

namespace {

std::map<std::string, double> merged(std::map<std::string, double> defaults,
                                     const std::map<std::string, double>& overrides,
                                     const std::string& name) {
  for (const auto& [key, value] : overrides) {
    auto it = defaults.find(key);
    if (it == defaults.end())
      throw std::invalid_argument("builtin_system: unknown parameter '" + key +
                                  "' for system '" + name + "'");
    if (!std::isfinite(value))
      throw std::invalid_argument("builtin_system: non-finite value for parameter '" + key + "'");
    it->second = value;
  }
  return defaults;
}

SystemSpec make_chaos3d_a(const std::map<std::string, double>& overrides) {
  auto p = merged({{"phi", 12.0}, {"varphi", 16.0}, {"psi", 5.0}, {"sigma", 96.0}, {"delta", 10.0}},
                  overrides, "chaos3d_a");
  const double phi = p.at("phi"), varphi = p.at("varphi"), psi = p.at("psi"),
               sigma = p.at("sigma"), delta = p.at("delta");
  SystemSpec s;
  s.name = "chaos3d_a";
  s.dimension = 3;
  s.params = p;
  s.default_ic = {0.2, 0.1, 0.2};
  s.description = "3-D chaotic system: f1 = phi (x2 - x1) + sigma x2 x3, "
                  "f2 = varphi x1 - x1 x3, f3 = x1 x2 - psi x3 + delta x2^2";
  s.rhs = [phi, varphi, psi, sigma, delta](double, std::span<const double> x,
                                           std::span<double> d) {
    d[0] = phi * (x[1] - x[0]) + sigma * x[1] * x[2];
    d[1] = varphi * x[0] - x[0] * x[2];
    d[2] = x[0] * x[1] - psi * x[2] + delta * x[1] * x[1];
  };
  return s;
}

SystemSpec make_chaos3d_b(const std::map<std::string, double>& overrides) {
  auto p = merged({{"phi", 2.6}, {"varphi", 0.5}, {"psi", 0.4}}, overrides, "chaos3d_b");
  const double phi = p.at("phi"), varphi = p.at("varphi"), psi = p.at("psi");
  SystemSpec s;
  s.name = "chaos3d_b";
  s.dimension = 3;
  s.params = p;
  s.default_ic = {0.6, 0.5, 0.4};
  s.description = "six-term 3-D dissipative chaotic system: f1 = phi (x2 - x1), "
                  "f2 = x1 - x1 x3, f3 = 50 - varphi x1^2 - psi x3";
  s.rhs = [phi, varphi, psi](double, std::span<const double> x, std::span<double> d) {
    d[0] = phi * (x[1] - x[0]);
    d[1] = x[0] - x[0] * x[2];
    d[2] = 50.0 - varphi * x[0] * x[0] - psi * x[2];
  };
  return s;
}

const char* hyper4d_f3_form(int variant) {
  switch (variant) {
    case 0: return "f3 = -psi x3 + x2 x1^2 + x1";
    case 1: return "f3 = -psi x3 + x1^3 + x1";
    case 2: return "f3 = -psi x3 + x4 x1^2 + x1";
    default: return "";
  }
}

SystemSpec make_hyper4d(const std::map<std::string, double>& overrides) {
  auto p = merged({{"phi", 8.0}, {"varphi", 33.0}, {"psi", 16.0}, {"sigma", 1.25},
                   {"f3_variant", 0.0}},
                  overrides, "hyper4d");
  const double phi = p.at("phi"), varphi = p.at("varphi"), psi = p.at("psi"),
               sigma = p.at("sigma");
  const int variant = static_cast<int>(p.at("f3_variant"));
  if (variant < 0 || variant > 2 || p.at("f3_variant") != variant)
    throw std::invalid_argument("builtin_system: hyper4d f3_variant must be 0, 1 or 2");
  SystemSpec s;
  s.name = "hyper4d";
  s.dimension = 4;
  s.params = p;
  s.default_ic = {0.2, 0.4, 0.2, 0.7};
  s.description = std::string("4-D hyperchaotic four-wing system: "
                              "f1 = phi x1 - x2 x3 + x4, f2 = -varphi x2 + x1 x3 + x4, ") +
                  hyper4d_f3_form(variant) + ", f4 = sigma x1";
  s.rhs = [phi, varphi, psi, sigma, variant](double, std::span<const double> x,
                                             std::span<double> d) {
    d[0] = phi * x[0] - x[1] * x[2] + x[3];
    d[1] = -varphi * x[1] + x[0] * x[2] + x[3];
    const double x1sq = x[0] * x[0];
    switch (variant) {
      case 0: d[2] = -psi * x[2] + x[1] * x1sq + x[0]; break;
      case 1: d[2] = -psi * x[2] + x[0] * x1sq + x[0]; break;
      default: d[2] = -psi * x[2] + x[3] * x1sq + x[0]; break;
    }
    d[3] = sigma * x[0];
  };
  return s;
}

SystemSpec make_tbeta(const std::map<std::string, double>& overrides) {
  auto p = merged({{"beta", 1.0}}, overrides, "tbeta");
  const double beta = p.at("beta");
  if (beta < 0.0) throw std::invalid_argument("builtin_system: tbeta requires beta >= 0");
  SystemSpec s;
  s.name = "tbeta";
  s.dimension = 1;
  s.params = p;
  s.default_ic = {0.0};
  s.description = "scalar benchmark f(t, y) = t^beta with known closed-form solution";
  s.rhs = [beta](double t, std::span<const double>, std::span<double> d) {
    d[0] = std::pow(t, beta);
  };
  return s;
}

SystemSpec make_linear_ty(const std::map<std::string, double>& overrides) {
  auto p = merged({{"scale", 0.001}}, overrides, "linear_ty");
  const double scale = p.at("scale");
  SystemSpec s;
  s.name = "linear_ty";
  s.dimension = 1;
  s.params = p;
  s.default_ic = {1.0};
  s.description = "scalar f(t, y) = scale * t * y on [0, 10], used for the "
                  "contraction demonstration";
  s.rhs = [scale](double t, std::span<const double> x, std::span<double> d) {
    d[0] = scale * t * x[0];
  };
  return s;
}

}  // namespace

std::vector<std::string> builtin_system_names() {
  return {"chaos3d_a", "chaos3d_b", "hyper4d", "tbeta", "linear_ty"};
}

SystemSpec builtin_system(const std::string& name,
                          const std::map<std::string, double>& overrides) {
  if (name == "chaos3d_a") return make_chaos3d_a(overrides);
  if (name == "chaos3d_b") return make_chaos3d_b(overrides);
  if (name == "hyper4d") return make_hyper4d(overrides);
  if (name == "tbeta") return make_tbeta(overrides);
  if (name == "linear_ty") return make_linear_ty(overrides);
  throw std::out_of_range("builtin_system: unknown system '" + name + "'");
}

double exact_tbeta(double t, const Order& alpha, double beta) {
  if (t < 0.0 || !std::isfinite(t))
    throw std::domain_error("exact_tbeta: t must be >= 0 and finite");
  if (beta < 0.0) throw std::domain_error("exact_tbeta: beta must be >= 0");
  const double a = alpha.alpha();
  const double ab = alpha.ab();
  return (1.0 - a) / ab * std::pow(t, beta) +
         a * std::pow(t, a + beta) * gamma_fn(beta + 1.0) /
             (ab * gamma_fn(a + beta + 1.0));
}

}  // namespace fab
