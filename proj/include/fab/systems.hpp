#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fab/core_math.hpp"

namespace fab {

using State = std::vector<double>;

/// Right-hand side f(t, u) writing the derivative into dudt.
/// Must be deterministic and side-effect free.
using RhsFn = std::function<void(double t, std::span<const double> u,
                                 std::span<double> dudt)>;

struct SystemSpec {
  std::string name;
  int dimension = 0;
  std::map<std::string, double> params;  // ordered by key
  RhsFn rhs;
  State default_ic;
  std::string description;
};

/// Names accepted by builtin_system().
std::vector<std::string> builtin_system_names();

/// Returns the named builtin with its default parameters and initial data.
/// Override keys must already exist in the system's parameter set, otherwise
/// std::invalid_argument; unknown names raise std::out_of_range.
///
/// Builtins:
///   chaos3d_a  3-D chaotic system, params phi=12, varphi=16, psi=5,
///              sigma=96, delta=10, ic (0.2, 0.1, 0.2)
///   chaos3d_b  3-D dissipative chaotic system, params phi=2.6, varphi=0.5,
///              psi=0.4, ic (0.6, 0.5, 0.4)
///   hyper4d    4-D hyperchaotic four-wing system, params phi=8, varphi=33,
///              psi=16, sigma=1.25, f3_variant in {0,1,2},
///              ic (0.2, 0.4, 0.2, 0.7)
///   tbeta      scalar f(t, y) = t^beta, param beta=1, ic (0)
///   linear_ty  scalar f(t, y) = scale * t * y, param scale=0.001, ic (1)
SystemSpec builtin_system(const std::string& name,
                          const std::map<std::string, double>& overrides = {});

/// Closed-form solution of the scalar problem D^alpha y = t^beta, y(0) = 0:
///
///   y(t) = (1-alpha)/AB(alpha) t^beta
///          + alpha t^(alpha+beta) Gamma(beta+1) / (AB(alpha) Gamma(alpha+beta+1))
double exact_tbeta(double t, const Order& alpha, double beta);

}  // namespace fab
