#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fab/core_math.hpp"
#include "fab/systems.hpp"

namespace fab {

/// Uniform time mesh anchored at t0 = 0.
struct Grid {
  double h = 0.0;        // step size, > 0
  std::int64_t n_steps = 0;  // number of steps; final time = h * n_steps

  double t(std::int64_t i) const { return h * static_cast<double>(i); }
  double t_final() const { return h * static_cast<double>(n_steps); }
};

enum class WeightVariant { corrected, as_printed };
enum class BootstrapMethod { rk4_classical, fractional_euler };
enum class Scheme { two_step, full_history, reference };

std::string to_string(WeightVariant v);
std::string to_string(BootstrapMethod m);
std::string to_string(Scheme s);
WeightVariant weight_variant_from_string(const std::string& s);
BootstrapMethod bootstrap_from_string(const std::string& s);
Scheme scheme_from_string(const std::string& s);

/// Step-n coefficient pair of the two-step update
///   u_{n+1} = u_n + omega1 f(t_n, u_n) + omega2 f(t_{n-1}, u_{n-1}).
struct SchemeWeights {
  double omega1 = 0.0;
  double omega2 = 0.0;
  std::int64_t n = 0;
  WeightVariant variant = WeightVariant::corrected;
};

/// Two-step scheme weights, n >= 1.
///
/// The corrected variant assembles the coefficients from the memory-integral
/// pair evaluated with the linear interpolant through (t_{n-1}, .), (t_n, .):
///
///   omega1 =  (1-a)/AB + [ (t_{n+1}^{a+1}/(a+1) - t_{n-1} t_{n+1}^a)
///                         - (t_n^{a+1}/(a+1)    - t_{n-1} t_n^a) ] / (h G(a) AB)
///   omega2 = -(1-a)/AB - [ (t_{n+1}^{a+1}/(a+1) - t_n t_{n+1}^a)
///                         - (t_n^{a+1}/(a+1)    - t_n^{a+1}) ] / (h G(a) AB)
///
/// computed in a grouped difference form that is exact at a = 1, where the
/// pair reduces to the classical two-step values (3h/2, -h/2).
///
/// The as_printed variant reproduces the historical display verbatim,
/// including its dimensionally inconsistent n^{a+1}/(AB G(a) h) bracket term;
/// it is kept for reproduction and diagnosis only.
SchemeWeights weights(std::int64_t n, const Order& alpha, double h,
                      WeightVariant variant);

/// First step u_1 needed before the two-step update can start.
/// rk4_classical: one classical Runge-Kutta 4 step on du/dt = f(t, u).
/// fractional_euler: one-step product-rectangle rule on the Volterra form,
///   u_1 = u_0 + [ (1-a)/AB + h^a/(AB G(a)) ] f(0, u_0).
State bootstrap(const State& u0, const SystemSpec& system, double h,
                const Order& alpha, BootstrapMethod method);

struct RunMeta {
  std::string system;
  double alpha = 0.0;
  double h = 0.0;
  std::string scheme;
  std::string variant;
  std::string bootstrap;
  int refine = 0;  // reference scheme only
  std::map<std::string, double> params;
  std::string system_description;

  bool truncated = false;
  std::int64_t truncation_step = -1;
  std::string truncation_reason;

  /// max over steps of ||f(t_n, u_n) - f(t_{n-1}, u_{n-1})||_inf
  double max_stability_diag = 0.0;
};

/// Time-indexed states with the run manifest. times are strictly increasing
/// with uniform spacing; every stored state is finite. A diverging run is
/// truncated at the first non-finite value and the truncation is recorded
/// in meta.
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  RunMeta meta;
};

/// Two-step scheme, O(N) total cost. grid.n_steps >= 2.
Trajectory integrate_two_step(const SystemSpec& system, const State& ic,
                              const Grid& grid, const Order& alpha,
                              WeightVariant variant = WeightVariant::corrected,
                              BootstrapMethod boot = BootstrapMethod::rk4_classical);

/// Full-memory product-integration scheme, O(N^2) total cost: each step
/// re-evaluates the complete history sum with piecewise-linear interpolation
/// of f on every past interval (two-point extrapolation on the leading
/// interval). grid.n_steps >= 2.
Trajectory integrate_full_history(const SystemSpec& system, const State& ic,
                                  const Grid& grid, const Order& alpha,
                                  BootstrapMethod boot = BootstrapMethod::rk4_classical);

/// First-order product-rectangle discretization of the Volterra form on a
/// mesh refined by `refine`, downsampled to the grid points. Serves as the
/// independent low-order oracle for the other schemes. At alpha = 1 with
/// refine = 1 it reduces to explicit Euler.
Trajectory integrate_reference(const SystemSpec& system, const State& ic,
                               const Grid& grid, const Order& alpha, int refine);

/// Moments of the power-law kernel over one subinterval [a, b] of [0, T]:
///   first  = integral_a^b (T - tau)^(alpha-1) dtau
///   second = integral_a^b (T - tau)^(alpha-1) tau dtau
/// Closed forms used by the full-history scheme; exposed for oracle tests.
std::pair<double, double> kernel_moments(double T, double a, double b,
                                         double alpha);

}  // namespace fab
