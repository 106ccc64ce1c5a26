#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fab/core_math.hpp"
#include "fab/integrators.hpp"

namespace fab {

/// Step- and order-dependent factor of the local truncation-error bound,
/// evaluated exactly as displayed:
///
///   |Phi(n,a)| = | a { 2a n^(2+a) + (n+1)^(a+2) (2 - a n)
///                     + (2+a)(n-1) [ -2a n^(a+1) + (a n - 1)(n+1)^a ] } |
///
/// Note: at a = 1 this expression is n-dependent (10, 1, 70, 275, ... for
/// n = 1, 2, 3, 4) even though the accompanying claim states the constant
/// 5/12; both behaviors are surfaced by the tests, neither is reconciled
/// here.
double phi_factor(std::int64_t n, const Order& alpha);

/// Local truncation-error bound M h^(a+2) Phi(n,a) / (2 Gamma(a+3)),
/// with M a bound on the second time-derivative of f along the solution.
double remainder_bound(double second_deriv_bound_M, double h, std::int64_t n,
                       const Order& alpha);

/// Classical two-step bound 5 M h^3 / 12.
double classical_ab2_bound(double second_deriv_bound_M, double h);

/// Uniqueness-interval report for the Picard mapping of the Volterra form.
/// Thresholds:
///   c_contraction = [ (AB/L + a - 1) Gamma(a) ]^(1/a)
///   c_welldefined = [ (AB b/M + a - 1) Gamma(a) ]^(1/a)
/// A non-positive radicand yields guarantee = false with the corresponding
/// threshold set to NaN (structured "no-guarantee" outcome, not an error).
struct ContractionReport {
  double lipschitz_L = 0.0;
  double sup_M = 0.0;
  double radius_b = 0.0;
  double alpha = 0.0;
  double c_contraction = 0.0;
  double c_welldefined = 0.0;
  double c_max = 0.0;
  bool guarantee = false;
  std::optional<double> satisfied_at;  // user-supplied interval length
  std::optional<bool> satisfied;       // guarantee && satisfied_at < c_max
};

ContractionReport contraction_check(double L, double M, double b,
                                    const Order& alpha,
                                    std::optional<double> interval_c = {});

/// Contraction constant of the Picard mapping for an RHS with Lipschitz
/// constant k_lip on [0, c]:
///
///   k = k_lip [ (1-a)/AB + a c^a / (AB Gamma(a+1)) ]
///
/// The mapping is a contraction when k < 1.
double picard_contraction_constant(double lipschitz_k, double interval_c,
                                   const Order& alpha);

struct ConvergenceRow {
  double h = 0.0;
  double max_abs_error = 0.0;
  std::optional<double> observed_order;  // vs the previous (coarser) row
  bool valid = true;                     // false when the run truncated
};

/// Error table for the scalar t^beta benchmark: integrates to t_final for
/// each h (strictly decreasing list) and records the max-norm error against
/// the closed-form solution. observed_order = log(err ratio)/log(h ratio)
/// between consecutive rows.
std::vector<ConvergenceRow> convergence_table(
    const Order& alpha, double beta, const std::vector<double>& h_list,
    double t_final, Scheme scheme,
    WeightVariant variant = WeightVariant::corrected,
    BootstrapMethod boot = BootstrapMethod::rk4_classical);

}  // namespace fab
