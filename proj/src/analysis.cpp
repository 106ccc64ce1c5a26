#include "fab/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace fab {

double phi_factor(std::int64_t n, const Order& alpha) {
  if (n < 1) throw std::domain_error("phi_factor: n must be >= 1");
  const double a = alpha.alpha();
  const double nd = static_cast<double>(n);
  const double np1 = nd + 1.0;
  const double inner = 2.0 * a * std::pow(nd, 2.0 + a) +
                       std::pow(np1, a + 2.0) * (2.0 - a * nd) +
                       (2.0 + a) * (nd - 1.0) *
                           (-2.0 * a * std::pow(nd, a + 1.0) +
                            (a * nd - 1.0) * std::pow(np1, a));
  return std::abs(a * inner);
}

double remainder_bound(double second_deriv_bound_M, double h, std::int64_t n,
                       const Order& alpha) {
  if (!(second_deriv_bound_M >= 0.0) || !(h > 0.0))
    throw std::domain_error("remainder_bound: M must be >= 0 and h > 0");
  const double a = alpha.alpha();
  return second_deriv_bound_M * std::pow(h, a + 2.0) * phi_factor(n, alpha) /
         (2.0 * gamma_fn(a + 3.0));
}

double classical_ab2_bound(double second_deriv_bound_M, double h) {
  if (!(second_deriv_bound_M >= 0.0) || !(h > 0.0))
    throw std::domain_error("classical_ab2_bound: M must be >= 0 and h > 0");
  return 5.0 * second_deriv_bound_M * h * h * h / 12.0;
}

ContractionReport contraction_check(double L, double M, double b,
                                    const Order& alpha,
                                    std::optional<double> interval_c) {
  if (!(L > 0.0) || !(M > 0.0) || !(b > 0.0))
    throw std::domain_error("contraction_check: L, M, b must be positive");
  const double a = alpha.alpha();
  const double ab = alpha.ab();
  const double g = gamma_fn(a);

  ContractionReport rep;
  rep.lipschitz_L = L;
  rep.sup_M = M;
  rep.radius_b = b;
  rep.alpha = a;

  const double rad_contraction = ab / L + a - 1.0;
  const double rad_welldefined = ab * b / M + a - 1.0;
  rep.c_contraction = rad_contraction > 0.0
                          ? std::pow(rad_contraction * g, 1.0 / a)
                          : std::numeric_limits<double>::quiet_NaN();
  rep.c_welldefined = rad_welldefined > 0.0
                          ? std::pow(rad_welldefined * g, 1.0 / a)
                          : std::numeric_limits<double>::quiet_NaN();
  rep.guarantee = rad_contraction > 0.0 && rad_welldefined > 0.0;
  rep.c_max = rep.guarantee ? std::min(rep.c_contraction, rep.c_welldefined)
                            : std::numeric_limits<double>::quiet_NaN();
  if (interval_c) {
    rep.satisfied_at = *interval_c;
    rep.satisfied = rep.guarantee && *interval_c < rep.c_max;
  }
  return rep;
}

double picard_contraction_constant(double lipschitz_k, double interval_c,
                                   const Order& alpha) {
  if (!(lipschitz_k >= 0.0) || !(interval_c >= 0.0))
    throw std::domain_error("picard_contraction_constant: inputs must be >= 0");
  const double a = alpha.alpha();
  const double ab = alpha.ab();
  return lipschitz_k * ((1.0 - a) / ab +
                        a * std::pow(interval_c, a) / (ab * gamma_fn(a + 1.0)));
}

std::vector<ConvergenceRow> convergence_table(const Order& alpha, double beta,
                                              const std::vector<double>& h_list,
                                              double t_final, Scheme scheme,
                                              WeightVariant variant,
                                              BootstrapMethod boot) {
  if (h_list.empty()) throw std::invalid_argument("convergence_table: empty h list");
  for (std::size_t i = 1; i < h_list.size(); ++i)
    if (!(h_list[i] < h_list[i - 1]))
      throw std::invalid_argument("convergence_table: h list must be strictly decreasing");
  if (!(t_final > 0.0)) throw std::invalid_argument("convergence_table: t_final must be positive");

  const SystemSpec system = builtin_system("tbeta", {{"beta", beta}});
  std::vector<ConvergenceRow> table;
  table.reserve(h_list.size());

  for (const double h : h_list) {
    const double ratio = t_final / h;
    const auto n = static_cast<std::int64_t>(std::llround(ratio));
    if (n < 2 || std::abs(ratio - static_cast<double>(n)) > 8.0 * std::numeric_limits<double>::epsilon() * ratio)
      throw std::invalid_argument("convergence_table: t_final/h must be an integer >= 2");
    const Grid grid{h, n};

    Trajectory traj;
    switch (scheme) {
      case Scheme::two_step:
        traj = integrate_two_step(system, system.default_ic, grid, alpha, variant, boot);
        break;
      case Scheme::full_history:
        traj = integrate_full_history(system, system.default_ic, grid, alpha, boot);
        break;
      case Scheme::reference:
        traj = integrate_reference(system, system.default_ic, grid, alpha, 1);
        break;
    }

    ConvergenceRow row;
    row.h = h;
    if (traj.meta.truncated) {
      row.valid = false;
      row.max_abs_error = std::numeric_limits<double>::quiet_NaN();
    } else {
      double err = 0.0;
      for (std::size_t i = 0; i < traj.times.size(); ++i)
        err = std::max(err, std::abs(traj.states[i][0] -
                                     exact_tbeta(traj.times[i], alpha, beta)));
      row.max_abs_error = err;
    }
    if (!table.empty() && table.back().valid && row.valid &&
        table.back().max_abs_error > 0.0 && row.max_abs_error > 0.0) {
      row.observed_order = std::log(table.back().max_abs_error / row.max_abs_error) /
                           std::log(table.back().h / row.h);
    }
    table.push_back(row);
  }
  return table;
}

}  // namespace fab
