#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace fab {

/// Thrown when a truncated series fails to reach the requested tolerance.
/// Carries the partial sum accumulated so far.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double partial)
      : std::runtime_error(what), partial_(partial) {}
  double partial() const noexcept { return partial_; }

 private:
  double partial_;
};

/// Thrown when a numerical evaluation produces non-finite samples.
class evaluation_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gamma function for positive real arguments.
/// Relative error <= 1e-13 on [0.05, 50]; throws std::domain_error for
/// non-positive or non-finite x.
double gamma_fn(double x);

/// Normalization AB(alpha) = 1 - alpha + alpha/Gamma(alpha), alpha in (0,1].
/// AB(1) == 1 exactly.
double ab_norm(double alpha);

/// Fractional order alpha in (0,1] with its cached normalization AB(alpha).
class Order {
 public:
  explicit Order(double alpha);
  double alpha() const noexcept { return alpha_; }
  double ab() const noexcept { return ab_; }

 private:
  double alpha_;
  double ab_;
};

/// Truncation control for power-series evaluation.
struct SeriesControl {
  double tol = 1e-14;
  int max_terms = 600;
};

/// One-parameter Mittag-Leffler function E_alpha(z) = sum_s z^s / Gamma(alpha s + 1),
/// alpha > 0, by direct power series. The sum stops once |term| < ctrl.tol;
/// if ctrl.max_terms is exhausted first, throws convergence_error carrying the
/// partial sum.
double mittag_leffler(double alpha, double z, const SeriesControl& ctrl = {});

/// Derivative with Mittag-Leffler kernel, evaluated by trapezoidal quadrature:
///
///   AB(alpha)/(1-alpha) * integral_0^t u'(xi) E_alpha(-alpha (t-xi)^alpha / (1-alpha)) dxi
///
/// The derivative u' is taken from `du` when supplied, otherwise by second-order
/// finite differences (central inside, one-sided at the endpoints). For alpha = 1
/// the kernel degenerates and the classical derivative u'(t) is returned.
/// mesh >= 16 panels required. Non-finite samples raise evaluation_error.
double abc_derivative_quadrature(const std::function<double(double)>& u,
                                 const Order& alpha, double t, int mesh,
                                 const std::function<double(double)>& du = {});

}  // namespace fab
