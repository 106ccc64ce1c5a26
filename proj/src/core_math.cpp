#include "fab/core_math.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace fab {

namespace {

// Lanczos approximation, g = 7, 9 coefficients (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoef[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double x) {
  if (x < 0.5) {
    // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double acc = kLanczosCoef[0];
  for (int i = 1; i < 9; ++i) acc += kLanczosCoef[i] / (x + i);
  const double t = x + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

}  // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x) || x <= 0.0)
    throw std::domain_error("gamma_fn: argument must be positive and finite");
  return lanczos_gamma(x);
}

double ab_norm(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 1.0)
    throw std::domain_error("ab_norm: alpha must lie in (0, 1]");
  if (alpha == 1.0) return 1.0;
  return 1.0 - alpha + alpha / gamma_fn(alpha);
}

Order::Order(double alpha) : alpha_(alpha), ab_(ab_norm(alpha)) {}

double mittag_leffler(double alpha, double z, const SeriesControl& ctrl) {
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw std::domain_error("mittag_leffler: alpha must be positive");
  if (!std::isfinite(z)) throw std::domain_error("mittag_leffler: z must be finite");
  if (!(ctrl.tol > 0.0) || ctrl.max_terms < 1)
    throw std::domain_error("mittag_leffler: invalid series control");

  double sum = 1.0;  // s = 0 term
  if (z == 0.0) return sum;
  const double log_abs_z = std::log(std::abs(z));
  for (int s = 1; s <= ctrl.max_terms; ++s) {
    double term = std::exp(s * log_abs_z - std::lgamma(alpha * s + 1.0));
    if (z < 0.0 && (s & 1)) term = -term;
    sum += term;
    if (std::abs(term) < ctrl.tol) return sum;
  }
  throw convergence_error("mittag_leffler: series did not reach tolerance within max_terms",
                          sum);
}

namespace {

// Second-order derivative samples on [0, t]; one-sided at the endpoints so u
// is never evaluated outside its domain.
double numeric_derivative(const std::function<double(double)>& u, double xi,
                          double t, double step) {
  if (xi < step) return (-3.0 * u(xi) + 4.0 * u(xi + step) - u(xi + 2.0 * step)) / (2.0 * step);
  if (xi > t - step) return (3.0 * u(xi) - 4.0 * u(xi - step) + u(xi - 2.0 * step)) / (2.0 * step);
  return (u(xi + step) - u(xi - step)) / (2.0 * step);
}

}  // namespace

double abc_derivative_quadrature(const std::function<double(double)>& u,
                                 const Order& alpha, double t, int mesh,
                                 const std::function<double(double)>& du) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::domain_error("abc_derivative_quadrature: t must be positive and finite");
  if (mesh < 16) throw std::domain_error("abc_derivative_quadrature: mesh must be >= 16");

  const double a = alpha.alpha();
  const double fd_step = t * 1e-7;
  const auto deriv = [&](double xi) {
    return du ? du(xi) : numeric_derivative(u, xi, t, fd_step);
  };

  if (a == 1.0) {
    // kernel degenerates; classical derivative
    const double d = deriv(t);
    if (!std::isfinite(d)) throw evaluation_error("abc_derivative_quadrature: non-finite derivative");
    return d;
  }

  const double dx = t / mesh;
  const SeriesControl kernel_ctrl{1e-14, 600};
  double acc = 0.0;
  for (int i = 0; i <= mesh; ++i) {
    const double xi = i * dx;
    const double up = deriv(xi);
    const double arg = -a * std::pow(t - xi, a) / (1.0 - a);
    const double kernel = mittag_leffler(a, arg, kernel_ctrl);
    const double sample = up * kernel;
    if (!std::isfinite(sample))
      throw evaluation_error("abc_derivative_quadrature: non-finite sample");
    acc += (i == 0 || i == mesh) ? 0.5 * sample : sample;
  }
  return alpha.ab() / (1.0 - a) * acc * dx;
}

}  // namespace fab
