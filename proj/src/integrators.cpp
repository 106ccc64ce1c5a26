#include "fab/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fab {

std::string to_string(WeightVariant v) {
  return v == WeightVariant::corrected ? "corrected" : "as_printed";
}
std::string to_string(BootstrapMethod m) {
  return m == BootstrapMethod::rk4_classical ? "rk4_classical" : "fractional_euler";
}
std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::two_step: return "two_step";
    case Scheme::full_history: return "full_history";
    default: return "reference";
  }
}
WeightVariant weight_variant_from_string(const std::string& s) {
  if (s == "corrected") return WeightVariant::corrected;
  if (s == "as_printed") return WeightVariant::as_printed;
  throw std::invalid_argument("unknown weight variant '" + s + "'");
}
BootstrapMethod bootstrap_from_string(const std::string& s) {
  if (s == "rk4_classical") return BootstrapMethod::rk4_classical;
  if (s == "fractional_euler") return BootstrapMethod::fractional_euler;
  throw std::invalid_argument("unknown bootstrap method '" + s + "'");
}
Scheme scheme_from_string(const std::string& s) {
  if (s == "two_step") return Scheme::two_step;
  if (s == "full_history") return Scheme::full_history;
  if (s == "reference") return Scheme::reference;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

SchemeWeights weights(std::int64_t n, const Order& alpha, double h,
                      WeightVariant variant) {
  if (n < 1) throw std::domain_error("weights: two-step scheme requires n >= 1");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::domain_error("weights: h must be positive");

  const double a = alpha.alpha();
  const double ab = alpha.ab();
  const double nd = static_cast<double>(n);

  if (variant == WeightVariant::corrected) {
    if (a == 1.0) return {1.5 * h, -0.5 * h, n, variant};
    const double g = gamma_fn(a);
    // dimensionless brackets in units of h^(a+1); the grouped differences
    // keep the large t^(a+1) terms from cancelling catastrophically
    const double dpow = (std::pow(nd + 1.0, a + 1.0) - std::pow(nd, a + 1.0)) / (a + 1.0);
    const double dker = std::pow(nd + 1.0, a) - std::pow(nd, a);
    const double c1 = dpow - (nd - 1.0) * dker;
    const double c2 = dpow - nd * dker;
    const double scale = std::pow(h, a) / (g * ab);
    return {(1.0 - a) / ab + scale * c1, -(1.0 - a) / ab - scale * c2, n, variant};
  }

  // as_printed: verbatim transcription of the historical display, including
  // the n^(a+1)/(AB G(a) h) term inside the second bracket
  const double g = gamma_fn(a);
  const double k = a * std::pow(h, a) / (ab * g);
  const double np1 = nd + 1.0;
  const double w1 = (1.0 - a) / ab -
                    k * (2.0 * std::pow(np1, a) / a - std::pow(np1, a + 1.0) / (a + 1.0)) -
                    k * (std::pow(nd, a) / a - std::pow(nd, a + 1.0) / (a + 1.0));
  const double w2 = (a - 1.0) / ab -
                    k * (std::pow(np1, a) / a - std::pow(np1, a + 1.0) / (a + 1.0) +
                         std::pow(nd, a + 1.0) / (ab * g * h));
  return {w1, w2, n, variant};
}

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void eval_rhs(const SystemSpec& system, double t, const State& u, State& out) {
  system.rhs(t, std::span<const double>(u), std::span<double>(out));
}

double inf_norm_diff(const State& a, const State& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

RunMeta base_meta(const SystemSpec& system, const Grid& grid, const Order& alpha,
                  Scheme scheme) {
  RunMeta meta;
  meta.system = system.name;
  meta.alpha = alpha.alpha();
  meta.h = grid.h;
  meta.scheme = to_string(scheme);
  meta.params = system.params;
  meta.system_description = system.description;
  return meta;
}

void validate_run(const SystemSpec& system, const State& ic, const Grid& grid,
                  std::int64_t min_steps) {
  if (!(grid.h > 0.0) || !std::isfinite(grid.h))
    throw std::domain_error("grid step size must be positive and finite");
  if (grid.n_steps < min_steps)
    throw std::domain_error("grid has too few steps for this scheme");
  if (static_cast<int>(ic.size()) != system.dimension)
    throw std::invalid_argument("initial state dimension does not match the system");
  if (!all_finite(ic)) throw std::invalid_argument("initial state must be finite");
}

}  // namespace

State bootstrap(const State& u0, const SystemSpec& system, double h,
                const Order& alpha, BootstrapMethod method) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::domain_error("bootstrap: h must be positive");
  const std::size_t d = u0.size();
  State out(d), k1(d), k2(d), k3(d), k4(d), tmp(d);

  if (method == BootstrapMethod::rk4_classical) {
    eval_rhs(system, 0.0, u0, k1);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = u0[i] + 0.5 * h * k1[i];
    eval_rhs(system, 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = u0[i] + 0.5 * h * k2[i];
    eval_rhs(system, 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = u0[i] + h * k3[i];
    eval_rhs(system, h, tmp, k4);
    for (std::size_t i = 0; i < d; ++i)
      out[i] = u0[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  } else {
    // one-step product rectangle on the Volterra form
    const double a = alpha.alpha();
    const double w = (1.0 - a) / alpha.ab() +
                     std::pow(h, a) / (alpha.ab() * gamma_fn(a));
    eval_rhs(system, 0.0, u0, k1);
    for (std::size_t i = 0; i < d; ++i) out[i] = u0[i] + w * k1[i];
  }
  if (!all_finite(out)) throw evaluation_error("bootstrap: non-finite intermediate values");
  return out;
}

Trajectory integrate_two_step(const SystemSpec& system, const State& ic,
                              const Grid& grid, const Order& alpha,
                              WeightVariant variant, BootstrapMethod boot) {
  validate_run(system, ic, grid, 2);
  const std::size_t d = ic.size();
  const std::int64_t N = grid.n_steps;

  Trajectory traj;
  traj.meta = base_meta(system, grid, alpha, Scheme::two_step);
  traj.meta.variant = to_string(variant);
  traj.meta.bootstrap = to_string(boot);
  traj.times.reserve(N + 1);
  traj.states.reserve(N + 1);

  auto truncate = [&](std::int64_t step, const char* reason) {
    traj.meta.truncated = true;
    traj.meta.truncation_step = step;
    traj.meta.truncation_reason = reason;
  };
  auto push = [&](std::int64_t i, const State& u) {
    traj.times.push_back(grid.t(i));
    traj.states.push_back(u);
  };

  State u_prev = ic;
  State u_cur = bootstrap(ic, system, grid.h, alpha, boot);
  push(0, u_prev);
  push(1, u_cur);

  State f_prev(d), f_cur(d), u_next(d);
  eval_rhs(system, 0.0, u_prev, f_prev);
  eval_rhs(system, grid.t(1), u_cur, f_cur);
  if (!all_finite(f_prev) || !all_finite(f_cur)) {
    truncate(1, "non-finite rhs");
    return traj;
  }

  for (std::int64_t n = 1; n < N; ++n) {
    const auto [w1, w2, idx, var] = weights(n, alpha, grid.h, variant);
    for (std::size_t i = 0; i < d; ++i)
      u_next[i] = u_cur[i] + w1 * f_cur[i] + w2 * f_prev[i];
    if (!all_finite(u_next)) {
      truncate(n + 1, "non-finite state");
      return traj;
    }
    push(n + 1, u_next);
    u_prev = u_cur;
    u_cur = u_next;
    f_prev.swap(f_cur);
    eval_rhs(system, grid.t(n + 1), u_cur, f_cur);
    if (!all_finite(f_cur)) {
      truncate(n + 1, "non-finite rhs");
      return traj;
    }
    traj.meta.max_stability_diag =
        std::max(traj.meta.max_stability_diag, inf_norm_diff(f_cur, f_prev));
  }
  return traj;
}

std::pair<double, double> kernel_moments(double T, double a, double b, double alpha) {
  // antiderivatives of (T - tau)^(alpha-1) {1, tau}; requires 0 <= a < b <= T
  const double ra = T - a;
  const double rb = T - b;
  const double m0 = (std::pow(ra, alpha) - std::pow(rb, alpha)) / alpha;
  const double m1 = T * m0 - (std::pow(ra, alpha + 1.0) - std::pow(rb, alpha + 1.0)) / (alpha + 1.0);
  return {m0, m1};
}

Trajectory integrate_full_history(const SystemSpec& system, const State& ic,
                                  const Grid& grid, const Order& alpha,
                                  BootstrapMethod boot) {
  validate_run(system, ic, grid, 2);
  const std::size_t d = ic.size();
  const std::int64_t N = grid.n_steps;
  const double h = grid.h;
  const double a = alpha.alpha();
  const double ab = alpha.ab();
  const double g = gamma_fn(a);

  Trajectory traj;
  traj.meta = base_meta(system, grid, alpha, Scheme::full_history);
  traj.meta.variant = to_string(WeightVariant::corrected);
  traj.meta.bootstrap = to_string(boot);

  auto truncate = [&](std::int64_t step, const char* reason) {
    traj.meta.truncated = true;
    traj.meta.truncation_step = step;
    traj.meta.truncation_reason = reason;
  };
  auto push = [&](std::int64_t i, const State& u) {
    traj.times.push_back(grid.t(i));
    traj.states.push_back(u);
  };

  // lag powers (m h)^a and (m h)^(a+1), m = 0..N+1
  std::vector<double> pa(N + 2), pa1(N + 2);
  for (std::int64_t m = 0; m <= N + 1; ++m) {
    const double tm = h * static_cast<double>(m);
    pa[m] = std::pow(tm, a);
    pa1[m] = std::pow(tm, a + 1.0);
  }
  // moments of interval [t_j, t_{j+1}] against kernel centered at t_m, via lag m - j
  auto moments = [&](std::int64_t lag, double tm) {
    const double m0 = (pa[lag] - pa[lag - 1]) / a;
    const double m1 = tm * m0 - (pa1[lag] - pa1[lag - 1]) / (a + 1.0);
    return std::pair{m0, m1};
  };

  std::vector<State> fs;
  fs.reserve(N + 1);
  State u_prev = ic;
  State u_cur = bootstrap(ic, system, h, alpha, boot);
  push(0, u_prev);
  push(1, u_cur);
  fs.emplace_back(d);
  eval_rhs(system, 0.0, u_prev, fs[0]);
  fs.emplace_back(d);
  eval_rhs(system, h, u_cur, fs[1]);
  if (!all_finite(fs[0]) || !all_finite(fs[1])) {
    truncate(1, "non-finite rhs");
    return traj;
  }

  State mem(d), u_next(d);
  for (std::int64_t n = 1; n < N; ++n) {
    const double tn = grid.t(n);
    const double tnp = grid.t(n + 1);
    std::fill(mem.begin(), mem.end(), 0.0);

    // history against (t_{n+1} - tau)^(a-1); leading interval [t_n, t_{n+1}]
    // uses the extrapolant through (t_{n-1}, f_{n-1}), (t_n, f_n)
    for (std::int64_t j = 0; j <= n; ++j) {
      const auto [m0, m1] = moments(n + 1 - j, tnp);
      const double tj = grid.t(j);
      const double tj1 = grid.t(j + 1);
      const State& fl = (j < n) ? fs[j] : fs[n];
      const State& fr = (j < n) ? fs[j + 1] : fs[n - 1];
      const double cl = (j < n) ? (tj1 * m0 - m1) / h : (m1 - grid.t(n - 1) * m0) / h;
      const double cr = (j < n) ? (m1 - tj * m0) / h : (tn * m0 - m1) / h;
      for (std::size_t i = 0; i < d; ++i) mem[i] += cl * fl[i] + cr * fr[i];
    }
    // minus history against (t_n - tau)^(a-1)
    for (std::int64_t j = 0; j < n; ++j) {
      const auto [m0, m1] = moments(n - j, tn);
      const double tj = grid.t(j);
      const double tj1 = grid.t(j + 1);
      const double cl = (tj1 * m0 - m1) / h;
      const double cr = (m1 - tj * m0) / h;
      for (std::size_t i = 0; i < d; ++i) mem[i] -= cl * fs[j][i] + cr * fs[j + 1][i];
    }

    const State& fn = fs[n];
    const State& fnm = fs[n - 1];
    for (std::size_t i = 0; i < d; ++i)
      u_next[i] = u_cur[i] + (1.0 - a) / ab * (fn[i] - fnm[i]) + a / (ab * g) * mem[i];
    if (!all_finite(u_next)) {
      truncate(n + 1, "non-finite state");
      return traj;
    }
    push(n + 1, u_next);
    u_cur = u_next;
    fs.emplace_back(d);
    eval_rhs(system, tnp, u_cur, fs[n + 1]);
    if (!all_finite(fs[n + 1])) {
      truncate(n + 1, "non-finite rhs");
      return traj;
    }
    traj.meta.max_stability_diag =
        std::max(traj.meta.max_stability_diag, inf_norm_diff(fs[n + 1], fs[n]));
  }
  return traj;
}

Trajectory integrate_reference(const SystemSpec& system, const State& ic,
                               const Grid& grid, const Order& alpha, int refine) {
  validate_run(system, ic, grid, 1);
  if (refine < 1) throw std::domain_error("integrate_reference: refine must be >= 1");
  const std::size_t d = ic.size();
  const std::int64_t K = grid.n_steps * refine;
  const double delta = grid.h / refine;
  const double a = alpha.alpha();
  const double ab = alpha.ab();
  const double g = gamma_fn(a);

  Trajectory traj;
  traj.meta = base_meta(system, grid, alpha, Scheme::reference);
  traj.meta.refine = refine;

  auto push = [&](std::int64_t i, const State& u) {
    traj.times.push_back(grid.t(i));
    traj.states.push_back(u);
  };
  push(0, ic);

  // lag powers (m delta)^a, m = 0..K
  std::vector<double> pa(K + 1);
  for (std::int64_t m = 0; m <= K; ++m) pa[m] = std::pow(delta * static_cast<double>(m), a);

  std::vector<State> fs;
  fs.reserve(K + 1);
  fs.emplace_back(d);
  eval_rhs(system, 0.0, ic, fs[0]);
  if (!all_finite(fs[0])) {
    traj.meta.truncated = true;
    traj.meta.truncation_step = 0;
    traj.meta.truncation_reason = "non-finite rhs";
    return traj;
  }

  State cur(d), mem(d);
  for (std::int64_t k = 0; k < K; ++k) {
    std::fill(mem.begin(), mem.end(), 0.0);
    for (std::int64_t j = 0; j <= k; ++j) {
      const double w = pa[k + 1 - j] - pa[k - j];
      for (std::size_t i = 0; i < d; ++i) mem[i] += w * fs[j][i];
    }
    for (std::size_t i = 0; i < d; ++i)
      cur[i] = ic[i] + (1.0 - a) / ab * fs[k][i] + mem[i] / (ab * g);
    if (!all_finite(cur)) {
      traj.meta.truncated = true;
      traj.meta.truncation_step = (k + refine) / refine;
      traj.meta.truncation_reason = "non-finite state";
      return traj;
    }
    fs.emplace_back(d);
    eval_rhs(system, delta * static_cast<double>(k + 1), cur, fs[k + 1]);
    if ((k + 1) % refine == 0) push((k + 1) / refine, cur);
    if (!all_finite(fs[k + 1])) {
      traj.meta.truncated = true;
      traj.meta.truncation_step = (k + 1 + refine - 1) / refine;
      traj.meta.truncation_reason = "non-finite rhs";
      return traj;
    }
    traj.meta.max_stability_diag =
        std::max(traj.meta.max_stability_diag, inf_norm_diff(fs[k + 1], fs[k]));
  }
  return traj;
}

}  // namespace fab
