#ifndef FZERO_SCALING_HPP
#define FZERO_SCALING_HPP

// Power-law fits x_L = h_c + a L^(-1/nu) of finite-size critical points.
//
// For fixed nu the model is linear in (h_c, a), so the fit scans nu on a
// grid, solves the linear problem at each node, and polishes the best node
// with damped Gauss-Newton in all three parameters.

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "fzero/error.hpp"
#include "fzero/lattice.hpp"

namespace fzero {

struct ScalingSample {
  double L;
  cplx hL;
};

enum class Component { Re, Im };

inline const char* component_name(Component c) { return c == Component::Re ? "Re" : "Im"; }

struct FitResult {
  double h_c = 0.0;
  double a = 0.0;
  double nu = 1.0;
  double rms_residual = 0.0;
  Component component = Component::Re;
};

struct FitOptions {
  double nu_lo = 0.3;
  double nu_hi = 3.0;
  double nu_step = 0.01;
  int polish_iterations = 100;
};

inline double evaluate_model(const FitResult& fit, double L) {
  if (!(L > 0.0)) throw ConfigError("model size must be positive");
  return fit.h_c + fit.a * std::pow(L, -1.0 / fit.nu);
}

namespace detail {

inline std::vector<double> component_values(const std::vector<ScalingSample>& samples, Component c) {
  std::vector<double> x;
  double prev = -INFINITY;
  for (const auto& s : samples) {
    if (!std::isfinite(s.L) || !std::isfinite(s.hL.real()) || !std::isfinite(s.hL.imag()))
      throw FitError("non-finite scaling sample");
    if (!(s.L > prev)) throw FitError("scaling sizes must be strictly increasing");
    if (!(s.L > 0.0)) throw FitError("scaling sizes must be positive");
    prev = s.L;
    x.push_back(c == Component::Re ? s.hL.real() : s.hL.imag());
  }
  return x;
}

struct LinearFit {
  double h_c, a, sse;
};

/// Least squares for (h_c, a) at fixed nu.
inline LinearFit linear_fit(const std::vector<double>& Ls, const std::vector<double>& x, double nu) {
  const std::size_t n = Ls.size();
  double su = 0, suu = 0, sx = 0, sux = 0;
  double umin = INFINITY, umax = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::pow(Ls[i], -1.0 / nu);
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    su += u;
    suu += u * u;
    sx += x[i];
    sux += u * x[i];
  }
  const double det = n * suu - su * su;
  if (!(umax - umin > 1e-14 * std::max(1.0, umax)) || !(std::abs(det) > 0.0))
    throw FitError("rank-deficient linear subproblem at nu=" + std::to_string(nu));
  const double a = (n * sux - su * sx) / det;
  const double h_c = (sx - a * su) / n;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = x[i] - h_c - a * std::pow(Ls[i], -1.0 / nu);
    sse += r * r;
  }
  return {h_c, a, sse};
}

inline double sse(const std::vector<double>& Ls, const std::vector<double>& x, double h_c, double a, double nu) {
  double s = 0;
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    const double r = x[i] - h_c - a * std::pow(Ls[i], -1.0 / nu);
    s += r * r;
  }
  return s;
}

/// Damped Gauss-Newton on p = (h_c_1, a_1, ..., h_c_m, a_m, nu) for m
/// series sharing one exponent.
inline Eigen::VectorXd polish(const std::vector<double>& Ls, const std::vector<std::vector<double>>& xs,
                              Eigen::VectorXd p, int iterations) {
  const auto m = static_cast<Eigen::Index>(xs.size());
  const auto n = static_cast<Eigen::Index>(Ls.size());
  auto total = [&](const Eigen::VectorXd& q) {
    double s = 0;
    for (Eigen::Index c = 0; c < m; ++c) s += sse(Ls, xs[static_cast<std::size_t>(c)], q(2 * c), q(2 * c + 1), q(2 * m));
    return s;
  };
  double lambda = 1e-6;
  double cur = total(p);
  for (int it = 0; it < iterations; ++it) {
    Eigen::MatrixXd Jm = Eigen::MatrixXd::Zero(m * n, 2 * m + 1);
    Eigen::VectorXd r(m * n);
    const double nu = p(2 * m);
    for (Eigen::Index c = 0; c < m; ++c)
      for (Eigen::Index i = 0; i < n; ++i) {
        const double L = Ls[static_cast<std::size_t>(i)];
        const double u = std::pow(L, -1.0 / nu);
        const Eigen::Index row = c * n + i;
        r(row) = xs[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] - p(2 * c) - p(2 * c + 1) * u;
        Jm(row, 2 * c) = 1.0;
        Jm(row, 2 * c + 1) = u;
        Jm(row, 2 * m) = p(2 * c + 1) * u * std::log(L) / (nu * nu);
      }
    const Eigen::MatrixXd A = Jm.transpose() * Jm;
    const Eigen::VectorXd g = Jm.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      Eigen::MatrixXd D = A;
      D.diagonal() += lambda * A.diagonal().cwiseMax(1e-300);
      const Eigen::VectorXd step = D.ldlt().solve(g);
      if (!step.allFinite()) break;
      Eigen::VectorXd q = p + step;
      if (!(q(2 * m) > 0.0)) {
        lambda *= 10;
        continue;
      }
      const double next = total(q);
      if (next <= cur) {
        improved = cur - next > 1e-30;
        p = q;
        cur = next;
        lambda = std::max(lambda / 10, 1e-12);
        if (!improved) return p;
      } else {
        lambda *= 10;
      }
    }
    if (!improved) break;
  }
  return p;
}

}  // namespace detail

/// Independent three-parameter fit of one component of h_L.
inline FitResult fit_power_law(const std::vector<ScalingSample>& samples, Component component,
                               const FitOptions& opt = {}) {
  if (samples.size() < 3) throw FitError("a three-parameter fit needs at least 3 samples");
  const auto x = detail::component_values(samples, component);
  std::vector<double> Ls;
  for (const auto& s : samples) Ls.push_back(s.L);

  detail::LinearFit best{0, 0, INFINITY};
  double best_nu = opt.nu_lo;
  const int nodes = static_cast<int>(std::floor((opt.nu_hi - opt.nu_lo) / opt.nu_step + 0.5));
  for (int i = 0; i <= nodes; ++i) {
    const double nu = opt.nu_lo + opt.nu_step * i;
    const auto f = detail::linear_fit(Ls, x, nu);
    if (f.sse < best.sse) {
      best = f;
      best_nu = nu;
    }
  }
  Eigen::VectorXd p(3);
  p << best.h_c, best.a, best_nu;
  p = detail::polish(Ls, {x}, p, opt.polish_iterations);
  FitResult out;
  out.h_c = p(0);
  out.a = p(1);
  out.nu = p(2);
  out.component = component;
  out.rms_residual = std::sqrt(detail::sse(Ls, x, out.h_c, out.a, out.nu) / static_cast<double>(Ls.size()));
  if (!std::isfinite(out.h_c) || !std::isfinite(out.a) || !(out.nu > 0.0) || !std::isfinite(out.rms_residual))
    throw FitError("fit did not produce finite parameters");
  return out;
}

struct JointFit {
  FitResult re;
  FitResult im;
};

/// Re and Im components fitted together with one shared exponent.
inline JointFit fit_power_law_joint(const std::vector<ScalingSample>& samples, const FitOptions& opt = {}) {
  if (samples.size() < 3) throw FitError("a joint fit needs at least 3 samples");
  const auto xr = detail::component_values(samples, Component::Re);
  const auto xi = detail::component_values(samples, Component::Im);
  std::vector<double> Ls;
  for (const auto& s : samples) Ls.push_back(s.L);

  double best_sse = INFINITY, best_nu = opt.nu_lo;
  detail::LinearFit br{}, bi{};
  const int nodes = static_cast<int>(std::floor((opt.nu_hi - opt.nu_lo) / opt.nu_step + 0.5));
  for (int i = 0; i <= nodes; ++i) {
    const double nu = opt.nu_lo + opt.nu_step * i;
    const auto fr = detail::linear_fit(Ls, xr, nu);
    const auto fi = detail::linear_fit(Ls, xi, nu);
    if (fr.sse + fi.sse < best_sse) {
      best_sse = fr.sse + fi.sse;
      best_nu = nu;
      br = fr;
      bi = fi;
    }
  }
  Eigen::VectorXd p(5);
  p << br.h_c, br.a, bi.h_c, bi.a, best_nu;
  p = detail::polish(Ls, {xr, xi}, p, opt.polish_iterations);
  JointFit out;
  const double n = static_cast<double>(Ls.size());
  out.re = {p(0), p(1), p(4), std::sqrt(detail::sse(Ls, xr, p(0), p(1), p(4)) / n), Component::Re};
  out.im = {p(2), p(3), p(4), std::sqrt(detail::sse(Ls, xi, p(2), p(3), p(4)) / n), Component::Im};
  if (!p.allFinite() || !(p(4) > 0.0)) throw FitError("joint fit did not produce finite parameters");
  return out;
}

}  // namespace fzero

#endif  // FZERO_SCALING_HPP
