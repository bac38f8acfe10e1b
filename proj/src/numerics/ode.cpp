#include <algorithm>
#include <cmath>
#include <sstream>

#include "mnpq/numerics.hpp"

namespace mnpq {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Difference between the 5th-order and embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// PI controller gains (Hairer & Wanner, DOPRI5 defaults).
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - kBeta * 0.75;
constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

double error_norm(std::span<const cplx> err, std::span<const cplx> y0, std::span<const cplx> y1,
                  double rtol, double atol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = std::abs(err[i]) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

OdeSolution integrate_adaptive(const OdeRhs& rhs, std::span<const cplx> y0_in, double t0,
                               std::span<const double> t_samples, const OdeOptions& opts) {
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0)) {
    throw DomainError("integrate_adaptive: tolerances must be positive");
  }
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    const double prev = i == 0 ? t0 : t_samples[i - 1];
    if (t_samples[i] < prev || (i > 0 && t_samples[i] == prev)) {
      throw DomainError("integrate_adaptive: sample times must be increasing and >= t0");
    }
  }

  const std::size_t n = y0_in.size();
  OdeSolution sol;
  sol.times.reserve(t_samples.size());
  sol.states.reserve(t_samples.size());
  if (t_samples.empty()) return sol;

  std::vector<cplx> y(y0_in.begin(), y0_in.end());
  std::vector<cplx> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

  const double span = t_samples.back() - t0;
  const double min_step = opts.min_step_fraction * span;
  double t = t0;
  rhs(t, y, k1);
  ++sol.rhs_evaluations;

  double h = opts.initial_step;
  if (!(h > 0.0)) {
    // Hairer's heuristic on the first derivative only.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
      d0 += std::norm(y[i]) / (sc * sc);
      d1 += std::norm(k1[i]) / (sc * sc);
    }
    d0 = std::sqrt(d0 / static_cast<double>(std::max<std::size_t>(n, 1)));
    d1 = std::sqrt(d1 / static_cast<double>(std::max<std::size_t>(n, 1)));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    h = std::min(h, span);
  }

  double err_prev = 1e-4;
  std::size_t next = 0;
  // Samples that coincide with t0 are reported without stepping.
  while (next < t_samples.size() && t_samples[next] == t0) {
    sol.times.push_back(t0);
    sol.states.push_back(y);
    ++next;
  }

  while (next < t_samples.size()) {
    if (sol.accepted_steps + sol.rejected_steps >= opts.max_steps) {
      std::ostringstream os;
      os << "integrate_adaptive: step budget of " << opts.max_steps << " exhausted at t = " << t;
      throw NumericalError(os.str());
    }
    const double target = t_samples[next];
    bool hits_sample = false;
    double step = h;
    if (t + step >= target) {
      step = target - t;
      hits_sample = true;
    }

    auto stage = [&](std::vector<cplx>& out, std::initializer_list<std::pair<double, const std::vector<cplx>*>> terms,
                     double c) {
      for (std::size_t i = 0; i < n; ++i) {
        cplx acc = y[i];
        for (const auto& [coef, k] : terms) acc += step * coef * (*k)[i];
        ytmp[i] = acc;
      }
      rhs(t + c * step, ytmp, out);
    };
    stage(k2, {{a21, &k1}}, c2);
    stage(k3, {{a31, &k1}, {a32, &k2}}, c3);
    stage(k4, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, c4);
    stage(k5, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, c5);
    stage(k6, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      ynew[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    const double t_new = hits_sample ? target : t + step;
    rhs(t_new, ynew, k7);
    sol.rhs_evaluations += 6;
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    const double en = error_norm(err, y, ynew, opts.rel_tol, opts.abs_tol);
    if (!std::isfinite(en)) {
      std::ostringstream os;
      os << "integrate_adaptive: non-finite state at t = " << t << " (step " << step << ")";
      throw NumericalError(os.str());
    }

    if (en <= 1.0) {
      ++sol.accepted_steps;
      const double en_c = std::max(en, 1e-10);
      double fac = kSafety * std::pow(en_c, -kAlpha) * std::pow(err_prev, kBeta);
      fac = std::clamp(fac, kMinFactor, kMaxFactor);
      err_prev = std::max(en, 1e-4);
      t = t_new;
      y.swap(ynew);
      k1.swap(k7);
      // A step shortened to land on a sample says nothing about the natural step size.
      if (!hits_sample) h = step * fac;
      else h = std::max(h, step * fac);
      if (hits_sample) {
        sol.times.push_back(t);
        sol.states.push_back(y);
        ++next;
      }
    } else {
      ++sol.rejected_steps;
      const double fac = std::max(kMinFactor, kSafety * std::pow(en, -kAlpha));
      h = step * fac;
      if (h < min_step) {
        std::ostringstream os;
        os << "integrate_adaptive: step size underflow at t = " << t << " (h = " << h
           << " < " << min_step << " = " << opts.min_step_fraction
           << " x span); the system is too stiff for the explicit integrator";
        throw StiffnessError(os.str());
      }
    }
  }
  return sol;
}

}  // namespace mnpq
