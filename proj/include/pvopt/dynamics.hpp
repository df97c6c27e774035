#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pvopt/params.hpp"

namespace pvopt {

struct IntegrationConfig {
  double dt = 0.01;     // step size (years)
  double t_end = 200.0; // horizon (years); rounded to a whole number of steps
  double e0 = 1.0;      // initial energy stock (MWh)
  double d0 = 1.0;      // initial damage stock (kgCO2-eq)
  double s0 = 0.0;      // initial stored energy (MWh), ignored by the base model
};

inline void validate_config(const IntegrationConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(cfg.t_end >= cfg.dt)) throw std::invalid_argument("t_end must be at least dt");
  if (!(cfg.e0 > 0.0)) throw std::invalid_argument("e0 must be positive");
  if (!(cfg.d0 > 0.0)) throw std::invalid_argument("d0 must be positive");
  if (!(cfg.s0 >= 0.0)) throw std::invalid_argument("s0 must be nonnegative");
  if (!std::isfinite(cfg.dt) || !std::isfinite(cfg.t_end)) {
    throw std::invalid_argument("dt and t_end must be finite");
  }
}

struct State {
  double t = 0.0;
  double e = 0.0;
  double d = 0.0;
  double s = 0.0;
};

// Uniformly sampled path of the state system under a control, one sample per
// integrator step starting at t = 0. The S column stays zero for base-model
// runs. `clamped` records whether the E >= 0 clamp ever fired.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> t, i, e, d, s;
  bool clamped = false;

  std::size_t size() const { return t.size(); }
  State back_state() const {
    if (t.empty()) throw std::logic_error("empty trajectory");
    return {t.back(), e.back(), d.back(), s.back()};
  }
};

namespace detail {

inline double checked_control(double u, double time) {
  if (!(u >= 0.0)) {
    throw std::invalid_argument("control must be nonnegative (violated at t=" +
                                std::to_string(time) + ")");
  }
  return u;
}

inline std::size_t step_count(const IntegrationConfig& cfg) {
  const auto n = static_cast<long long>(std::llround(cfg.t_end / cfg.dt));
  return n < 1 ? 1 : static_cast<std::size_t>(n);
}

}  // namespace detail

// Classical fixed-step RK4 on  E' = eta I - delta_e E,  D' = -omega eta I + delta_d D.
template <typename ControlFn>
Trajectory simulate_base(const ModelParameters& p, ControlFn&& control,
                         const IntegrationConfig& cfg) {
  validate_config(cfg);
  require_evaluable(p);
  const std::size_t n = detail::step_count(cfg);
  const double h = cfg.dt;

  Trajectory traj;
  traj.dt = h;
  traj.t.reserve(n + 1);
  traj.i.reserve(n + 1);
  traj.e.reserve(n + 1);
  traj.d.reserve(n + 1);
  traj.s.assign(n + 1, 0.0);

  double e = cfg.e0, d = cfg.d0;
  const auto fe = [&p](double en, double u) { return p.eta * u - p.delta_e * en; };
  const auto fd = [&p](double dn, double u) { return -p.omega * p.eta * u + p.delta_d * dn; };

  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * h;
    const double u0 = detail::checked_control(control(t), t);
    traj.t.push_back(t);
    traj.i.push_back(u0);
    traj.e.push_back(e);
    traj.d.push_back(d);
    if (k == n) break;

    const double um = detail::checked_control(control(t + 0.5 * h), t + 0.5 * h);
    const double u1 = detail::checked_control(control(t + h), t + h);

    const double ke1 = fe(e, u0), kd1 = fd(d, u0);
    const double ke2 = fe(e + 0.5 * h * ke1, um), kd2 = fd(d + 0.5 * h * kd1, um);
    const double ke3 = fe(e + 0.5 * h * ke2, um), kd3 = fd(d + 0.5 * h * kd2, um);
    const double ke4 = fe(e + h * ke3, u1), kd4 = fd(d + h * kd3, u1);

    e += h / 6.0 * (ke1 + 2.0 * ke2 + 2.0 * ke3 + ke4);
    d += h / 6.0 * (kd1 + 2.0 * kd2 + 2.0 * kd3 + kd4);
    if (e < 0.0) {
      e = 0.0;
      traj.clamped = true;
    }
  }
  return traj;
}

// Three-state variant:  E' = eta (1-s) I - delta_e E,
// D' = -omega eta (1-s) I - q S + delta_d D,  S' = eta_s s I - delta_s S.
template <typename ControlFn>
Trajectory simulate_storage(const ModelParameters& p, const StorageParameters& sp,
                            ControlFn&& control, const IntegrationConfig& cfg) {
  validate_config(cfg);
  require_evaluable(p, sp);
  const std::size_t n = detail::step_count(cfg);
  const double h = cfg.dt;
  const double share = 1.0 - sp.s;

  Trajectory traj;
  traj.dt = h;
  traj.t.reserve(n + 1);
  traj.i.reserve(n + 1);
  traj.e.reserve(n + 1);
  traj.d.reserve(n + 1);
  traj.s.reserve(n + 1);

  double e = cfg.e0, d = cfg.d0, s = cfg.s0;
  const auto fe = [&](double en, double u) { return p.eta * share * u - p.delta_e * en; };
  const auto fd = [&](double dn, double sn, double u) {
    return -p.omega * p.eta * share * u - sp.q * sn + p.delta_d * dn;
  };
  const auto fs = [&](double sn, double u) { return sp.eta_s * sp.s * u - sp.delta_s * sn; };

  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * h;
    const double u0 = detail::checked_control(control(t), t);
    traj.t.push_back(t);
    traj.i.push_back(u0);
    traj.e.push_back(e);
    traj.d.push_back(d);
    traj.s.push_back(s);
    if (k == n) break;

    const double um = detail::checked_control(control(t + 0.5 * h), t + 0.5 * h);
    const double u1 = detail::checked_control(control(t + h), t + h);

    const double ke1 = fe(e, u0), kd1 = fd(d, s, u0), ks1 = fs(s, u0);
    const double ke2 = fe(e + 0.5 * h * ke1, um), kd2 = fd(d + 0.5 * h * kd1, s + 0.5 * h * ks1, um),
                 ks2 = fs(s + 0.5 * h * ks1, um);
    const double ke3 = fe(e + 0.5 * h * ke2, um), kd3 = fd(d + 0.5 * h * kd2, s + 0.5 * h * ks2, um),
                 ks3 = fs(s + 0.5 * h * ks2, um);
    const double ke4 = fe(e + h * ke3, u1), kd4 = fd(d + h * kd3, s + h * ks3, u1),
                 ks4 = fs(s + h * ks3, u1);

    e += h / 6.0 * (ke1 + 2.0 * ke2 + 2.0 * ke3 + ke4);
    d += h / 6.0 * (kd1 + 2.0 * kd2 + 2.0 * kd3 + kd4);
    s += h / 6.0 * (ks1 + 2.0 * ks2 + 2.0 * ks3 + ks4);
    if (e < 0.0) {
      e = 0.0;
      traj.clamped = true;
    }
  }
  return traj;
}

namespace detail {

// Composite Simpson on uniformly spaced samples. An odd interval count is
// handled with a 3/8 closure on the last three intervals, keeping the
// composite rule fourth order.
inline double simpson_uniform(const std::vector<double>& f, double dt) {
  const std::size_t n = f.size() < 1 ? 0 : f.size() - 1;  // interval count
  if (f.size() < 3) throw std::invalid_argument("quadrature needs at least 3 samples");
  std::size_t m = n;           // intervals handled by the 1/3 rule
  double tail = 0.0;
  if (n % 2 != 0) {
    m = n - 3;
    const std::size_t j = n - 3;
    tail = 3.0 * dt / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
  }
  double sum = 0.0;
  if (m >= 2) {
    sum = f[0] + f[m];
    for (std::size_t k = 1; k < m; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f[k];
    sum *= dt / 3.0;
  }
  return sum + tail;
}

}  // namespace detail

// Discounted welfare integral of Eq-style base payoff (r I - c I^2) +
// (beta E - gamma D) over the sampled horizon.
inline double discounted_objective_base(const ModelParameters& p, const Trajectory& traj) {
  if (traj.size() < 3) throw std::invalid_argument("trajectory has fewer than 3 samples");
  std::vector<double> f(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double u = traj.i[k];
    const double payoff = (p.r * u - p.c * u * u) + (p.beta * traj.e[k] - p.gamma * traj.d[k]);
    f[k] = payoff * std::exp(-p.rho * traj.t[k]);
  }
  return detail::simpson_uniform(f, traj.dt);
}

// Storage payoff: r I (1-s) - c I^2 (1-s)^2 + beta E - gamma D + sigma S - c_s s I.
inline double discounted_objective_storage(const ModelParameters& p, const StorageParameters& sp,
                                           const Trajectory& traj) {
  if (traj.size() < 3) throw std::invalid_argument("trajectory has fewer than 3 samples");
  const double share = 1.0 - sp.s;
  std::vector<double> f(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double u = traj.i[k];
    const double payoff = p.r * u * share - p.c * u * u * share * share + p.beta * traj.e[k] -
                          p.gamma * traj.d[k] + sp.sigma * traj.s[k] - sp.c_s * sp.s * u;
    f[k] = payoff * std::exp(-p.rho * traj.t[k]);
  }
  return detail::simpson_uniform(f, traj.dt);
}

// Exact solution of the linear state system under constant control, used as
// the reference for integrator tests and for truncation-free objective tails.
//
//   E(t) = E* + (E0 - E*) e^{-delta_e t}
//   S(t) = S* + (S0 - S*) e^{-delta_s t}
//   D(t) = D* + a e^{-delta_s t} + g e^{+delta_d t},   a = q (S0 - S*) / (delta_s + delta_d)
//
// The damage rest point is unstable: g grows, it does not decay.
struct ConstantControlPath {
  double e_star = 0.0, d_star = 0.0, s_star = 0.0;
  double e0 = 0.0, s0 = 0.0;
  double a = 0.0, g = 0.0;
  double delta_e = 0.0, delta_d = 0.0, delta_s = 0.0;

  double e(double t) const { return e_star + (e0 - e_star) * std::exp(-delta_e * t); }
  double s(double t) const { return s_star + (s0 - s_star) * std::exp(-delta_s * t); }
  double d(double t) const {
    return d_star + a * std::exp(-delta_s * t) + g * std::exp(delta_d * t);
  }
};

inline ConstantControlPath exact_base_path(const ModelParameters& p, double i, double e0,
                                           double d0) {
  require_evaluable(p);
  if (p.delta_e == 0.0 || p.delta_d == 0.0) {
    throw std::domain_error("exact path requires delta_e > 0 and delta_d > 0");
  }
  ConstantControlPath path;
  path.delta_e = p.delta_e;
  path.delta_d = p.delta_d;
  path.delta_s = 1.0;  // unused: no storage mode
  path.e_star = p.eta * i / p.delta_e;
  path.d_star = p.omega * p.eta * i / p.delta_d;
  path.e0 = e0;
  path.s0 = 0.0;
  path.a = 0.0;
  path.g = d0 - path.d_star;
  return path;
}

inline ConstantControlPath exact_storage_path(const ModelParameters& p,
                                              const StorageParameters& sp, double i, double e0,
                                              double d0, double s0) {
  require_evaluable(p, sp);
  if (p.delta_e == 0.0 || p.delta_d == 0.0 || sp.delta_s == 0.0) {
    throw std::domain_error("exact path requires positive depreciation rates");
  }
  ConstantControlPath path;
  path.delta_e = p.delta_e;
  path.delta_d = p.delta_d;
  path.delta_s = sp.delta_s;
  const double i_pv = i * (1.0 - sp.s);
  path.e_star = p.eta * i_pv / p.delta_e;
  path.s_star = sp.s * sp.eta_s * i / sp.delta_s;
  path.d_star =
      p.omega * p.eta * i_pv / p.delta_d + sp.q * sp.eta_s * sp.s * i / (sp.delta_s * p.delta_d);
  path.e0 = e0;
  path.s0 = s0;
  path.a = sp.q * (s0 - path.s_star) / (sp.delta_s + p.delta_d);
  path.g = d0 - path.d_star - path.a;
  return path;
}

// Closed-form value of the discounted base payoff over the exact path's whole
// future, measured on the path's own clock (caller applies any e^{-rho T}
// shift). The divergent damage mode integrates because rho > delta_d.
inline double discounted_value_base(const ModelParameters& p, double i,
                                    const ConstantControlPath& path) {
  require_evaluable(p);
  const double flow = (p.r * i - p.c * i * i) + p.beta * path.e_star - p.gamma * path.d_star;
  return flow / p.rho + p.beta * (path.e0 - path.e_star) / (p.delta_e + p.rho) -
         p.gamma * path.g / (p.rho - p.delta_d);
}

inline double discounted_value_storage(const ModelParameters& p, const StorageParameters& sp,
                                       double i, const ConstantControlPath& path) {
  require_evaluable(p, sp);
  const double share = 1.0 - sp.s;
  const double flow = p.r * i * share - p.c * i * i * share * share - sp.c_s * sp.s * i +
                      p.beta * path.e_star - p.gamma * path.d_star + sp.sigma * path.s_star;
  return flow / p.rho + p.beta * (path.e0 - path.e_star) / (p.delta_e + p.rho) +
         sp.sigma * (path.s0 - path.s_star) / (sp.delta_s + p.rho) -
         p.gamma * (path.a / (sp.delta_s + p.rho) + path.g / (p.rho - p.delta_d));
}

}  // namespace pvopt
