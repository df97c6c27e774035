#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pvopt/closed_form.hpp"
#include "pvopt/dynamics.hpp"
#include "pvopt/params.hpp"

namespace pvopt {

// Outcome of one closed-form-vs-numeric comparison.
struct VerificationReport {
  double analytic_optimum = 0.0;
  double numeric_optimum = 0.0;
  double relative_gap = 0.0;
  double foc_residual_at_analytic = 0.0;
  StorageFormula variant_tested = StorageFormula::foc_derived;
  bool passed = false;
  double tolerance_used = 0.0;
  double t_end = 0.0;
  int evaluations = 0;
};

struct OracleOptions {
  double dt = 0.02;          // integrator step for objective evaluations
  double tail_cut = 1e-8;    // horizon T picked so exp(-rho T) < tail_cut
  double i_min = 0.0;
  double i_max = -1.0;       // < 0: defaults to 10x the analytic optimum
  double search_tol = 1e-5;  // golden-section bracket width, relative to the bracket
  double tolerance = 1e-3;   // relative agreement required to pass
};

namespace detail {

inline double oracle_horizon(double rho, const OracleOptions& opts) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const double t_raw = std::log(1.0 / opts.tail_cut) / rho;
  const double steps = std::ceil(t_raw / opts.dt);
  return steps * opts.dt;
}

// Golden-section maximizer of a concave function on [a, b]. Deterministic:
// the iteration count is fixed by the bracket and tolerance.
template <typename Fn>
double golden_section_max(Fn&& f, double a, double b, double tol, int* evaluations) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;    // 0.618...
  static const double inv_phi2 = (3.0 - std::sqrt(5.0)) / 2.0;   // 0.382...
  double h = b - a;
  if (!(h > 0.0)) throw std::invalid_argument("empty search bracket");
  const int n = static_cast<int>(std::ceil(std::log(tol) / std::log(inv_phi)));
  double xl = a + inv_phi2 * h;
  double xr = a + inv_phi * h;
  double fl = f(xl);
  double fr = f(xr);
  int evals = 2;
  for (int k = 0; k < n; ++k) {
    if (fl > fr) {
      b = xr;
      xr = xl;
      fr = fl;
      h *= inv_phi;
      xl = a + inv_phi2 * h;
      fl = f(xl);
    } else {
      a = xl;
      xl = xr;
      fl = fr;
      h *= inv_phi;
      xr = a + inv_phi * h;
      fr = f(xr);
    }
    ++evals;
  }
  if (evaluations != nullptr) *evaluations = evals;
  return fl > fr ? xl : xr;
}

}  // namespace detail

// Discounted value of holding the constant control i from fixed initial
// stocks: simulate + Simpson over [0, T], then add the closed-form value of
// the remaining tail from the simulated end state. The tail removes the
// truncation bias of the slowly decaying e^{(delta_d - rho) t} damage mode,
// so the only numerical error left is the O(dt^4) of RK4 and Simpson.
inline double constant_control_value_base(const ModelParameters& p, double i, double e0, double d0,
                                          double t_end, double dt) {
  IntegrationConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.e0 = e0;
  cfg.d0 = d0;
  const Trajectory traj = simulate_base(p, [i](double) { return i; }, cfg);
  const double head = discounted_objective_base(p, traj);
  const State end = traj.back_state();
  const ConstantControlPath tail_path = exact_base_path(p, i, end.e, end.d);
  return head + std::exp(-p.rho * end.t) * discounted_value_base(p, i, tail_path);
}

inline double constant_control_value_storage(const ModelParameters& p, const StorageParameters& sp,
                                             double i, double e0, double d0, double s0,
                                             double t_end, double dt) {
  IntegrationConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.e0 = e0;
  cfg.d0 = d0;
  cfg.s0 = s0;
  const Trajectory traj = simulate_storage(p, sp, [i](double) { return i; }, cfg);
  const double head = discounted_objective_storage(p, sp, traj);
  const State end = traj.back_state();
  const ConstantControlPath tail_path = exact_storage_path(p, sp, i, end.e, end.d, end.s);
  return head + std::exp(-p.rho * end.t) * discounted_value_storage(p, sp, i, tail_path);
}

// Independent check of the closed-form optimum: golden-section search over
// constant controls (the objective is strictly concave in a constant control,
// curvature -2c(1-s)^2). Initial stocks sit at the steady state of the
// analytic candidate, so the verified point runs along a constant integrand
// and the comparison emulates the stationary infinite-horizon problem.
inline VerificationReport brute_force_optimal_constant_control(
    const ModelParameters& p, const StorageParameters* sp,
    StorageFormula variant = StorageFormula::foc_derived, const OracleOptions& opts = {}) {
  if (!(opts.i_min >= 0.0)) throw std::invalid_argument("i_min must be nonnegative");

  VerificationReport report;
  report.variant_tested = variant;
  report.tolerance_used = opts.tolerance;
  report.t_end = detail::oracle_horizon(p.rho, opts);

  double e0 = 0.0, d0 = 0.0, s0 = 0.0;
  if (sp != nullptr) {
    const ClosedFormSolution sol = optimal_investment_storage(p, *sp, variant);
    report.analytic_optimum = sol.i_star;
    report.foc_residual_at_analytic = foc_residual_storage(p, *sp, sol.i_star);
    e0 = sol.e_star;
    d0 = sol.d_star;
    s0 = sol.s_star;
  } else {
    const ClosedFormSolution sol = optimal_investment_base(p);
    report.analytic_optimum = sol.i_star;
    report.foc_residual_at_analytic = foc_residual_base(p, sol.i_star);
    e0 = sol.e_star;
    d0 = sol.d_star;
  }
  if (!(report.analytic_optimum > 0.0)) {
    throw std::domain_error("analytic optimum is not strictly positive; nothing to verify");
  }

  const double a = opts.i_min;
  const double b = opts.i_max > 0.0 ? opts.i_max : 10.0 * report.analytic_optimum;
  if (!(b > a)) throw std::invalid_argument("i_max must exceed i_min");

  const auto value = [&](double i) {
    return sp != nullptr
               ? constant_control_value_storage(p, *sp, i, e0, d0, s0, report.t_end, opts.dt)
               : constant_control_value_base(p, i, e0, d0, report.t_end, opts.dt);
  };
  report.numeric_optimum =
      detail::golden_section_max(value, a, b, opts.search_tol, &report.evaluations);

  const double guard = 0.01 * (b - a);
  if (report.numeric_optimum - a < guard || b - report.numeric_optimum < guard) {
    throw std::runtime_error("numeric maximizer lies on the search boundary [" +
                             std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  report.relative_gap = std::abs(report.numeric_optimum - report.analytic_optimum) /
                        std::abs(report.analytic_optimum);
  report.passed = report.relative_gap <= report.tolerance_used;
  return report;
}

// Central difference of the constant-control value at i. The evaluation uses
// the same fixed initial stocks (steady state of the analytic optimum) for
// both probes, so the difference isolates the control effect.
inline double finite_difference_gradient(const ModelParameters& p, const StorageParameters* sp,
                                         double i, double h, const OracleOptions& opts = {}) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  if (!(i - h >= 0.0)) throw std::invalid_argument("i - h must be nonnegative");
  const double t_end = detail::oracle_horizon(p.rho, opts);
  if (sp != nullptr) {
    const ClosedFormSolution sol = optimal_investment_storage(p, *sp, StorageFormula::foc_derived);
    const auto value = [&](double x) {
      return constant_control_value_storage(p, *sp, x, sol.e_star, sol.d_star, sol.s_star, t_end,
                                            opts.dt);
    };
    return (value(i + h) - value(i - h)) / (2.0 * h);
  }
  const ClosedFormSolution sol = optimal_investment_base(p);
  const auto value = [&](double x) {
    return constant_control_value_base(p, x, sol.e_star, sol.d_star, t_end, opts.dt);
  };
  return (value(i + h) - value(i - h)) / (2.0 * h);
}

// Back-solve of the composite shadow term from two reported optima obtained
// under different (r, c). Each scenario pins Psi = (2 c I - r) / eta; the
// spread between the two solves measures how reconcilable the inputs are.
struct CalibrationResult {
  double psi = 0.0;        // average of the two solves
  double psi_first = 0.0;
  double psi_second = 0.0;
  double residual = 0.0;   // |psi_first - psi_second|
  bool consistent = false; // residual within the transcription-noise budget
};

inline CalibrationResult calibrate_composite_term(double reported_first, double reported_second,
                                                  std::pair<double, double> rc_first,
                                                  std::pair<double, double> rc_second,
                                                  double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (rc_first == rc_second) {
    throw std::invalid_argument("the two scenarios must differ in (r, c)");
  }
  CalibrationResult res;
  res.psi_first = (2.0 * rc_first.second * reported_first - rc_first.first) / eta;
  res.psi_second = (2.0 * rc_second.second * reported_second - rc_second.first) / eta;
  res.psi = 0.5 * (res.psi_first + res.psi_second);
  res.residual = std::abs(res.psi_first - res.psi_second);
  res.consistent = res.residual <= 1e-2;
  return res;
}

// Deterministic parameter sampler. Ranges bracket the shipped calibration
// (roughly +-50% around the default values); within them r + eta Psi > c_s
// always holds, which makes the dominance property below provable for every
// s strictly inside (0, dominance_threshold).
class ParameterSampler {
 public:
  explicit ParameterSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) {
    // 53-bit mantissa draw; bit-reproducible across platforms.
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

  ModelParameters draw_model() {
    ModelParameters p;
    p.r = uniform(1.5, 4.5);
    p.c = uniform(0.2, 0.9);
    p.eta = uniform(0.7, 2.0);
    p.beta = uniform(0.02, 0.4);
    p.gamma = uniform(0.05, 0.4);
    p.omega = uniform(0.05, 0.4);
    p.delta_e = uniform(0.02, 0.10);
    p.rho = uniform(0.03, 0.09);
    p.delta_d = p.rho - uniform(0.005, 0.03);
    if (p.delta_d < 0.004) p.delta_d = 0.004;
    return p;
  }

  StorageParameters draw_storage() {
    StorageParameters sp;
    sp.s = 0.0;  // callers place s inside the bound that matters to them
    sp.c_s = uniform(0.05, 0.9);
    sp.eta_s = uniform(0.25, 1.0);
    sp.delta_s = uniform(0.01, 0.05);
    sp.q = uniform(0.0, 0.12);
    sp.sigma = uniform(0.1, 1.0);
    return sp;
  }

 private:
  std::mt19937_64 rng_;
};

// One counterexample candidate, kept in full for the report.
struct DominanceCounterexample {
  ModelParameters model;
  StorageParameters storage;
  double gap = 0.0;
};

struct DominanceCheckReport {
  int samples = 0;
  int failures = 0;
  double min_gap = 0.0;               // smallest I1* - I* seen
  double max_identity_error = 0.0;    // worst relative mismatch of the decomposition
  bool passed = false;
  std::uint64_t seed = 0;
  std::vector<DominanceCounterexample> counterexamples;
};

// Property check of the dominance claim: for random admissible draws with s
// strictly inside (0, dominance_threshold), the foc_derived storage optimum
// exceeds the base optimum, and the two-term gap decomposition reproduces
// the direct difference. s stays in [0.02, 0.98] of the bound: strictly
// interior, and far enough from 0 that the identity check is not dominated
// by cancellation in I1* - I*.
inline DominanceCheckReport verify_proposition3(int samples, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("samples must be positive");
  DominanceCheckReport report;
  report.samples = samples;
  report.seed = seed;
  report.min_gap = std::numeric_limits<double>::infinity();
  ParameterSampler sampler(seed);
  for (int k = 0; k < samples; ++k) {
    const ModelParameters p = sampler.draw_model();
    StorageParameters sp = sampler.draw_storage();
    const double bound = dominance_threshold(p, sp);
    sp.s = bound * sampler.uniform(0.02, 0.98);
    const double i_base = optimal_investment_base(p).i_star;
    const double i_storage = optimal_investment_storage(p, sp, StorageFormula::foc_derived).i_star;
    const double diff = i_storage - i_base;
    const double decomposed = investment_gap(p, sp, StorageFormula::foc_derived);
    const double identity_err = std::abs(decomposed - diff) / std::abs(diff);
    if (identity_err > report.max_identity_error) report.max_identity_error = identity_err;
    if (diff < report.min_gap) report.min_gap = diff;
    if (!(diff > 0.0)) {
      ++report.failures;
      if (report.counterexamples.size() < 8) {
        report.counterexamples.push_back({p, sp, diff});
      }
    }
  }
  report.passed = report.failures == 0 && report.max_identity_error < 1e-10;
  return report;
}

}  // namespace pvopt
