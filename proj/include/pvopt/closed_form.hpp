#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvopt/params.hpp"

namespace pvopt {

// Two circulating forms of the storage-model optimum. `as_published` is the
// compact reported expression; `foc_derived` is the expression obtained by
// solving the first-order condition term by term (the storage term keeps the
// factor s and the extra 1/(1-s)). They disagree for s in (0,1)\{1/2}; the
// numerical oracle confirms foc_derived, which is therefore the default.
enum class StorageFormula { as_published, foc_derived };

inline const char* to_string(StorageFormula v) {
  return v == StorageFormula::as_published ? "published" : "foc";
}

struct ClosedFormSolution {
  double i_star = 0.0;   // optimal constant investment
  double psi = 0.0;      // composite shadow term of the base stocks
  double e_star = 0.0;   // stationary energy stock
  double d_star = 0.0;   // stationary damage stock (unstable rest point)
  double s_star = 0.0;   // stationary stored energy, zero in the base model
  StorageFormula variant = StorageFormula::foc_derived;
  bool clamped = false;  // interior optimum was negative and clamped to zero
};

// Co-states (shadow prices) of the stocks at time t. nu is zero in the base
// model. All decay exactly as exp(-rho t).
struct CostateValues {
  double mu = 0.0;
  double lambda = 0.0;
  double nu = 0.0;
  double t = 0.0;
};

// Psi = beta/(delta_e + rho) + omega * gamma/(rho - delta_d): discounted
// welfare value, per unit of investment, of the extra energy and the avoided
// damage. Strictly positive for admissible parameters.
inline double composite_shadow_term(const ModelParameters& p) {
  require_evaluable(p);
  return p.beta / (p.delta_e + p.rho) + p.omega * p.gamma / (p.rho - p.delta_d);
}

// Theta = sigma + gamma q / (rho - delta_d): discounted welfare value per
// unit of stored energy, including the damage-side contribution of q.
inline double storage_shadow_term(const ModelParameters& p, const StorageParameters& sp) {
  require_evaluable(p, sp);
  return sp.sigma + p.gamma * sp.q / (p.rho - p.delta_d);
}

inline CostateValues costates_base(const ModelParameters& p, double t) {
  require_evaluable(p);
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  const double decay = std::exp(-p.rho * t);
  CostateValues cs;
  cs.t = t;
  cs.mu = p.beta / (p.delta_e + p.rho) * decay;
  cs.lambda = p.gamma / (p.delta_d - p.rho) * decay;  // negative: delta_d < rho
  return cs;
}

inline CostateValues costates_storage(const ModelParameters& p, const StorageParameters& sp,
                                      double t) {
  CostateValues cs = costates_base(p, t);
  cs.nu = storage_shadow_term(p, sp) / (sp.delta_s + p.rho) * std::exp(-p.rho * t);
  return cs;
}

// Stationarity defect of the base problem at investment i, in current-value
// terms at t = 0: (r - 2 c i) + eta (mu_0 - omega lambda_0). Zero exactly at
// the optimum, slope -2c.
inline double foc_residual_base(const ModelParameters& p, double i) {
  const CostateValues cs = costates_base(p, 0.0);
  return (p.r - 2.0 * p.c * i) + p.eta * (cs.mu - p.omega * cs.lambda);
}

// Storage counterpart: r(1-s) - 2c(1-s)^2 i - c_s s + eta(1-s)(mu_0 - omega
// lambda_0) + eta_s s nu_0.
inline double foc_residual_storage(const ModelParameters& p, const StorageParameters& sp,
                                   double i) {
  const CostateValues cs = costates_storage(p, sp, 0.0);
  const double one_ms = 1.0 - sp.s;
  return p.r * one_ms - 2.0 * p.c * one_ms * one_ms * i - sp.c_s * sp.s +
         p.eta * one_ms * (cs.mu - p.omega * cs.lambda) + sp.eta_s * sp.s * cs.nu;
}

// Stationary stocks of the base system under constant investment i:
// e_star = eta i / delta_e, d_star = omega eta i / delta_d. d_star is the
// unstable rest point of the damage equation.
inline std::pair<double, double> steady_state_base(const ModelParameters& p, double i) {
  require_evaluable(p);
  if (!(i >= 0.0)) throw std::invalid_argument("investment must be nonnegative");
  if (p.delta_e == 0.0) throw std::domain_error("delta_e = 0: energy stock has no finite steady state");
  if (p.delta_d == 0.0) throw std::domain_error("delta_d = 0: damage stock has no finite steady state");
  return {p.eta * i / p.delta_e, p.omega * p.eta * i / p.delta_d};
}

struct StorageSteadyState {
  double e_star = 0.0;
  double d_star = 0.0;
  double s_star = 0.0;
};

inline StorageSteadyState steady_state_storage(const ModelParameters& p,
                                               const StorageParameters& sp, double i) {
  require_evaluable(p, sp);
  if (!(i >= 0.0)) throw std::invalid_argument("investment must be nonnegative");
  if (p.delta_e == 0.0) throw std::domain_error("delta_e = 0: energy stock has no finite steady state");
  if (p.delta_d == 0.0) throw std::domain_error("delta_d = 0: damage stock has no finite steady state");
  if (sp.delta_s == 0.0) throw std::domain_error("delta_s = 0: stored energy has no finite steady state");
  StorageSteadyState ss;
  const double i_pv = i * (1.0 - sp.s);
  ss.e_star = p.eta * i_pv / p.delta_e;
  ss.s_star = sp.s * sp.eta_s * i / sp.delta_s;
  ss.d_star = p.omega * p.eta * i_pv / p.delta_d + sp.q * sp.eta_s * sp.s * i / (sp.delta_s * p.delta_d);
  return ss;
}

// I* = (r + eta Psi) / (2c), with the stationary stocks it implies.
inline ClosedFormSolution optimal_investment_base(const ModelParameters& p) {
  ClosedFormSolution sol;
  sol.psi = composite_shadow_term(p);
  sol.i_star = (p.r + p.eta * sol.psi) / (2.0 * p.c);
  if (sol.i_star < 0.0) {
    sol.i_star = 0.0;
    sol.clamped = true;
  }
  std::tie(sol.e_star, sol.d_star) = steady_state_base(p, sol.i_star);
  return sol;
}

// Both variants are written over the common denominator 2c(1-s)^2 so that at
// s = 0 the foc_derived numerator reduces to r + eta Psi bit for bit, making
// the collapse to the base optimum exact.
inline ClosedFormSolution optimal_investment_storage(const ModelParameters& p,
                                                     const StorageParameters& sp,
                                                     StorageFormula variant) {
  require_evaluable(p, sp);
  ClosedFormSolution sol;
  sol.variant = variant;
  sol.psi = composite_shadow_term(p);
  const double theta = storage_shadow_term(p, sp);
  const double one_ms = 1.0 - sp.s;
  const double denom2 = 2.0 * p.c * one_ms * one_ms;
  const double storage_value = theta * sp.eta_s / (sp.delta_s + p.rho);
  double numerator = p.r * one_ms - sp.c_s * sp.s + p.eta * sol.psi * one_ms;
  if (variant == StorageFormula::as_published) {
    numerator += storage_value * one_ms;
  } else {
    numerator += sp.s * storage_value;
  }
  sol.i_star = numerator / denom2;
  if (sol.i_star < 0.0) {
    sol.i_star = 0.0;
    sol.clamped = true;
  }
  const StorageSteadyState ss = steady_state_storage(p, sp, sol.i_star);
  sol.e_star = ss.e_star;
  sol.d_star = ss.d_star;
  sol.s_star = ss.s_star;
  return sol;
}

// Storage is economically viable only while s < r/(r + c_s), equivalently
// while r(1-s) - c_s s > 0.
inline double viability_threshold(const ModelParameters& p, const StorageParameters& sp) {
  if (!(p.r + sp.c_s > 0.0)) throw std::invalid_argument("r + c_s must be positive");
  return p.r / (p.r + sp.c_s);
}

// Bound on s below which the storage-model optimum exceeds the base optimum:
// min{ r/(r+c_s), Theta eta_s / (Theta eta_s + c_s (delta_s + rho)) }.
inline double dominance_threshold(const ModelParameters& p, const StorageParameters& sp) {
  const double theta = storage_shadow_term(p, sp);
  const double tv = theta * sp.eta_s;
  const double cost = sp.c_s * (sp.delta_s + p.rho);
  double second = 1.0;
  if (tv + cost > 0.0) second = tv / (tv + cost);
  return std::min(viability_threshold(p, sp), second);
}

// I1* - I* through the two-term decomposition: a rescaling term
// s/(1-s) [r/(2c) + (eta/(2c)) Psi] plus a storage-net-of-cost term. The
// second term matches the requested variant so that the decomposition equals
// optimal_investment_storage(...) - optimal_investment_base(...) identically.
inline double investment_gap(const ModelParameters& p, const StorageParameters& sp,
                             StorageFormula variant) {
  require_evaluable(p, sp);
  const double psi = composite_shadow_term(p);
  const double theta = storage_shadow_term(p, sp);
  const double one_ms = 1.0 - sp.s;
  const double first = sp.s / one_ms * (p.r / (2.0 * p.c) + p.eta / (2.0 * p.c) * psi);
  const double denom = 2.0 * p.c * one_ms * one_ms * (sp.delta_s + p.rho);
  double second = 0.0;
  if (variant == StorageFormula::as_published) {
    second = (theta * sp.eta_s * one_ms - sp.c_s * (sp.delta_s + p.rho) * sp.s) / denom;
  } else {
    second = sp.s * (theta * sp.eta_s - sp.c_s * (sp.delta_s + p.rho)) / denom;
  }
  return first + second;
}

}  // namespace pvopt
