#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvopt/closed_form.hpp"
#include "pvopt/dynamics.hpp"
#include "pvopt/params.hpp"

namespace pvopt {

// A fully merged scenario: parameters after preset + overlay resolution.
struct ScenarioSpec {
  std::string name = "baseline";  // baseline | carbon_tax | storage | custom
  ModelParameters model;
  std::optional<StorageParameters> storage;
  IntegrationConfig cfg;
  StorageFormula variant = StorageFormula::foc_derived;
};

inline ScenarioSpec make_scenario(const std::string& name, const ModelParameters& base,
                                  const std::optional<StorageParameters>& storage,
                                  const IntegrationConfig& cfg,
                                  StorageFormula variant = StorageFormula::foc_derived) {
  ScenarioSpec spec;
  spec.name = name;
  spec.model = base;
  spec.cfg = cfg;
  spec.variant = variant;
  if (name == "baseline") {
    // base parameters as given
  } else if (name == "carbon_tax") {
    spec.model.r = 3.8;
    spec.model.c = 0.39;
  } else if (name == "storage") {
    spec.storage = storage.value_or(StorageParameters::defaults());
  } else if (name == "custom") {
    spec.storage = storage;
  } else {
    throw std::invalid_argument("unknown scenario '" + name + "'");
  }
  return spec;
}

struct ScenarioResult {
  std::string name;
  ClosedFormSolution solution;
  double effective_pv_investment = 0.0;  // I*(1-s) for storage runs, I* otherwise
  Trajectory trajectory;                 // under the constant optimal control
  double objective = 0.0;
};

// Solves the merged scenario in closed form and simulates it under the
// constant optimal control. Validation failures name the scenario.
inline ScenarioResult run_scenario(const ScenarioSpec& spec) {
  const StorageParameters* sp = spec.storage ? &*spec.storage : nullptr;
  const ValidationResult vr = validate_parameters(spec.model, sp);
  if (!vr.ok()) {
    throw std::invalid_argument("scenario '" + spec.name + "': " + vr.message());
  }
  ScenarioResult res;
  res.name = spec.name;
  if (sp != nullptr) {
    res.solution = optimal_investment_storage(spec.model, *sp, spec.variant);
    res.effective_pv_investment = res.solution.i_star * (1.0 - sp->s);
    const double i = res.solution.i_star;
    res.trajectory = simulate_storage(spec.model, *sp, [i](double) { return i; }, spec.cfg);
    res.objective = discounted_objective_storage(spec.model, *sp, res.trajectory);
  } else {
    res.solution = optimal_investment_base(spec.model);
    res.effective_pv_investment = res.solution.i_star;
    const double i = res.solution.i_star;
    res.trajectory = simulate_base(spec.model, [i](double) { return i; }, spec.cfg);
    res.objective = discounted_objective_base(spec.model, res.trajectory);
  }
  return res;
}

struct SweepAxis {
  double min = 0.0;
  double max = 0.0;
  double step = 0.0;
};

inline std::vector<double> axis_values(const SweepAxis& axis) {
  if (!(axis.step > 0.0)) throw std::invalid_argument("sweep step must be positive");
  if (!(axis.min < axis.max)) throw std::invalid_argument("sweep range must be increasing");
  const auto n = static_cast<std::size_t>(std::floor((axis.max - axis.min) / axis.step + 1e-9)) + 1;
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = axis.min + static_cast<double>(k) * axis.step;
  }
  values.back() = std::min(values.back(), axis.max);
  return values;
}

struct InvestmentSurface {
  std::vector<double> c_values;
  std::vector<double> eta_values;
  std::vector<double> i_star;  // row-major: [ci * eta_values.size() + ei]

  double at(std::size_t ci, std::size_t ei) const { return i_star[ci * eta_values.size() + ei]; }
};

// Optimal base investment over a (cost x productivity) grid. Monotone
// decreasing along c and increasing along eta.
inline InvestmentSurface sweep_investment_surface(const ModelParameters& base,
                                                  const SweepAxis& c_axis,
                                                  const SweepAxis& eta_axis) {
  if (!(c_axis.min > 0.0)) throw std::invalid_argument("c sweep must stay strictly positive");
  if (!(eta_axis.min > 0.0)) throw std::invalid_argument("eta sweep must stay strictly positive");
  InvestmentSurface surf;
  surf.c_values = axis_values(c_axis);
  surf.eta_values = axis_values(eta_axis);
  surf.i_star.reserve(surf.c_values.size() * surf.eta_values.size());
  ModelParameters p = base;
  for (double c : surf.c_values) {
    p.c = c;
    for (double eta : surf.eta_values) {
      p.eta = eta;
      surf.i_star.push_back(optimal_investment_base(p).i_star);
    }
  }
  return surf;
}

struct FirstPassage {
  double t = std::numeric_limits<double>::quiet_NaN();
  bool reached = false;
};

// First time a sampled level crosses the target, linearly interpolated
// between samples.
inline FirstPassage first_passage_time(const std::vector<double>& t,
                                       const std::vector<double>& level, double target) {
  FirstPassage fp;
  if (t.size() != level.size() || t.empty()) {
    throw std::invalid_argument("level series and time axis must match");
  }
  if (level.front() >= target) {
    fp.t = t.front();
    fp.reached = true;
    return fp;
  }
  for (std::size_t k = 0; k + 1 < level.size(); ++k) {
    if (level[k] < target && level[k + 1] >= target) {
      const double span = level[k + 1] - level[k];
      fp.t = t[k] + (t[k + 1] - t[k]) * (target - level[k]) / span;
      fp.reached = true;
      return fp;
    }
  }
  return fp;
}

struct ComparisonResult {
  ScenarioResult base;
  ScenarioResult tax;
  ScenarioResult storage;
  double target_e = 0.0;
  FirstPassage passage_base, passage_tax, passage_storage;  // on the energy stock
  double tax_to_base_ratio = 0.0;                           // I* ratio
  bool e_star_ordering = false;  // E*(storage) > E*(tax) > E*(base)
};

inline bool same_config(const IntegrationConfig& a, const IntegrationConfig& b) {
  return a.dt == b.dt && a.t_end == b.t_end && a.e0 == b.e0 && a.d0 == b.d0 && a.s0 == b.s0;
}

// Runs the three scenarios on one shared config and compares stationary
// levels and first-passage times of the energy stock.
inline ComparisonResult compare_storage_vs_tax(const ScenarioSpec& base_spec,
                                               const ScenarioSpec& tax_spec,
                                               const ScenarioSpec& storage_spec, double target_e) {
  if (!same_config(base_spec.cfg, tax_spec.cfg) || !same_config(base_spec.cfg, storage_spec.cfg)) {
    throw std::invalid_argument("scenarios must share one integration config");
  }
  ComparisonResult cmp;
  cmp.base = run_scenario(base_spec);
  cmp.tax = run_scenario(tax_spec);
  cmp.storage = run_scenario(storage_spec);
  cmp.target_e = target_e;
  cmp.passage_base = first_passage_time(cmp.base.trajectory.t, cmp.base.trajectory.e, target_e);
  cmp.passage_tax = first_passage_time(cmp.tax.trajectory.t, cmp.tax.trajectory.e, target_e);
  cmp.passage_storage =
      first_passage_time(cmp.storage.trajectory.t, cmp.storage.trajectory.e, target_e);
  cmp.tax_to_base_ratio = cmp.tax.solution.i_star / cmp.base.solution.i_star;
  cmp.e_star_ordering = cmp.storage.solution.e_star > cmp.tax.solution.e_star &&
                        cmp.tax.solution.e_star > cmp.base.solution.e_star;
  return cmp;
}

struct DominanceCell {
  double c_s = 0.0;
  double eta_s = 0.0;
  double i_star = 0.0;
  double e_star = 0.0;
  double s_star = 0.0;
  double availability_star = 0.0;  // E* + S*
  FirstPassage passage;            // of E(t) + S(t) to the shared target
  bool dominant = false;
};

struct DominanceTable {
  std::vector<double> c_s_values;
  std::vector<double> eta_s_values;
  std::vector<DominanceCell> cells;  // row-major: [ci * eta_s_values.size() + ei]
  double tax_i_star = 0.0;
  double tax_e_star = 0.0;
  double target = 0.0;
  FirstPassage tax_passage;
  // smallest dominant eta_s per c_s row (NaN when the whole row loses)
  std::vector<double> boundary_eta_s;

  const DominanceCell& at(std::size_t ci, std::size_t ei) const {
    return cells[ci * eta_s_values.size() + ei];
  }
};

namespace detail {

// First passage of a monotone increasing closed-form path, by bisection.
inline FirstPassage first_passage_closed_form(const ConstantControlPath& path, bool with_storage,
                                              double target) {
  FirstPassage fp;
  const auto level = [&](double t) { return with_storage ? path.e(t) + path.s(t) : path.e(t); };
  const double limit = with_storage ? path.e_star + path.s_star : path.e_star;
  if (level(0.0) >= target) {
    fp.t = 0.0;
    fp.reached = true;
    return fp;
  }
  if (!(limit > target)) return fp;  // never reached
  double lo = 0.0, hi = 50.0;
  while (level(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e7) return fp;
  }
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (level(mid) < target ? lo : hi) = mid;
  }
  fp.t = 0.5 * (lo + hi);
  fp.reached = true;
  return fp;
}

}  // namespace detail

// Storage-vs-carbon-tax verdict over a (c_s x eta_s) grid. A cell dominates
// when its stationary available energy (produced + stored) exceeds the tax
// scenario's stationary energy stock and it reaches the shared target level
// first. The energy measure for storage cells is E + S: matching the tax
// scenario on produced energy alone would ignore exactly the stock the cell
// pays for.
inline DominanceTable generate_dominance_table(const ModelParameters& base,
                                               const StorageParameters& storage_defaults,
                                               const SweepAxis& cs_axis, const SweepAxis& etas_axis,
                                               const IntegrationConfig& cfg,
                                               StorageFormula variant = StorageFormula::foc_derived) {
  DominanceTable table;
  table.c_s_values = axis_values(cs_axis);
  table.eta_s_values = axis_values(etas_axis);

  ModelParameters tax = base;
  tax.r = 3.8;
  tax.c = 0.39;
  const ClosedFormSolution tax_sol = optimal_investment_base(tax);
  table.tax_i_star = tax_sol.i_star;
  table.tax_e_star = tax_sol.e_star;
  table.target = 0.9 * tax_sol.e_star;
  const ConstantControlPath tax_path = exact_base_path(tax, tax_sol.i_star, cfg.e0, cfg.d0);
  table.tax_passage = detail::first_passage_closed_form(tax_path, false, table.target);

  table.cells.reserve(table.c_s_values.size() * table.eta_s_values.size());
  table.boundary_eta_s.assign(table.c_s_values.size(),
                              std::numeric_limits<double>::quiet_NaN());
  for (std::size_t ci = 0; ci < table.c_s_values.size(); ++ci) {
    StorageParameters sp = storage_defaults;
    sp.c_s = table.c_s_values[ci];
    for (double eta_s : table.eta_s_values) {
      sp.eta_s = eta_s;
      DominanceCell cell;
      cell.c_s = sp.c_s;
      cell.eta_s = eta_s;
      const ClosedFormSolution sol = optimal_investment_storage(base, sp, variant);
      cell.i_star = sol.i_star;
      cell.e_star = sol.e_star;
      cell.s_star = sol.s_star;
      cell.availability_star = sol.e_star + sol.s_star;
      const ConstantControlPath path =
          exact_storage_path(base, sp, sol.i_star, cfg.e0, cfg.d0, cfg.s0);
      cell.passage = detail::first_passage_closed_form(path, true, table.target);
      cell.dominant = cell.availability_star > table.tax_e_star && cell.passage.reached &&
                      table.tax_passage.reached && cell.passage.t < table.tax_passage.t;
      if (cell.dominant && std::isnan(table.boundary_eta_s[ci])) {
        table.boundary_eta_s[ci] = eta_s;
      }
      table.cells.push_back(cell);
    }
  }
  return table;
}

struct ScatterPoint {
  double q = 0.0;
  double sigma = 0.0;
  double i_star = 0.0;
  double coef_storage = 0.0;  // divergent-mode coefficient of the storage damage path
  double coef_tax = 0.0;      // same for the carbon-tax path
  double delta = 0.0;         // coef_storage - coef_tax; negative => storage path lower
  bool green = false;
};

// Damage comparison of the storage scenario against the carbon-tax scenario
// over a (q x sigma) grid. Both paths start from the same stocks; their
// damage equations share the divergent own mode e^{+delta_d t}, so the
// long-run ordering is decided by that mode's coefficient, computable from
// the closed-form steady states. green = storage path stays lower.
inline std::vector<ScatterPoint> environmental_scatter(const ModelParameters& base,
                                                       const StorageParameters& storage_defaults,
                                                       const SweepAxis& q_axis,
                                                       const SweepAxis& sigma_axis,
                                                       const IntegrationConfig& cfg,
                                                       StorageFormula variant
                                                       = StorageFormula::foc_derived) {
  if (!(q_axis.min >= 0.0) || !(sigma_axis.min >= 0.0)) {
    throw std::invalid_argument("q and sigma sweeps must be nonnegative");
  }
  ModelParameters tax = base;
  tax.r = 3.8;
  tax.c = 0.39;
  const ClosedFormSolution tax_sol = optimal_investment_base(tax);
  const ConstantControlPath tax_path = exact_base_path(tax, tax_sol.i_star, cfg.e0, cfg.d0);

  std::vector<ScatterPoint> points;
  const std::vector<double> qs = axis_values(q_axis);
  const std::vector<double> sigmas = axis_values(sigma_axis);
  points.reserve(qs.size() * sigmas.size());
  for (double q : qs) {
    for (double sigma : sigmas) {
      StorageParameters sp = storage_defaults;
      sp.q = q;
      sp.sigma = sigma;
      ScatterPoint pt;
      pt.q = q;
      pt.sigma = sigma;
      const ClosedFormSolution sol = optimal_investment_storage(base, sp, variant);
      pt.i_star = sol.i_star;
      const ConstantControlPath path =
          exact_storage_path(base, sp, sol.i_star, cfg.e0, cfg.d0, cfg.s0);
      pt.coef_storage = path.g;
      pt.coef_tax = tax_path.g;
      pt.delta = pt.coef_storage - pt.coef_tax;
      pt.green = pt.delta < 0.0;
      points.push_back(pt);
    }
  }
  return points;
}

inline SweepAxis default_cost_axis() { return {0.2, 1.0, 0.02}; }
inline SweepAxis default_productivity_axis() { return {0.6, 2.0, 0.05}; }
inline SweepAxis default_storage_cost_axis() { return {0.05, 1.0, 0.05}; }
inline SweepAxis default_storage_efficiency_axis() { return {0.05, 1.0, 0.05}; }
inline SweepAxis default_q_axis() { return {0.0, 0.2, 0.01}; }
inline SweepAxis default_sigma_axis() { return {0.0, 1.2, 0.06}; }

}  // namespace pvopt
