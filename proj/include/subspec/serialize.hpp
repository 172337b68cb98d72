#ifndef SUBSPEC_SERIALIZE_HPP
#define SUBSPEC_SERIALIZE_HPP

#include <ostream>

#include "json.hpp"
#include "subspec/illustration.hpp"
#include "subspec/montecarlo.hpp"
#include "subspec/oracle.hpp"
#include "subspec/spectra.hpp"
#include "subspec/walk.hpp"

namespace subspec {

using Json = nlohmann::ordered_json;

inline Json to_json(const StepCdf& f) {
  return Json{{"jumps", f.jumps()}, {"cum", f.cum()}};
}

inline Json to_json(const KsResult& r) {
  return Json{{"statistic", r.statistic}, {"lambda", r.lambda}, {"p_value", r.p_value}};
}

inline Json quantiles_json(const std::vector<std::pair<double, double>>& q) {
  Json out = Json::array();
  for (const auto& [p, v] : q) out.push_back(Json{{"probability", p}, {"value", v}});
  return out;
}

inline Json to_json(const EstimateReport& r) {
  return Json{{"mode", to_string(r.mode)},
              {"n", r.n},
              {"k", r.k},
              {"n_samples", r.n_samples},
              {"master_seed", r.master_seed},
              {"F_hat", to_json(r.F_hat)},
              {"mean_supnorm", r.mean_supnorm},
              {"supnorm_quantiles", quantiles_json(r.supnorm_quantiles)},
              {"metadata", r.metadata},
              {"reference", r.reference_kind}};
}

inline Json to_json(const TailCurve& c) {
  return Json{{"r_grid", c.r_grid},
              {"empirical", c.empirical},
              {"bound", c.bound},
              {"bound_raw", c.bound_raw},
              {"stderr", c.stderr_},
              {"n_samples", c.n_samples}};
}

inline Json to_json(const WalkReport& w) {
  return Json{{"n", w.n},
              {"row_sum_error", w.row_sum_error},
              {"reversibility_error", w.reversibility_error},
              {"invariance_error", w.invariance_error},
              {"gap", w.gap},
              {"gap_theory", w.gap_theory}};
}

inline Json to_json(const ExactDistribution& d) {
  Json atoms = Json::array();
  for (const auto& [v, p] : d.atoms) atoms.push_back(Json{{"value", v}, {"probability", p}});
  return Json{{"atoms", atoms}, {"mean", d.mean()}};
}

inline void write_csv(std::ostream& os, const TailCurve& c) {
  os << "r,empirical,bound,stderr\n";
  for (std::size_t i = 0; i < c.r_grid.size(); ++i) {
    os << format_real(c.r_grid[i]) << ',' << format_real(c.empirical[i]) << ','
       << format_real(c.bound[i]) << ',' << format_real(c.stderr_[i]) << '\n';
  }
}

inline void write_csv(std::ostream& os, const ExactDistribution& d) {
  os << "value,probability\n";
  for (const auto& [v, p] : d.atoms) os << format_real(v) << ',' << format_real(p) << '\n';
}

}  // namespace subspec

#endif  // SUBSPEC_SERIALIZE_HPP
