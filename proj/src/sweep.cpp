#include "boussinesq/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "boussinesq/catalog.hpp"
#include "boussinesq/errors.hpp"

namespace boussinesq {

std::string SweepRow::outcome() const {
  if (blowup_time) {
    std::ostringstream s;
    s << "blowup(" << *blowup_time << ")";
    return s.str();
  }
  return bounded ? "bounded" : "unbounded";
}

const std::vector<std::string>& sweep_keys() {
  static const std::vector<std::string> keys = {"delta", "b11", "b12", "s", "theta0", "theta", "c0"};
  return keys;
}

namespace {

SweepRow sweep_one(nlohmann::json params, const std::string& vary, double value, const SweepOptions& opts) {
  params[vary] = value;
  const auto y0 = case1_general_initial(params);
  const double c0 = params.at("c0").get<double>();
  const DenseSolution sol = integrate_case1_general(c0, y0, opts.window);
  SweepRow row;
  row.value = value;
  row.blowup_time = sol.blowup_time();
  for (int k = 0; k < 5; ++k) {
    row.max_state = std::max(row.max_state, sol.maximum_abs(k));
    row.initial_state = std::max(row.initial_state, std::abs(y0[static_cast<std::size_t>(k)]));
  }
  row.bounded = !row.blowup_time && std::isfinite(row.max_state) && row.max_state < opts.bound_factor * row.initial_state;
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const nlohmann::json& base, const std::string& vary, const std::vector<double>& values,
                                const SweepOptions& opts) {
  const auto& keys = sweep_keys();
  if (std::find(keys.begin(), keys.end(), vary) == keys.end()) {
    throw Error(ErrorKind::InvalidParams, "sweep cannot vary '" + vary + "'");
  }
  if (!(opts.window.lo < opts.window.hi)) throw Error(ErrorKind::InvalidParams, "sweep window must have lo < hi");
  const nlohmann::json params = family_params("M4Case1General", base);
  std::vector<SweepRow> rows(values.size());
  const std::size_t width = opts.threads > 0 ? static_cast<std::size_t>(opts.threads) : std::max<std::size_t>(1, values.size());
  for (std::size_t start = 0; start < values.size(); start += width) {
    std::vector<std::future<SweepRow>> jobs;
    const std::size_t stop = std::min(values.size(), start + width);
    for (std::size_t i = start; i < stop; ++i) {
      jobs.push_back(std::async(std::launch::async, sweep_one, params, vary, values[i], opts));
    }
    for (std::size_t i = start; i < stop; ++i) rows[i] = jobs[i - start].get();
  }
  return rows;
}

}  // namespace boussinesq
