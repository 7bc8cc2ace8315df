#pragma once

// Stability sweep of the m=4 case 1 system: one scalar initial datum is
// varied and each trajectory is classified as bounded or blowing up.

#include <optional>
#include <string>
#include <vector>

#include "boussinesq/types.hpp"
#include "json.hpp"

namespace boussinesq {

struct SweepRow {
  double value = 0.0;
  /// Set when a blow-up event stopped the trajectory.
  std::optional<double> blowup_time;
  /// max over components and time of |state|, and the same at t0.
  double max_state = 0.0;
  double initial_state = 0.0;
  /// No blow-up and max_state < bound_factor * initial_state.
  bool bounded = false;

  std::string outcome() const;
};

struct SweepOptions {
  Window window{0.0, 100.0};
  double bound_factor = 10.0;
  /// Worker threads; 0 means one per value.
  int threads = 0;
};

/// Keys accepted by run_sweep.
const std::vector<std::string>& sweep_keys();

/// base: M4Case1General params (overrides of the defaults). Throws
/// InvalidParams for keys outside sweep_keys().
std::vector<SweepRow> run_sweep(const nlohmann::json& base, const std::string& vary, const std::vector<double>& values,
                                const SweepOptions& opts = {});

}  // namespace boussinesq
