#pragma once

#include <string>

#include "pw/config.hpp"
#include "pw/dynamics.hpp"

namespace pw {

/// Execute a full configured run: resolve scales and groups, build the
/// topography and operators, integrate to t_max, and write the artifact set
/// (resolved config, trajectory CSV, snapshot series, crossing events,
/// occupancy stats) under out_dir (falls back to cfg.run.out_dir when
/// empty). A non-finite state aborts with a diagnostic snapshot after
/// flushing partial artifacts, rethrowing numerical_error.
run_artifacts run_simulation(const sim_config &cfg,
                             const std::string &out_dir_override = "");

} // namespace pw
