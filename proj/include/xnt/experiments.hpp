#ifndef XNT_EXPERIMENTS_HPP
#define XNT_EXPERIMENTS_HPP

#include "xnt/report.hpp"
#include "xnt/run_config.hpp"

namespace xnt {

/// Dispatches the subcommand. Invariant outcomes are recorded in the report;
/// module errors propagate with context.
Report run_experiment(const RunConfig& config);

} // namespace xnt

#endif
