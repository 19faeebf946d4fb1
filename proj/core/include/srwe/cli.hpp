#pragma once

namespace srwe {

/// Batch experiment driver. Subcommands: wardrop, srwe, valley, perturb, poa,
/// verify, oracle-check, plot. Exit codes: 0 success, 1 configuration or I/O
/// error, 2 mathematical non-convergence (or a failed certification check).
int run_command(int argc, const char* const* argv);

}  // namespace srwe
