#pragma once

namespace ineqreg {

/// Command-line entry point. Exit codes: 0 success, 2 configuration/usage
/// error, 3 infeasible or degenerate model, 1 internal error.
int run_cli(int argc, char** argv);

}  // namespace ineqreg
