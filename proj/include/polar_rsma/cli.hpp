#pragma once

namespace polar_rsma {

// Parses and runs one command-line invocation; returns the process exit
// code. Subcommands: simulate, analytic, sweep, validate.
int run_cli(int argc, const char* const* argv);

}  // namespace polar_rsma
