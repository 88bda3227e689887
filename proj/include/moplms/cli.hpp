#pragma once

namespace moplms {

// Parses and runs one command-line invocation (synth | fit | predict | eval |
// cv | recover | bench). Returns the process exit status: 0 exactly when all
// requested artifacts were written; on failure a one-line diagnostic goes to
// stderr and partially written outputs are removed.
int run_cli(int argc, char** argv);

}  // namespace moplms
