#pragma once

namespace seqsparse {

/// Entry point behind the seqsparse binary; exposed so tests can drive the
/// commands in-process. Exit codes: 0 success, 1 usage error, 2 data/IO
/// error, 3 check failure.
int run_cli(int argc, const char* const* argv);

}  // namespace seqsparse
