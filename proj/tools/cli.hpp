#pragma once

// Command-line front end: subcommand dispatch, config handling and output
// artifacts. Exit codes: 0 success, 1 runtime error, 2 validation failure,
// 64 usage error.

namespace slelab {
namespace cli {

int run(int argc, const char* const* argv);

} // namespace cli
} // namespace slelab
