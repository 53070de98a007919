#pragma once

#include <iosfwd>

namespace dockslim {

/// Entry point of the `dockslim` executable; returns the process exit code
/// (0 clean, 1 smells remain, 2 usage, I/O or parse failure).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dockslim
