#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sidonlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitDomain = 2,  // also structural, configuration and usage errors
  kExitResource = 3,
  kExitIo = 4,
};

/// Runs one `sidonlab` command line (without the program name). The JSON
/// report goes to `out` (or --out); errors go to `err` as JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sidonlab
