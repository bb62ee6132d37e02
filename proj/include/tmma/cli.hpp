#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tmma/tiled_engine.hpp"

namespace tmma::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitFailure = 1,   // runtime or verification failure
  kExitUsage = 2,     // bad flags
  kExitInternal = 3,  // internal invariant breach
};

inline constexpr int kReportSchemaVersion = 1;

/// Engine entry point used by the commands. Tests substitute a faulty engine
/// to check that verification actually detects mismatches.
using GemmEngine =
    std::function<Int32Matrix(AcceleratorState&, const Int8Matrix*, const Int8Matrix&, UpdateA)>;

GemmEngine default_engine();

struct Hooks {
  GemmEngine engine = default_engine();
};

/// Runs one CLI invocation. `args` excludes the program name. The report goes
/// to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks = {});

}  // namespace tmma::cli
