#pragma once

#include <iosfwd>

#include "teg/errors.hpp"

namespace teg::cli {

// Process exit status per failure class.
enum ExitCode : int {
    kOk = 0,
    kOther = 1,
    kUsage = 2,
    kIo = 3,
    kMaterial = 4,
    kDegenerate = 5,
    kNumerical = 6,
    kScanIncomplete = 7,
};

int exit_code_for(ErrorKind kind);

/// tegsolve solve|report|sweep|multiplicity --config <file> [--out <dir>]
///          [--tol-ode <x>] [--scan-samples <n>] [--dump-config]
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace teg::cli
