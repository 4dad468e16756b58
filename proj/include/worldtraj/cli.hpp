#pragma once

#include <iosfwd>

#include "worldtraj/errors.hpp"

namespace worldtraj::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitIo = 3,
  kExitPipeline = 4,
  kExitDegenerate = 5,  ///< alignment impossible; velocimeter-only fallback written
  kExitEmptyCorpus = 6,
};

int exit_code_for(ErrorKind kind);

/// Entry point of the `worldtraj` tool. Subcommands: simulate, run, eval,
/// train-mv, make-corpus, export. Honors WORLDTRAJ_OUTPUT_ROOT (base for
/// relative output paths) and WORLDTRAJ_SEED (default seed).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace worldtraj::cli
