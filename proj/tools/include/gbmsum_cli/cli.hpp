#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gbmsum::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_error = 1,
    exit_infeasible = 2,
    exit_nonconvergence = 3,
    exit_accuracy = 4,
};

// args excludes the program name. Output files go to --out, else $GBMSUM_OUTPUT_DIR, else ".".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gbmsum::cli
