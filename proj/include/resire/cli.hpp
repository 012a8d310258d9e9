#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace resire {

/// Exit codes of the batch CLI.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitDivergence = 3,
};

/// Runs one CLI invocation. `args` excludes the program name.
///
///   simulate    --phantom <preset> [--tilt start,end,step] [--noise frac] [--seed n] --out <dir>
///   reconstruct --algo {resire,sirt,fbp} --stack <mrc> --angles <tlt> --dims X,Y,Z
///               [--iters K] [--step t] [--oversample r] [--positivity] [--rfactor-target x] --out <dir>
///   evaluate    --recon <mrc> --truth <mrc> --stack <mrc> --angles <tlt> --out <dir>
///   compare     --dir <dir>
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace resire
