#pragma once

namespace branchsat {

/// Entry point for the `branchsat` command line tool. Exit codes:
/// 0 full coverage, 2 coverage incomplete, 1 usage or frontend error.
int cli_main(int argc, char** argv);

}  // namespace branchsat
