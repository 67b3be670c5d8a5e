#include "branchsat/cli.hpp"

int main(int argc, char** argv) { return branchsat::cli_main(argc, argv); }
