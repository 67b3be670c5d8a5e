// Shared helpers for the test binaries.
#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "branchsat/parser.hpp"
#include "branchsat/typecheck.hpp"

namespace testutil {

inline std::string repo_root() {
  const char* root = std::getenv("BRANCHSAT_ROOT");
  return root ? root : ".";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::shared_ptr<const branchsat::TypedProgram> compile(
    const std::string& source, const std::string& entry) {
  return branchsat::typecheck(branchsat::parse(source), entry);
}

inline std::shared_ptr<const branchsat::TypedProgram> compile_benchmark(
    const std::string& name, const std::string& entry) {
  return compile(read_file(repo_root() + "/benchmarks/" + name), entry);
}

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

/// Runs the installed CLI binary with the given arguments.
inline CommandResult run_cli(const std::string& args) {
  const char* bin = std::getenv("BRANCHSAT_CLI");
  if (!bin) throw std::runtime_error("BRANCHSAT_CLI not set");
  std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  CommandResult res;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    res.output.append(buf.data(), n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace testutil
