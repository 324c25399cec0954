#pragma once

// Command dispatch for the phimod binary.  run() is pure apart from reading
// the input file, so it can be driven in-process by tests.

#include <cstdint>
#include <optional>
#include <string>

namespace phimod {

enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 1,    // Inadmissible, non-member, predicted false, failing example
  kExitUndecided = 2,
  kExitParse = 3,       // malformed JSON, unknown field, bad command line
  kExitValidation = 4,  // well-formed input violating an invariant
  kExitMath = 5,        // unsupported or ill-posed computation
  kExitAnomaly = 6,     // predicted witness not found, sweep anomaly
};

struct JobSpec {
  std::string command;
  std::string input;  // path, "-" for stdin, or inline JSON starting with '{'
  bool json = false;
  std::uint64_t seed = 0;
  std::uint64_t budget = 64;
  bool closed = true;
  std::optional<int> d, e, f;
  int grid = 4;             // max denominator of sweep valuations
  std::size_t cells = 200;  // minimum sweep cells
  unsigned threads = 0;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string out;
  std::string err;
};

RunResult run(const JobSpec& job);

}  // namespace phimod
