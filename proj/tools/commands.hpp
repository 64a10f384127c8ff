#pragma once

#include <ostream>

#include "run_config.hpp"

namespace wavebranch::cli {

enum ExitCode { kOk = 0, kValidation = 2, kSolverFailure = 3, kUnconverged = 4 };

/// CSV writer with full double precision.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<const char*> header);
  CsvWriter& operator<<(double v);
  void end_row();

 private:
  std::ostream& out_;
  bool first_ = true;
};

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& log);
int cmd_field(const RunConfig& c, std::ostream& out, std::ostream& log);
int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& log);
int cmd_smatrix(const RunConfig& c, std::ostream& out, std::ostream& log);
int cmd_asy(const RunConfig& c, std::ostream& out, std::ostream& log);
int cmd_design(const RunConfig& c, std::ostream& out, std::ostream& log);

/// Validate and dispatch on c.command; maps module exceptions to exit codes.
int run(const RunConfig& c, std::ostream& out, std::ostream& log);

}  // namespace wavebranch::cli
