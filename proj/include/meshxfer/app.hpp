#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mxf {

/// Command-line front end. args excludes the program name. Returns 0 on
/// success, 1 on usage errors, 2 on runtime errors. All prints go to the
/// given streams as machine-readable key=value lines.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

/// Deterministic decay stepper u_{n+1} = u_n * (1 - lambda*dt) driven
/// through a TimeHistory and a RestartRegistry: runs the full horizon in
/// one piece and as two halves split by serialize/restart, then compares.
/// Shared between the checkpoint-demo subcommand and the acceptance suite.
struct CheckpointDemoReport {
  bool resume_equal = false;      ///< split == continuous, bit for bit
  bool files_identical = false;   ///< both runs wrote the same checkpoint bytes
  bool closed_form_ok = false;    ///< matches u0*(1-lambda*dt)^n
  std::int64_t steps = 0;
  std::int64_t restart_step = 0;
  std::string checkpoint_file;

  bool pass() const { return resume_equal && files_identical && closed_form_ok; }
};

CheckpointDemoReport run_checkpoint_demo(std::size_t vector_size,
                                         double lambda, double dt,
                                         std::int64_t steps,
                                         std::int64_t serialize_every,
                                         std::int64_t restart_step,
                                         const std::string &basename);

} // namespace mxf
