#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "oldreg/grid.hpp"
#include "oldreg/params.hpp"

// Plain-text scenario files: one `section.key = value` assignment per line,
// `#` comments, later assignments win.  Unknown keys are errors (typo guard),
// and every diagnostic carries the offending line number.

namespace oldreg {

enum class InitKind { Zero, TaylorGreen, File, Random };
enum class CaptureField { Speed, GradVNorm, T11, T12, T22 };

struct Scenario {
  Grid grid{64, 64, 1.0, 1.0};
  FluidParams params;

  InitKind init = InitKind::Zero;
  double init_amplitude = 1.0;       // velocity scale for taylor-green / random
  SymTensor2 init_stress;            // constant stress offset added at t = 0
  std::string init_file;             // checkpoint path for init = file

  int record_interval = 1;           // steps between diagnostic records
  bool capture = false;              // write a checkpoint trajectory
  CaptureField capture_field = CaptureField::Speed;
  std::string out_dir = "out";
  std::uint64_t seed = 0;

  bool admissible = true;            // exponent pair inside the analysis range
  std::string warning;               // non-fatal validation notes
};

struct ScenarioError : std::runtime_error {
  int line;  // 0 when not tied to a specific line
  ScenarioError(int line_, const std::string& msg)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
        line(line_) {}
};

// Parse + validate scenario text.  Throws ScenarioError on malformed lines,
// unknown keys, or invariant violations; inadmissible exponent pairs only
// set `admissible = false` and fill `warning`.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace oldreg
