#pragma once

#include <string>
#include <vector>

namespace qtree {

struct SuiteResult {
  std::string name;
  int samples = 0;
  double max_residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::string note;
};

// Runs every identity suite over fixed trees and sample points.
std::vector<SuiteResult> run_identity_suites();

} // namespace qtree
