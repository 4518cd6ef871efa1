#pragma once

#include <iosfwd>
#include <optional>

namespace elscat::cli {

// Runs the invariant suites and prints suite,status,value,tolerance rows.
// corrupt_mode perturbs W_n of the operator checked by the dtn-modes suite.
// Returns true when every suite passes.
bool run_validation(std::ostream& os, std::optional<int> corrupt_mode);

}  // namespace elscat::cli
