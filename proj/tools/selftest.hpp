#pragma once

#include <string>
#include <vector>

namespace vilenkin::cli {

struct SelfCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The closed-form identities (empty products, orthonormality, kernel masses,
/// degenerate norms) evaluated as assertions.
std::vector<SelfCheck> run_selftest();

}  // namespace vilenkin::cli
