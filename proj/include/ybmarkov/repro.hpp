#pragma once

// The reproduction harness: every acceptance check of the library in one
// table.

#include <string>
#include <vector>

#include "ybmarkov/types.hpp"

namespace ybmarkov {

struct ReproCheck {
  std::string id;           // "AC1" ...
  std::string description;
  std::string expected;
  std::string computed;
  /// Where the expected value comes from: "published" (a number stated for
  /// the model), "closed-form", "brute-force" or "identity".
  std::string source;
  bool passed = false;
  double seconds = 0;
  /// Runtime budget in seconds, 0 for none.
  double budget = 0;
};

struct ReproReport {
  std::vector<ReproCheck> checks;
  bool all_passed() const;
};

struct ReproOptions {
  Limits limits;
  unsigned threads = 1;
  double tol = 1e-12;
};

ReproReport run_repro_suite(const ReproOptions& options = {});

}  // namespace ybmarkov
