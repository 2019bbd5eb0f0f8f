#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ybmarkov {

/// Outcome of an exhaustive identity check. Failures are data: every
/// violation is counted, and the first `cap` are kept as readable witnesses.
struct CheckReport {
  std::string name;
  std::size_t checked = 0;
  std::size_t violation_count = 0;
  std::vector<std::string> violations;
  std::size_t cap = 100;

  bool passed() const { return violation_count == 0; }

  void record(std::string witness) {
    ++violation_count;
    if (violations.size() < cap) violations.push_back(std::move(witness));
  }

  /// Folds another report in, keeping the witness cap.
  void absorb(const CheckReport& other) {
    checked += other.checked;
    violation_count += other.violation_count;
    for (const auto& v : other.violations) {
      if (violations.size() >= cap) break;
      violations.push_back(other.name.empty() ? v : other.name + ": " + v);
    }
  }
};

inline constexpr std::size_t kDefaultViolationCap = 100;

}  // namespace ybmarkov
