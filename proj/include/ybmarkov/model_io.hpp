#pragma once

// Model files.
//
//   # comment
//   N = 3
//   L = 3                     # optional, the CLI can supply it
//   lyubashenko = (0 1 2)     # or:  twist = (0 2)(1)
//   family {                  # or:  g = [...]  f = [...] at top level
//     g = [(0 2), (), (0 2)]
//     f = [(0 2), [0,1,2], "(0 2)(1)"]
//   }
//
// Keys take '=' or ':'. Items are separated by whitespace, newlines or ';'.
// Permutations are cycle notation, one-line "[2,1,0]" or a quoted string of
// either. A twist may accompany any bulk model; without one, the model is
// untwisted.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ybmarkov/markov.hpp"
#include "ybmarkov/permutation.hpp"
#include "ybmarkov/yang_baxter.hpp"

namespace ybmarkov {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct ModelSpec {
  enum class Kind { TwistedSsep, Lyubashenko, Family };

  int n = 0;
  std::optional<int> L;
  Kind kind = Kind::TwistedSsep;
  std::optional<Permutation> g;
  std::optional<SolutionFamily> family;
  std::optional<Permutation> twist;

  /// Swap, Lyubashenko or family map.
  TwoSiteMap bulk_map() const;
  /// Twisted generator on L sites (the spec's L when omitted). Throws
  /// std::domain_error when the bulk map is not involutive and braided, and
  /// std::invalid_argument when no length is known.
  RateMatrix generator(std::optional<int> length = std::nullopt) const;
  int length(std::optional<int> override_length = std::nullopt) const;
  std::string kind_name() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Throws ParseError with the position of the offending token, including
/// semantic errors such as invalid permutations or non-bijective families.
ModelSpec parse_model(std::string_view text);
ModelSpec load_model_file(const std::string& path);

/// Canonical text that parses back to the same spec.
std::string format_model(const ModelSpec& spec);

}  // namespace ybmarkov
