#pragma once

// Replays of the worked example with forced random decisions.

#include <optional>
#include <string>
#include <vector>

#include "dbn/engine.hpp"

namespace dbn {

struct GoldenCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // first mismatch, empty on success
};

/// The reference rule table: header, four state rows and the n row, in the
/// rule_table_csv layout.
const std::string& reference_rule_table();

/// Decisions that make init_engine reproduce Xi_1, T_1, the anchor and S_0
/// of the worked example.
std::vector<std::size_t> worked_example_init_script();
/// Decisions that make one advance reproduce the worked pass. With type 4
/// the last decision picks the 3-cycle (1 4 2).
std::vector<std::size_t> worked_example_advance_script(Strategy s);

/// Every golden check. A reference rule table other than the built-in one can be
/// supplied (CSV text) to compare the generated table against.
std::vector<GoldenCheck> run_golden_checks(const std::optional<std::string>& rule_table_reference = std::nullopt);

}  // namespace dbn
