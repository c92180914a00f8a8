#pragma once

// Virtual Boolean Networks: global states, Boolean transition matrices and the
// single-node rule algebra that connects the two.
//
// Conventions used throughout the library:
//   * a state of a mu-node network is a bit vector (x_1, ..., x_mu);
//   * states are ranked lexicographically with x_1 as the most significant
//     bit, the 1-based rank being the StateIndex ((0,0) -> 1, (1,1) -> 4);
//   * a single-node rule is numbered 1 + sum_s output(s) * 2^(index(s) - 1),
//     which for two nodes reproduces the usual 16-column rule table.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dbn {

/// Largest node count supported; keeps the rule count 2^(2^mu) inside 64 bits.
inline constexpr int kMaxNodes = 5;

/// Number of global states, 2^mu.
std::uint32_t state_count(int nodes);

/// Number of single-node rules, 2^(2^mu).
std::uint64_t rule_count(int nodes);

/// Number of rule vectors, (2^(2^mu))^mu. Throws std::overflow_error when it
/// does not fit in 64 bits.
std::uint64_t rule_vector_count(int nodes);

/// A global state. Stored as its 0-based lexicographic ordinal.
class State {
 public:
  State() = default;
  State(int nodes, std::uint32_t ordinal);

  static State from_bits(std::span<const int> bits);
  static State from_bits(std::initializer_list<int> bits);

  int nodes() const { return nodes_; }
  std::uint32_t ordinal() const { return ordinal_; }

  /// Internal state of node `node` (1-based).
  int bit(int node) const;
  State flipped(int node) const;
  std::vector<int> bits() const;

  /// "(0,1)"
  std::string to_string() const;

  auto operator<=>(const State&) const = default;

 private:
  std::uint32_t ordinal_ = 0;
  int nodes_ = 1;
};

/// 1-based lexicographic rank of a state.
struct StateIndex {
  std::uint32_t value = 1;
  auto operator<=>(const StateIndex&) const = default;
};

StateIndex state_index(const State& s);
State state_from_index(int nodes, StateIndex index);

/// A 2^mu x 2^mu 0/1 matrix with exactly one 1 per row, stored as the column
/// of the 1 in every row.
class BooleanMatrix {
 public:
  BooleanMatrix() = default;
  /// `targets[i]` is the 0-based column of the 1 in row i.
  BooleanMatrix(int nodes, std::vector<std::uint32_t> targets);

  static BooleanMatrix identity(int nodes);
  /// Validates a dense 0/1 matrix; throws std::invalid_argument unless it is
  /// square with a power-of-two size and exactly one 1 per row.
  static BooleanMatrix from_dense(const std::vector<std::vector<int>>& rows);
  /// Parses "0100/0100/0001/1000".
  static BooleanMatrix parse(std::string_view text);

  int nodes() const { return nodes_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(targets_.size()); }
  std::uint32_t target(std::uint32_t row) const { return targets_[row]; }
  const std::vector<std::uint32_t>& targets() const { return targets_; }
  int entry(std::uint32_t row, std::uint32_t col) const { return targets_[row] == col ? 1 : 0; }
  State apply(const State& s) const { return State(nodes_, targets_[s.ordinal()]); }

  std::vector<std::vector<int>> dense() const;
  std::uint32_t fixed_point_count() const;

  /// Rows joined by '/', e.g. "1000/0010/0100/0001".
  std::string to_string() const;

  bool operator==(const BooleanMatrix&) const = default;

 private:
  std::vector<std::uint32_t> targets_;
  int nodes_ = 0;
};

/// Boolean product of two Boolean matrices of equal size.
BooleanMatrix multiply(const BooleanMatrix& a, const BooleanMatrix& b);

/// One node's transition rule over all 2^mu global states.
class SingleNodeRule {
 public:
  /// Throws std::domain_error unless 1 <= number <= 2^(2^mu).
  SingleNodeRule(int nodes, std::uint64_t number);

  int nodes() const { return nodes_; }
  std::uint64_t number() const { return number_; }
  /// Output bits packed by state ordinal.
  std::uint64_t table() const { return number_ - 1; }
  int output(std::uint32_t ordinal) const { return static_cast<int>((table() >> ordinal) & 1U); }

  auto operator<=>(const SingleNodeRule&) const = default;

 private:
  std::uint64_t number_ = 1;
  int nodes_ = 1;
};

/// Output of `r` on input `s`; throws std::domain_error if the node counts differ.
int rule_output(const SingleNodeRule& r, const State& s);

/// Per-node rules (f_1, ..., f_mu).
struct RuleVector {
  std::vector<SingleNodeRule> rules;

  RuleVector() = default;
  explicit RuleVector(std::vector<SingleNodeRule> r) : rules(std::move(r)) {}
  /// Rule numbers for a network with `numbers.size()` nodes.
  RuleVector(std::initializer_list<std::uint64_t> numbers);
  RuleVector(int nodes, std::span<const std::uint64_t> numbers);

  int nodes() const { return static_cast<int>(rules.size()); }
  std::vector<std::uint64_t> numbers() const;
  /// "(5,8)"
  std::string to_string() const;

  bool operator==(const RuleVector&) const = default;
};

BooleanMatrix matrix_from_rule_vector(const RuleVector& rv);
RuleVector rule_vector_from_matrix(const BooleanMatrix& t);

/// Dense code of a rule vector: sum_i (f_i - 1) * R^(mu - i), R = 2^(2^mu).
/// For two nodes this is (f_1 - 1) * 16 + (f_2 - 1), the row-major position in
/// the 16x16 rule-vector grid.
std::uint64_t rule_vector_code(const RuleVector& rv);
std::uint64_t rule_vector_code(const BooleanMatrix& t);
RuleVector rule_vector_from_code(int nodes, std::uint64_t code);

/// Nodes (1-based) whose flip can change the rule's output.
std::vector<int> virtual_incoming_nodes(const SingleNodeRule& r);

/// Mask v with F(x) = x.v mod 2, if the rule is linear.
std::optional<std::vector<int>> linear_mask(const SingleNodeRule& r);

/// Pointwise complement; equals 2^(2^mu) + 1 - r.
SingleNodeRule negate_rule(const SingleNodeRule& r);

struct AttractorDecomposition {
  /// Each cycle lists state ordinals starting from its smallest member, in
  /// the order the map visits them. Cycles are sorted by first member.
  std::vector<std::vector<std::uint32_t>> cycles;
  /// Cycle id for every state ordinal.
  std::vector<std::size_t> basin;

  std::vector<std::size_t> cycle_lengths() const;
  std::vector<std::size_t> basin_sizes() const;
};

AttractorDecomposition attractors(const BooleanMatrix& t);

/// One node of an ordinary Boolean network: the incoming node set W(i) and
/// its local output table over Hom(W(i), 2), in lexicographic input order
/// with the first listed incoming node most significant.
struct BnNode {
  std::vector<int> incoming;
  std::vector<int> table;
};

struct BnSpec {
  int nodes = 0;
  std::vector<BnNode> node;
};

/// Extends every local rule to all of V with the nodes outside W(i) virtually
/// disconnected. Throws std::domain_error on a malformed node.
RuleVector embed_bn(const BnSpec& bn);

/// Single-rule embedding used by embed_bn.
SingleNodeRule embed_rule(int nodes, const BnNode& node);

/// Rule table as CSV: one row per input state, one column per rule, then the
/// row of virtual-incoming-node counts. Refuses mu > 3.
std::string rule_table_csv(int nodes);

}  // namespace dbn
