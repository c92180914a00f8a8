#include "dbn/vbn.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dbn {

namespace {

void check_nodes(int nodes) {
  if (nodes < 1 || nodes > kMaxNodes) {
    throw std::domain_error("node count must be in 1.." + std::to_string(kMaxNodes) +
                            ", got " + std::to_string(nodes));
  }
}

int nodes_for_size(std::size_t size) {
  for (int mu = 1; mu <= kMaxNodes; ++mu) {
    if (std::size_t{1} << mu == size) return mu;
  }
  throw std::invalid_argument("matrix size " + std::to_string(size) + " is not 2^mu");
}

}  // namespace

std::uint32_t state_count(int nodes) {
  check_nodes(nodes);
  return std::uint32_t{1} << nodes;
}

std::uint64_t rule_count(int nodes) {
  return std::uint64_t{1} << state_count(nodes);
}

std::uint64_t rule_vector_count(int nodes) {
  const std::uint64_t per_node = rule_count(nodes);
  std::uint64_t total = 1;
  for (int i = 0; i < nodes; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / per_node) {
      throw std::overflow_error("rule-vector count does not fit in 64 bits");
    }
    total *= per_node;
  }
  return total;
}

// ---------------------------------------------------------------------------
// State

State::State(int nodes, std::uint32_t ordinal) : ordinal_(ordinal), nodes_(nodes) {
  if (ordinal >= state_count(nodes)) {
    throw std::domain_error("state ordinal out of range");
  }
}

State State::from_bits(std::span<const int> bits) {
  const int nodes = static_cast<int>(bits.size());
  check_nodes(nodes);
  std::uint32_t ordinal = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::domain_error("state components must be 0 or 1");
    ordinal = (ordinal << 1) | static_cast<std::uint32_t>(b);
  }
  return State(nodes, ordinal);
}

State State::from_bits(std::initializer_list<int> bits) {
  return from_bits(std::span<const int>(bits.begin(), bits.size()));
}

int State::bit(int node) const {
  if (node < 1 || node > nodes_) throw std::domain_error("node id out of range");
  return static_cast<int>((ordinal_ >> (nodes_ - node)) & 1U);
}

State State::flipped(int node) const {
  if (node < 1 || node > nodes_) throw std::domain_error("node id out of range");
  return State(nodes_, ordinal_ ^ (1U << (nodes_ - node)));
}

std::vector<int> State::bits() const {
  std::vector<int> out(static_cast<std::size_t>(nodes_));
  for (int i = 1; i <= nodes_; ++i) out[static_cast<std::size_t>(i - 1)] = bit(i);
  return out;
}

std::string State::to_string() const {
  std::string out = "(";
  for (int i = 1; i <= nodes_; ++i) {
    if (i > 1) out += ',';
    out += static_cast<char>('0' + bit(i));
  }
  out += ')';
  return out;
}

StateIndex state_index(const State& s) { return StateIndex{s.ordinal() + 1}; }

State state_from_index(int nodes, StateIndex index) {
  if (index.value < 1 || index.value > state_count(nodes)) {
    throw std::domain_error("state index out of range");
  }
  return State(nodes, index.value - 1);
}

// ---------------------------------------------------------------------------
// BooleanMatrix

BooleanMatrix::BooleanMatrix(int nodes, std::vector<std::uint32_t> targets)
    : targets_(std::move(targets)), nodes_(nodes) {
  const std::uint32_t n = state_count(nodes);
  if (targets_.size() != n) throw std::invalid_argument("row count must be 2^mu");
  for (std::uint32_t t : targets_) {
    if (t >= n) throw std::invalid_argument("transition target out of range");
  }
}

BooleanMatrix BooleanMatrix::identity(int nodes) {
  std::vector<std::uint32_t> t(state_count(nodes));
  for (std::uint32_t i = 0; i < t.size(); ++i) t[i] = i;
  return BooleanMatrix(nodes, std::move(t));
}

BooleanMatrix BooleanMatrix::from_dense(const std::vector<std::vector<int>>& rows) {
  const int nodes = nodes_for_size(rows.size());
  std::vector<std::uint32_t> targets(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix is not square");
    int ones = 0;
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      const int v = rows[i][j];
      if (v != 0 && v != 1) throw std::invalid_argument("matrix entries must be 0 or 1");
      if (v == 1) {
        ++ones;
        targets[i] = static_cast<std::uint32_t>(j);
      }
    }
    if (ones != 1) {
      throw std::invalid_argument("row " + std::to_string(i + 1) +
                                  " does not contain exactly one 1");
    }
  }
  return BooleanMatrix(nodes, std::move(targets));
}

BooleanMatrix BooleanMatrix::parse(std::string_view text) {
  std::vector<std::vector<int>> rows(1);
  for (char c : text) {
    if (c == '/') {
      rows.emplace_back();
    } else if (c == '0' || c == '1') {
      rows.back().push_back(c - '0');
    } else if (c != ' ') {
      throw std::invalid_argument("unexpected character in matrix text");
    }
  }
  return from_dense(rows);
}

std::vector<std::vector<int>> BooleanMatrix::dense() const {
  std::vector<std::vector<int>> rows(size(), std::vector<int>(size(), 0));
  for (std::uint32_t i = 0; i < size(); ++i) rows[i][targets_[i]] = 1;
  return rows;
}

std::uint32_t BooleanMatrix::fixed_point_count() const {
  std::uint32_t count = 0;
  for (std::uint32_t i = 0; i < size(); ++i) count += targets_[i] == i ? 1 : 0;
  return count;
}

std::string BooleanMatrix::to_string() const {
  std::string out;
  for (std::uint32_t i = 0; i < size(); ++i) {
    if (i > 0) out += '/';
    for (std::uint32_t j = 0; j < size(); ++j) out += targets_[i] == j ? '1' : '0';
  }
  return out;
}

BooleanMatrix multiply(const BooleanMatrix& a, const BooleanMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("matrix sizes differ");
  std::vector<std::uint32_t> t(a.size());
  for (std::uint32_t i = 0; i < a.size(); ++i) t[i] = b.target(a.target(i));
  return BooleanMatrix(a.nodes(), std::move(t));
}

// ---------------------------------------------------------------------------
// Rules

SingleNodeRule::SingleNodeRule(int nodes, std::uint64_t number) : number_(number), nodes_(nodes) {
  if (number < 1 || number > rule_count(nodes)) {
    throw std::domain_error("rule number " + std::to_string(number) + " out of range 1.." +
                            std::to_string(rule_count(nodes)));
  }
}

int rule_output(const SingleNodeRule& r, const State& s) {
  if (r.nodes() != s.nodes()) throw std::domain_error("rule and state node counts differ");
  return r.output(s.ordinal());
}

RuleVector::RuleVector(std::initializer_list<std::uint64_t> numbers)
    : RuleVector(static_cast<int>(numbers.size()),
                 std::span<const std::uint64_t>(numbers.begin(), numbers.size())) {}

RuleVector::RuleVector(int nodes, std::span<const std::uint64_t> numbers) {
  if (static_cast<int>(numbers.size()) != nodes) {
    throw std::domain_error("rule vector length must equal the node count");
  }
  rules.reserve(numbers.size());
  for (std::uint64_t n : numbers) rules.emplace_back(nodes, n);
}

std::vector<std::uint64_t> RuleVector::numbers() const {
  std::vector<std::uint64_t> out;
  out.reserve(rules.size());
  for (const auto& r : rules) out.push_back(r.number());
  return out;
}

std::string RuleVector::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(rules[i].number());
  }
  out += ')';
  return out;
}

BooleanMatrix matrix_from_rule_vector(const RuleVector& rv) {
  const int mu = rv.nodes();
  const std::uint32_t n = state_count(mu);
  for (const auto& r : rv.rules) {
    if (r.nodes() != mu) throw std::domain_error("rule node count differs from vector length");
  }
  std::vector<std::uint32_t> targets(n);
  for (std::uint32_t s = 0; s < n; ++s) {
    std::uint32_t y = 0;
    for (int i = 0; i < mu; ++i) y = (y << 1) | static_cast<std::uint32_t>(rv.rules[i].output(s));
    targets[s] = y;
  }
  return BooleanMatrix(mu, std::move(targets));
}

RuleVector rule_vector_from_matrix(const BooleanMatrix& t) {
  const int mu = t.nodes();
  std::vector<SingleNodeRule> rules;
  rules.reserve(static_cast<std::size_t>(mu));
  for (int node = 1; node <= mu; ++node) {
    std::uint64_t table = 0;
    for (std::uint32_t s = 0; s < t.size(); ++s) {
      table |= static_cast<std::uint64_t>((t.target(s) >> (mu - node)) & 1U) << s;
    }
    rules.emplace_back(mu, table + 1);
  }
  return RuleVector(std::move(rules));
}

std::uint64_t rule_vector_code(const RuleVector& rv) {
  const std::uint64_t radix = rule_count(rv.nodes());
  rule_vector_count(rv.nodes());  // overflow guard
  std::uint64_t code = 0;
  for (const auto& r : rv.rules) code = code * radix + r.table();
  return code;
}

std::uint64_t rule_vector_code(const BooleanMatrix& t) {
  const int mu = t.nodes();
  const std::uint32_t n = t.size();
  if (static_cast<std::uint64_t>(mu) * n >= 64) {
    throw std::overflow_error("rule-vector code does not fit in 64 bits");
  }
  std::uint64_t code = 0;
  for (int node = 1; node <= mu; ++node) {
    std::uint64_t table = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
      table |= static_cast<std::uint64_t>((t.target(s) >> (mu - node)) & 1U) << s;
    }
    code = (code << n) | table;
  }
  return code;
}

RuleVector rule_vector_from_code(int nodes, std::uint64_t code) {
  if (code >= rule_vector_count(nodes)) throw std::domain_error("rule-vector code out of range");
  const std::uint64_t radix = rule_count(nodes);
  std::vector<std::uint64_t> numbers(static_cast<std::size_t>(nodes));
  for (int i = nodes - 1; i >= 0; --i) {
    numbers[static_cast<std::size_t>(i)] = code % radix + 1;
    code /= radix;
  }
  return RuleVector(nodes, numbers);
}

std::vector<int> virtual_incoming_nodes(const SingleNodeRule& r) {
  const int mu = r.nodes();
  const std::uint32_t n = state_count(mu);
  std::vector<int> out;
  for (int node = 1; node <= mu; ++node) {
    const std::uint32_t mask = 1U << (mu - node);
    for (std::uint32_t s = 0; s < n; ++s) {
      if (r.output(s) != r.output(s ^ mask)) {
        out.push_back(node);
        break;
      }
    }
  }
  return out;
}

std::optional<std::vector<int>> linear_mask(const SingleNodeRule& r) {
  const int mu = r.nodes();
  const std::uint32_t n = state_count(mu);
  // A linear rule is determined by its outputs on the unit vectors.
  std::vector<int> v(static_cast<std::size_t>(mu));
  std::uint32_t mask = 0;
  for (int node = 1; node <= mu; ++node) {
    const int bit = r.output(1U << (mu - node));
    v[static_cast<std::size_t>(node - 1)] = bit;
    if (bit) mask |= 1U << (mu - node);
  }
  for (std::uint32_t s = 0; s < n; ++s) {
    const int expected = __builtin_popcount(s & mask) & 1;
    if (r.output(s) != expected) return std::nullopt;
  }
  return v;
}

SingleNodeRule negate_rule(const SingleNodeRule& r) {
  return SingleNodeRule(r.nodes(), rule_count(r.nodes()) + 1 - r.number());
}

// ---------------------------------------------------------------------------
// Attractors

std::vector<std::size_t> AttractorDecomposition::cycle_lengths() const {
  std::vector<std::size_t> out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) out.push_back(c.size());
  return out;
}

std::vector<std::size_t> AttractorDecomposition::basin_sizes() const {
  std::vector<std::size_t> out(cycles.size(), 0);
  for (std::size_t id : basin) ++out[id];
  return out;
}

AttractorDecomposition attractors(const BooleanMatrix& t) {
  const std::uint32_t n = t.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  AttractorDecomposition out;
  out.basin.assign(n, kUnset);

  // Cycle members: iterate n steps from every state, which always lands on a cycle.
  std::vector<bool> on_cycle(n, false);
  for (std::uint32_t s = 0; s < n; ++s) {
    std::uint32_t x = s;
    for (std::uint32_t i = 0; i < n; ++i) x = t.target(x);
    on_cycle[x] = true;
  }
  std::vector<bool> seen(n, false);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (!on_cycle[s] || seen[s]) continue;
    std::vector<std::uint32_t> cycle;
    std::uint32_t x = s;
    do {
      seen[x] = true;
      cycle.push_back(x);
      x = t.target(x);
    } while (x != s);
    const std::size_t id = out.cycles.size();
    for (std::uint32_t m : cycle) out.basin[m] = id;
    out.cycles.push_back(std::move(cycle));
  }
  for (std::uint32_t s = 0; s < n; ++s) {
    std::uint32_t x = s;
    while (out.basin[x] == kUnset) x = t.target(x);
    out.basin[s] = out.basin[x];
  }
  return out;
}

// ---------------------------------------------------------------------------
// BN -> VBN embedding

SingleNodeRule embed_rule(int nodes, const BnNode& node) {
  const std::uint32_t n = state_count(nodes);
  std::vector<int> incoming = node.incoming;
  for (int w : incoming) {
    if (w < 1 || w > nodes) throw std::domain_error("incoming node id out of range");
  }
  if (std::adjacent_find(incoming.begin(), incoming.end(),
                         [](int a, int b) { return a >= b; }) != incoming.end()) {
    throw std::domain_error("incoming nodes must be strictly increasing");
  }
  if (node.table.size() != (std::size_t{1} << incoming.size())) {
    throw std::domain_error("local table must have 2^|W(i)| entries");
  }
  for (int v : node.table) {
    if (v != 0 && v != 1) throw std::domain_error("local table entries must be 0 or 1");
  }
  std::uint64_t table = 0;
  for (std::uint32_t s = 0; s < n; ++s) {
    const State x(nodes, s);
    std::size_t local = 0;
    for (int w : incoming) local = (local << 1) | static_cast<std::size_t>(x.bit(w));
    table |= static_cast<std::uint64_t>(node.table[local]) << s;
  }
  return SingleNodeRule(nodes, table + 1);
}

RuleVector embed_bn(const BnSpec& bn) {
  check_nodes(bn.nodes);
  if (static_cast<int>(bn.node.size()) != bn.nodes) {
    throw std::domain_error("BN must specify one local rule per node");
  }
  std::vector<SingleNodeRule> rules;
  for (const auto& node : bn.node) rules.push_back(embed_rule(bn.nodes, node));
  return RuleVector(std::move(rules));
}

std::string rule_table_csv(int nodes) {
  check_nodes(nodes);
  if (nodes > 3) {
    throw std::domain_error("rule table for mu > 3 has 2^(2^mu) columns; refusing");
  }
  const std::uint32_t n = state_count(nodes);
  const std::uint64_t rules = rule_count(nodes);
  std::ostringstream out;
  out << "input";
  for (std::uint64_t r = 1; r <= rules; ++r) out << ',' << r;
  out << '\n';
  for (std::uint32_t s = 0; s < n; ++s) {
    out << '"' << State(nodes, s).to_string() << '"';
    for (std::uint64_t r = 1; r <= rules; ++r) out << ',' << SingleNodeRule(nodes, r).output(s);
    out << '\n';
  }
  out << 'n';
  for (std::uint64_t r = 1; r <= rules; ++r) {
    out << ',' << virtual_incoming_nodes(SingleNodeRule(nodes, r)).size();
  }
  out << '\n';
  return out.str();
}

}  // namespace dbn
