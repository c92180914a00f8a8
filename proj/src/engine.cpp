#include "dbn/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace dbn {

Permutation::Permutation(std::vector<std::uint32_t> image) : image_(std::move(image)) {
  std::vector<bool> hit(image_.size(), false);
  for (std::uint32_t v : image_) {
    if (v >= image_.size() || hit[v]) throw std::domain_error("permutation is not a bijection");
    hit[v] = true;
  }
}

Permutation Permutation::identity(std::uint32_t size) {
  std::vector<std::uint32_t> image(size);
  for (std::uint32_t i = 0; i < size; ++i) image[i] = i;
  return Permutation(std::move(image));
}

Permutation Permutation::from_cycles(std::uint32_t size,
                                     std::initializer_list<std::initializer_list<std::uint32_t>> cycles) {
  std::vector<std::vector<std::uint32_t>> c;
  for (const auto& cycle : cycles) c.emplace_back(cycle);
  return from_cycles(size, c);
}

Permutation Permutation::from_cycles(std::uint32_t size, const std::vector<std::vector<std::uint32_t>>& cycles) {
  std::vector<std::uint32_t> image(size);
  for (std::uint32_t i = 0; i < size; ++i) image[i] = i;
  std::vector<bool> seen(size, false);
  for (const auto& cycle : cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const std::uint32_t from = cycle[i];
      const std::uint32_t to = cycle[(i + 1) % cycle.size()];
      if (from < 1 || from > size || to < 1 || to > size) throw std::domain_error("cycle entry out of range");
      if (seen[from - 1]) throw std::domain_error("cycles are not disjoint");
      seen[from - 1] = true;
      image[from - 1] = to - 1;
    }
  }
  return Permutation(std::move(image));
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> inv(image_.size());
  for (std::uint32_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (std::uint32_t i = 0; i < image_.size(); ++i) {
    if (image_[i] != i) return false;
  }
  return true;
}

std::string Permutation::to_string() const {
  std::string out;
  std::vector<bool> seen(image_.size(), false);
  for (std::uint32_t i = 0; i < image_.size(); ++i) {
    if (seen[i] || image_[i] == i) continue;
    out += '(';
    std::uint32_t x = i;
    bool first = true;
    do {
      if (!first) out += ' ';
      first = false;
      out += std::to_string(x + 1);
      seen[x] = true;
      x = image_[x];
    } while (x != i);
    out += ')';
  }
  return out.empty() ? "e" : out;
}

Permutation then(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw std::domain_error("permutation sizes differ");
  std::vector<std::uint32_t> image(p.size());
  for (std::uint32_t i = 0; i < p.size(); ++i) image[i] = q(p(i));
  return Permutation(std::move(image));
}

BooleanMatrix permutation_matrix(const Permutation& p) {
  int nodes = 0;
  while ((std::uint32_t{1} << nodes) < p.size()) ++nodes;
  return BooleanMatrix(nodes, p.image());
}

BooleanMatrix conjugate(const BooleanMatrix& t, const Permutation& p) {
  if (p.size() != t.size()) throw std::domain_error("permutation and matrix sizes differ");
  // T maps s -> t(s); the conjugate maps P(s) -> P(t(s)).
  std::vector<std::uint32_t> targets(t.size());
  for (std::uint32_t s = 0; s < t.size(); ++s) targets[p(s)] = p(t.target(s));
  return BooleanMatrix(t.nodes(), std::move(targets));
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::type1:
      return "1";
    case Strategy::type2:
      return "2";
    case Strategy::type3:
      return "3";
    case Strategy::type3_complement:
      return "3c";
    case Strategy::type4:
      return "4";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "1") return Strategy::type1;
  if (text == "2") return Strategy::type2;
  if (text == "3") return Strategy::type3;
  if (text == "3c") return Strategy::type3_complement;
  if (text == "4") return Strategy::type4;
  throw std::invalid_argument("unknown simulation type '" + std::string(text) + "' (expected 1, 2, 3, 3c or 4)");
}

const std::vector<Permutation>& type2_permutations() {
  static const std::vector<Permutation> perms = {
      Permutation::identity(4),
      Permutation::from_cycles(4, {{1, 2}}),
      Permutation::from_cycles(4, {{1, 3}}),
      Permutation::from_cycles(4, {{1, 4}}),
      Permutation::from_cycles(4, {{2, 3}}),
      Permutation::from_cycles(4, {{2, 4}}),
      Permutation::from_cycles(4, {{3, 4}}),
      Permutation::from_cycles(4, {{1, 2}, {3, 4}}),
      Permutation::from_cycles(4, {{1, 3}, {2, 4}}),
      Permutation::from_cycles(4, {{1, 4}, {2, 3}}),
  };
  return perms;
}

const std::vector<Permutation>& type3_complement_permutations() {
  static const std::vector<Permutation> perms = {
      Permutation::from_cycles(4, {{1, 2, 3}}),    Permutation::from_cycles(4, {{1, 2, 4}}),
      Permutation::from_cycles(4, {{1, 3, 2}}),    Permutation::from_cycles(4, {{1, 3, 4}}),
      Permutation::from_cycles(4, {{1, 4, 2}}),    Permutation::from_cycles(4, {{1, 4, 3}}),
      Permutation::from_cycles(4, {{2, 3, 4}}),    Permutation::from_cycles(4, {{2, 4, 3}}),
      Permutation::from_cycles(4, {{1, 2, 3, 4}}), Permutation::from_cycles(4, {{1, 2, 4, 3}}),
      Permutation::from_cycles(4, {{1, 3, 2, 4}}), Permutation::from_cycles(4, {{1, 3, 4, 2}}),
      Permutation::from_cycles(4, {{1, 4, 2, 3}}), Permutation::from_cycles(4, {{1, 4, 3, 2}}),
  };
  return perms;
}

Permutation build_type4_permutation(const LabelingFunction& xi, DecisionSource& rng) {
  const std::uint32_t n = xi.label_count();
  std::vector<std::uint32_t> image(n);
  for (std::uint32_t i = 0; i < n; ++i) image[i] = i;
  for (std::uint32_t label = 1; label <= n; ++label) {
    std::vector<std::uint32_t> members = xi.preimage(label);
    if (members.size() < 2) continue;
    std::uint32_t current = members.front();
    const std::uint32_t first = current;
    members.erase(members.begin());
    while (!members.empty()) {
      const std::size_t pick = rng.choose(members.size());
      image[current] = members[pick];
      current = members[pick];
      members.erase(members.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    image[current] = first;
  }
  return Permutation(std::move(image));
}

namespace {

void require_two_nodes(Strategy s, int nodes) {
  if ((s == Strategy::type2 || s == Strategy::type3_complement) && nodes != 2) {
    throw std::domain_error("simulation type " + std::string(to_string(s)) + " is defined only for two nodes");
  }
}

}  // namespace

Permutation draw_permutation(Strategy s, const LabelingFunction& xi, DecisionSource& rng) {
  const std::uint32_t n = xi.label_count();
  require_two_nodes(s, xi.nodes());
  switch (s) {
    case Strategy::type1:
      return Permutation::identity(n);
    case Strategy::type2: {
      const auto& set = type2_permutations();
      return set[rng.choose(set.size())];
    }
    case Strategy::type3: {
      std::vector<std::uint32_t> remaining(n), image(n);
      for (std::uint32_t i = 0; i < n; ++i) remaining[i] = i;
      for (std::uint32_t i = 0; i < n; ++i) {
        const std::size_t pick = rng.choose(remaining.size());
        image[i] = remaining[pick];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
      }
      return Permutation(std::move(image));
    }
    case Strategy::type3_complement: {
      const auto& set = type3_complement_permutations();
      return set[rng.choose(set.size())];
    }
    case Strategy::type4:
      return build_type4_permutation(xi, rng);
  }
  throw std::logic_error("unhandled strategy");
}

StateSequence trajectory(const BooleanMatrix& t, const State& start, std::size_t length) {
  if (start.nodes() != t.nodes()) throw std::domain_error("state and matrix node counts differ");
  StateSequence out;
  out.reserve(length);
  State s = start;
  for (std::size_t i = 0; i < length; ++i) {
    out.push_back(s);
    s = t.apply(s);
  }
  return out;
}

std::size_t default_sequence_length(int nodes) { return std::size_t{state_count(nodes)} + 1; }

namespace {

void check_length(int nodes, std::size_t length) {
  if (length < default_sequence_length(nodes)) {
    throw std::domain_error("sequence length must be at least 2^mu + 1 = " +
                            std::to_string(default_sequence_length(nodes)));
  }
}

}  // namespace

EngineState make_engine(const LabelingFunction& xi, const BooleanMatrix& t1, const State& anchor,
                        std::size_t length, Strategy strategy, StateSequence previous_states) {
  const int nodes = t1.nodes();
  check_length(nodes, length);
  require_two_nodes(strategy, nodes);
  if (xi.nodes() != nodes || anchor.nodes() != nodes) throw std::domain_error("node counts differ");
  if (previous_states.size() != length) throw std::domain_error("S_0 must have the sequence length");
  EngineState es;
  es.k = 1;
  es.strategy = strategy;
  es.labeling = xi;
  es.transition = t1;
  es.anchor = anchor;
  es.states = trajectory(t1, anchor, length);
  es.previous_states = std::move(previous_states);
  es.labels = apply_labels(xi, es.states);
  return es;
}

EngineState init_engine(int nodes, std::size_t length, Strategy strategy, DecisionSource& rng,
                        std::span<const BooleanMatrix> initial_whitelist) {
  const std::uint32_t n = state_count(nodes);
  check_length(nodes, length);
  require_two_nodes(strategy, nodes);

  std::vector<std::uint32_t> labels(n);
  for (auto& l : labels) l = static_cast<std::uint32_t>(rng.choose(n)) + 1;

  BooleanMatrix t1;
  if (initial_whitelist.empty()) {
    std::vector<std::uint32_t> targets(n);
    for (auto& t : targets) t = static_cast<std::uint32_t>(rng.choose(n));
    t1 = BooleanMatrix(nodes, std::move(targets));
  } else {
    t1 = initial_whitelist[rng.choose(initial_whitelist.size())];
    if (t1.nodes() != nodes) throw std::domain_error("whitelisted matrix has the wrong size");
  }

  const State anchor(nodes, static_cast<std::uint32_t>(rng.choose(n)));
  StateSequence s0;
  s0.reserve(length);
  for (std::size_t i = 0; i < length; ++i) s0.emplace_back(nodes, static_cast<std::uint32_t>(rng.choose(n)));

  return make_engine(LabelingFunction(nodes, std::move(labels)), t1, anchor, length, strategy, std::move(s0));
}

void advance_in_place(EngineState& es, DecisionSource& rng, StepTrace* trace) {
  const int nodes = es.nodes();

  // Steps 2-4 on the output digraph of alpha_k, relabeled with Xi_k.
  OutputDigraph g = output_digraph(es.labels);
  BranchedDigraph branched = split_branches(g, rng);
  PseudoTransitionDiagram pseudo = complete_to_pseudo(branched, nodes, rng);
  Relabeling relabeled = relabel_to_vbn(pseudo, es.labeling, rng);

  // Step 5: Xi_{k+1} from the pairing of S_{k-1} with alpha_k.
  FrequencyTable ft = frequency_table(es.previous_states, es.labels);
  LabelingFunction xi = update_labeling(ft, rng);

  // Step 6, with the permutation of the chosen strategy.
  Permutation p = draw_permutation(es.strategy, xi, rng);
  BooleanMatrix t = p.is_identity() ? relabeled.matrix : conjugate(relabeled.matrix, p);

  // Step 7.
  ++es.k;
  es.previous_states = std::move(es.states);
  es.states = trajectory(t, es.anchor, es.previous_states.size());
  es.labels = apply_labels(xi, es.states);
  es.labeling = std::move(xi);
  es.transition = std::move(t);

  if (trace != nullptr) {
    trace->digraph = std::move(g);
    trace->branched = std::move(branched);
    trace->pseudo = std::move(pseudo);
    trace->relabeling = std::move(relabeled);
    trace->frequencies = std::move(ft);
    trace->permutation = std::move(p);
  }
}

EngineState advance(const EngineState& es, DecisionSource& rng, StepTrace* trace) {
  EngineState next = es;
  advance_in_place(next, rng, trace);
  return next;
}

std::string trace_line(const EngineState& es) {
  std::string out = "k=" + std::to_string(es.k) + " rv=" + rule_vector_from_matrix(es.transition).to_string() +
                    " xi=" + es.labeling.to_string() + " alpha=";
  for (std::size_t i = 0; i < es.labels.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(es.labels[i]);
  }
  return out;
}

}  // namespace dbn
