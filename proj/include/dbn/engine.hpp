#pragma once

// The dynamical Boolean network: a VBN whose transition matrix is rebuilt at
// every time step from the labels of its own trajectory, optionally
// conjugated by a random permutation of the states.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dbn/expansion.hpp"
#include "dbn/labeling.hpp"
#include "dbn/random.hpp"
#include "dbn/vbn.hpp"

namespace dbn {

/// Bijection on the state ordinals 0..2^mu - 1.
class Permutation {
 public:
  Permutation() = default;
  /// `image[i]` is where ordinal i goes. Throws std::domain_error unless bijective.
  explicit Permutation(std::vector<std::uint32_t> image);

  static Permutation identity(std::uint32_t size);
  /// Cycle notation over 1-based state indices, e.g. {{1, 4, 2}}.
  static Permutation from_cycles(std::uint32_t size,
                                 std::initializer_list<std::initializer_list<std::uint32_t>> cycles);
  static Permutation from_cycles(std::uint32_t size, const std::vector<std::vector<std::uint32_t>>& cycles);

  std::uint32_t size() const { return static_cast<std::uint32_t>(image_.size()); }
  std::uint32_t operator()(std::uint32_t ordinal) const { return image_[ordinal]; }
  const std::vector<std::uint32_t>& image() const { return image_; }
  Permutation inverse() const;
  bool is_identity() const;

  /// Disjoint cycles over 1-based indices, fixed points omitted; "e" for identity.
  std::string to_string() const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<std::uint32_t> image_;
};

/// (p then q)(i) = q(p(i)).
Permutation then(const Permutation& p, const Permutation& q);

/// Q with Q[i][P(i)] = 1.
BooleanMatrix permutation_matrix(const Permutation& p);

/// Q^-1 T Q, i.e. result[i][j] = T[P^-1(i)][P^-1(j)].
BooleanMatrix conjugate(const BooleanMatrix& t, const Permutation& p);

/// How P_k is chosen at every step k >= 2.
enum class Strategy {
  type1,             // identity: T_k = T
  type2,             // identity, a transposition or two disjoint transpositions (mu = 2)
  type3,             // any permutation
  type3_complement,  // a 3-cycle or a 4-cycle (mu = 2)
  type4,             // one random full cycle on every label class of Xi_k
};

std::string_view to_string(Strategy s);
/// Accepts "1", "2", "3", "3c", "4". Throws std::invalid_argument.
Strategy parse_strategy(std::string_view text);

/// The ten type-2 permutations of four states, in listing order.
const std::vector<Permutation>& type2_permutations();
/// The fourteen 3- and 4-cycles of four states, in listing order.
const std::vector<Permutation>& type3_complement_permutations();

/// Product of one uniformly chosen full cycle on every label class with more
/// than one state. Classes in ascending label order; each cycle starts at the
/// class's smallest state and picks the following members one by one.
Permutation build_type4_permutation(const LabelingFunction& xi, DecisionSource& rng);

/// P_k for the given strategy. Throws std::domain_error for type 2 and
/// type 3 complement unless mu = 2.
Permutation draw_permutation(Strategy s, const LabelingFunction& xi, DecisionSource& rng);

/// s_0 = start, s_{i+1} = T(s_i), `length` terms.
StateSequence trajectory(const BooleanMatrix& t, const State& start, std::size_t length);

struct EngineState {
  std::size_t k = 1;
  Strategy strategy = Strategy::type1;
  LabelingFunction labeling;       // Xi_k
  BooleanMatrix transition;        // T_k
  StateSequence states;            // S_k
  StateSequence previous_states;   // S_{k-1}
  LabelSequence labels;            // alpha_k
  State anchor;                    // first term of S_1

  int nodes() const { return transition.nodes(); }
  std::size_t sequence_length() const { return states.size(); }
};

/// Default sequence length 2^mu + 1.
std::size_t default_sequence_length(int nodes);

/// Step 1. Decision order: Xi_1 (one label per state), T_1 (one target per
/// row, or one whitelist pick), the anchor, then the L i.i.d. terms of S_0.
/// Throws std::domain_error if L < 2^mu + 1 or the strategy needs mu = 2.
EngineState init_engine(int nodes, std::size_t length, Strategy strategy, DecisionSource& rng,
                        std::span<const BooleanMatrix> initial_whitelist = {});

/// Builds a state from explicitly given Step-1 ingredients.
EngineState make_engine(const LabelingFunction& xi, const BooleanMatrix& t1, const State& anchor,
                        std::size_t length, Strategy strategy, StateSequence previous_states);

/// Intermediate products of one advance, for inspection and golden tests.
struct StepTrace {
  OutputDigraph digraph;
  BranchedDigraph branched;
  PseudoTransitionDiagram pseudo;
  Relabeling relabeling;
  FrequencyTable frequencies{1};
  Permutation permutation;
};

/// One full time step. Decision order: branch splits, sentinel targets,
/// relabeling, labeling ties, then P_k.
void advance_in_place(EngineState& es, DecisionSource& rng, StepTrace* trace = nullptr);
EngineState advance(const EngineState& es, DecisionSource& rng, StepTrace* trace = nullptr);

/// "k=2 rv=(13,11) xi=[2,2,1,2] alpha=1,2,1,2,1"
std::string trace_line(const EngineState& es);

}  // namespace dbn
