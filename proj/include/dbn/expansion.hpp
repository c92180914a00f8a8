#pragma once

// Turning an output digraph into the transition matrix of an actual VBN:
// branch splitting, completion with sentinel vertices, and relabeling of the
// vertices with states.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dbn/labeling.hpp"
#include "dbn/random.hpp"
#include "dbn/vbn.hpp"

namespace dbn {

/// Raised when a digraph cannot be relabeled with the given labeling; never
/// happens for inputs produced by the time-step loop itself.
class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Labeled digraph with out-degree exactly one everywhere. Vertex order is
/// each base label ascending followed by its copies, then any sentinels.
struct BranchedDigraph {
  std::vector<Label> vertices;
  std::vector<std::uint32_t> successor;  // index into vertices

  std::size_t size() const { return vertices.size(); }
  std::size_t index_of(const Label& l) const;
  /// Vertex a copy was split from; base vertices and sentinels map to themselves.
  std::size_t origin(std::size_t v) const;
  std::size_t sentinel_count() const;

  /// Identifies every copy with its origin. Requires no sentinels.
  OutputDigraph collapse() const;
  std::vector<std::pair<Label, Label>> edges() const;

  bool operator==(const BranchedDigraph&) const = default;
};

/// A BranchedDigraph with exactly 2^mu vertices.
struct PseudoTransitionDiagram : BranchedDigraph {
  BooleanMatrix adjacency() const;
};

/// Splits every vertex of out-degree d >= 2 into d vertices matched
/// one-to-one with its successors. A looped vertex also admits the d - 1
/// families where one copy takes the loop's place in the codomain. Branch
/// vertices are processed in ascending label order: first the family, then
/// the image of x_1, x_2, ... among the remaining codomain vertices.
/// Throws std::domain_error if some vertex has out-degree 0.
BranchedDigraph split_branches(const OutputDigraph& g, DecisionSource& rng);

/// All outcomes of split_branches, in decision order.
std::vector<BranchedDigraph> enumerate_branches(const OutputDigraph& g);

/// Number of split variants for a single vertex: d! or d * d! with a loop.
std::uint64_t branch_variant_count(std::size_t out_degree, bool looped);

/// Adds 2^mu - lambda sentinels, each with one uniformly chosen out-edge.
/// Throws std::domain_error when lambda > 2^mu.
PseudoTransitionDiagram complete_to_pseudo(const BranchedDigraph& h, int nodes, DecisionSource& rng);

/// All (2^mu)^nu completions. Restricted to mu <= 2.
std::vector<PseudoTransitionDiagram> enumerate_completions(const BranchedDigraph& h, int nodes);

struct Relabeling {
  BooleanMatrix matrix;
  /// State ordinal assigned to every vertex of the diagram.
  std::vector<std::uint32_t> assignment;
};

/// Gives every label-l vertex group distinct states drawn without replacement
/// from Xi^-1(l), then hands the leftover states to the sentinels, and reads
/// off the transition matrix. Throws PipelineError if a group is larger than
/// its preimage.
Relabeling relabel_to_vbn(const PseudoTransitionDiagram& g, const LabelingFunction& xi,
                          DecisionSource& rng);

/// One `a -> b` line per vertex.
std::string edge_list(const BranchedDigraph& g);

}  // namespace dbn
