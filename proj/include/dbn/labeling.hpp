#pragma once

// Labeling functions Xi: S -> {1..2^mu}, label sequences and the digraphs and
// frequency tables built from them.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dbn/random.hpp"
#include "dbn/vbn.hpp"

namespace dbn {

using StateSequence = std::vector<State>;
using LabelSequence = std::vector<std::uint32_t>;

/// A vertex label. Base labels are 1..2^mu; copies are the fresh labels given
/// to split-off vertices (base 2, copy 1 prints as 2'); sentinels z_1, z_2, ...
/// complete a digraph to 2^mu vertices.
struct Label {
  enum class Kind : std::uint8_t { base, copy, sentinel };

  Kind kind = Kind::base;
  std::uint32_t base = 0;   // 0 for sentinels
  std::uint32_t index = 0;  // copy number or sentinel number

  static Label of(std::uint32_t l) { return {Kind::base, l, 0}; }
  static Label copy_of(std::uint32_t l, std::uint32_t i) { return {Kind::copy, l, i}; }
  static Label sentinel(std::uint32_t i) { return {Kind::sentinel, 0, i}; }

  std::string to_string() const;
  auto operator<=>(const Label&) const = default;
};

class LabelingFunction {
 public:
  LabelingFunction() = default;
  /// `labels[s]` is the label of the state with ordinal s.
  LabelingFunction(int nodes, std::vector<std::uint32_t> labels);

  static LabelingFunction constant(int nodes, std::uint32_t label);

  int nodes() const { return nodes_; }
  std::uint32_t label_count() const { return static_cast<std::uint32_t>(labels_.size()); }
  std::uint32_t operator()(const State& s) const { return labels_[s.ordinal()]; }
  std::uint32_t of(std::uint32_t ordinal) const { return labels_[ordinal]; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }

  /// S_l = Xi^-1(l), ascending ordinals.
  std::vector<std::uint32_t> preimage(std::uint32_t label) const;
  bool injective() const;

  /// "[1,2,1,2]" in lexicographic state order.
  std::string to_string() const;

  bool operator==(const LabelingFunction&) const = default;

 private:
  std::vector<std::uint32_t> labels_;
  int nodes_ = 0;
};

LabelSequence apply_labels(const LabelingFunction& xi, std::span<const State> states);

/// Digraph whose edges are the distinct consecutive pairs of a label sequence.
struct OutputDigraph {
  std::vector<std::uint32_t> vertices;                          // ascending
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // ascending, unique

  std::size_t out_degree(std::uint32_t v) const;
  std::vector<std::uint32_t> successors(std::uint32_t v) const;
  bool has_loop(std::uint32_t v) const;
  bool functional() const;

  bool operator==(const OutputDigraph&) const = default;
};

/// Throws std::domain_error for sequences shorter than 2.
OutputDigraph output_digraph(std::span<const std::uint32_t> labels);

/// One `a -> b` line per edge.
std::string edge_list(const OutputDigraph& g);

/// #(s, l) over S x Lambda.
class FrequencyTable {
 public:
  explicit FrequencyTable(int nodes);

  int nodes() const { return nodes_; }
  std::uint32_t states() const { return n_; }
  std::uint32_t count(std::uint32_t ordinal, std::uint32_t label) const {
    return counts_[ordinal * n_ + (label - 1)];
  }
  void add(std::uint32_t ordinal, std::uint32_t label) { ++counts_[ordinal * n_ + (label - 1)]; }
  std::uint64_t total() const;

  /// Labels attaining max_l #(s, l); all of Lambda when s never occurs.
  std::vector<std::uint32_t> argmax(std::uint32_t ordinal) const;

  /// Rows are labels, columns are states in lexicographic order.
  std::string to_csv() const;

  bool operator==(const FrequencyTable&) const = default;

 private:
  std::vector<std::uint32_t> counts_;
  std::uint32_t n_ = 0;
  int nodes_ = 0;
};

/// Counts co-occurrences of states and labels position by position. Throws
/// std::domain_error on a length mismatch or a label outside Lambda.
FrequencyTable frequency_table(std::span<const State> states, std::span<const std::uint32_t> labels);

/// New labeling: every state takes a most frequent label, ties broken
/// uniformly (states visited in ascending order, one decision per tie).
LabelingFunction update_labeling(const FrequencyTable& ft, DecisionSource& rng);

}  // namespace dbn
