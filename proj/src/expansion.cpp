#include "dbn/expansion.hpp"

#include <algorithm>
#include <stdexcept>

namespace dbn {

std::size_t BranchedDigraph::index_of(const Label& l) const {
  const auto it = std::find(vertices.begin(), vertices.end(), l);
  if (it == vertices.end()) throw std::out_of_range("no vertex labeled " + l.to_string());
  return static_cast<std::size_t>(it - vertices.begin());
}

std::size_t BranchedDigraph::origin(std::size_t v) const {
  if (vertices[v].kind != Label::Kind::copy) return v;
  return index_of(Label::of(vertices[v].base));
}

std::size_t BranchedDigraph::sentinel_count() const {
  return static_cast<std::size_t>(std::count_if(vertices.begin(), vertices.end(), [](const Label& l) {
    return l.kind == Label::Kind::sentinel;
  }));
}

OutputDigraph BranchedDigraph::collapse() const {
  if (sentinel_count() != 0) throw std::domain_error("cannot collapse sentinel vertices");
  OutputDigraph g;
  for (std::size_t v = 0; v < size(); ++v) {
    const std::uint32_t a = vertices[v].base;
    const std::uint32_t b = vertices[successor[v]].base;
    if (vertices[v].kind == Label::Kind::base) g.vertices.push_back(a);
    g.edges.emplace_back(a, b);
  }
  std::sort(g.vertices.begin(), g.vertices.end());
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

std::vector<std::pair<Label, Label>> BranchedDigraph::edges() const {
  std::vector<std::pair<Label, Label>> out;
  out.reserve(size());
  for (std::size_t v = 0; v < size(); ++v) out.emplace_back(vertices[v], vertices[successor[v]]);
  return out;
}

BooleanMatrix PseudoTransitionDiagram::adjacency() const {
  int nodes = 0;
  while ((std::size_t{1} << nodes) < size()) ++nodes;
  return BooleanMatrix(nodes, successor);
}

std::uint64_t branch_variant_count(std::size_t out_degree, bool looped) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= out_degree; ++i) f *= i;
  return looped ? f * out_degree : f;
}

BranchedDigraph split_branches(const OutputDigraph& g, DecisionSource& rng) {
  BranchedDigraph h;
  // Vertex layout first: base vertex, then its d - 1 copies.
  std::vector<std::uint32_t> base_index(g.vertices.size());
  std::vector<std::vector<std::uint32_t>> succ(g.vertices.size());
  auto position = [&g](std::uint32_t label) {
    return static_cast<std::size_t>(std::lower_bound(g.vertices.begin(), g.vertices.end(), label) -
                                    g.vertices.begin());
  };
  for (const auto& [a, b] : g.edges) succ[position(a)].push_back(b);
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    if (succ[i].empty()) {
      throw std::domain_error("vertex " + std::to_string(g.vertices[i]) + " has out-degree 0");
    }
    base_index[i] = static_cast<std::uint32_t>(h.vertices.size());
    h.vertices.push_back(Label::of(g.vertices[i]));
    for (std::uint32_t c = 1; c < succ[i].size(); ++c) h.vertices.push_back(Label::copy_of(g.vertices[i], c));
  }
  h.successor.assign(h.vertices.size(), 0);

  std::vector<std::uint32_t> codomain;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const std::uint32_t x1 = base_index[i];
    const std::size_t d = succ[i].size();
    if (d == 1) {
      h.successor[x1] = base_index[position(succ[i][0])];
      continue;
    }
    // y_1 is the vertex itself when it carries a loop.
    const bool looped = std::binary_search(succ[i].begin(), succ[i].end(), g.vertices[i]);
    codomain.clear();
    if (looped) codomain.push_back(x1);
    for (std::uint32_t b : succ[i]) {
      if (b != g.vertices[i]) codomain.push_back(base_index[position(b)]);
    }
    const std::size_t family = rng.choose(looped ? d : 1);
    if (family > 0) codomain[0] = x1 + static_cast<std::uint32_t>(family);  // x_{family+1}
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t pick = rng.choose(codomain.size());
      h.successor[x1 + j] = codomain[pick];
      codomain.erase(codomain.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  }
  return h;
}

std::vector<BranchedDigraph> enumerate_branches(const OutputDigraph& g) {
  return enumerate_outcomes([&g](DecisionSource& src) { return split_branches(g, src); });
}

PseudoTransitionDiagram complete_to_pseudo(const BranchedDigraph& h, int nodes, DecisionSource& rng) {
  const std::uint32_t n = state_count(nodes);
  if (h.size() > n) {
    throw std::domain_error("digraph has " + std::to_string(h.size()) + " vertices, more than 2^mu = " +
                            std::to_string(n));
  }
  PseudoTransitionDiagram g;
  g.vertices = h.vertices;
  g.successor = h.successor;
  const std::uint32_t nu = n - static_cast<std::uint32_t>(h.size());
  for (std::uint32_t z = 1; z <= nu; ++z) g.vertices.push_back(Label::sentinel(z));
  for (std::uint32_t z = 0; z < nu; ++z) g.successor.push_back(static_cast<std::uint32_t>(rng.choose(n)));
  return g;
}

std::vector<PseudoTransitionDiagram> enumerate_completions(const BranchedDigraph& h, int nodes) {
  if (nodes > 2) throw std::domain_error("completion enumeration is limited to mu <= 2");
  return enumerate_outcomes([&](DecisionSource& src) { return complete_to_pseudo(h, nodes, src); });
}

Relabeling relabel_to_vbn(const PseudoTransitionDiagram& g, const LabelingFunction& xi,
                          DecisionSource& rng) {
  const std::uint32_t n = state_count(xi.nodes());
  if (g.size() != n) throw std::domain_error("pseudo-transition diagram must have 2^mu vertices");

  Relabeling out;
  out.assignment.assign(n, 0);
  std::vector<bool> used(n, false);
  std::vector<std::uint32_t> pool;
  std::size_t v = 0;
  while (v < n && g.vertices[v].kind == Label::Kind::base) {
    const std::uint32_t label = g.vertices[v].base;
    std::size_t group_end = v + 1;
    while (group_end < n && g.vertices[group_end].kind == Label::Kind::copy &&
           g.vertices[group_end].base == label) {
      ++group_end;
    }
    if (label < 1 || label > n) throw PipelineError("label " + std::to_string(label) + " outside Lambda");
    pool = xi.preimage(label);
    if (group_end - v > pool.size()) {
      throw PipelineError("label " + std::to_string(label) + " has " + std::to_string(group_end - v) +
                          " vertices but only " + std::to_string(pool.size()) + " states");
    }
    for (; v < group_end; ++v) {
      const std::size_t pick = rng.choose(pool.size());
      out.assignment[v] = pool[pick];
      used[pool[pick]] = true;
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  }
  pool.clear();
  for (std::uint32_t s = 0; s < n; ++s) {
    if (!used[s]) pool.push_back(s);
  }
  for (; v < n; ++v) {
    if (g.vertices[v].kind != Label::Kind::sentinel) throw PipelineError("unexpected vertex order");
    const std::size_t pick = rng.choose(pool.size());
    out.assignment[v] = pool[pick];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }

  std::vector<std::uint32_t> targets(n);
  for (std::uint32_t u = 0; u < n; ++u) targets[out.assignment[u]] = out.assignment[g.successor[u]];
  out.matrix = BooleanMatrix(xi.nodes(), std::move(targets));
  return out;
}

std::string edge_list(const BranchedDigraph& g) {
  std::string out;
  for (const auto& [a, b] : g.edges()) out += a.to_string() + " -> " + b.to_string() + "\n";
  return out;
}

}  // namespace dbn
