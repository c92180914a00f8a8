#include "dbn/labeling.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dbn {

std::string Label::to_string() const {
  switch (kind) {
    case Kind::base:
      return std::to_string(base);
    case Kind::copy:
      return std::to_string(base) + std::string(index, '\'');
    case Kind::sentinel:
      return "z" + std::to_string(index);
  }
  return {};
}

LabelingFunction::LabelingFunction(int nodes, std::vector<std::uint32_t> labels)
    : labels_(std::move(labels)), nodes_(nodes) {
  const std::uint32_t n = state_count(nodes);
  if (labels_.size() != n) throw std::domain_error("labeling must cover all 2^mu states");
  for (std::uint32_t l : labels_) {
    if (l < 1 || l > n) throw std::domain_error("label outside 1..2^mu");
  }
}

LabelingFunction LabelingFunction::constant(int nodes, std::uint32_t label) {
  return LabelingFunction(nodes, std::vector<std::uint32_t>(state_count(nodes), label));
}

std::vector<std::uint32_t> LabelingFunction::preimage(std::uint32_t label) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < labels_.size(); ++s) {
    if (labels_[s] == label) out.push_back(s);
  }
  return out;
}

bool LabelingFunction::injective() const {
  std::vector<bool> used(labels_.size() + 1, false);
  for (std::uint32_t l : labels_) {
    if (used[l]) return false;
    used[l] = true;
  }
  return true;
}

std::string LabelingFunction::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(labels_[i]);
  }
  return out + "]";
}

LabelSequence apply_labels(const LabelingFunction& xi, std::span<const State> states) {
  LabelSequence out;
  out.reserve(states.size());
  for (const State& s : states) out.push_back(xi(s));
  return out;
}

std::size_t OutputDigraph::out_degree(std::uint32_t v) const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(),
                                                [v](const auto& e) { return e.first == v; }));
}

std::vector<std::uint32_t> OutputDigraph::successors(std::uint32_t v) const {
  std::vector<std::uint32_t> out;
  for (const auto& [a, b] : edges) {
    if (a == v) out.push_back(b);
  }
  return out;
}

bool OutputDigraph::has_loop(std::uint32_t v) const {
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(v, v));
}

bool OutputDigraph::functional() const {
  return std::all_of(vertices.begin(), vertices.end(),
                     [this](std::uint32_t v) { return out_degree(v) == 1; });
}

OutputDigraph output_digraph(std::span<const std::uint32_t> labels) {
  if (labels.size() < 2) throw std::domain_error("label sequence needs at least 2 terms");
  OutputDigraph g;
  g.vertices.assign(labels.begin(), labels.end());
  std::sort(g.vertices.begin(), g.vertices.end());
  g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end()), g.vertices.end());
  for (std::size_t i = 0; i + 1 < labels.size(); ++i) g.edges.emplace_back(labels[i], labels[i + 1]);
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

std::string edge_list(const OutputDigraph& g) {
  std::string out;
  for (const auto& [a, b] : g.edges) out += std::to_string(a) + " -> " + std::to_string(b) + "\n";
  return out;
}

FrequencyTable::FrequencyTable(int nodes)
    : counts_(static_cast<std::size_t>(state_count(nodes)) * state_count(nodes), 0),
      n_(state_count(nodes)),
      nodes_(nodes) {}

std::uint64_t FrequencyTable::total() const {
  std::uint64_t sum = 0;
  for (std::uint32_t c : counts_) sum += c;
  return sum;
}

std::vector<std::uint32_t> FrequencyTable::argmax(std::uint32_t ordinal) const {
  std::uint32_t best = 0;
  for (std::uint32_t l = 1; l <= n_; ++l) best = std::max(best, count(ordinal, l));
  std::vector<std::uint32_t> out;
  for (std::uint32_t l = 1; l <= n_; ++l) {
    if (count(ordinal, l) == best) out.push_back(l);
  }
  return out;
}

std::string FrequencyTable::to_csv() const {
  std::ostringstream out;
  out << "label";
  for (std::uint32_t s = 0; s < n_; ++s) out << ",\"" << State(nodes_, s).to_string() << '"';
  out << '\n';
  for (std::uint32_t l = 1; l <= n_; ++l) {
    out << l;
    for (std::uint32_t s = 0; s < n_; ++s) out << ',' << count(s, l);
    out << '\n';
  }
  return out.str();
}

FrequencyTable frequency_table(std::span<const State> states, std::span<const std::uint32_t> labels) {
  if (states.size() != labels.size()) {
    throw std::domain_error("state and label sequences differ in length");
  }
  if (states.empty()) throw std::domain_error("empty sequences");
  FrequencyTable ft(states.front().nodes());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (labels[i] < 1 || labels[i] > ft.states()) throw std::domain_error("label outside Lambda");
    ft.add(states[i].ordinal(), labels[i]);
  }
  return ft;
}

LabelingFunction update_labeling(const FrequencyTable& ft, DecisionSource& rng) {
  std::vector<std::uint32_t> labels(ft.states());
  for (std::uint32_t s = 0; s < ft.states(); ++s) {
    const auto best = ft.argmax(s);
    labels[s] = best[rng.choose(best.size())];
  }
  return LabelingFunction(ft.nodes(), std::move(labels));
}

}  // namespace dbn
