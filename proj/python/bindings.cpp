#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dbn/golden.hpp"
#include "dbn/harness.hpp"
#include "dbn/report.hpp"

namespace py = pybind11;
using namespace dbn;

namespace {

std::vector<std::uint32_t> rule_vector_of(const std::vector<std::vector<int>>& dense) {
  const RuleVector rv = rule_vector_from_matrix(BooleanMatrix::from_dense(dense));
  std::vector<std::uint32_t> out;
  for (const auto& r : rv.rules) out.push_back(static_cast<std::uint32_t>(r.number()));
  return out;
}

std::vector<std::vector<int>> matrix_of(const std::vector<std::uint64_t>& rules) {
  RuleVector rv;
  const int nodes = static_cast<int>(rules.size());
  for (auto r : rules) rv.rules.emplace_back(nodes, r);
  return matrix_from_rule_vector(rv).dense();
}

py::dict run(const std::string& type, std::size_t trials, std::size_t steps, int nodes, std::uint64_t seed,
             std::optional<std::size_t> burn_in, unsigned threads) {
  SimulationConfig cfg;
  cfg.strategy = parse_strategy(type);
  cfg.trials = trials;
  cfg.steps = steps;
  cfg.nodes = nodes;
  cfg.master_seed = seed;
  cfg.threads = threads;
  cfg.burn_in = burn_in ? *burn_in : std::min(default_burn_in(cfg.strategy), steps - 1);
  CampaignSummary s;
  {
    py::gil_scoped_release release;
    s = run_campaign(cfg);
  }
  std::vector<std::size_t> distinct;
  for (const auto& t : s.trials) distinct.push_back(t.distinct());
  py::dict visits;
  for (const auto& [code, agg] : s.rules) visits[py::int_(code)] = agg.total_visits;
  py::dict out;
  out["rule_vector_space"] = s.rule_vector_space();
  out["distinct"] = distinct;
  out["visits"] = visits;
  out["never_visited_after_burn_in"] = never_visited_after(s, cfg.burn_in);
  out["hot_trials"] = s.class_count(TrialClass::hot);
  out["summary"] = summary_text(s);
  out["coverage_csv"] = coverage_csv(s);
  return out;
}

std::vector<std::string> trace(const std::string& type, int nodes, std::size_t steps, std::uint64_t seed,
                               std::size_t trial) {
  SeededSource rng(derive_seed(seed, trial));
  EngineState es = init_engine(nodes, default_sequence_length(nodes), parse_strategy(type), rng);
  std::vector<std::string> lines{trace_line(es)};
  for (std::size_t k = 2; k <= steps; ++k) {
    advance_in_place(es, rng);
    lines.push_back(trace_line(es));
  }
  return lines;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dynamical Boolean network simulator";
  py::register_exception<IoError>(m, "IoError");

  m.def("rule_table_csv", &rule_table_csv, py::arg("nodes") = 2);
  m.def("rule_vector_of", &rule_vector_of, py::arg("matrix"), "Rule numbers of a dense transition matrix.");
  m.def("matrix_of", &matrix_of, py::arg("rules"), "Dense transition matrix of a rule vector.");
  m.def("rule_vector_code", [](const std::vector<std::uint64_t>& rules) {
    RuleVector rv;
    for (auto r : rules) rv.rules.emplace_back(static_cast<int>(rules.size()), r);
    return rule_vector_code(rv);
  });
  m.def("theta", &theta, py::arg("n"), py::arg("m"));
  m.def("fixed_point_matrix_count", &fixed_point_matrix_count, py::arg("nodes"));
  m.def("block_pattern_holds", [](const std::vector<std::uint64_t>& codes) { return block_pattern_check(codes).holds; });
  m.def("golden_checks", [] {
    std::vector<std::pair<std::string, bool>> out;
    for (const auto& c : run_golden_checks()) out.emplace_back(c.name, c.passed);
    return out;
  });
  m.def("run_campaign", &run, py::arg("type") = "1", py::arg("trials") = 1000, py::arg("steps") = 10000,
        py::arg("nodes") = 2, py::arg("seed") = 1, py::arg("burn_in") = std::nullopt, py::arg("threads") = 0);
  m.def("trace", &trace, py::arg("type") = "1", py::arg("nodes") = 2, py::arg("steps") = 10, py::arg("seed") = 1,
        py::arg("trial") = 0);
}
