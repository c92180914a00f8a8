#include "dbn/golden.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dbn/harness.hpp"

namespace dbn {

const std::string& reference_rule_table() {
  static const std::string table =
      "input,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16\n"
      "\"(0,0)\",0,1,0,1,0,1,0,1,0,1,0,1,0,1,0,1\n"
      "\"(0,1)\",0,0,1,1,0,0,1,1,0,0,1,1,0,0,1,1\n"
      "\"(1,0)\",0,0,0,0,1,1,1,1,0,0,0,0,1,1,1,1\n"
      "\"(1,1)\",0,0,0,0,0,0,0,0,1,1,1,1,1,1,1,1\n"
      "n,0,2,2,1,2,1,2,2,2,2,1,2,1,2,2,0\n";
  return table;
}

std::vector<std::size_t> worked_example_init_script() {
  return {
      0, 1, 0, 1,    // Xi_1 = [1,2,1,2]
      1, 1, 3, 0,    // T_1 rows
      2,             // anchor (1,0)
      2, 0, 1, 0, 1  // S_0
  };
}

std::vector<std::size_t> worked_example_advance_script(Strategy s) {
  std::vector<std::size_t> script = {
      1, 1,  // vertex 2: the family with 2' in place of the loop, then 2 -> 1
      3,     // z1 -> z1
      1,     // vertex 1 gets (1,0)
      0,     // vertex 2 gets (0,1); 2' and z1 are forced
      1, 1,  // Xi_2 ties: (0,1) -> 2, (1,1) -> 2
  };
  if (s == Strategy::type4) script.push_back(1);  // (1 4 2) rather than (1 2 4)
  return script;
}

namespace {

class Checker {
 public:
  template <class A, class B>
  void equal(const std::string& name, const A& got, const B& want) {
    if (got == want) {
      checks_.push_back({name, true, {}});
    } else {
      checks_.push_back({name, false, "got " + show(got) + ", expected " + show(want)});
    }
  }
  void require(const std::string& name, bool ok, const std::string& detail) {
    checks_.push_back({name, ok, ok ? std::string{} : detail});
  }
  std::vector<GoldenCheck> take() { return std::move(checks_); }

 private:
  static std::string show(const std::string& s) { return "'" + s + "'"; }
  static std::string show(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }
  static std::string show(const LabelSequence& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
  }
  static std::string show(const StateSequence& v) {
    std::string out;
    for (const auto& s : v) out += s.to_string();
    return out;
  }
  template <class T>
  static std::string show(const T& v) {
    return v.to_string();
  }

  std::vector<GoldenCheck> checks_;
};

std::string first_table_mismatch(const std::string& got, const std::string& want) {
  std::istringstream g(got), w(want);
  std::string gl, wl;
  for (std::size_t line = 1;; ++line) {
    const bool gok = static_cast<bool>(std::getline(g, gl));
    const bool wok = static_cast<bool>(std::getline(w, wl));
    if (!gok && !wok) return {};
    if (gl != wl || gok != wok) return "row " + std::to_string(line) + ": got '" + gl + "', expected '" + wl + "'";
  }
}

std::set<std::string> edge_set(const BranchedDigraph& h) {
  std::set<std::string> out;
  for (const auto& [a, b] : h.edges()) out.insert(a.to_string() + " -> " + b.to_string());
  return out;
}

}  // namespace

std::vector<GoldenCheck> run_golden_checks(const std::optional<std::string>& rule_table_reference) {
  Checker c;

  // Reference rule table.
  const std::string& reference = rule_table_reference ? *rule_table_reference : reference_rule_table();
  const std::string mismatch = first_table_mismatch(rule_table_csv(2), reference);
  c.require("rule table", mismatch.empty(), mismatch);

  // Step 1.
  ScriptedSource init_src(worked_example_init_script());
  const EngineState e1 = init_engine(2, 5, Strategy::type1, init_src);
  c.equal("Xi_1", e1.labeling, LabelingFunction(2, {1, 2, 1, 2}));
  c.equal("T_1", e1.transition, BooleanMatrix::parse("0100/0100/0001/1000"));
  c.equal("S_1", e1.states,
          StateSequence{State::from_bits({1, 0}), State::from_bits({1, 1}), State::from_bits({0, 0}),
                        State::from_bits({0, 1}), State::from_bits({0, 1})});
  c.equal("alpha_1", e1.labels, LabelSequence{1, 2, 1, 2, 2});
  c.equal("S_0", e1.previous_states,
          StateSequence{State::from_bits({1, 0}), State::from_bits({0, 0}), State::from_bits({0, 1}),
                        State::from_bits({0, 0}), State::from_bits({0, 1})});
  c.require("init script fully consumed", init_src.exhausted(), "unused scripted decisions remain");

  // Step 2: the four Boolean digraphs obtained from the output digraph.
  const OutputDigraph g = output_digraph(e1.labels);
  const auto branches = enumerate_branches(g);
  std::set<std::set<std::string>> got_set;
  bool collapses = true;
  for (const auto& h : branches) {
    got_set.insert(edge_set(h));
    collapses = collapses && h.collapse() == g;
  }
  const std::set<std::set<std::string>> want_set = {
      {"1 -> 2", "2 -> 2", "2' -> 1"},
      {"1 -> 2", "2 -> 1", "2' -> 2"},
      {"1 -> 2", "2 -> 2'", "2' -> 1"},
      {"1 -> 2", "2 -> 1", "2' -> 2'"},
  };
  c.require("split digraphs", branches.size() == 4 && got_set == want_set,
            "expected the four digraphs of the worked example, got " + std::to_string(branches.size()));
  c.require("split digraphs collapse", collapses, "some split digraph does not collapse to g");

  // Step 3: four completions per digraph.
  std::size_t completions = 0;
  for (const auto& h : branches) completions += enumerate_completions(h, 2).size();
  c.require("pseudo-transition diagrams", completions == 16,
            "expected 16 pseudo-transition diagrams, got " + std::to_string(completions));

  // Steps 4 to 7, type 1.
  ScriptedSource step_src(worked_example_advance_script(Strategy::type1));
  StepTrace trace;
  const EngineState e2 = advance(e1, step_src, &trace);
  {
    std::vector<std::string> xi1_prime(4);
    for (std::size_t v = 0; v < trace.pseudo.size(); ++v) {
      xi1_prime[trace.relabeling.assignment[v]] = trace.pseudo.vertices[v].to_string();
    }
    const std::vector<std::string> want = {"z1", "2", "1", "2'"};
    c.require("Xi_1'", xi1_prime == want,
              "got [" + xi1_prime[0] + "," + xi1_prime[1] + "," + xi1_prime[2] + "," + xi1_prime[3] + "]");
  }
  const BooleanMatrix t = BooleanMatrix::parse("1000/0010/0100/0001");
  c.equal("T", trace.relabeling.matrix, t);
  {
    FrequencyTable want(2);
    want.add(State::from_bits({0, 1}).ordinal(), 1);
    want.add(State::from_bits({1, 0}).ordinal(), 1);
    want.add(State::from_bits({0, 0}).ordinal(), 2);
    want.add(State::from_bits({0, 0}).ordinal(), 2);
    want.add(State::from_bits({0, 1}).ordinal(), 2);
    c.require("frequency table", trace.frequencies == want, "frequency table:\n" + trace.frequencies.to_csv());
  }
  c.equal("Xi_2", e2.labeling, LabelingFunction(2, {2, 2, 1, 2}));
  {
    const auto outcomes =
        enumerate_outcomes([&](DecisionSource& src) { return update_labeling(trace.frequencies, src); });
    c.require("Xi_2 alternatives", outcomes.size() == 8,
              "expected 8 possible labelings, got " + std::to_string(outcomes.size()));
  }
  c.equal("T_2 (type 1)", e2.transition, t);
  c.equal("S_2", e2.states,
          StateSequence{State::from_bits({1, 0}), State::from_bits({0, 1}), State::from_bits({1, 0}),
                        State::from_bits({0, 1}), State::from_bits({1, 0})});
  c.equal("alpha_2", e2.labels, LabelSequence{1, 2, 1, 2, 1});
  c.require("advance script fully consumed", step_src.exhausted(), "unused scripted decisions remain");

  // Type 4 at k = 2.
  EngineState e1_type4 = e1;
  e1_type4.strategy = Strategy::type4;
  ScriptedSource type4_src(worked_example_advance_script(Strategy::type4));
  StepTrace trace4;
  const EngineState e2_type4 = advance(e1_type4, type4_src, &trace4);
  c.equal("P_2", trace4.permutation, Permutation::from_cycles(4, {{1, 4, 2}}));
  c.equal("Q_2", permutation_matrix(trace4.permutation), BooleanMatrix::parse("0001/1000/0010/0100"));
  c.equal("T_2 (type 4)", e2_type4.transition, BooleanMatrix::parse("0010/0100/1000/0001"));

  // Coupon-collector expectations.
  c.require("theta(175,175)", std::abs(theta(175, 175) - 1005.3) < 0.05,
            "theta(175,175) = " + std::to_string(theta(175, 175)));
  c.require("theta(256,256)", std::abs(theta(256, 256) - 1567.8) < 0.05,
            "theta(256,256) = " + std::to_string(theta(256, 256)));

  return c.take();
}

}  // namespace dbn
