#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "dbn/engine.hpp"
#include "dbn/golden.hpp"

using namespace dbn;

namespace {

using Dense = std::vector<std::vector<int>>;

Dense product(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense c(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Dense transpose(const Dense& a) {
  Dense t(a.size(), std::vector<int>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) t[j][i] = a[i][j];
  return t;
}

std::vector<Permutation> all_permutations(std::uint32_t n) {
  std::vector<std::uint32_t> image(n);
  std::iota(image.begin(), image.end(), 0U);
  std::vector<Permutation> out;
  do {
    out.emplace_back(image);
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

BooleanMatrix random_matrix(int nodes, SeededSource& rng) {
  const std::uint32_t n = state_count(nodes);
  std::vector<std::uint32_t> t(n);
  for (auto& x : t) x = static_cast<std::uint32_t>(rng.choose(n));
  return BooleanMatrix(nodes, t);
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("permutations") {
    const Permutation p = Permutation::from_cycles(4, {{1, 4, 2}});
    CHECK(p.to_string() == "(1 4 2)");
    CHECK(p(0) == 3);
    CHECK(p(3) == 1);
    CHECK(p(1) == 0);
    CHECK(p(2) == 2);
    CHECK(then(p, p.inverse()).is_identity());
    CHECK(Permutation::identity(4).to_string() == "e");
    CHECK_THROWS_AS(Permutation({0, 0, 1, 2}), std::domain_error);
    CHECK_THROWS_AS(Permutation::from_cycles(4, {{1, 2}, {2, 3}}), std::domain_error);
  }

  TEST_CASE("permutation matrix of (1 4 2)") {
    CHECK(permutation_matrix(Permutation::from_cycles(4, {{1, 4, 2}})) == BooleanMatrix::parse("0001/1000/0010/0100"));
  }

  TEST_CASE("conjugation matches the matrix product") {
    const BooleanMatrix t = BooleanMatrix::parse("1000/0010/0100/0001");
    const Permutation p = Permutation::from_cycles(4, {{1, 4, 2}});
    const Dense q = permutation_matrix(p).dense();
    const Dense q_inv = transpose(q);
    CHECK(BooleanMatrix::from_dense(product(product(q_inv, t.dense()), q)) == conjugate(t, p));
    CHECK(conjugate(t, p) == BooleanMatrix::parse("0010/0100/1000/0001"));
  }

  TEST_CASE("conjugation closure over every matrix and permutation") {
    const auto perms = all_permutations(4);
    REQUIRE(perms.size() == 24);
    std::size_t pairs = 0;
    for (std::uint64_t code = 0; code < 256; ++code) {
      const BooleanMatrix t = matrix_from_rule_vector(rule_vector_from_code(2, code));
      const Dense td = t.dense();
      for (const auto& p : perms) {
        const Dense q = permutation_matrix(p).dense();
        const Dense c = product(product(transpose(q), td), q);
        for (const auto& row : c) CHECK(std::count(row.begin(), row.end(), 1) == 1);
        CHECK(BooleanMatrix::from_dense(c) == conjugate(t, p));
        CHECK(conjugate(t, p).fixed_point_count() == t.fixed_point_count());
        ++pairs;
      }
    }
    CHECK(pairs == 256 * 24);
  }

  TEST_CASE("conjugation is a group action") {
    SeededSource rng(5);
    const auto perms = all_permutations(8);
    for (int i = 0; i < 500; ++i) {
      const BooleanMatrix t = random_matrix(3, rng);
      const Permutation& p = perms[rng.choose(perms.size())];
      const Permutation& r = perms[rng.choose(perms.size())];
      CHECK(conjugate(t, then(p, r)) == conjugate(conjugate(t, p), r));
      CHECK(conjugate(conjugate(t, p), p.inverse()) == t);
    }
  }

  TEST_CASE("strategy supports partition the permutations of four states") {
    const auto& two = type2_permutations();
    const auto& comp = type3_complement_permutations();
    CHECK(two.size() == 10);
    CHECK(comp.size() == 14);
    std::set<std::vector<std::uint32_t>> all;
    for (const auto& p : two) all.insert(p.image());
    for (const auto& p : comp) all.insert(p.image());
    CHECK(all.size() == 24);
    for (const auto& p : two) {
      CHECK(then(p, p).is_identity());  // involutions
    }
    for (const auto& p : comp) CHECK_FALSE(then(p, p).is_identity());
  }

  TEST_CASE("strategy parsing") {
    CHECK(parse_strategy("3c") == Strategy::type3_complement);
    CHECK(to_string(Strategy::type4) == "4");
    CHECK_THROWS_AS(parse_strategy("5"), std::invalid_argument);
  }

  TEST_CASE("type 4 permutations are full cycles on label classes") {
    SeededSource rng(9);
    for (int i = 0; i < 2000; ++i) {
      std::vector<std::uint32_t> labels(8);
      for (auto& l : labels) l = static_cast<std::uint32_t>(rng.choose(8)) + 1;
      const LabelingFunction xi(3, labels);
      const Permutation p = build_type4_permutation(xi, rng);
      for (std::uint32_t l = 1; l <= 8; ++l) {
        const auto cls = xi.preimage(l);
        if (cls.empty()) continue;
        // Orbit of the first member covers the whole class.
        std::set<std::uint32_t> orbit;
        std::uint32_t x = cls[0];
        do {
          orbit.insert(x);
          CHECK(xi.of(x) == l);
          x = p(x);
        } while (x != cls[0]);
        CHECK(orbit.size() == cls.size());
      }
    }
  }

  TEST_CASE("type 4 cycles are uniform") {
    const LabelingFunction xi(2, {2, 2, 2, 2});
    SeededSource rng(21);
    std::map<std::vector<std::uint32_t>, int> counts;
    const int n = 60000;
    for (int i = 0; i < n; ++i) ++counts[build_type4_permutation(xi, rng).image()];
    REQUIRE(counts.size() == 6);
    double chi2 = 0;
    for (const auto& [k, c] : counts) chi2 += (c - n / 6.0) * (c - n / 6.0) / (n / 6.0);
    CHECK(chi2 < 20.52);  // 5 degrees of freedom, p = 0.001
  }

  TEST_CASE("type 3 draws are uniform over all permutations") {
    const LabelingFunction xi(2, {1, 2, 3, 4});
    SeededSource rng(33);
    std::map<std::vector<std::uint32_t>, int> counts;
    const int n = 48000;
    for (int i = 0; i < n; ++i) ++counts[draw_permutation(Strategy::type3, xi, rng).image()];
    REQUIRE(counts.size() == 24);
    double chi2 = 0;
    for (const auto& [k, c] : counts) chi2 += (c - n / 24.0) * (c - n / 24.0) / (n / 24.0);
    CHECK(chi2 < 49.73);  // 23 degrees of freedom, p = 0.001
  }

  TEST_CASE("seeded choices are uniform") {
    SeededSource rng(77);
    std::vector<int> counts(6, 0);
    const int n = 60000;
    for (int i = 0; i < n; ++i) ++counts[rng.choose(6)];
    double chi2 = 0;
    for (int c : counts) chi2 += (c - n / 6.0) * (c - n / 6.0) / (n / 6.0);
    CHECK(chi2 < 20.52);
  }

  TEST_CASE("mu = 2 only strategies") {
    SeededSource rng(1);
    CHECK_THROWS_AS(init_engine(3, 9, Strategy::type2, rng), std::domain_error);
    CHECK_THROWS_AS(init_engine(3, 9, Strategy::type3_complement, rng), std::domain_error);
    CHECK_NOTHROW(init_engine(3, 9, Strategy::type3, rng));
    CHECK_THROWS_AS(init_engine(2, 4, Strategy::type1, rng), std::domain_error);
  }

  TEST_CASE("trajectories") {
    const BooleanMatrix t2 = BooleanMatrix::parse("1000/0010/0100/0001");
    const auto s = trajectory(t2, State::from_bits({1, 0}), 5);
    CHECK(s == StateSequence{State::from_bits({1, 0}), State::from_bits({0, 1}), State::from_bits({1, 0}),
                             State::from_bits({0, 1}), State::from_bits({1, 0})});
    const auto s1 = trajectory(BooleanMatrix::parse("0100/0100/0001/1000"), State::from_bits({1, 0}), 5);
    CHECK(s1 == StateSequence{State::from_bits({1, 0}), State::from_bits({1, 1}), State::from_bits({0, 0}),
                              State::from_bits({0, 1}), State::from_bits({0, 1})});
    const auto constant = trajectory(BooleanMatrix::identity(2), State::from_bits({1, 1}), 5);
    CHECK(std::all_of(constant.begin(), constant.end(), [&](const State& x) { return x == constant[0]; }));
  }

  TEST_CASE("the last term of a trajectory repeats an earlier one") {
    SeededSource rng(2024);
    std::size_t checked = 0;
    for (int mu = 1; mu <= 3; ++mu) {
      const std::size_t length = default_sequence_length(mu);
      for (int i = 0; i < 100000 / 3 + 1; ++i) {
        const BooleanMatrix t = random_matrix(mu, rng);
        const State start(mu, static_cast<std::uint32_t>(rng.choose(state_count(mu))));
        const auto s = trajectory(t, start, length);
        CHECK(std::find(s.begin(), s.end() - 1, s.back()) != s.end() - 1);
        ++checked;
      }
    }
    CHECK(checked >= 100000);
  }

  TEST_CASE("a fixed-point anchor stays put under type 1") {
    const BooleanMatrix t = BooleanMatrix::parse("1000/1000/1000/1000");
    const LabelingFunction xi(2, {3, 1, 4, 2});
    StateSequence s0(5, State::from_bits({0, 0}));
    EngineState es = make_engine(xi, t, State::from_bits({0, 0}), 5, Strategy::type1, s0);
    CHECK(es.labels == LabelSequence{3, 3, 3, 3, 3});
    SeededSource rng(4);
    for (int k = 0; k < 50; ++k) {
      advance_in_place(es, rng);
      CHECK(es.states.front() == State::from_bits({0, 0}));
    }
  }

  TEST_CASE("engine invariants over random runs") {
    for (const Strategy s : {Strategy::type1, Strategy::type2, Strategy::type3, Strategy::type3_complement,
                             Strategy::type4}) {
      SeededSource rng(100 + static_cast<int>(s));
      EngineState es = init_engine(2, 5, s, rng);
      const State anchor = es.states.front();
      for (int k = 2; k <= 300; ++k) {
        const StateSequence before = es.states;
        advance_in_place(es, rng);
        CHECK(es.k == static_cast<std::size_t>(k));
        CHECK(es.states.front() == anchor);
        CHECK(es.previous_states == before);
        CHECK(es.labels == apply_labels(es.labeling, es.states));
        CHECK(es.states == trajectory(es.transition, anchor, 5));
      }
    }
  }

  TEST_CASE("a fixed seed replays the same run") {
    auto run = [](std::uint64_t seed) {
      SeededSource rng(seed);
      EngineState es = init_engine(2, 5, Strategy::type4, rng);
      std::vector<std::string> lines{trace_line(es)};
      for (int k = 0; k < 200; ++k) {
        advance_in_place(es, rng);
        lines.push_back(trace_line(es));
      }
      return lines;
    };
    CHECK(run(42) == run(42));
    CHECK(run(42) != run(43));
  }

  TEST_CASE("worked example replay") {
    ScriptedSource init(worked_example_init_script());
    const EngineState e1 = init_engine(2, 5, Strategy::type1, init);
    CHECK(trace_line(e1) == "k=1 rv=(5,8) xi=[1,2,1,2] alpha=1,2,1,2,2");
    ScriptedSource step(worked_example_advance_script(Strategy::type1));
    const EngineState e2 = advance(e1, step);
    CHECK(trace_line(e2) == "k=2 rv=(11,13) xi=[2,2,1,2] alpha=1,2,1,2,1");
    CHECK(step.exhausted());
  }

  TEST_CASE("enumerate mode walks the same decision tree as sampling") {
    // Every full step outcome from the worked example's first state.
    ScriptedSource init(worked_example_init_script());
    const EngineState e1 = init_engine(2, 5, Strategy::type1, init);
    const auto outcomes = enumerate_outcomes([&](DecisionSource& src) { return advance(e1, src).transition; });
    // 4 splits x 4 completions x 4 relabelings x 8 labelings.
    CHECK(outcomes.size() == 4 * 4 * 4 * 8);
    std::set<std::vector<std::uint32_t>> distinct;
    for (const auto& t : outcomes) distinct.insert(t.targets());
    SeededSource rng(8);
    for (int i = 0; i < 200; ++i) CHECK(distinct.count(advance(e1, rng).transition.targets()) == 1);
  }
}
