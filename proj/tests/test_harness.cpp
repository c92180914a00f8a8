#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "dbn/config.hpp"
#include "dbn/harness.hpp"
#include "dbn/report.hpp"

using namespace dbn;

namespace {

SimulationConfig small_config(Strategy s, std::size_t trials = 12, std::size_t steps = 400) {
  SimulationConfig cfg;
  cfg.strategy = s;
  cfg.trials = trials;
  cfg.steps = steps;
  cfg.burn_in = 5;
  cfg.threads = 1;
  return cfg;
}

std::vector<std::uint64_t> codes_of(const std::vector<BooleanMatrix>& ms) {
  std::vector<std::uint64_t> out;
  for (const auto& m : ms) out.push_back(rule_vector_code(m));
  return out;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("theta") {
    // theta(n, n) = n * H_n.
    for (std::uint64_t n : {1ULL, 2ULL, 16ULL, 175ULL, 256ULL}) {
      double h = 0;
      for (std::uint64_t i = 1; i <= n; ++i) h += 1.0 / static_cast<double>(i);
      CHECK(std::fabs(theta(n, n) - static_cast<double>(n) * h) < 1e-9 * static_cast<double>(n) * h);
    }
    CHECK(theta(10, 1) == doctest::Approx(1.0));
    for (std::uint64_t m = 2; m <= 175; ++m) CHECK(theta(175, m) > theta(175, m - 1));
    CHECK_THROWS_AS(theta(10, 11), std::domain_error);
    CHECK_THROWS_AS(theta(10, 0), std::domain_error);
  }

  TEST_CASE("theta baseline curve") {
    CHECK(theta_baseline_percent(256, 256, 1.0) == doctest::Approx(100.0 / 256));
    CHECK(theta_baseline_percent(256, 256, theta(256, 128)) == doctest::Approx(50.0));
    CHECK(theta_baseline_percent(175, 256, 1e9) == doctest::Approx(100.0 * 175 / 256));
    double prev = 0;
    for (double step = 1; step < 2000; step += 7) {
      const double v = theta_baseline_percent(175, 256, step);
      CHECK(v >= prev);
      prev = v;
    }
  }

  TEST_CASE("fixed-point counts") {
    CHECK(fixed_point_matrix_count(2) == 175);
    CHECK(fixed_point_matrix_count(1) == 3);
    CHECK(all_matrices(2, true).size() == 175);
    CHECK(all_matrices(2, false).size() == 81);
    CHECK(all_matrices(2).size() == 256);
    CHECK_THROWS_AS(all_matrices(3), std::domain_error);
    CHECK(baseline_size(Strategy::type1, 2) == 175);
    CHECK(baseline_size(Strategy::type3, 2) == 256);
  }

  TEST_CASE("block pattern") {
    const auto free = codes_of(all_matrices(2, false));
    const BlockPatternReport rep = block_pattern_check(free);
    CHECK(rep.holds);
    CHECK(rep.nonempty_blocks == 9);
    CHECK(rep.pattern_cells == 9);

    std::mt19937_64 rng(12);
    std::vector<std::uint64_t> all(256);
    std::iota(all.begin(), all.end(), 0ULL);
    std::shuffle(all.begin(), all.end(), rng);
    const std::vector<std::uint64_t> random81(all.begin(), all.begin() + 81);
    CHECK_FALSE(block_pattern_check(random81).holds);

    const BlockPatternReport empty = block_pattern_check({});
    CHECK_FALSE(empty.holds);
    CHECK(empty.nonempty_blocks == 0);
    const std::vector<std::uint64_t> too_big{256};
    CHECK_THROWS_AS(block_pattern_check(too_big), std::domain_error);
  }

  TEST_CASE("a one-step trial visits only T_1") {
    SimulationConfig cfg = small_config(Strategy::type1, 3, 1);
    cfg.burn_in = 0;
    const TrialRecord tr = run_trial(cfg, 0);
    CHECK(tr.distinct() == 1);
    CHECK(tr.coverage() == doctest::Approx(1.0 / 256));
    CHECK(tr.visits[0].first_visit == 1);
  }

  TEST_CASE("visits are conserved") {
    for (const Strategy s : {Strategy::type1, Strategy::type2, Strategy::type3, Strategy::type4}) {
      const SimulationConfig cfg = small_config(s, 4, 300);
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        const TrialRecord tr = run_trial(cfg, i);
        std::uint64_t total = 0;
        for (const auto& v : tr.visits) {
          total += v.visits;
          CHECK(v.first_visit <= v.last_visit);
          CHECK(v.last_visit <= cfg.steps);
        }
        CHECK(total == cfg.steps);
        const auto curve = tr.first_visit_curve();
        CHECK(curve.size() == cfg.steps);
        CHECK(curve.front() == 1);
        CHECK(curve.back() == tr.distinct());
        CHECK(std::is_sorted(curve.begin(), curve.end()));
        CHECK(tr.steps_to_reach(1) == std::optional<std::uint32_t>(1));
        CHECK_FALSE(tr.steps_to_reach(tr.distinct() + 1).has_value());
      }
    }
  }

  TEST_CASE("campaigns do not depend on the thread count") {
    SimulationConfig cfg = small_config(Strategy::type4, 16, 300);
    const CampaignSummary one = run_campaign(cfg);
    cfg.threads = 4;
    const CampaignSummary four = run_campaign(cfg);
    CHECK(one.trials == four.trials);
    CHECK(one.rules == four.rules);
    CHECK(coverage_csv(one) == coverage_csv(four));
  }

  TEST_CASE("aggregates merge in any grouping") {
    const SimulationConfig cfg = small_config(Strategy::type3, 12, 200);
    std::vector<TrialRecord> trials;
    for (std::size_t i = 0; i < cfg.trials; ++i) trials.push_back(run_trial(cfg, i));
    const RuleAggregates whole = aggregate(trials, cfg);
    std::mt19937_64 rng(3);
    for (int round = 0; round < 5; ++round) {
      std::shuffle(trials.begin(), trials.end(), rng);
      const std::span<const TrialRecord> all(trials);
      const auto a = aggregate(all.subspan(0, 3), cfg);
      const auto b = aggregate(all.subspan(3, 5), cfg);
      const auto c = aggregate(all.subspan(8), cfg);
      CHECK(merge(merge(a, b), c) == whole);
      CHECK(merge(a, merge(b, c)) == whole);
      CHECK(merge(c, merge(a, b)) == whole);
    }
  }

  TEST_CASE("trial classes") {
    SimulationConfig cfg = small_config(Strategy::type1, 1, 10000);
    TrialRecord tr;
    tr.steps = 10000;
    tr.rule_vector_space = 256;
    tr.visits = {{3, 999, 1, 10000}, {4, 9001, 2, 9999}};
    CHECK(classify_trial(tr, cfg) == TrialClass::hot);
    tr.visits = {{3, 999, 1, 10000}};
    CHECK(classify_trial(tr, cfg) == TrialClass::flat);
    tr.visits = {{3, 1000, 1, 10000}};
    CHECK(classify_trial(tr, cfg) == TrialClass::hot);
    CHECK(hot_threshold(500) == doctest::Approx(50.0));
    CHECK(cold_threshold(10000) == doctest::Approx(30.0));
  }

  TEST_CASE("cumulative curve") {
    const CampaignSummary s = run_campaign(small_config(Strategy::type3, 6, 250));
    const auto curve = cumulative_curve(s, [](const TrialRecord&) { return true; });
    CHECK(curve.size() == 250);
    CHECK(curve.front() == doctest::Approx(100.0 / 256));
    CHECK(std::is_sorted(curve.begin(), curve.end()));
    CHECK_THROWS_AS(cumulative_curve(s, [](const TrialRecord&) { return false; }), std::domain_error);
    CHECK(mean_steps_to(s, 1) == std::optional<double>(1.0));
    CHECK_FALSE(mean_steps_to(s, 257).has_value());
  }

  TEST_CASE("never visited after burn-in") {
    CampaignSummary s;
    s.config = small_config(Strategy::type1, 1, 100);
    s.rules[7].max_last_visit = 5;
    s.rules[8].max_last_visit = 6;
    const auto after5 = never_visited_after(s, 5);
    CHECK(after5.size() == 255);
    CHECK(std::find(after5.begin(), after5.end(), 7) != after5.end());
    CHECK(std::find(after5.begin(), after5.end(), 8) == after5.end());
    CHECK(never_visited_after(s, 6).size() == 256);
  }

  TEST_CASE("coverage histogram") {
    for (const Strategy s : {Strategy::type1, Strategy::type2, Strategy::type4}) {
      const auto bins = coverage_bins(s, 2);
      // Every distinct count falls into exactly one bin.
      for (std::size_t d = 0; d <= 256; ++d) {
        std::size_t hits = 0;
        for (const auto& b : bins) hits += b.contains(d, 256) ? 1 : 0;
        CHECK(hits == 1);
      }
    }
    const CampaignSummary s = run_campaign(small_config(Strategy::type1, 10, 200));
    std::size_t total = 0;
    for (const auto& b : s.histogram) total += b.count;
    CHECK(total == 10);
    CHECK(coverage_bins(Strategy::type1, 2)[1].label == "[65,66)");
  }

  TEST_CASE("validation") {
    SimulationConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.nodes = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SimulationConfig{};
    cfg.sequence_length = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SimulationConfig{};
    cfg.nodes = 3;
    cfg.strategy = Strategy::type2;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SimulationConfig{};
    cfg.steps = 5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  TEST_CASE("restricted initial rule vectors") {
    SimulationConfig cfg = small_config(Strategy::type1, 40, 1);
    cfg.burn_in = 0;
    cfg.initial_whitelist = all_matrices(2, true);
    for (std::size_t i = 0; i < cfg.trials; ++i) {
      const TrialRecord tr = run_trial(cfg, i);
      CHECK(matrix_from_rule_vector(rule_vector_from_code(2, tr.visits[0].code)).fixed_point_count() > 0);
    }
  }

  TEST_CASE("three-node campaigns use sparse counting") {
    SimulationConfig cfg = small_config(Strategy::type4, 2, 200);
    cfg.nodes = 3;
    const CampaignSummary s = run_campaign(cfg);
    CHECK(s.rule_vector_space() == 16777216ULL);
    for (const auto& tr : s.trials) CHECK(std::is_sorted(tr.visits.begin(), tr.visits.end(),
                                                         [](auto& a, auto& b) { return a.code < b.code; }));
    const std::string v = visits_csv(s);
    CHECK(v.rfind("rule_vector,value\n", 0) == 0);
  }
}

TEST_SUITE("report") {
  TEST_CASE("file formats") {
    const CampaignSummary s = run_campaign(small_config(Strategy::type1, 3, 100));
    const std::string cov = coverage_csv(s);
    CHECK(cov.rfind("trial_index,distinct_rule_vectors,coverage_percent\n", 0) == 0);
    CHECK(std::count(cov.begin(), cov.end(), '\n') == 4);

    const std::string grid = visits_csv(s);
    CHECK(grid.rfind("f1\\f2,1,2,3", 0) == 0);
    CHECK(std::count(grid.begin(), grid.end(), '\n') == 17);
    // Grid entries add up to the total number of steps.
    std::istringstream in(grid);
    std::string line;
    std::getline(in, line);
    std::uint64_t total = 0;
    while (std::getline(in, line)) {
      std::istringstream row(line);
      std::string cell;
      std::getline(row, cell, ',');
      while (std::getline(row, cell, ',')) total += std::stoull(cell);
    }
    CHECK(total == 300);

    const std::string cum = cumulative_csv(s);
    CHECK(cum.rfind("step,mean_coverage_percent,theta_baseline_percent\n", 0) == 0);
    CHECK(std::count(cum.begin(), cum.end(), '\n') == 101);
    CHECK(summary_text(s).find("not visited after") != std::string::npos);
    CHECK(one_line_summary(s).find("(3 trials)") != std::string::npos);
  }

  TEST_CASE("writing to an unwritable location") {
    const CampaignSummary s = run_campaign(small_config(Strategy::type1, 1, 20));
    CHECK_THROWS_AS(write_campaign(s, "/proc/dbn_cannot_write_here"), IoError);
  }
}

TEST_SUITE("config") {
  TEST_CASE("key value files") {
    std::istringstream in("# comment\n\ntype = 2\nburn-in=6\n  steps =  500 \n");
    const auto entries = parse_config(in, {"type", "burn_in", "steps"});
    REQUIRE(entries.size() == 3);
    CHECK(entries[1].key == "burn_in");
    CHECK(entries[2].value == "500");
    CHECK(entries[2].line == 5);
  }

  TEST_CASE("config errors name the line") {
    auto error_of = [](const std::string& text) {
      std::istringstream in(text);
      try {
        parse_config(in, {"type", "steps"});
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(error_of("type = 1\nbogus\n").rfind("line 2:", 0) == 0);
    CHECK(error_of("colour = red\n").rfind("line 1:", 0) == 0);
    CHECK(error_of("type = 1\n\ntype = 2\n").rfind("line 3:", 0) == 0);
  }

  TEST_CASE("rule vector lists") {
    std::istringstream in("(5,8)\n11,13  # swap\n\n13 11\n");
    const auto ms = parse_rule_vector_list(in, 2);
    REQUIRE(ms.size() == 3);
    CHECK(rule_vector_from_matrix(ms[0]) == RuleVector{5, 8});
    CHECK(ms[2] == BooleanMatrix::identity(2));
    std::istringstream bad("(5,8)\n(5,99)\n");
    CHECK_THROWS_AS(parse_rule_vector_list(bad, 2), ConfigError);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(parse_rule_vector_list(empty, 2), ConfigError);
  }
}
