#pragma once

// Trial campaigns: per-trial visit statistics, campaign aggregates and the
// analyses run over them (coverage histograms, coupon-collector baselines,
// never-visited sets, hot rule vectors).

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dbn/engine.hpp"

namespace dbn {

struct SimulationConfig {
  int nodes = 2;
  std::size_t trials = 1000;
  std::size_t steps = 10000;
  std::size_t sequence_length = 0;  // 0: 2^mu + 1
  Strategy strategy = Strategy::type1;
  std::uint64_t master_seed = 1;
  std::size_t burn_in = 5;
  std::vector<BooleanMatrix> initial_whitelist;  // empty: T_1 uniform
  unsigned threads = 0;                          // 0: hardware concurrency

  std::size_t effective_sequence_length() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// 5 for type 1, 6 for every other strategy.
std::size_t default_burn_in(Strategy s);

/// Visit statistics of one rule vector within one trial. Steps are 1-based.
struct RuleVisit {
  std::uint64_t code = 0;
  std::uint32_t visits = 0;
  std::uint32_t first_visit = 0;
  std::uint32_t last_visit = 0;

  bool operator==(const RuleVisit&) const = default;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::size_t steps = 0;
  std::uint64_t rule_vector_space = 0;
  std::vector<RuleVisit> visits;  // visited rule vectors only, ascending code

  std::size_t distinct() const { return visits.size(); }
  double coverage() const;
  double coverage_percent() const { return 100.0 * coverage(); }
  std::uint32_t visits_of(std::uint64_t code) const;
  /// Distinct rule vectors seen up to and including each step.
  std::vector<std::uint32_t> first_visit_curve() const;
  /// Step at which the m-th distinct rule vector was first seen.
  std::optional<std::uint32_t> steps_to_reach(std::size_t m) const;

  bool operator==(const TrialRecord&) const = default;
};

/// Runs trial `trial_index` with the child seed derive_seed(master_seed, trial_index).
TrialRecord run_trial(const SimulationConfig& cfg, std::size_t trial_index);

/// Visit threshold for a "hot" rule vector: 1000 scaled by steps / 10000.
double hot_threshold(std::size_t steps);
/// Reporting-only threshold for a "cold" rule vector: 30 scaled likewise.
double cold_threshold(std::size_t steps);

enum class TrialClass { hot, flat };  // class (i), class (ii)
TrialClass classify_trial(const TrialRecord& tr, const SimulationConfig& cfg);

struct RuleAggregate {
  std::uint64_t total_visits = 0;
  std::uint32_t max_last_visit = 0;
  std::uint32_t trials_visited = 0;
  std::uint64_t hot_class_visits = 0;  // summed over class (i) trials
  std::uint32_t hot_trials = 0;        // trials in which the vector was hot

  bool operator==(const RuleAggregate&) const = default;
};

using RuleAggregates = std::map<std::uint64_t, RuleAggregate>;

RuleAggregates aggregate(std::span<const TrialRecord> trials, const SimulationConfig& cfg);
/// Associative and commutative.
RuleAggregates merge(RuleAggregates a, const RuleAggregates& b);

struct HistogramBin {
  std::string label;
  double lo = 0;
  double hi = 0;
  bool closed_hi = false;
  std::size_t count = 0;

  bool contains(std::size_t distinct, std::uint64_t space) const;
};

/// Coverage bins: 1-point bins for types 1 and 2 (mu = 2), deciles otherwise.
std::vector<HistogramBin> coverage_bins(Strategy s, int nodes);
std::vector<HistogramBin> coverage_histogram(std::span<const TrialRecord> trials, Strategy s, int nodes);

struct CampaignSummary {
  SimulationConfig config;
  std::vector<TrialRecord> trials;  // in trial order
  RuleAggregates rules;
  std::vector<TrialClass> classes;
  std::vector<HistogramBin> histogram;

  std::uint64_t rule_vector_space() const { return rule_vector_count(config.nodes); }
  RuleAggregate rule(std::uint64_t code) const;
  std::size_t class_count(TrialClass c) const;
};

CampaignSummary summarize(const SimulationConfig& cfg, std::vector<TrialRecord> trials);
CampaignSummary run_campaign(const SimulationConfig& cfg);

/// sum_{i=1..m} n / (n - i + 1), summed with i ascending. Throws
/// std::domain_error unless 1 <= m <= n.
double theta(std::uint64_t n, std::uint64_t m);

/// The parametric curve (theta(n, m), 100 m / space) read as a function of
/// the step: the percentage reached at `step`, linear in m between points.
double theta_baseline_percent(std::uint64_t n, std::uint64_t space, double step);

/// Rule vectors with at least one fixed point: N^N - (N-1)^N of them.
std::uint64_t fixed_point_matrix_count(int nodes);
/// Every transition matrix, filtered by whether it has a fixed point.
std::vector<BooleanMatrix> all_matrices(int nodes, std::optional<bool> has_fixed_point = std::nullopt);

/// Baseline size n of the coupon-collector curve for a campaign.
std::uint64_t baseline_size(Strategy s, int nodes);

/// Rule vectors whose latest visit over all trials is at step <= b
/// (never-visited vectors included), ascending code.
std::vector<std::uint64_t> never_visited_after(const CampaignSummary& summary, std::size_t b);

struct BlockPatternReport {
  bool holds = false;
  std::size_t nonempty_blocks = 0;
  std::size_t matching_blocks = 0;           // nonempty blocks equal to the first one
  std::size_t pattern_cells = 0;
  std::array<std::array<bool, 4>, 4> pattern{};  // cells of the first nonempty block
  std::array<std::array<bool, 4>, 4> layout{};   // which blocks are nonempty
  bool layout_is_flipped_pattern = false;

  std::string to_string() const;
};

/// Splits the 16 x 16 grid (rows f_1, columns f_2) into sixteen 4 x 4 blocks
/// and checks for nine identical nine-cell blocks whose block layout equals
/// that pattern turned upside down. Codes are mu = 2 rule-vector codes.
BlockPatternReport block_pattern_check(std::span<const std::uint64_t> codes);

/// Mean of first_visit_curve over the trials accepted by `qualifies`, as a
/// percentage of the rule-vector space, one entry per step. Throws
/// std::domain_error if no trial qualifies.
std::vector<double> cumulative_curve(const CampaignSummary& summary,
                                     const std::function<bool(const TrialRecord&)>& qualifies);

/// Mean step at which qualifying trials reached `target` distinct rule
/// vectors; nullopt if none reached it.
std::optional<double> mean_steps_to(const CampaignSummary& summary, std::size_t target);

/// Rule vectors ordered by descending total visits over class (i) trials.
std::vector<std::uint64_t> hot_ranking(const CampaignSummary& summary);

}  // namespace dbn
