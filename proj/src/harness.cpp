#include "dbn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace dbn {

std::size_t SimulationConfig::effective_sequence_length() const {
  return sequence_length == 0 ? default_sequence_length(nodes) : sequence_length;
}

void SimulationConfig::validate() const {
  if (nodes < 1 || nodes > 3) throw std::invalid_argument("nodes must be between 1 and 3");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
  if (steps > 0xffffffffULL) throw std::invalid_argument("steps must fit in 32 bits");
  if (burn_in >= steps) throw std::invalid_argument("burn_in must be smaller than steps");
  if (effective_sequence_length() < default_sequence_length(nodes)) {
    throw std::invalid_argument("seq_len must be at least 2^mu + 1 = " +
                                std::to_string(default_sequence_length(nodes)));
  }
  if ((strategy == Strategy::type2 || strategy == Strategy::type3_complement) && nodes != 2) {
    throw std::invalid_argument("type " + std::string(to_string(strategy)) + " requires nodes = 2");
  }
  for (const auto& m : initial_whitelist) {
    if (m.nodes() != nodes) throw std::invalid_argument("initial rule restriction has the wrong node count");
  }
}

std::size_t default_burn_in(Strategy s) { return s == Strategy::type1 ? 5 : 6; }

double TrialRecord::coverage() const {
  return static_cast<double>(visits.size()) / static_cast<double>(rule_vector_space);
}

std::uint32_t TrialRecord::visits_of(std::uint64_t code) const {
  const auto it = std::lower_bound(visits.begin(), visits.end(), code,
                                   [](const RuleVisit& v, std::uint64_t c) { return v.code < c; });
  return it != visits.end() && it->code == code ? it->visits : 0;
}

std::vector<std::uint32_t> TrialRecord::first_visit_curve() const {
  std::vector<std::uint32_t> curve(steps, 0);
  for (const auto& v : visits) ++curve[v.first_visit - 1];
  for (std::size_t i = 1; i < curve.size(); ++i) curve[i] += curve[i - 1];
  return curve;
}

std::optional<std::uint32_t> TrialRecord::steps_to_reach(std::size_t m) const {
  if (m == 0) return 0;
  if (m > visits.size()) return std::nullopt;
  std::vector<std::uint32_t> firsts;
  firsts.reserve(visits.size());
  for (const auto& v : visits) firsts.push_back(v.first_visit);
  std::nth_element(firsts.begin(), firsts.begin() + static_cast<std::ptrdiff_t>(m - 1), firsts.end());
  return firsts[m - 1];
}

namespace {

constexpr std::uint64_t kDenseLimit = 65536;

class VisitCounter {
 public:
  explicit VisitCounter(std::uint64_t space) : dense_(space <= kDenseLimit) {
    if (dense_) table_.resize(space);
  }

  void record(std::uint64_t code, std::uint32_t step) {
    RuleVisit& v = dense_ ? table_[code] : map_[code];
    if (v.visits == 0) {
      v.code = code;
      v.first_visit = step;
    }
    ++v.visits;
    v.last_visit = step;
  }

  std::vector<RuleVisit> take() {
    std::vector<RuleVisit> out;
    if (dense_) {
      for (const auto& v : table_) {
        if (v.visits > 0) out.push_back(v);
      }
    } else {
      out.reserve(map_.size());
      for (const auto& [code, v] : map_) out.push_back(v);
      std::sort(out.begin(), out.end(), [](const RuleVisit& a, const RuleVisit& b) { return a.code < b.code; });
    }
    return out;
  }

 private:
  bool dense_;
  std::vector<RuleVisit> table_;
  std::unordered_map<std::uint64_t, RuleVisit> map_;
};

}  // namespace

TrialRecord run_trial(const SimulationConfig& cfg, std::size_t trial_index) {
  SeededSource rng(derive_seed(cfg.master_seed, trial_index));
  EngineState es = init_engine(cfg.nodes, cfg.effective_sequence_length(), cfg.strategy, rng, cfg.initial_whitelist);

  TrialRecord tr;
  tr.trial_index = trial_index;
  tr.steps = cfg.steps;
  tr.rule_vector_space = rule_vector_count(cfg.nodes);
  VisitCounter counter(tr.rule_vector_space);
  counter.record(rule_vector_code(es.transition), 1);
  for (std::uint32_t k = 2; k <= cfg.steps; ++k) {
    advance_in_place(es, rng);
    counter.record(rule_vector_code(es.transition), k);
  }
  tr.visits = counter.take();
  return tr;
}

double hot_threshold(std::size_t steps) { return 1000.0 * static_cast<double>(steps) / 10000.0; }
double cold_threshold(std::size_t steps) { return 30.0 * static_cast<double>(steps) / 10000.0; }

TrialClass classify_trial(const TrialRecord& tr, const SimulationConfig& cfg) {
  const double h = hot_threshold(cfg.steps);
  for (const auto& v : tr.visits) {
    if (v.visits >= h) return TrialClass::hot;
  }
  return TrialClass::flat;
}

RuleAggregates aggregate(std::span<const TrialRecord> trials, const SimulationConfig& cfg) {
  RuleAggregates out;
  const double h = hot_threshold(cfg.steps);
  for (const auto& tr : trials) {
    const bool hot = classify_trial(tr, cfg) == TrialClass::hot;
    for (const auto& v : tr.visits) {
      RuleAggregate& a = out[v.code];
      a.total_visits += v.visits;
      a.max_last_visit = std::max(a.max_last_visit, v.last_visit);
      ++a.trials_visited;
      if (hot) a.hot_class_visits += v.visits;
      if (v.visits >= h) ++a.hot_trials;
    }
  }
  return out;
}

RuleAggregates merge(RuleAggregates a, const RuleAggregates& b) {
  for (const auto& [code, rb] : b) {
    RuleAggregate& ra = a[code];
    ra.total_visits += rb.total_visits;
    ra.max_last_visit = std::max(ra.max_last_visit, rb.max_last_visit);
    ra.trials_visited += rb.trials_visited;
    ra.hot_class_visits += rb.hot_class_visits;
    ra.hot_trials += rb.hot_trials;
  }
  return a;
}

bool HistogramBin::contains(std::size_t distinct, std::uint64_t space) const {
  // Exact comparison of 100 * distinct / space against the bin edges.
  const double scaled = 100.0 * static_cast<double>(distinct);
  const double lo_edge = lo * static_cast<double>(space);
  const double hi_edge = hi * static_cast<double>(space);
  return scaled >= lo_edge && (closed_hi ? scaled <= hi_edge : scaled < hi_edge);
}

std::vector<HistogramBin> coverage_bins(Strategy s, int nodes) {
  auto half_open = [](double lo, double hi) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "[%g,%g)", lo, hi);
    return HistogramBin{buf, lo, hi, false, 0};
  };
  std::vector<HistogramBin> bins;
  if (nodes == 2 && s == Strategy::type1) {
    bins.push_back(half_open(0, 65));
    for (int p = 65; p < 70; ++p) bins.push_back(half_open(p, p + 1));
    bins.push_back({"[70,100]", 70, 100, true, 0});
  } else if (nodes == 2 && s == Strategy::type2) {
    bins.push_back(half_open(0, 67));
    for (int p = 67; p < 71; ++p) bins.push_back(half_open(p, p + 1));
    bins.push_back({"[71,100]", 71, 100, true, 0});
  } else {
    bins.push_back(half_open(0, 50));
    for (int p = 50; p < 100; p += 10) bins.push_back(half_open(p, p + 10));
    bins.push_back({"100", 100, 100, true, 0});
  }
  return bins;
}

std::vector<HistogramBin> coverage_histogram(std::span<const TrialRecord> trials, Strategy s, int nodes) {
  std::vector<HistogramBin> bins = coverage_bins(s, nodes);
  for (const auto& tr : trials) {
    for (auto& b : bins) {
      if (b.contains(tr.distinct(), tr.rule_vector_space)) {
        ++b.count;
        break;
      }
    }
  }
  return bins;
}

RuleAggregate CampaignSummary::rule(std::uint64_t code) const {
  const auto it = rules.find(code);
  return it == rules.end() ? RuleAggregate{} : it->second;
}

std::size_t CampaignSummary::class_count(TrialClass c) const {
  return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), c));
}

CampaignSummary summarize(const SimulationConfig& cfg, std::vector<TrialRecord> trials) {
  CampaignSummary s;
  s.config = cfg;
  s.trials = std::move(trials);
  s.rules = aggregate(s.trials, cfg);
  s.classes.reserve(s.trials.size());
  for (const auto& tr : s.trials) s.classes.push_back(classify_trial(tr, cfg));
  s.histogram = coverage_histogram(s.trials, cfg.strategy, cfg.nodes);
  return s;
}

CampaignSummary run_campaign(const SimulationConfig& cfg) {
  cfg.validate();
  std::vector<TrialRecord> records(cfg.trials);
  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.trials));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.trials; i = next++) {
      try {
        records[i] = run_trial(cfg, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cfg.trials;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(cfg, std::move(records));
}

double theta(std::uint64_t n, std::uint64_t m) {
  if (m < 1 || m > n) throw std::domain_error("theta(n, m) needs 1 <= m <= n");
  double sum = 0;
  const double nd = static_cast<double>(n);
  for (std::uint64_t i = 1; i <= m; ++i) sum += nd / static_cast<double>(n - i + 1);
  return sum;
}

double theta_baseline_percent(std::uint64_t n, std::uint64_t space, double step) {
  // theta(n, m) for consecutive m brackets `step`; interpolate m between them.
  double prev_theta = 0;
  double sum = 0;
  const double nd = static_cast<double>(n);
  for (std::uint64_t m = 1; m <= n; ++m) {
    sum += nd / static_cast<double>(n - m + 1);
    if (sum >= step) {
      const double frac = (step - prev_theta) / (sum - prev_theta);
      return 100.0 * (static_cast<double>(m - 1) + frac) / static_cast<double>(space);
    }
    prev_theta = sum;
  }
  return 100.0 * nd / static_cast<double>(space);
}

std::uint64_t fixed_point_matrix_count(int nodes) {
  const std::uint64_t n = state_count(nodes);
  std::uint64_t all = 1, none = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    all *= n;
    none *= n - 1;
  }
  return all - none;
}

std::vector<BooleanMatrix> all_matrices(int nodes, std::optional<bool> has_fixed_point) {
  const std::uint32_t n = state_count(nodes);
  if (nodes > 2) throw std::domain_error("matrix enumeration is limited to mu <= 2");
  std::vector<BooleanMatrix> out;
  std::vector<std::uint32_t> targets(n, 0);
  for (;;) {
    BooleanMatrix m(nodes, targets);
    if (!has_fixed_point || (m.fixed_point_count() > 0) == *has_fixed_point) out.push_back(std::move(m));
    std::uint32_t i = n;
    while (i > 0 && ++targets[i - 1] == n) targets[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

std::uint64_t baseline_size(Strategy s, int nodes) {
  if (s == Strategy::type1 || s == Strategy::type2) return fixed_point_matrix_count(nodes);
  return rule_vector_count(nodes);
}

std::vector<std::uint64_t> never_visited_after(const CampaignSummary& summary, std::size_t b) {
  std::vector<std::uint64_t> out;
  const std::uint64_t space = summary.rule_vector_space();
  for (std::uint64_t code = 0; code < space; ++code) {
    const auto it = summary.rules.find(code);
    if (it == summary.rules.end() || it->second.max_last_visit <= b) out.push_back(code);
  }
  return out;
}

std::string BlockPatternReport::to_string() const {
  std::ostringstream os;
  os << "nonempty blocks: " << nonempty_blocks << ", identical: " << matching_blocks
     << ", cells per block: " << pattern_cells
     << ", layout is flipped pattern: " << (layout_is_flipped_pattern ? "yes" : "no")
     << ", holds: " << (holds ? "yes" : "no");
  return os.str();
}

BlockPatternReport block_pattern_check(std::span<const std::uint64_t> codes) {
  using Grid = std::array<std::array<bool, 4>, 4>;
  std::array<std::array<Grid, 4>, 4> blocks{};
  for (std::uint64_t code : codes) {
    if (code >= 256) throw std::domain_error("block pattern check expects mu = 2 rule-vector codes");
    const std::uint64_t r = code / 16, c = code % 16;  // f_1 - 1, f_2 - 1
    blocks[r / 4][c / 4][r % 4][c % 4] = true;
  }
  auto cells = [](const Grid& g) {
    std::size_t n = 0;
    for (const auto& row : g) n += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
    return n;
  };

  BlockPatternReport rep;
  bool have_pattern = false;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (cells(blocks[i][j]) == 0) continue;
      ++rep.nonempty_blocks;
      rep.layout[i][j] = true;
      if (!have_pattern) {
        rep.pattern = blocks[i][j];
        rep.pattern_cells = cells(rep.pattern);
        have_pattern = true;
      }
      if (blocks[i][j] == rep.pattern) ++rep.matching_blocks;
    }
  }
  if (!have_pattern) return rep;
  Grid flipped{};
  for (std::size_t i = 0; i < 4; ++i) flipped[i] = rep.pattern[3 - i];
  rep.layout_is_flipped_pattern = flipped == rep.layout;
  rep.holds = rep.nonempty_blocks == 9 && rep.matching_blocks == 9 && rep.pattern_cells == 9 &&
              rep.layout_is_flipped_pattern;
  return rep;
}

std::vector<double> cumulative_curve(const CampaignSummary& summary,
                                     const std::function<bool(const TrialRecord&)>& qualifies) {
  std::vector<double> sum(summary.config.steps, 0.0);
  std::size_t count = 0;
  for (const auto& tr : summary.trials) {
    if (!qualifies(tr)) continue;
    ++count;
    const auto curve = tr.first_visit_curve();
    for (std::size_t i = 0; i < curve.size(); ++i) sum[i] += curve[i];
  }
  if (count == 0) throw std::domain_error("no trial satisfies the qualifying predicate");
  const double scale = 100.0 / (static_cast<double>(count) * static_cast<double>(summary.rule_vector_space()));
  for (auto& v : sum) v *= scale;
  return sum;
}

std::optional<double> mean_steps_to(const CampaignSummary& summary, std::size_t target) {
  double total = 0;
  std::size_t n = 0;
  for (const auto& tr : summary.trials) {
    if (auto s = tr.steps_to_reach(target)) {
      total += *s;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return total / static_cast<double>(n);
}

std::vector<std::uint64_t> hot_ranking(const CampaignSummary& summary) {
  std::vector<std::uint64_t> codes;
  for (const auto& [code, a] : summary.rules) {
    if (a.hot_class_visits > 0) codes.push_back(code);
  }
  std::stable_sort(codes.begin(), codes.end(), [&](std::uint64_t a, std::uint64_t b) {
    return summary.rules.at(a).hot_class_visits > summary.rules.at(b).hot_class_visits;
  });
  return codes;
}

}  // namespace dbn
