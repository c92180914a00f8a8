#include "dbn/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dbn {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

template <class Value>
std::string rule_grid(const CampaignSummary& s, Value value) {
  std::ostringstream os;
  const std::uint64_t space = s.rule_vector_space();
  if (s.config.nodes == 2) {
    os << "f1\\f2";
    for (int c = 1; c <= 16; ++c) os << ',' << c;
    os << '\n';
    for (std::uint64_t r = 0; r < 16; ++r) {
      os << r + 1;
      for (std::uint64_t c = 0; c < 16; ++c) os << ',' << value(s.rule(r * 16 + c));
      os << '\n';
    }
    return os.str();
  }
  os << "rule_vector,value\n";
  for (std::uint64_t code = 0; code < space; ++code) {
    os << '"' << rule_vector_from_code(s.config.nodes, code).to_string() << "\"," << value(s.rule(code)) << '\n';
  }
  return os.str();
}

std::size_t cumulative_target(const CampaignSummary& s) {
  return static_cast<std::size_t>(std::min(baseline_size(s.config.strategy, s.config.nodes), s.rule_vector_space()));
}

bool any_reaches(const CampaignSummary& s, std::size_t target) {
  return std::any_of(s.trials.begin(), s.trials.end(), [&](const TrialRecord& t) { return t.distinct() >= target; });
}

}  // namespace

std::string coverage_csv(const CampaignSummary& s) {
  std::ostringstream os;
  os << "trial_index,distinct_rule_vectors,coverage_percent\n";
  for (const auto& tr : s.trials) {
    os << tr.trial_index << ',' << tr.distinct() << ',' << fixed(tr.coverage_percent(), 4) << '\n';
  }
  return os.str();
}

std::string visits_csv(const CampaignSummary& s) {
  return rule_grid(s, [](const RuleAggregate& a) { return a.total_visits; });
}

std::string max_step_csv(const CampaignSummary& s) {
  return rule_grid(s, [](const RuleAggregate& a) { return a.max_last_visit; });
}

std::string cumulative_csv(const CampaignSummary& s) {
  const std::size_t target = cumulative_target(s);
  const bool restrict = any_reaches(s, target);
  const auto curve = cumulative_curve(s, [&](const TrialRecord& t) { return !restrict || t.distinct() >= target; });
  const std::uint64_t n = baseline_size(s.config.strategy, s.config.nodes);
  std::ostringstream os;
  os << "step,mean_coverage_percent,theta_baseline_percent\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double step = static_cast<double>(i + 1);
    os << i + 1 << ',' << fixed(curve[i], 4) << ',' << fixed(theta_baseline_percent(n, s.rule_vector_space(), step), 4)
       << '\n';
  }
  return os.str();
}

std::string one_line_summary(const CampaignSummary& s) {
  double lo = 100, hi = 0, sum = 0;
  for (const auto& tr : s.trials) {
    lo = std::min(lo, tr.coverage_percent());
    hi = std::max(hi, tr.coverage_percent());
    sum += tr.coverage_percent();
  }
  return "coverage min " + fixed(lo, 2) + " max " + fixed(hi, 2) + " mean " +
         fixed(sum / static_cast<double>(s.trials.size()), 2) + " (" + std::to_string(s.trials.size()) + " trials)";
}

std::string summary_text(const CampaignSummary& s) {
  const auto& c = s.config;
  const int mu = c.nodes;
  std::ostringstream os;
  os << "type " << to_string(c.strategy) << ", nodes " << mu << ", trials " << c.trials << ", steps " << c.steps
     << ", seq_len " << c.effective_sequence_length() << ", seed " << c.master_seed << ", burn_in " << c.burn_in;
  if (!c.initial_whitelist.empty()) os << ", initial rule vectors restricted to " << c.initial_whitelist.size();
  os << "\n" << one_line_summary(s) << "\n\n";

  os << "Percentage of rule vectors visited, by interval\n";
  os << "interval";
  for (const auto& b : s.histogram) os << '\t' << b.label;
  os << "\ntrials";
  for (const auto& b : s.histogram) os << '\t' << b.count;
  os << "\n\n";

  const auto never = never_visited_after(s, c.burn_in);
  os << "Rule vectors not visited after step " << c.burn_in << ": " << never.size() << "\n";
  for (std::size_t i = 0; i < never.size(); ++i) {
    os << (i % 8 == 0 ? "" : " ") << rule_vector_from_code(mu, never[i]).to_string();
    if (i % 8 == 7 || i + 1 == never.size()) os << '\n';
  }
  if (mu == 2 && !never.empty()) os << "block pattern: " << block_pattern_check(never).to_string() << '\n';
  os << '\n';

  os << "Trial classes (hot threshold " << fixed(hot_threshold(c.steps), 1) << " visits)\n";
  os << "class (i)\t" << s.class_count(TrialClass::hot) << "\nclass (ii)\t" << s.class_count(TrialClass::flat)
     << "\n";
  const auto ranking = hot_ranking(s);
  if (!ranking.empty()) {
    os << "Most visited rule vectors in class (i) trials (visits, trials hot)\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(10, ranking.size()); ++i) {
      const auto a = s.rule(ranking[i]);
      os << rule_vector_from_code(mu, ranking[i]).to_string() << '\t' << a.hot_class_visits << '\t' << a.hot_trials
         << '\n';
    }
  }
  os << '\n';

  const std::size_t target = cumulative_target(s);
  std::size_t reached = 0;
  for (const auto& tr : s.trials) reached += tr.distinct() >= target ? 1 : 0;
  os << "Trials reaching " << target << " rule vectors: " << reached << '\n';
  if (const auto m = mean_steps_to(s, target)) {
    os << "mean steps to reach " << target << ": " << fixed(*m, 1) << " (theta(" << baseline_size(c.strategy, mu)
       << ", " << target << ") = " << fixed(theta(baseline_size(c.strategy, mu), target), 1) << ")\n";
  }
  if (reached == 0) os << "cumulative.csv averages over all trials\n";
  return os.str();
}

void write_campaign(const CampaignSummary& s, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  auto put = [&dir](const char* name, const std::string& body) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << body;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
  };
  put("coverage.csv", coverage_csv(s));
  put("visits.csv", visits_csv(s));
  put("max_step.csv", max_step_csv(s));
  put("cumulative.csv", cumulative_csv(s));
  put("summary.txt", summary_text(s));
}

}  // namespace dbn
