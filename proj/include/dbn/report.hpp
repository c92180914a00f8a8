#pragma once

// Campaign output files. Every writer has a string form so tests can compare
// contents without touching the file system.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "dbn/harness.hpp"

namespace dbn {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// trial_index,distinct_rule_vectors,coverage_percent
std::string coverage_csv(const CampaignSummary& s);
/// Total visits per rule vector. For mu = 2 a 16 x 16 grid (rows f_1,
/// columns f_2); otherwise one `rule_vector,value` row per rule vector.
std::string visits_csv(const CampaignSummary& s);
/// Same layout as visits_csv, holding the latest visit step over all trials.
std::string max_step_csv(const CampaignSummary& s);
/// step,mean_coverage_percent,theta_baseline_percent over the trials that
/// reached the baseline size (all trials if none did).
std::string cumulative_csv(const CampaignSummary& s);
std::string summary_text(const CampaignSummary& s);

/// "coverage min 67.19 max 69.53 mean 68.12 (1000 trials)"
std::string one_line_summary(const CampaignSummary& s);

/// Writes the five campaign files into `dir`, creating it if needed.
/// Throws IoError if the directory or a file cannot be written.
void write_campaign(const CampaignSummary& s, const std::filesystem::path& dir);

}  // namespace dbn
