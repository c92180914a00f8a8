// dbn: run simulation campaigns, print rule tables, replay golden examples.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dbn/config.hpp"
#include "dbn/golden.hpp"
#include "dbn/harness.hpp"
#include "dbn/report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunFlags {
  std::string type = "1";
  std::size_t trials = 1000;
  std::size_t steps = 10000;
  int nodes = 2;
  std::size_t seq_len = 0;
  std::uint64_t seed = 1;
  std::size_t burn_in = 0;
  bool burn_in_set = false;
  std::string out_dir = "dbn_out";
  std::string restrict_initial;
  unsigned threads = 0;
  std::string config;
};

template <class T>
T parse_number(const dbn::ConfigEntry& e) {
  std::istringstream in(e.value);
  T v{};
  if (!(in >> v) || !in.eof()) {
    throw dbn::ConfigError("line " + std::to_string(e.line) + ": '" + e.value + "' is not a valid " + e.key);
  }
  return v;
}

// Values from the config file fill every flag not given on the command line.
void apply_config(RunFlags& f, const CLI::App& run) {
  std::ifstream in(f.config);
  if (!in) throw std::ios_base::failure("cannot read config file " + f.config);
  const std::set<std::string> keys = {"type", "trials", "steps", "nodes", "seq_len",
                                      "seed", "burn_in", "out_dir", "restrict_initial", "threads"};
  for (const auto& e : dbn::parse_config(in, keys)) {
    std::string flag = "--" + e.key;
    for (char& ch : flag) ch = ch == '_' ? '-' : ch;
    if (run.get_option(flag)->count() > 0) continue;
    if (e.key == "type") f.type = e.value;
    else if (e.key == "trials") f.trials = parse_number<std::size_t>(e);
    else if (e.key == "steps") f.steps = parse_number<std::size_t>(e);
    else if (e.key == "nodes") f.nodes = parse_number<int>(e);
    else if (e.key == "seq_len") f.seq_len = parse_number<std::size_t>(e);
    else if (e.key == "seed") f.seed = parse_number<std::uint64_t>(e);
    else if (e.key == "burn_in") {
      f.burn_in = parse_number<std::size_t>(e);
      f.burn_in_set = true;
    }
    else if (e.key == "out_dir") f.out_dir = e.value;
    else if (e.key == "restrict_initial") f.restrict_initial = e.value;
    else if (e.key == "threads") f.threads = parse_number<unsigned>(e);
  }
}

dbn::SimulationConfig build_config(RunFlags& f, const CLI::App& run) {
  const bool out_dir_flag = run.get_option("--out-dir")->count() > 0;
  if (!f.config.empty()) apply_config(f, run);
  if (!out_dir_flag) {
    if (const char* env = std::getenv("DBN_OUT_DIR"); env != nullptr && *env != '\0') f.out_dir = env;
  }

  dbn::SimulationConfig cfg;
  try {
    cfg.strategy = dbn::parse_strategy(f.type);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.nodes = f.nodes;
  cfg.trials = f.trials;
  cfg.steps = f.steps;
  cfg.sequence_length = f.seq_len;
  cfg.master_seed = f.seed;
  cfg.threads = f.threads;
  const bool burn_in_given = run.get_option("--burn-in")->count() > 0 || f.burn_in_set;
  cfg.burn_in = burn_in_given ? f.burn_in : std::min(dbn::default_burn_in(cfg.strategy), cfg.steps - 1);
  if (!f.restrict_initial.empty()) {
    std::ifstream in(f.restrict_initial);
    if (!in) throw std::ios_base::failure("cannot read rule-vector list " + f.restrict_initial);
    cfg.initial_whitelist = dbn::parse_rule_vector_list(in, cfg.nodes);
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

int cmd_run(RunFlags& f, const CLI::App& run) {
  const dbn::SimulationConfig cfg = build_config(f, run);
  const dbn::CampaignSummary summary = dbn::run_campaign(cfg);
  dbn::write_campaign(summary, f.out_dir);
  std::cout << "type " << dbn::to_string(cfg.strategy) << ": " << dbn::one_line_summary(summary) << " -> "
            << f.out_dir << "\n";
  return kOk;
}

int cmd_verify(const std::string& reference_path) {
  std::optional<std::string> reference;
  if (!reference_path.empty()) {
    std::ifstream in(reference_path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot read reference table " + reference_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    reference = buf.str();
  }
  int failed = 0;
  for (const auto& c : dbn::run_golden_checks(reference)) {
    std::cout << (c.passed ? "ok   " : "FAIL ") << c.name;
    if (!c.passed) {
      std::cout << ": " << c.detail;
      ++failed;
    }
    std::cout << "\n";
  }
  if (failed > 0) {
    std::cout << failed << " golden check(s) failed\n";
    return kVerifyFailed;
  }
  return kOk;
}

int cmd_trace(const std::string& type, int nodes, std::size_t steps, std::uint64_t seed, std::size_t trial) {
  dbn::Strategy s;
  try {
    s = dbn::parse_strategy(type);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  dbn::SeededSource rng(dbn::derive_seed(seed, trial));
  dbn::EngineState es = dbn::init_engine(nodes, dbn::default_sequence_length(nodes), s, rng);
  std::cout << dbn::trace_line(es) << "\n";
  for (std::size_t k = 2; k <= steps; ++k) {
    dbn::advance_in_place(es, rng);
    std::cout << dbn::trace_line(es) << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical Boolean network simulator"};
  app.require_subcommand(1);

  RunFlags flags;
  auto* run = app.add_subcommand("run", "Run a trial campaign and write its output files");
  run->add_option("--type", flags.type, "Permutation strategy: 1, 2, 3, 3c or 4");
  run->add_option("--trials", flags.trials, "Number of trials");
  run->add_option("--steps", flags.steps, "Time steps per trial");
  run->add_option("--nodes", flags.nodes, "Number of nodes (1 to 3)");
  run->add_option("--seq-len", flags.seq_len, "State sequence length (default 2^nodes + 1)");
  run->add_option("--seed", flags.seed, "Master seed");
  run->add_option("--burn-in", flags.burn_in, "Steps excluded from never-visited analysis (default 5 or 6)");
  run->add_option("--out-dir", flags.out_dir, "Output directory (env DBN_OUT_DIR)");
  run->add_option("--restrict-initial", flags.restrict_initial, "File of rule vectors allowed as T_1");
  run->add_option("--threads", flags.threads, "Worker threads (default: all cores)");
  run->add_option("--config", flags.config, "key = value configuration file; flags take precedence");

  int table_nodes = 2;
  auto* table = app.add_subcommand("rule-table", "Print the single-node rule table as CSV");
  table->add_option("--nodes", table_nodes, "Number of nodes (1 to 3)");

  std::string reference;
  auto* verify = app.add_subcommand("verify", "Replay the worked-example golden checks");
  verify->add_option("--rule-table", reference, "Compare against this rule table CSV instead of the built-in reference");

  std::string trace_type = "1";
  int trace_nodes = 2;
  std::size_t trace_steps = 10, trace_trial = 0;
  std::uint64_t trace_seed = 1;
  auto* trace = app.add_subcommand("trace", "Print the per-step trace of one trial");
  trace->add_option("--type", trace_type, "Permutation strategy");
  trace->add_option("--nodes", trace_nodes, "Number of nodes");
  trace->add_option("--steps", trace_steps, "Time steps");
  trace->add_option("--seed", trace_seed, "Master seed");
  trace->add_option("--trial", trace_trial, "Trial index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(flags, *run);
    if (*table) {
      std::cout << dbn::rule_table_csv(table_nodes);
      return kOk;
    }
    if (*verify) return cmd_verify(reference);
    if (*trace) return cmd_trace(trace_type, trace_nodes, trace_steps, trace_seed, trace_trial);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const dbn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const dbn::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
