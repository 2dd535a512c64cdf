#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "splendorqd/agent.hpp"
#include "splendorqd/qd.hpp"

namespace sqd::experiment {

enum class OpponentKind { kRandom, kBmrhStar };

/// "RND", "BMRH_STAR".
std::string to_string(OpponentKind kind);
/// Throws std::invalid_argument for unknown names.
OpponentKind opponent_kind_from_string(const std::string& text);

/// Pinned planner used by the BMRH_STAR opponent, with the point-based heuristic.
agent::BmrhConfig bmrh_star_config();

std::unique_ptr<agent::Player> make_opponent(OpponentKind kind, int decision_budget = agent::kDefaultDecisionBudget);
/// Throws std::invalid_argument for unknown names.
std::unique_ptr<agent::Player> make_opponent(const std::string& kind,
                                             int decision_budget = agent::kDefaultDecisionBudget);
nlohmann::json opponent_json(OpponentKind kind, int decision_budget);

inline constexpr std::uint64_t kDefaultDeckSeed = 2021;

struct ExperimentConfig {
  std::string game = "SP2P";
  heuristics::HeuristicKind space = heuristics::HeuristicKind::kPointBased;
  OpponentKind opponent = OpponentKind::kRandom;
  int n_boot = 2000;
  int n_budget = 10000;
  int games_per_eval = 100;
  int workers = 1;
  std::uint64_t master_seed = 0;
  std::string output_dir;
  int decision_budget = agent::kDefaultDecisionBudget;
  std::uint64_t deck_seed = kDefaultDeckSeed;
  /// Evaluations dispatched together; results never depend on `workers`.
  int batch_size = 8;
  /// Persist the record whenever this many further evaluations completed; 0 disables.
  int checkpoint_interval = 500;
  /// Continue from a checkpoint found in output_dir.
  bool resume = false;

  /// Throws std::invalid_argument.
  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& doc);
  /// True when both configs produce the same evaluations (workers, output_dir,
  /// checkpoint_interval and resume do not matter).
  bool same_search(const ExperimentConfig& other) const;
  bool operator==(const ExperimentConfig&) const = default;
};

struct ExperimentRecord {
  ExperimentConfig config;
  qd::Archive archive;
  /// One per archive history entry, same order.
  std::vector<qd::Evaluation> evaluations;
  double wall_seconds = 0.0;

  qd::GenomeSpace genome_space() const;
  /// Sum of per-evaluation seconds.
  double total_seconds() const;
  bool operator==(const ExperimentRecord&) const = default;
};

/// Seed of evaluation `index`; game pair k inside it uses derive_seed(eval_seed, k).
std::uint64_t evaluation_seed(std::uint64_t master_seed, int index);

/// Boot then search until n_budget evaluations. With a non-empty output_dir the
/// record is checkpointed and finally persisted there. `stop_after` >= 0
/// interrupts the run once that many evaluations exist (for resume tests).
ExperimentRecord run(const ExperimentConfig& config, int stop_after = -1);

/// "data/[GAME]/vs [OPPONENT]/[SPACE]".
std::filesystem::path default_output_dir(const ExperimentConfig& config);
/// "out/[GAME]/[OPPONENT] opponent/[SPACE]", where the analysis CSVs go.
std::filesystem::path default_analysis_dir(const ExperimentConfig& config);

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

extern const std::vector<std::string> kJsonDocuments;
extern const std::vector<std::string> kCsvDocuments;

/// Writes the 12 JSON documents and the 3 CSV exports.
void persist(const ExperimentRecord& record, const std::filesystem::path& dir);
/// Inverse of persist. Throws SchemaError when a document is missing or malformed.
ExperimentRecord load(const std::filesystem::path& dir);
/// All schema problems of an output directory; empty when valid.
std::vector<std::string> validate_output(const std::filesystem::path& dir);

}  // namespace sqd::experiment
