#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "splendorqd/agent.hpp"
#include "splendorqd/decks.hpp"
#include "splendorqd/heuristics.hpp"
#include "splendorqd/rng.hpp"

namespace sqd::qd {

inline constexpr int kBehaviourCount = 5;
inline constexpr int kSupportCount = 3;

using Genome = std::vector<int>;
using BehaviourVector = std::array<double, kBehaviourCount>;
using SupportVector = std::array<double, kSupportCount>;
using CellKey = std::array<int, kBehaviourCount>;

struct Gene {
  std::string name;
  std::vector<double> values;
  bool operator==(const Gene&) const = default;
};

/// Categorical search space: the ten planner genes followed by one weight
/// gene per heuristic feature.
class GenomeSpace {
 public:
  static GenomeSpace make(heuristics::HeuristicKind kind, const engine::GameParams& params);

  heuristics::HeuristicKind kind() const { return kind_; }
  const std::vector<Gene>& genes() const { return genes_; }
  int dims() const { return static_cast<int>(genes_.size()); }
  int planner_dims() const { return 10; }

  Genome random(Rng& rng) const;
  /// Throws std::invalid_argument when the genome does not fit this space.
  void check(const Genome& genome) const;
  std::pair<agent::BmrhConfig, heuristics::HeuristicSpec> decode(const Genome& genome) const;
  /// Gene values, planner values first then weights.
  std::vector<double> values(const Genome& genome) const;

  nlohmann::json agent_space_json() const;
  nlohmann::json heuristic_space_json() const;

  bool operator==(const GenomeSpace&) const = default;

 private:
  heuristics::HeuristicKind kind_ = heuristics::HeuristicKind::kPointBased;
  heuristics::EventMapping mapping_;
  std::vector<Gene> genes_;
};

/// Changes exactly one uniformly chosen gene to a different uniformly chosen value.
Genome mutate_genome(const Genome& genome, const GenomeSpace& space, Rng& rng);

struct MetricSpec {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  int buckets = 1;

  /// buckets+1 uniformly spaced boundaries from lo to hi.
  std::vector<double> edges() const;
  bool operator==(const MetricSpec&) const = default;
};

/// floor((value-lo)*k/(hi-lo)) clamped to [0, k-1]. Throws
/// std::invalid_argument for non-finite values or k < 1 or lo >= hi.
int bucket_index(double value, double lo, double hi, int k);

struct BehaviourSpaceSpec {
  std::array<MetricSpec, kBehaviourCount> metrics;

  /// card_count [0,40], total_coins [0,120], nobles [0,4], card_cost [0,15],
  /// reserved_cards [0,30]; 62 buckets each.
  static BehaviourSpaceSpec standard();

  CellKey cell(const BehaviourVector& behaviour) const;
  std::vector<int> size() const;
  bool operator==(const BehaviourSpaceSpec&) const = default;
};

extern const std::array<const char*, kSupportCount> kSupportNames;

struct Elite {
  Genome genome;
  double fitness = 0.0;
  BehaviourVector behaviour{};
  SupportVector support{};
  int iteration = 0;
  bool operator==(const Elite&) const = default;
};

struct HistoryEntry {
  Elite elite;
  CellKey cell{};
  bool inserted = false;
  bool operator==(const HistoryEntry&) const = default;
};

class Archive {
 public:
  explicit Archive(BehaviourSpaceSpec spec = BehaviourSpaceSpec::standard()) : spec_(std::move(spec)) {}

  /// Empty cell: stored. Occupied: replaced only by strictly greater fitness.
  /// Every call is appended to the history. Returns whether it was stored.
  bool insert(const Elite& elite);

  const BehaviourSpaceSpec& spec() const { return spec_; }
  const std::map<CellKey, Elite>& cells() const { return cells_; }
  const std::vector<HistoryEntry>& history() const { return history_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  /// Uniform over filled cells. Requires a non-empty archive.
  const Elite& sample(Rng& rng) const;

  bool operator==(const Archive&) const = default;

 private:
  BehaviourSpaceSpec spec_;
  std::map<CellKey, Elite> cells_;
  std::vector<HistoryEntry> history_;
};

/// Result of playing one genome for a number of games.
struct Evaluation {
  double fitness = 0.0;
  BehaviourVector behaviour{};
  SupportVector support{};
  std::array<std::vector<double>, kBehaviourCount> per_game_behaviour;
  std::array<std::vector<double>, kSupportCount> per_game_support;
  double seconds = 0.0;
  bool operator==(const Evaluation&) const = default;
};

using PlayerFactory = std::function<std::unique_ptr<agent::Player>()>;

struct GameMetrics {
  BehaviourVector behaviour{};
  SupportVector support{};
};

/// Behaviour and support metrics of `seat` at the end of a game.
GameMetrics game_metrics(const engine::GameState& final_state, int seat);

/// Plays `games` games against fresh opponents, alternating seats. Games 2k
/// and 2k+1 share a deal seed with seats swapped. Fitness is the mean outcome.
Evaluation evaluate(const Genome& genome, const GenomeSpace& space, const engine::GameSpec& game,
                    const PlayerFactory& opponent, int games, std::uint64_t seed,
                    int decision_budget = agent::kDefaultDecisionBudget);

/// 95% normal-approximation half-width z*sqrt(p(1-p)/n).
double confidence_half_width(double p, int n, double z = 1.96);

using EvalFn = std::function<Elite(const Genome& genome, int iteration)>;

/// Evaluates and inserts `n_boot` uniformly random genomes.
void boot(Archive& archive, const GenomeSpace& space, int n_boot, const EvalFn& eval, Rng& rng);

/// One MAP-Elites iteration: sample an elite, mutate one gene, evaluate, insert.
void search_step(Archive& archive, const GenomeSpace& space, int iteration, const EvalFn& eval, Rng& rng);

}  // namespace sqd::qd
