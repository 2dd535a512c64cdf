#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "splendorqd/decks.hpp"
#include "splendorqd/engine.hpp"
#include "splendorqd/heuristics.hpp"
#include "splendorqd/rng.hpp"

namespace sqd::agent {

using engine::Action;
using engine::GameState;

// Value grids of the ten planner hyperparameters.
inline constexpr std::array<int, 6> kLengthGrid = {1, 2, 3, 5, 10, 20};
inline constexpr std::array<int, 4> kEvaluationsGrid = {20, 50, 100, 200};
inline constexpr std::array<int, 3> kMutationGrid = {0, 1, 2};
inline constexpr std::array<int, 3> kOpponentModelGrid = {0, 1, 2};
inline constexpr std::array<double, 4> kOpponentShareGrid = {0.005, 0.01, 0.02, 0.05};
inline constexpr std::array<double, 4> kDecayGrid = {0.5, 0.7, 0.8, 0.9};
inline constexpr std::array<double, 5> kMuGrid = {0.0, 0.1, 0.3, 0.5, 0.75};
inline constexpr std::array<double, 3> kSigmaGrid = {0.5, 1.0, 2.0};

/// Forward-model advance calls granted per decision unless configured.
inline constexpr int kDefaultDecisionBudget = 1000;

enum MutationType : int {
  kUniformPoint = 0,    // resample one uniformly chosen position
  kGaussianBranch = 1,  // roll the suffix from round(N(mu*l, sigma))
  kGeometricBranch = 2, // roll the suffix from a start that advances w.p. dcy
};

enum OpponentModel : int {
  kRandomOpponent = 0,
  kNoOpOpponent = 1,
  kGreedyOpponent = 2,  // best of k one-step samples, k = ombs * budget
};

struct BmrhConfig {
  int length = 5;                  // l
  int evaluations = 50;            // n
  bool shift_buffer = true;        // usb
  bool mutate_once = true;         // mo
  int mutation = kGaussianBranch;  // ms
  int opponent_model = kRandomOpponent;  // om
  double opponent_budget_share = 0.01;   // ombs
  double decay = 0.8;              // dcy
  double mu = 0.3;
  double sigma = 1.0;

  /// Throws std::invalid_argument when a value lies outside its grid.
  void validate() const;
  nlohmann::json to_json() const;
  static BmrhConfig from_json(const nlohmann::json& doc);
  bool operator==(const BmrhConfig&) const = default;
};

using Sequence = std::vector<Action>;

struct AdvanceBudget {
  long used = 0;
  long limit = 0;
  bool exhausted() const { return used >= limit; }
};

struct RolloutResult {
  double value = 0.0;
  engine::EventLog events;
  GameState end;
  Sequence played;  // the sequence actually executed, after repairs
};

class Player {
 public:
  virtual ~Player() = default;
  virtual Action act(const GameState& state, Rng& rng) = 0;
  /// Called before each game.
  virtual void reset() {}
  virtual std::string name() const = 0;
};

class RandomPlayer final : public Player {
 public:
  Action act(const GameState& state, Rng& rng) override { return engine::sample_action(state, rng); }
  std::string name() const override { return "RND"; }
};

/// Branching Mutation Rolling Horizon planner: a (1+1) evolution of the
/// player's next `length` actions, opponents interleaved by the opponent model.
class Bmrh final : public Player {
 public:
  Bmrh(BmrhConfig config, heuristics::HeuristicSpec heuristic, int budget = kDefaultDecisionBudget);

  Action act(const GameState& state, Rng& rng) override { return plan(state, state.current_player, rng); }
  void reset() override;
  std::string name() const override { return "BMRH"; }

  Action plan(const GameState& state, int player, Rng& rng);

  /// Replays `sequence` from `state`. Unset or no-longer-legal actions are
  /// replaced by fresh samples (branching repair).
  RolloutResult rollout(const GameState& state, int player, const Sequence& sequence, Rng& rng,
                        AdvanceBudget& budget) const;

  /// Re-rolls the suffix from the start index drawn by the mutation type;
  /// the prefix is kept. For kUniformPoint only one position is re-rolled.
  /// The simulation of the new branch is returned through `simulated`.
  Sequence branching_mutation(const Sequence& sequence, const GameState& state, int player, Rng& rng,
                              AdvanceBudget& budget, RolloutResult* simulated = nullptr) const;

  /// Drops the first action and appends an unset tail slot, which replay
  /// fills with a fresh legal sample.
  static Sequence shift_buffer(const Sequence& previous);

  /// Start index for the branch mutations, in [0, length-1].
  int mutation_start(Rng& rng) const;

  const BmrhConfig& config() const { return config_; }
  const heuristics::HeuristicSpec& heuristic() const { return heuristic_; }
  int budget() const { return budget_; }

  // Diagnostics of the last plan() call.
  long last_advance_calls() const { return last_calls_; }
  const std::vector<double>& last_incumbent_trace() const { return trace_; }
  int last_mutation_applications() const { return last_mutations_; }

 private:
  RolloutResult simulate(const GameState& state, int player, Sequence sequence, int resample_from,
                         int resample_only, Rng& rng, AdvanceBudget& budget) const;
  void opponents_move(GameState& state, int player, Rng& rng, AdvanceBudget& budget, engine::EventLog& log) const;
  RolloutResult mutate(const Sequence& sequence, const GameState& state, int player, Rng& rng,
                       AdvanceBudget& budget) const;

  BmrhConfig config_;
  heuristics::HeuristicSpec heuristic_;
  int budget_;
  Sequence previous_;
  long last_calls_ = 0;
  mutable int last_mutations_ = 0;
  std::vector<double> trace_;
};

struct MatchResult {
  GameState final_state;
  std::vector<double> outcome;
};

/// Plays one full game. Seat i draws decisions from its own stream derived
/// from `seed`, so identical seats receive identical randomness.
MatchResult play_match(const engine::GameSpec& game, std::span<Player* const> seats, std::uint64_t seed,
                       engine::EventLog* events = nullptr);

}  // namespace sqd::agent
