#include "splendorqd/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace sqd::agent {

namespace {

template <typename T, std::size_t N>
bool on_grid(const std::array<T, N>& grid, T value) {
  return std::any_of(grid.begin(), grid.end(), [value](T g) {
    if constexpr (std::is_floating_point_v<T>) {
      return std::abs(g - value) < 1e-12;
    } else {
      return g == value;
    }
  });
}

}  // namespace

void BmrhConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("BmrhConfig: " + what + " not on its grid"); };
  if (!on_grid(kLengthGrid, length)) fail("l");
  if (!on_grid(kEvaluationsGrid, evaluations)) fail("n");
  if (!on_grid(kMutationGrid, mutation)) fail("ms");
  if (!on_grid(kOpponentModelGrid, opponent_model)) fail("om");
  if (!on_grid(kOpponentShareGrid, opponent_budget_share)) fail("ombs");
  if (!on_grid(kDecayGrid, decay)) fail("dcy");
  if (!on_grid(kMuGrid, mu)) fail("mu");
  if (!on_grid(kSigmaGrid, sigma)) fail("sigma");
}

nlohmann::json BmrhConfig::to_json() const {
  return {{"l", length},       {"n", evaluations},
          {"usb", shift_buffer}, {"mo", mutate_once},
          {"ms", mutation},    {"om", opponent_model},
          {"ombs", opponent_budget_share}, {"dcy", decay},
          {"mu", mu},          {"sigma", sigma}};
}

BmrhConfig BmrhConfig::from_json(const nlohmann::json& doc) {
  BmrhConfig c;
  c.length = doc.at("l").get<int>();
  c.evaluations = doc.at("n").get<int>();
  c.shift_buffer = doc.at("usb").get<bool>();
  c.mutate_once = doc.at("mo").get<bool>();
  c.mutation = doc.at("ms").get<int>();
  c.opponent_model = doc.at("om").get<int>();
  c.opponent_budget_share = doc.at("ombs").get<double>();
  c.decay = doc.at("dcy").get<double>();
  c.mu = doc.at("mu").get<double>();
  c.sigma = doc.at("sigma").get<double>();
  c.validate();
  return c;
}

Bmrh::Bmrh(BmrhConfig config, heuristics::HeuristicSpec heuristic, int budget)
    : config_(config), heuristic_(std::move(heuristic)), budget_(budget) {
  config_.validate();
}

void Bmrh::reset() { previous_.clear(); }

Sequence Bmrh::shift_buffer(const Sequence& previous) {
  if (previous.empty()) return {};
  Sequence next(previous.begin() + 1, previous.end());
  next.push_back(Action{});
  return next;
}

int Bmrh::mutation_start(Rng& rng) const {
  const int l = config_.length;
  switch (config_.mutation) {
    case kGaussianBranch: {
      const double x = std::normal_distribution<double>(config_.mu * l, config_.sigma)(rng);
      return static_cast<int>(std::lround(std::clamp(x, 0.0, static_cast<double>(l - 1))));
    }
    case kGeometricBranch: {
      int start = 0;
      while (start < l - 1 && uniform_real(rng) < config_.decay) ++start;
      return start;
    }
    default:
      return uniform_int(rng, 0, l - 1);
  }
}

void Bmrh::opponents_move(GameState& state, int player, Rng& rng, AdvanceBudget& budget,
                          engine::EventLog& log) const {
  while (!engine::is_terminal(state) && state.current_player != player) {
    switch (config_.opponent_model) {
      case kNoOpOpponent:
        engine::skip_turn(state);
        break;
      case kGreedyOpponent: {
        const int who = state.current_player;
        const int samples = std::max(1, static_cast<int>(std::lround(config_.opponent_budget_share * budget_)));
        double best = -std::numeric_limits<double>::infinity();
        GameState chosen;
        engine::EventLog chosen_log;
        engine::EventLog scratch;
        for (int k = 0; k < samples; ++k) {
          GameState next = state;
          scratch.clear();
          engine::step(next, engine::sample_action(next, rng), &scratch);
          ++budget.used;
          const double value = heuristics::evaluate(heuristic_, state, next, scratch, who);
          if (value > best) {
            best = value;
            chosen = std::move(next);
            chosen_log.swap(scratch);
          }
        }
        state = std::move(chosen);
        log.insert(log.end(), chosen_log.begin(), chosen_log.end());
        break;
      }
      default:
        engine::step(state, engine::sample_action(state, rng), &log);
        ++budget.used;
        break;
    }
  }
}

RolloutResult Bmrh::simulate(const GameState& state, int player, Sequence sequence, int resample_from,
                             int resample_only, Rng& rng, AdvanceBudget& budget) const {
  RolloutResult r;
  r.end = state;
  r.events.reserve(16 * config_.length);
  sequence.resize(config_.length);
  for (int i = 0; i < config_.length; ++i) {
    if (engine::is_terminal(r.end)) break;
    Action& action = sequence[i];
    const bool resample = i >= resample_from || i == resample_only || action.kind == engine::ActionKind::kUnset ||
                          !engine::is_legal(r.end, action);
    if (resample) action = engine::sample_action(r.end, rng);
    engine::step(r.end, action, &r.events);
    ++budget.used;
    opponents_move(r.end, player, rng, budget, r.events);
  }
  r.played = std::move(sequence);
  r.value = heuristics::evaluate(heuristic_, state, r.end, r.events, player);
  return r;
}

RolloutResult Bmrh::rollout(const GameState& state, int player, const Sequence& sequence, Rng& rng,
                            AdvanceBudget& budget) const {
  return simulate(state, player, sequence, config_.length, -1, rng, budget);
}

Sequence Bmrh::branching_mutation(const Sequence& sequence, const GameState& state, int player, Rng& rng,
                                  AdvanceBudget& budget, RolloutResult* simulated) const {
  RolloutResult r = config_.mutation == kUniformPoint
                        ? simulate(state, player, sequence, config_.length, uniform_int(rng, 0, config_.length - 1),
                                   rng, budget)
                        : simulate(state, player, sequence, mutation_start(rng), -1, rng, budget);
  Sequence out = r.played;
  if (simulated) *simulated = std::move(r);
  return out;
}

RolloutResult Bmrh::mutate(const Sequence& sequence, const GameState& state, int player, Rng& rng,
                           AdvanceBudget& budget) const {
  RolloutResult result;
  branching_mutation(sequence, state, player, rng, budget, &result);
  int applications = 1;
  if (!config_.mutate_once) {
    while (!budget.exhausted() && uniform_real(rng) < 0.5) {
      Sequence current = std::move(result.played);
      branching_mutation(current, state, player, rng, budget, &result);
      ++applications;
    }
  }
  last_mutations_ += applications;
  return result;
}

Action Bmrh::plan(const GameState& state, int player, Rng& rng) {
  if (engine::is_terminal(state)) throw std::logic_error("plan: game is over");
  trace_.clear();
  last_mutations_ = 0;
  last_calls_ = 0;
  if (budget_ < 1) return engine::sample_action(state, rng);

  AdvanceBudget budget{0, budget_};
  Sequence initial = config_.shift_buffer && !previous_.empty() ? shift_buffer(previous_)
                                                                : Sequence(config_.length);
  RolloutResult incumbent = simulate(state, player, std::move(initial), config_.length, -1, rng, budget);
  trace_.push_back(incumbent.value);
  for (int e = 1; e < config_.evaluations && !budget.exhausted(); ++e) {
    RolloutResult candidate = mutate(incumbent.played, state, player, rng, budget);
    if (candidate.value >= incumbent.value) incumbent = std::move(candidate);
    trace_.push_back(incumbent.value);
  }
  previous_ = incumbent.played;
  last_calls_ = budget.used;
  return incumbent.played.front();
}

MatchResult play_match(const engine::GameSpec& game, std::span<Player* const> seats, std::uint64_t seed,
                       engine::EventLog* events) {
  if (static_cast<int>(seats.size()) != game.params.players)
    throw std::invalid_argument("play_match: seat count does not match P");
  GameState state = engine::new_game(game.params, game.cards.decks, game.cards.nobles, derive_seed(seed, 0));
  std::vector<Rng> streams;
  for (std::size_t i = 0; i < seats.size(); ++i) {
    streams.emplace_back(derive_seed(seed, i + 1));
    seats[i]->reset();
  }
  while (!engine::is_terminal(state)) {
    const int who = state.current_player;
    engine::step(state, seats[who]->act(state, streams[who]), events);
  }
  MatchResult out;
  out.outcome = engine::result(state);
  out.final_state = std::move(state);
  return out;
}

}  // namespace sqd::agent
