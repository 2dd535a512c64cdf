#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "splendorqd/agent.hpp"
#include "splendorqd/decks.hpp"
#include "support.hpp"

namespace sqd::agent {
namespace {

using engine::ActionKind;
using heuristics::HeuristicSpec;
using sqd::testing::card;
using sqd::testing::noble;

engine::GameSpec sp2p() { return engine::make_game("SP2P", 3); }

GameState midgame(std::uint64_t seed, int turns = 10) {
  const engine::GameSpec game = sp2p();
  GameState s = engine::new_game(game.params, game.cards.decks, game.cards.nobles, seed);
  Rng rng(seed);
  for (int i = 0; i < turns && !engine::is_terminal(s); ++i) engine::step(s, engine::sample_action(s, rng));
  return s;
}

BmrhConfig config(int l, int n, int ms = kGaussianBranch, int om = kRandomOpponent, bool mo = true, bool usb = true) {
  BmrhConfig c;
  c.length = l;
  c.evaluations = n;
  c.mutation = ms;
  c.opponent_model = om;
  c.mutate_once = mo;
  c.shift_buffer = usb;
  return c;
}

TEST(BmrhConfig, GridsMatchTheHyperparameterTable) {
  EXPECT_EQ(kLengthGrid, (std::array<int, 6>{1, 2, 3, 5, 10, 20}));
  EXPECT_EQ(kEvaluationsGrid, (std::array<int, 4>{20, 50, 100, 200}));
  EXPECT_EQ(kOpponentShareGrid, (std::array<double, 4>{0.005, 0.01, 0.02, 0.05}));
  EXPECT_EQ(kDecayGrid, (std::array<double, 4>{0.5, 0.7, 0.8, 0.9}));
  EXPECT_EQ(kMuGrid, (std::array<double, 5>{0.0, 0.1, 0.3, 0.5, 0.75}));
  EXPECT_EQ(kSigmaGrid, (std::array<double, 3>{0.5, 1.0, 2.0}));
}

TEST(BmrhConfig, ValidateAndJson) {
  BmrhConfig c = config(10, 200, kGeometricBranch, kGreedyOpponent, false, false);
  c.decay = 0.9;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(BmrhConfig::from_json(c.to_json()), c);
  c.length = 4;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = BmrhConfig{};
  c.sigma = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_THROW(Bmrh(c, HeuristicSpec::point_based()), std::invalid_argument);
}

TEST(Plan, OneStepOracleFindsTheScoringBuy) {
  // Four face-up cards, one of them affordable and worth points; deck empty,
  // so the legal classes are PickDifferent, PickSame, ReserveFaceUp and BuyFaceUp.
  const auto game = sqd::testing::tiny_game(
      {{card(0, {1, 0, 0, 0, 0}, 2), card(1, {4, 4, 0, 0, 0}, 0), card(2, {4, 0, 4, 0, 0}, 1),
        card(3, {0, 4, 4, 0, 0}, 0)}},
      {noble({9, 9, 9, 9, 9}, 3)});
  GameState s = engine::new_game(game.params, game.cards.decks, game.cards.nobles, 1);
  s.players[0].tokens[0] = 1;
  s.table_tokens[0] = 4;

  const unsigned classes = sqd::testing::oracle_legal_classes(s);
  ASSERT_EQ(classes, 0b010111u);
  const double p_buy = 1.0 / std::popcount(classes);  // the buy class has one member
  const int n = 20;
  const double p_found = 1.0 - std::pow(1.0 - p_buy, n);

  const int trials = 200;
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    Bmrh agent(config(1, n, kUniformPoint), HeuristicSpec::point_based());
    Rng rng(derive_seed(99, t));
    const engine::Action a = agent.plan(s, 0, rng);
    ASSERT_TRUE(engine::is_legal(s, a));
    if (a.kind == ActionKind::kBuyFaceUp && s.card(s.face_up[a.deck][a.slot]).points == 2) ++hits;
  }
  const double slack = 3.0 * std::sqrt(p_found * (1.0 - p_found) / trials) + 1.0 / trials;
  EXPECT_GE(static_cast<double>(hits) / trials, p_found - slack) << hits << " of " << trials;
}

TEST(Plan, AlwaysLegalAndWithinBudget) {
  const auto spec = HeuristicSpec::event_value(heuristics::EventMapping::hand_crafted(), {0.2, -0.4, 0.6, 1.0, 1.0});
  int case_id = 0;
  for (int l : {1, 5, 20})
    for (int ms : {0, 1, 2})
      for (int om : {0, 1, 2})
        for (bool mo : {true, false}) {
          BmrhConfig c = config(l, 50, ms, om, mo);
          c.opponent_budget_share = 0.05;
          const int budget = 300;
          Bmrh agent(c, spec, budget);
          const GameState s = midgame(++case_id, 8);
          Rng rng(case_id);
          const engine::Action a = agent.plan(s, s.current_player, rng);
          EXPECT_TRUE(engine::is_legal(s, a)) << a.describe();
          const long k = om == kGreedyOpponent ? std::lround(c.opponent_budget_share * budget) : 1;
          const long one_rollout = l * (1 + k);
          EXPECT_LE(agent.last_advance_calls(), budget + one_rollout);
          EXPECT_GT(agent.last_advance_calls(), 0);
        }
}

TEST(Plan, IncumbentValueNeverDrops) {
  const auto spec = HeuristicSpec::event_value(heuristics::EventMapping::identity(), std::vector<double>(18, 0.4));
  for (int seed = 0; seed < 20; ++seed) {
    Bmrh agent(config(5, 100, seed % 3), spec, 5000);
    Rng rng(seed);
    agent.plan(midgame(seed, 6), 0, rng);
    const auto& trace = agent.last_incumbent_trace();
    ASSERT_FALSE(trace.empty());
    for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_GE(trace[i], trace[i - 1]);
  }
}

TEST(Plan, DeterministicWithFixedSeeds) {
  const GameState s = midgame(4);
  Bmrh a(config(5, 50), HeuristicSpec::point_based());
  Bmrh b(config(5, 50), HeuristicSpec::point_based());
  Rng ra(7), rb(7);
  EXPECT_EQ(a.plan(s, s.current_player, ra), b.plan(s, s.current_player, rb));
  EXPECT_EQ(a.last_incumbent_trace(), b.last_incumbent_trace());
}

TEST(Plan, ResetForgetsTheShiftBuffer) {
  const GameState s = midgame(4);
  Bmrh used(config(5, 50), HeuristicSpec::point_based());
  Rng warmup(1);
  used.plan(s, s.current_player, warmup);
  used.reset();
  Bmrh fresh(config(5, 50), HeuristicSpec::point_based());
  Rng ra(3), rb(3);
  EXPECT_EQ(used.plan(s, s.current_player, ra), fresh.plan(s, s.current_player, rb));
}

TEST(Plan, MutateOnceAppliesOneMutationPerCandidate) {
  Bmrh once(config(5, 50, kGaussianBranch, kRandomOpponent, true), HeuristicSpec::point_based(), 100000);
  Rng rng(2);
  once.plan(midgame(2), 0, rng);
  EXPECT_EQ(once.last_mutation_applications(), 49);

  Bmrh repeated(config(5, 50, kGaussianBranch, kRandomOpponent, false), HeuristicSpec::point_based(), 100000);
  Rng rng2(2);
  repeated.plan(midgame(2), 0, rng2);
  EXPECT_GT(repeated.last_mutation_applications(), 49);
}

TEST(Plan, TerminalAdjacentStateStillGivesALegalAction) {
  GameState s = midgame(3, 9);
  ASSERT_EQ(s.current_player, 1);
  s.final_round = true;  // the game ends as soon as this player acts
  Bmrh agent(config(10, 50), HeuristicSpec::point_based());
  Rng rng(1);
  EXPECT_TRUE(engine::is_legal(s, agent.plan(s, 1, rng)));
  GameState over = s;
  engine::skip_turn(over);
  EXPECT_THROW(agent.plan(over, 0, rng), std::logic_error);
}

TEST(Plan, ZeroWeightsStillPlayWholeGames) {
  const auto game = sp2p();
  Bmrh agent(config(5, 20), HeuristicSpec::event_value(heuristics::EventMapping::identity(), std::vector<double>(18)),
             400);
  RandomPlayer rnd;
  std::array<Player*, 2> seats = {&agent, &rnd};
  const MatchResult r = play_match(game, seats, 5);
  EXPECT_TRUE(engine::is_terminal(r.final_state));
}

TEST(Rollout, NoOpOpponentsLeaveTheirStateAlone) {
  const GameState s = midgame(5);
  const int me = s.current_player;
  Bmrh agent(config(10, 20, kGaussianBranch, kNoOpOpponent), HeuristicSpec::point_based());
  Rng rng(3);
  AdvanceBudget budget{0, 1000};
  const RolloutResult r = agent.rollout(s, me, Sequence(10), rng, budget);
  EXPECT_EQ(r.end.players[1 - me], s.players[1 - me]);
  for (const engine::Event& e : r.events) EXPECT_TRUE(e.who == me || e.who == engine::kEngine);
  EXPECT_EQ(budget.used, static_cast<long>(r.played.size()));
}

TEST(Rollout, EventsStayInsideTheWindowAndScorelessIsZero) {
  for (int seed = 0; seed < 30; ++seed) {
    const GameState s = midgame(seed, 4);
    Bmrh agent(config(5, 20), HeuristicSpec::point_based());
    Rng rng(seed);
    AdvanceBudget budget{0, 1000};
    const RolloutResult r = agent.rollout(s, s.current_player, Sequence(5), rng, budget);
    for (const engine::Event& e : r.events) {
      EXPECT_GE(e.tick, s.tick);
      EXPECT_LT(e.tick, r.end.tick);
    }
    const bool scored = std::any_of(r.events.begin(), r.events.end(), [&](const engine::Event& e) {
      return heuristics::credits(e, s.current_player) &&
             (e.type_id == engine::kPointsFromCard || e.type_id == engine::kPointsFromNoble);
    });
    if (!scored) EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.value, heuristics::pb_value(s, r.end, s.current_player));
  }
}

TEST(Rollout, RepairsActionsThatBecameIllegal) {
  const GameState s = midgame(6);
  engine::Action impossible;
  impossible.kind = ActionKind::kBuyReserved;
  impossible.slot = 2;
  Bmrh agent(config(3, 20), HeuristicSpec::point_based());
  Rng rng(1);
  AdvanceBudget budget{0, 1000};
  const RolloutResult r = agent.rollout(s, s.current_player, Sequence(3, impossible), rng, budget);
  ASSERT_FALSE(r.played.empty());
  EXPECT_TRUE(engine::is_legal(s, r.played[0]));
}

TEST(BranchingMutation, KeepsThePrefixBeforeTheStart) {
  int saw_first = 0;
  int saw_last = 0;
  for (int ms : {kGaussianBranch, kGeometricBranch}) {
    for (int seed = 0; seed < 200; ++seed) {
      BmrhConfig c = config(5, 20, ms, kNoOpOpponent);
      c.mu = 0.5;
      c.sigma = 2.0;
      c.decay = 0.7;
      Bmrh agent(c, HeuristicSpec::point_based());
      const GameState s = midgame(seed, 6);
      const int me = s.current_player;
      Rng rng(seed);
      AdvanceBudget budget{0, 100000};
      const Sequence original = agent.rollout(s, me, Sequence(5), rng, budget).played;
      if (std::any_of(original.begin(), original.end(),
                      [](const engine::Action& a) { return a.kind == ActionKind::kUnset; }))
        continue;  // game ended inside the horizon

      Rng peek = rng;
      const int start = agent.mutation_start(peek);
      const Sequence mutated = agent.branching_mutation(original, s, me, rng, budget);
      ASSERT_GE(start, 0);
      ASSERT_LE(start, 4);
      for (int i = 0; i < start; ++i) ASSERT_EQ(mutated[i], original[i]) << "position " << i;
      saw_first += start == 0;
      saw_last += start == 4;

      GameState replay = s;
      for (const auto& a : mutated) {
        if (engine::is_terminal(replay)) break;
        ASSERT_TRUE(engine::is_legal(replay, a));
        engine::step(replay, a);
        engine::skip_turn(replay);
      }
    }
  }
  EXPECT_GT(saw_first, 0);
  EXPECT_GT(saw_last, 0);
}

TEST(BranchingMutation, StartIndexDistributions) {
  BmrhConfig c = config(10, 20, kGeometricBranch);
  c.decay = 0.5;
  Bmrh geometric(c, HeuristicSpec::point_based());
  Rng rng(1);
  int zeros = 0;
  for (int i = 0; i < 10000; ++i) zeros += geometric.mutation_start(rng) == 0;
  EXPECT_NEAR(zeros / 10000.0, 0.5, 0.03);

  c = config(10, 20, kGaussianBranch);
  c.mu = 0.5;
  c.sigma = 0.5;
  Bmrh gaussian(c, HeuristicSpec::point_based());
  double mean = 0.0;
  for (int i = 0; i < 10000; ++i) mean += gaussian.mutation_start(rng);
  EXPECT_NEAR(mean / 10000.0, 5.0, 0.1);
}

TEST(ShiftBuffer, DropsTheHeadAndOpensAnUnsetTail) {
  engine::Action a1{ActionKind::kReserveTopDeck, 0};
  engine::Action a2{ActionKind::kReserveTopDeck, 1};
  engine::Action a3{ActionKind::kReserveTopDeck, 2};
  const Sequence shifted = Bmrh::shift_buffer({a1, a2, a3});
  ASSERT_EQ(shifted.size(), 3u);
  EXPECT_EQ(shifted[0], a2);
  EXPECT_EQ(shifted[1], a3);
  EXPECT_EQ(shifted[2].kind, ActionKind::kUnset);
  EXPECT_TRUE(Bmrh::shift_buffer({}).empty());

  const GameState s = midgame(2);
  Bmrh agent(config(3, 20, kGaussianBranch, kNoOpOpponent), HeuristicSpec::point_based());
  Rng rng(4);
  AdvanceBudget budget{0, 1000};
  const RolloutResult r = agent.rollout(s, s.current_player, shifted, rng, budget);
  for (const auto& a : r.played) EXPECT_NE(a.kind, ActionKind::kUnset);
}

TEST(PlayMatch, SeatCountMustMatch) {
  RandomPlayer a;
  std::array<Player*, 1> one = {&a};
  EXPECT_THROW(play_match(sp2p(), one, 1), std::invalid_argument);
}

TEST(PlayMatch, BmrhBeatsRandom) {
  const auto game = sp2p();
  Bmrh agent(config(5, 50), HeuristicSpec::point_based());
  RandomPlayer rnd;
  double score = 0.0;
  const int games = 20;
  for (int g = 0; g < games; ++g) {
    std::array<Player*, 2> seats = {&agent, &rnd};
    if (g % 2) std::swap(seats[0], seats[1]);
    score += play_match(game, seats, g).outcome[g % 2];
  }
  EXPECT_GT(score / games, 0.7);
}

}  // namespace
}  // namespace sqd::agent
