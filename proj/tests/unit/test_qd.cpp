#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "splendorqd/qd.hpp"
#include "support.hpp"

namespace sqd::qd {
namespace {

using heuristics::HeuristicKind;

TEST(BucketIndex, Examples) {
  EXPECT_EQ(bucket_index(0.0, 0.0, 40.0, 62), 0);
  EXPECT_EQ(bucket_index(55.0, 0.0, 40.0, 62), 61);
  EXPECT_EQ(bucket_index(20.0, 0.0, 40.0, 62), 31);
  EXPECT_EQ(bucket_index(-3.0, 0.0, 40.0, 62), 0);
  EXPECT_EQ(bucket_index(40.0, 0.0, 40.0, 62), 61);
}

TEST(BucketIndex, MatchesLinearScanIncludingEveryEdge) {
  const BehaviourSpaceSpec spec = BehaviourSpaceSpec::standard();
  Rng rng(11);
  for (const MetricSpec& m : spec.metrics) {
    for (double edge : m.edges()) {
      EXPECT_EQ(bucket_index(edge, m.lo, m.hi, m.buckets), sqd::testing::linear_scan_bucket(edge, m.lo, m.hi, m.buckets))
          << m.name << " edge " << edge;
    }
    for (int i = 0; i < 20000; ++i) {
      const double v = m.lo - 5.0 + uniform_real(rng) * (m.hi - m.lo + 10.0);
      ASSERT_EQ(bucket_index(v, m.lo, m.hi, m.buckets), sqd::testing::linear_scan_bucket(v, m.lo, m.hi, m.buckets))
          << m.name << " " << v;
    }
  }
}

TEST(BucketIndex, RejectsNonFiniteAndBadRanges) {
  EXPECT_THROW(bucket_index(std::nan(""), 0, 1, 4), std::invalid_argument);
  EXPECT_THROW(bucket_index(std::numeric_limits<double>::infinity(), 0, 1, 4), std::invalid_argument);
  EXPECT_THROW(bucket_index(0.5, 1, 1, 4), std::invalid_argument);
  EXPECT_THROW(bucket_index(0.5, 0, 1, 0), std::invalid_argument);
}

TEST(BehaviourSpace, StandardRanges) {
  const BehaviourSpaceSpec spec = BehaviourSpaceSpec::standard();
  const std::array<std::pair<const char*, double>, 5> expected = {
      {{"card_count", 40}, {"total_coins", 120}, {"nobles", 4}, {"card_cost", 15}, {"reserved_cards", 30}}};
  for (int d = 0; d < kBehaviourCount; ++d) {
    EXPECT_EQ(spec.metrics[d].name, expected[d].first);
    EXPECT_EQ(spec.metrics[d].lo, 0.0);
    EXPECT_EQ(spec.metrics[d].hi, expected[d].second);
    EXPECT_EQ(spec.metrics[d].buckets, 62);
    const auto edges = spec.metrics[d].edges();
    ASSERT_EQ(edges.size(), 63u);
    EXPECT_EQ(edges.front(), 0.0);
    EXPECT_DOUBLE_EQ(edges.back(), expected[d].second);
  }
  EXPECT_EQ(spec.size(), std::vector<int>(5, 62));
  EXPECT_EQ(spec.cell({20, 0, 4, 1e9, -1}), (CellKey{31, 0, 61, 61, 0}));
}

TEST(GenomeSpace, DimensionsPerHeuristic) {
  const auto params = engine::GameParams::sp2p();
  EXPECT_EQ(GenomeSpace::make(HeuristicKind::kPointBased, params).dims(), 10);
  EXPECT_EQ(GenomeSpace::make(HeuristicKind::kEventId, params).dims(), 28);
  EXPECT_EQ(GenomeSpace::make(HeuristicKind::kEventHandCrafted, params).dims(), 15);
  EXPECT_EQ(GenomeSpace::make(HeuristicKind::kStateValue, params).dims(),
            10 + sqd::testing::slot_count_encoding_length(params));
}

TEST(GenomeSpace, PlannerGenesComeFirstAndEveryGeneVaries) {
  const GenomeSpace space = GenomeSpace::make(HeuristicKind::kEventHandCrafted, engine::GameParams::sp2p());
  const std::vector<std::string> names = {"l", "n", "usb", "mo", "ms", "om", "ombs", "dcy", "mu", "sigma"};
  for (int i = 0; i < 10; ++i) EXPECT_EQ(space.genes()[i].name, names[i]);
  for (const Gene& g : space.genes()) EXPECT_GE(g.values.size(), 2u) << g.name;
  for (int i = 10; i < space.dims(); ++i)
    EXPECT_EQ(space.genes()[i].values, std::vector<double>(heuristics::kWeightGrid.begin(), heuristics::kWeightGrid.end()));
}

TEST(GenomeSpace, DecodeMapsIndicesToValues) {
  const GenomeSpace space = GenomeSpace::make(HeuristicKind::kEventHandCrafted, engine::GameParams::sp2p());
  Genome g(space.dims(), 0);
  g[0] = 5;   // l = 20
  g[2] = 1;   // usb
  g[5] = 2;   // om greedy
  g[10] = 10; // w0 = 1
  const auto [config, heuristic] = space.decode(g);
  EXPECT_EQ(config.length, 20);
  EXPECT_TRUE(config.shift_buffer);
  EXPECT_FALSE(config.mutate_once);
  EXPECT_EQ(config.opponent_model, agent::kGreedyOpponent);
  EXPECT_EQ(config.sigma, 0.5);
  ASSERT_EQ(heuristic.weights.size(), 5u);
  EXPECT_EQ(heuristic.weights[0], 1.0);
  EXPECT_EQ(heuristic.weights[1], -1.0);
  EXPECT_EQ(heuristic.mapping, heuristics::EventMapping::hand_crafted());
  EXPECT_THROW(space.decode(Genome(14, 0)), std::invalid_argument);
  g[3] = 2;
  EXPECT_THROW(space.decode(g), std::invalid_argument);
}

TEST(GenomeSpace, RandomGenomesAreValid) {
  const GenomeSpace space = GenomeSpace::make(HeuristicKind::kEventId, engine::GameParams::sp2p());
  Rng rng(3);
  std::set<Genome> seen;
  for (int i = 0; i < 100; ++i) {
    const Genome g = space.random(rng);
    EXPECT_NO_THROW(space.check(g));
    seen.insert(g);
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(Mutation, ChangesExactlyOneGene) {
  const GenomeSpace space = GenomeSpace::make(HeuristicKind::kPointBased, engine::GameParams::sp2p());
  Rng rng(4);
  std::vector<int> touched(space.dims(), 0);
  for (int i = 0; i < 5000; ++i) {
    const Genome g = space.random(rng);
    const Genome m = mutate_genome(g, space, rng);
    EXPECT_NO_THROW(space.check(m));
    int diffs = 0;
    for (int d = 0; d < space.dims(); ++d)
      if (g[d] != m[d]) {
        ++diffs;
        ++touched[d];
      }
    ASSERT_EQ(diffs, 1);
  }
  for (int d = 0; d < space.dims(); ++d) EXPECT_GT(touched[d], 350) << d;
}

Elite elite(double fitness, BehaviourVector b, int iteration = 0) {
  Elite e;
  e.genome = {0};
  e.fitness = fitness;
  e.behaviour = b;
  e.iteration = iteration;
  return e;
}

TEST(Archive, InsertLaws) {
  Archive archive;
  const BehaviourVector b = {5, 10, 1, 3, 0};
  EXPECT_TRUE(archive.insert(elite(0.60, b, 0)));
  EXPECT_FALSE(archive.insert(elite(0.55, b, 1)));
  EXPECT_EQ(archive.cells().begin()->second.fitness, 0.60);
  EXPECT_FALSE(archive.insert(elite(0.60, b, 2)));
  EXPECT_EQ(archive.cells().begin()->second.iteration, 0);
  EXPECT_TRUE(archive.insert(elite(0.61, b, 3)));
  EXPECT_EQ(archive.cells().begin()->second.fitness, 0.61);
  EXPECT_EQ(archive.size(), 1u);
  ASSERT_EQ(archive.history().size(), 4u);
  EXPECT_EQ(archive.history()[1].inserted, false);
  EXPECT_EQ(archive.history()[3].inserted, true);
  EXPECT_EQ(archive.history()[3].cell, archive.spec().cell(b));
}

TEST(Archive, RandomInsertsKeepTheBestPerCell) {
  Archive archive;
  Rng rng(8);
  std::map<CellKey, double> best;
  for (int i = 0; i < 20000; ++i) {
    const BehaviourVector b = {static_cast<double>(uniform_int(rng, 0, 3)), 0, 0, 0,
                               static_cast<double>(uniform_int(rng, 0, 3))};
    const double f = uniform_int(rng, 0, 20) / 20.0;
    const CellKey cell = archive.spec().cell(b);
    const bool expected = !best.count(cell) || f > best[cell];
    EXPECT_EQ(archive.insert(elite(f, b, i)), expected);
    if (expected) best[cell] = f;
  }
  ASSERT_EQ(archive.size(), best.size());
  for (const auto& [cell, e] : archive.cells()) EXPECT_EQ(e.fitness, best[cell]);
}

TEST(Archive, SampleIsUniformOverCells) {
  Archive archive;
  EXPECT_THROW(archive.sample(*std::make_unique<Rng>(1)), std::logic_error);
  for (int i = 0; i < 4; ++i) archive.insert(elite(0.1 * i, {static_cast<double>(i), 0, 0, 0, 0}, i));
  Rng rng(2);
  std::array<int, 4> counts{};
  for (int i = 0; i < 8000; ++i) ++counts[archive.sample(rng).iteration];
  for (int c : counts) EXPECT_NEAR(c, 2000, 200);
}

EvalFn fake_eval() {
  return [](const Genome& g, int iteration) {
    Elite e;
    e.genome = g;
    e.iteration = iteration;
    e.fitness = (g[0] % 7) / 7.0;
    e.behaviour = {static_cast<double>(g[0]), static_cast<double>(g[1]), 0, 0, 0};
    return e;
  };
}

TEST(Loop, BootAndSearch) {
  const GenomeSpace space = GenomeSpace::make(HeuristicKind::kPointBased, engine::GameParams::sp2p());
  Archive one;
  Rng rng(1);
  boot(one, space, 1, fake_eval(), rng);
  EXPECT_EQ(one.size(), 1u);

  Archive a, b;
  Rng ra(5), rb(5);
  boot(a, space, 20, fake_eval(), ra);
  boot(b, space, 20, fake_eval(), rb);
  for (int i = 20; i < 60; ++i) {
    search_step(a, space, i, fake_eval(), ra);
    search_step(b, space, i, fake_eval(), rb);
  }
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.history().size(), 60u);
  EXPECT_EQ(a.history()[59].elite.iteration, 59);

  Archive empty;
  EXPECT_THROW(search_step(empty, space, 0, fake_eval(), rng), std::logic_error);
}

TEST(Evaluate, SelfPlayIsExactlyHalf) {
  const auto game = engine::make_game("SP2P", 3);
  const GenomeSpace space = GenomeSpace::make(HeuristicKind::kPointBased, game.params);
  Rng rng(9);
  for (int trial = 0; trial < 3; ++trial) {
    const Genome g = space.random(rng);
    const auto [config, heuristic] = space.decode(g);
    const PlayerFactory twin = [config, heuristic] {
      return std::make_unique<agent::Bmrh>(config, heuristic, 200);
    };
    const Evaluation e = evaluate(g, space, game, twin, 6, derive_seed(1, trial), 200);
    EXPECT_EQ(e.fitness, 0.5);
  }
}

TEST(Evaluate, SingleGameAndMetricShapes) {
  const auto game = engine::make_game("SP2P", 3);
  const GenomeSpace space = GenomeSpace::make(HeuristicKind::kEventHandCrafted, game.params);
  Rng rng(10);
  const PlayerFactory rnd = [] { return std::make_unique<agent::RandomPlayer>(); };
  const Genome g = space.random(rng);
  const Evaluation one = evaluate(g, space, game, rnd, 1, 4, 200);
  EXPECT_TRUE(one.fitness == 0.0 || one.fitness == 0.5 || one.fitness == 1.0);
  EXPECT_THROW(evaluate(g, space, game, rnd, 0, 4, 200), std::invalid_argument);

  const Evaluation five = evaluate(g, space, game, rnd, 5, 4, 200);
  for (int d = 0; d < kBehaviourCount; ++d) {
    ASSERT_EQ(five.per_game_behaviour[d].size(), 5u);
    double mean = 0.0;
    for (double v : five.per_game_behaviour[d]) mean += v / 5.0;
    EXPECT_NEAR(five.behaviour[d], mean, 1e-12);
  }
  EXPECT_EQ(evaluate(g, space, game, rnd, 5, 4, 200).behaviour, five.behaviour);
  EXPECT_GE(five.seconds, 0.0);
}

TEST(GameMetrics, MatchEventLogOracle) {
  const auto game = engine::make_game("SP2P", 3);
  for (int seed = 0; seed < 100; ++seed) {
    engine::EventLog log;
    const engine::GameState end = sqd::testing::random_game(
        game, seed, [&](const auto&, const auto&, const auto&, const engine::EventLog& events) {
          log.insert(log.end(), events.begin(), events.end());
        });
    for (int seat = 0; seat < 2; ++seat) {
      const GameMetrics m = game_metrics(end, seat);
      const BehaviourVector oracle = sqd::testing::behaviour_from_events(log, seat);
      for (int d = 0; d < kBehaviourCount; ++d) EXPECT_NEAR(m.behaviour[d], oracle[d], 1e-9) << d;
      EXPECT_EQ(m.support[0], end.tick);
      EXPECT_EQ(m.support[1], end.players[seat].points);
    }
  }
}

TEST(ConfidenceInterval, HalfWidthAtOneHundredGames) {
  EXPECT_NEAR(confidence_half_width(0.5, 100), 0.098, 1e-3);
  EXPECT_EQ(confidence_half_width(1.0, 100), 0.0);
}

}  // namespace
}  // namespace sqd::qd
