#include <gtest/gtest.h>

#include <filesystem>

#include "splendorqd/decks.hpp"

namespace sqd::engine {
namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sqd_decks_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(GenerateDecks, DefaultTiersGrowInCostAndPoints) {
  const GameParams p = GameParams::sp2p();
  const CardSet set = generate_decks(DeckStyle::kDefault, p, 1);
  ASSERT_EQ(set.decks.size(), 3u);
  double previous_cost = -1.0;
  double previous_points = -1.0;
  for (const auto& deck : set.decks) {
    ASSERT_GE(static_cast<int>(deck.size()), p.face_up);
    double cost = 0.0, points = 0.0;
    for (const Card& c : deck) {
      EXPECT_GE(c.suit, 0);
      EXPECT_LT(c.suit, p.token_types);
      for (int t = 0; t < kMaxSuits; ++t) EXPECT_GE(c.cost[t], 0);
      EXPECT_GE(c.points, 0);
      cost += c.cost_sum();
      points += c.points;
    }
    cost /= deck.size();
    points /= deck.size();
    EXPECT_GT(cost, previous_cost);
    EXPECT_GT(points, previous_points);
    previous_cost = cost;
    previous_points = points;
  }
  EXPECT_GE(static_cast<int>(set.nobles.size()), p.nobles_on_table());
}

TEST(GenerateDecks, IsDeterministicPerSeed) {
  const GameParams p = GameParams::sp2p();
  EXPECT_EQ(generate_decks(DeckStyle::kDefault, p, 5), generate_decks(DeckStyle::kDefault, p, 5));
  EXPECT_NE(generate_decks(DeckStyle::kDefault, p, 5), generate_decks(DeckStyle::kDefault, p, 6));
}

TEST(GenerateDecks, OneCardToWinDeckThreeIsAllWinners) {
  const GameParams p = GameParams::one_card_to_win();
  const CardSet set = generate_decks(DeckStyle::kOneCardToWin, p, 2);
  for (const Card& c : set.decks.back()) EXPECT_EQ(c.points, 15);
  int other_points = 0;
  for (std::size_t d = 0; d + 1 < set.decks.size(); ++d)
    for (const Card& c : set.decks[d]) {
      EXPECT_LE(c.points, 1);
      other_points += c.points;
    }
  // Every noble on the table plus every low-tier point together stay below PP.
  std::vector<int> noble_points;
  for (const Noble& n : set.nobles) noble_points.push_back(n.points);
  std::sort(noble_points.rbegin(), noble_points.rend());
  int best_nobles = 0;
  for (int i = 0; i < p.nobles_on_table(); ++i) best_nobles += noble_points[i];
  EXPECT_LT(other_points + best_nobles, p.end_points);
}

TEST(GameAssets, CsvRoundTrip) {
  const GameSpec game = make_game("SP2P", 9);
  const auto dir = scratch("roundtrip");
  save_game_assets(dir.string(), game.params, game.cards);
  EXPECT_TRUE(std::filesystem::exists(dir / "decks" / "1.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "decks" / "3.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "nobles" / "nobles.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "parameters.json"));
  GameParams loaded_params;
  const CardSet loaded = load_game_assets(dir.string(), loaded_params);
  EXPECT_EQ(loaded, game.cards);
  EXPECT_EQ(loaded_params, game.params);
}

TEST(GameAssets, ParametersJsonUsesDesignerKeys) {
  const nlohmann::json doc = params_to_json(GameParams::w2());
  for (const char* key : {"P", "nTT", "nJT", "D", "FUC", "EN", "maxT", "maxRC", "PP", "nTTPD", "nTPD", "nTPS",
                          "minTPS", "tokensPerSuit", "nobleCount"})
    EXPECT_TRUE(doc.contains(key)) << key;
  EXPECT_EQ(doc["maxT"], 20);
  EXPECT_EQ(params_from_json(doc), GameParams::w2());
  nlohmann::json bad = doc;
  bad["P"] = 1;
  EXPECT_THROW(params_from_json(bad), std::invalid_argument);
}

TEST(MakeGame, KnownVariantsOnly) {
  EXPECT_EQ(make_game("SP2P", 1).params, GameParams::sp2p());
  EXPECT_EQ(make_game("W2", 1).params, GameParams::w2());
  EXPECT_EQ(make_game("1C2W", 1).params, GameParams::one_card_to_win());
  EXPECT_THROW(make_game("chess", 1), std::invalid_argument);
}

}  // namespace
}  // namespace sqd::engine
