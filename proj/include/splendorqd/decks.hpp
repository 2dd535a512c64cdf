#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "splendorqd/engine.hpp"

namespace sqd::engine {

enum class DeckStyle { kDefault, kOneCardToWin };

struct CardSet {
  std::vector<std::vector<Card>> decks;
  std::vector<Noble> nobles;
  bool operator==(const CardSet&) const = default;
};

/// Procedural card/noble generator.
///
/// kDefault builds D tiers of increasing cost and points (8/6/4 cards per suit
/// for the usual three tiers). kOneCardToWin keeps the lower tiers but caps
/// them at one point, with a noble and one-point budget strictly below PP, and
/// fills the last tier with PP-point cards only, so the game cannot be won
/// without buying one of them.
CardSet generate_decks(DeckStyle style, const GameParams& params, std::uint64_t seed);

// CSV layouts: decks are `suit,points,cost_0..cost_{nTT-1}`, nobles are
// `points,cost_0..cost_{nTT-1}`.
std::vector<Card> load_deck_csv(const std::string& path, int token_types);
void save_deck_csv(const std::string& path, const std::vector<Card>& deck, int token_types);
std::vector<Noble> load_nobles_csv(const std::string& path, int token_types);
void save_nobles_csv(const std::string& path, const std::vector<Noble>& nobles, int token_types);

/// Parameters document with keys P, nTT, nJT, D, FUC, EN, maxT, maxRC, PP,
/// nTTPD, nTPD, nTPS, minTPS, tokensPerSuit, nobleCount (+ optional maxTicks).
nlohmann::json params_to_json(const GameParams& params);
GameParams params_from_json(const nlohmann::json& doc);

/// Writes/reads `decks/1.csv..D.csv`, `nobles/nobles.csv`, `parameters.json`.
void save_game_assets(const std::string& dir, const GameParams& params, const CardSet& cards);
CardSet load_game_assets(const std::string& dir, GameParams& params);

/// A named, fully specified game: rules plus its card data.
struct GameSpec {
  std::string name;
  GameParams params;
  CardSet cards;
};

/// "SP2P", "W2" or "1C2W"; decks generated from `deck_seed`.
GameSpec make_game(const std::string& name, std::uint64_t deck_seed);

}  // namespace sqd::engine
