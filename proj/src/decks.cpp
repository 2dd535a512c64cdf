#include "splendorqd/decks.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "splendorqd/csv.hpp"

namespace sqd::engine {

namespace {

constexpr int kMaxCostPerSuit = 7;
constexpr int kNoblePool = 10;

int cards_per_suit(int tier) { return std::max(2, 8 - 2 * tier); }

// Spreads `total` over a random subset of suits, at most kMaxCostPerSuit each.
TokenVec spread_cost(int total, int suits, int excluded_suit, Rng& rng) {
  std::vector<int> pool;
  for (int s = 0; s < suits; ++s)
    if (s != excluded_suit || suits == 1) pool.push_back(s);
  std::shuffle(pool.begin(), pool.end(), rng);
  const int needed = (total + kMaxCostPerSuit - 1) / kMaxCostPerSuit;
  const int limit = std::min<int>(pool.size(), 4);
  int m = std::clamp(uniform_int(rng, 1, limit), std::min(needed, limit), limit);
  total = std::min(total, m * kMaxCostPerSuit);
  TokenVec cost{};
  for (int i = 0; i < m && i < total; ++i) cost[pool[i]] = 1;
  int left = total - std::min(m, total);
  while (left > 0) {
    const int s = pool[uniform_int(rng, 0, m - 1)];
    if (cost[s] < kMaxCostPerSuit) {
      ++cost[s];
      --left;
    }
  }
  return cost;
}

std::vector<Card> default_tier(int tier, const GameParams& params, Rng& rng) {
  std::vector<Card> deck;
  const int n = cards_per_suit(tier);
  const int lo = tier == 0 ? 0 : 2 * tier - 1;
  const int hi = tier == 0 ? 1 : 2 * tier + 1;
  for (int suit = 0; suit < params.token_types; ++suit) {
    for (int k = 0; k < n; ++k) {
      Card card;
      card.suit = suit;
      card.points = tier == 0 ? (k == n - 1 ? 1 : 0) : lo + (k * (hi - lo + 1)) / n;
      const int total = 2 + 2 * tier + card.points + uniform_int(rng, 0, 2);
      card.cost = spread_cost(total, params.token_types, tier == 0 ? suit : -1, rng);
      deck.push_back(card);
    }
  }
  return deck;
}

std::vector<Noble> noble_pool(const GameParams& params, int points, Rng& rng) {
  std::vector<Noble> nobles;
  const int count = std::max(kNoblePool, params.nobles_on_table());
  std::vector<int> suits(params.token_types);
  std::iota(suits.begin(), suits.end(), 0);
  for (int i = 0; i < count; ++i) {
    std::shuffle(suits.begin(), suits.end(), rng);
    Noble noble;
    noble.points = points;
    const bool three = (i % 2 == 1) && params.token_types >= 3;
    const int width = std::min<int>(three ? 3 : 2, params.token_types);
    for (int k = 0; k < width; ++k) noble.cost[suits[k]] = static_cast<std::int8_t>(three ? 3 : 4);
    nobles.push_back(noble);
  }
  return nobles;
}

std::string cell(const csv::Table& table, const csv::Row& row, const std::string& name) {
  return row[table.column(name)];
}

int to_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error("expected integer for " + what + ", got '" + text + "'");
  }
}

}  // namespace

CardSet generate_decks(DeckStyle style, const GameParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  CardSet set;
  for (int tier = 0; tier < params.decks; ++tier) set.decks.push_back(default_tier(tier, params, rng));

  if (style == DeckStyle::kDefault) {
    set.nobles = noble_pool(params, 3, rng);
    return set;
  }

  // One card to win: lower tiers carry no points except a budget of one-point
  // cards that, with every noble on the table, still stays below PP.
  constexpr int kNoblePoints = 1;
  set.nobles = noble_pool(params, kNoblePoints, rng);
  const int last = params.decks - 1;
  std::vector<Card*> lower;
  for (int tier = 0; tier < last; ++tier)
    for (Card& card : set.decks[tier]) {
      card.points = 0;
      lower.push_back(&card);
    }
  std::shuffle(lower.begin(), lower.end(), rng);
  const int budget = std::max(0, params.end_points - 1 - params.nobles_on_table() * kNoblePoints);
  for (int i = 0; i < budget && i < static_cast<int>(lower.size()); ++i) lower[i]->points = 1;

  for (Card& card : set.decks[last]) {
    card.points = params.end_points;
    card.cost = spread_cost(12 + uniform_int(rng, 0, 3), params.token_types, -1, rng);
  }
  return set;
}

std::vector<Card> load_deck_csv(const std::string& path, int token_types) {
  csv::Table table = csv::read_file(path);
  std::vector<Card> deck;
  for (const csv::Row& row : table.rows) {
    Card card;
    card.suit = to_int(cell(table, row, "suit"), "suit");
    card.points = to_int(cell(table, row, "points"), "points");
    for (int s = 0; s < token_types; ++s)
      card.cost[s] = static_cast<std::int8_t>(to_int(cell(table, row, "cost_" + std::to_string(s)), "cost"));
    if (card.suit < 0 || card.suit >= token_types) throw std::runtime_error(path + ": suit out of range");
    if (card.points < 0) throw std::runtime_error(path + ": negative points");
    for (int s = 0; s < token_types; ++s)
      if (card.cost[s] < 0) throw std::runtime_error(path + ": negative cost");
    deck.push_back(card);
  }
  return deck;
}

void save_deck_csv(const std::string& path, const std::vector<Card>& deck, int token_types) {
  csv::Row header{"suit", "points"};
  for (int s = 0; s < token_types; ++s) header.push_back("cost_" + std::to_string(s));
  std::vector<csv::Row> rows;
  for (const Card& card : deck) {
    csv::Row row{std::to_string(card.suit), std::to_string(card.points)};
    for (int s = 0; s < token_types; ++s) row.push_back(std::to_string(card.cost[s]));
    rows.push_back(std::move(row));
  }
  csv::write_file(path, header, rows);
}

std::vector<Noble> load_nobles_csv(const std::string& path, int token_types) {
  csv::Table table = csv::read_file(path);
  std::vector<Noble> nobles;
  for (const csv::Row& row : table.rows) {
    Noble noble;
    noble.points = to_int(cell(table, row, "points"), "points");
    for (int s = 0; s < token_types; ++s)
      noble.cost[s] = static_cast<std::int8_t>(to_int(cell(table, row, "cost_" + std::to_string(s)), "cost"));
    if (noble.points < 0) throw std::runtime_error(path + ": negative points");
    nobles.push_back(noble);
  }
  return nobles;
}

void save_nobles_csv(const std::string& path, const std::vector<Noble>& nobles, int token_types) {
  csv::Row header{"points"};
  for (int s = 0; s < token_types; ++s) header.push_back("cost_" + std::to_string(s));
  std::vector<csv::Row> rows;
  for (const Noble& noble : nobles) {
    csv::Row row{std::to_string(noble.points)};
    for (int s = 0; s < token_types; ++s) row.push_back(std::to_string(noble.cost[s]));
    rows.push_back(std::move(row));
  }
  csv::write_file(path, header, rows);
}

nlohmann::json params_to_json(const GameParams& p) {
  nlohmann::json doc = {
      {"P", p.players},          {"nTT", p.token_types},   {"nJT", p.jokers},
      {"D", p.decks},            {"FUC", p.face_up},       {"EN", p.extra_nobles},
      {"maxT", p.max_tokens},    {"maxRC", p.max_reserved}, {"PP", p.end_points},
      {"nTTPD", p.pick_diff_types}, {"nTPD", p.pick_diff_per_type}, {"nTPS", p.pick_same_amount},
      {"minTPS", p.pick_same_min}, {"tokensPerSuit", p.tokens_per_suit}, {"maxTicks", p.max_ticks},
  };
  doc["nobleCount"] = p.noble_count ? nlohmann::json(*p.noble_count) : nlohmann::json(nullptr);
  return doc;
}

GameParams params_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("parameters: expected a JSON object");
  GameParams p;
  auto get = [&doc](const char* key, int& field) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer()) throw std::invalid_argument(std::string("parameters: ") + key + " must be an integer");
    field = doc[key].get<int>();
  };
  get("P", p.players);
  get("nTT", p.token_types);
  get("nJT", p.jokers);
  get("D", p.decks);
  get("FUC", p.face_up);
  get("EN", p.extra_nobles);
  get("maxT", p.max_tokens);
  get("maxRC", p.max_reserved);
  get("PP", p.end_points);
  get("nTTPD", p.pick_diff_types);
  get("nTPD", p.pick_diff_per_type);
  get("nTPS", p.pick_same_amount);
  get("minTPS", p.pick_same_min);
  get("tokensPerSuit", p.tokens_per_suit);
  get("maxTicks", p.max_ticks);
  if (doc.contains("nobleCount") && !doc["nobleCount"].is_null()) {
    if (!doc["nobleCount"].is_number_integer()) throw std::invalid_argument("parameters: nobleCount must be an integer");
    p.noble_count = doc["nobleCount"].get<int>();
  }
  p.validate();
  return p;
}

void save_game_assets(const std::string& dir, const GameParams& params, const CardSet& cards) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "decks");
  fs::create_directories(fs::path(dir) / "nobles");
  for (std::size_t d = 0; d < cards.decks.size(); ++d)
    save_deck_csv((fs::path(dir) / "decks" / (std::to_string(d + 1) + ".csv")).string(), cards.decks[d],
                  params.token_types);
  save_nobles_csv((fs::path(dir) / "nobles" / "nobles.csv").string(), cards.nobles, params.token_types);
  std::ofstream out(fs::path(dir) / "parameters.json");
  out << params_to_json(params).dump(2) << '\n';
}

CardSet load_game_assets(const std::string& dir, GameParams& params) {
  namespace fs = std::filesystem;
  std::ifstream in(fs::path(dir) / "parameters.json");
  if (!in) throw std::runtime_error("cannot open " + (fs::path(dir) / "parameters.json").string());
  params = params_from_json(nlohmann::json::parse(in));
  CardSet set;
  for (int d = 0; d < params.decks; ++d)
    set.decks.push_back(load_deck_csv((fs::path(dir) / "decks" / (std::to_string(d + 1) + ".csv")).string(),
                                      params.token_types));
  set.nobles = load_nobles_csv((fs::path(dir) / "nobles" / "nobles.csv").string(), params.token_types);
  return set;
}

GameSpec make_game(const std::string& name, std::uint64_t deck_seed) {
  GameSpec spec;
  spec.name = name;
  if (name == "SP2P") {
    spec.params = GameParams::sp2p();
    spec.cards = generate_decks(DeckStyle::kDefault, spec.params, deck_seed);
  } else if (name == "W2") {
    spec.params = GameParams::w2();
    spec.cards = generate_decks(DeckStyle::kDefault, spec.params, deck_seed);
  } else if (name == "1C2W") {
    spec.params = GameParams::one_card_to_win();
    spec.cards = generate_decks(DeckStyle::kOneCardToWin, spec.params, deck_seed);
  } else {
    throw std::invalid_argument("unknown game '" + name + "' (expected SP2P, W2 or 1C2W)");
  }
  return spec;
}

}  // namespace sqd::engine
