#pragma once

// Test-side oracles and fixtures shared by the unit and acceptance suites.
// Nothing here calls the library code it is used to check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "splendorqd/decks.hpp"
#include "splendorqd/engine.hpp"
#include "splendorqd/qd.hpp"
#include "splendorqd/rng.hpp"

namespace sqd::testing {

using engine::Action;
using engine::ActionKind;
using engine::GameState;

/// Legal action classes worked out directly from the rules, as a bitmask in
/// the order PickDifferent, PickSame, ReserveFaceUp, ReserveTopDeck, BuyFaceUp, BuyReserved.
inline unsigned oracle_legal_classes(const GameState& s) {
  const engine::GameParams& p = s.params();
  const engine::PlayerState& me = s.players[s.current_player];
  unsigned mask = 0;

  int suits_with_stock = 0;
  for (int t = 0; t < p.token_types; ++t)
    if (s.table_tokens[t] >= p.pick_diff_per_type) ++suits_with_stock;
  if (p.pick_diff_types > 0 && p.pick_diff_per_type > 0 && suits_with_stock > 0) mask |= 1u;

  for (int t = 0; t < p.token_types; ++t)
    if (p.pick_same_amount > 0 && s.table_tokens[t] >= p.pick_same_min && s.table_tokens[t] >= p.pick_same_amount)
      mask |= 2u;

  auto affordable = [&](const engine::Card& c) {
    int missing = 0;
    for (int t = 0; t < p.token_types; ++t) {
      int need = c.cost[t] - me.bonuses[t];
      if (need < 0) need = 0;
      if (need > me.tokens[t]) missing += need - me.tokens[t];
    }
    return missing <= me.jokers;
  };

  bool any_face_up = false;
  bool any_buyable = false;
  bool any_deck = false;
  for (int d = 0; d < p.decks; ++d) {
    if (static_cast<int>(s.deal->decks[d].size()) > s.deck_pos[d]) any_deck = true;
    for (int slot = 0; slot < p.face_up; ++slot) {
      const engine::CardRef ref = s.face_up[d][slot];
      if (ref.deck < 0) continue;
      any_face_up = true;
      if (affordable(s.deal->decks[ref.deck][ref.index])) any_buyable = true;
    }
  }
  if (me.reserved_count < p.max_reserved && any_face_up) mask |= 4u;
  if (me.reserved_count < p.max_reserved && any_deck) mask |= 8u;
  if (any_buyable) mask |= 16u;
  for (int r = 0; r < me.reserved_count; ++r) {
    const engine::CardRef ref = me.reserved[r].card;
    if (affordable(s.deal->decks[ref.deck][ref.index])) mask |= 32u;
  }
  return mask;
}

/// Plays one uniformly random game, calling `on_step(before, action, after, events)`
/// for every turn. Returns the final state.
inline GameState random_game(const engine::GameSpec& game, std::uint64_t seed,
                             const std::function<void(const GameState&, const Action&, const GameState&,
                                                      const engine::EventLog&)>& on_step = {}) {
  GameState state = engine::new_game(game.params, game.cards.decks, game.cards.nobles, seed);
  Rng rng(seed ^ 0x5eedULL);
  engine::EventLog events;
  while (!engine::is_terminal(state)) {
    const Action action = engine::sample_action(state, rng);
    if (on_step) {
      const GameState before = state;
      events.clear();
      engine::step(state, action, &events);
      on_step(before, action, state, events);
    } else {
      engine::step(state, action);
    }
  }
  return state;
}

/// Rule violations of one transition; empty when the step is conformant.
inline std::vector<std::string> step_violations(const GameState& before, const Action& action, const GameState& after,
                                                const engine::EventLog& events) {
  std::vector<std::string> out;
  const engine::GameParams& p = after.params();
  for (int t = 0; t < p.token_types; ++t) {
    int total = after.table_tokens[t];
    for (int i = 0; i < p.players; ++i) total += after.players[i].tokens[t];
    if (total != p.tokens_per_suit) out.push_back("token conservation, suit " + std::to_string(t));
  }
  int jokers = after.table_jokers;
  for (int i = 0; i < p.players; ++i) jokers += after.players[i].jokers;
  if (jokers != p.jokers) out.push_back("joker conservation");
  for (int i = 0; i < p.players; ++i) {
    const engine::PlayerState& ps = after.players[i];
    int held = ps.jokers;
    for (int t = 0; t < p.token_types; ++t) {
      held += ps.tokens[t];
      if (ps.tokens[t] < 0) out.push_back("negative tokens");
    }
    if (held > p.max_tokens) out.push_back("maxT exceeded");
    if (ps.reserved_count > p.max_reserved) out.push_back("maxRC exceeded");
    if (ps.points != ps.card_points + ps.noble_points) out.push_back("points do not add up");
  }
  const int mover = before.current_player;
  for (int i = 0; i < p.players; ++i) {
    const int gained = after.players[i].points - before.players[i].points;
    int credited = 0;
    for (const engine::Event& e : events) {
      if (e.type_id == engine::kPointsFromCard && e.who == i) credited += e.amount;
      if (e.type_id == engine::kPointsFromNoble && e.who == engine::kEngine && e.beneficiary == i) credited += e.amount;
    }
    if (gained != credited) out.push_back("points without matching events");
    if (gained < 0) out.push_back("points decreased");
    if (i != mover && gained != 0) out.push_back("non-mover scored");
  }
  for (const engine::Event& e : events) {
    if (e.type_id < 0 || e.type_id >= engine::kEventTypeCount) out.push_back("event type out of range");
    if (e.tick != before.tick) out.push_back("event tick mismatch");
    if (e.who != mover && e.who != engine::kEngine) out.push_back("event attributed to another player");
  }
  if (action.kind != ActionKind::kPass && events.empty()) out.push_back("action emitted no events");
  return out;
}

/// Behaviour metrics recomputed from a game's event log for one seat.
inline qd::BehaviourVector behaviour_from_events(const engine::EventLog& log, int seat) {
  double cards = 0, coins = 0, nobles = 0, cost = 0, reserves = 0;
  for (const engine::Event& e : log) {
    if (e.who != seat) continue;
    switch (e.type_id) {
      case engine::kPlayerTokenIncrease:
      case engine::kPlayerJokerIncrease:
        coins += e.amount;
        break;
      case engine::kNobleReceive:
        nobles += 1;
        break;
      case engine::kCardBuy:
        cards += 1;
        cost += e.amount;
        break;
      case engine::kCardReserve:
      case engine::kCardReserveHidden:
        reserves += 1;
        break;
      default:
        break;
    }
  }
  return {cards, coins, nobles, cards > 0 ? cost / cards : 0.0, reserves};
}

/// Bucket by scanning the bin edges lo + i*(hi-lo)/k left to right.
inline int linear_scan_bucket(double v, double lo, double hi, int k) {
  int bucket = 0;
  for (int i = 1; i < k; ++i) {
    const double edge = lo + (hi - lo) * i / k;
    if (v >= edge) bucket = i;
  }
  return bucket;
}

/// Encoding length counted slot by slot from the state grammar.
inline int slot_count_encoding_length(const engine::GameParams& p) {
  int n = 0;
  const int card = p.token_types /* suit one-hot */ + p.token_types /* cost */ + 1 /* points */;
  for (int d = 0; d < p.decks; ++d) {
    n += 1;  // cards remaining
    for (int slot = 0; slot < p.face_up; ++slot) n += card;
  }
  for (int i = 0; i < p.nobles_on_table(); ++i) n += 1 + p.token_types;
  n += p.token_types + 1;  // table tokens and jokers
  for (int player = 0; player < p.players; ++player) {
    n += 1;                   // points
    n += p.token_types + 1;   // tokens and jokers
    n += p.token_types;       // card suit counts
    for (int r = 0; r < p.max_reserved; ++r) n += card;
  }
  return n;
}

/// Small hand-built game: 2 players, one deck per tier with known cards.
inline engine::GameSpec tiny_game(std::vector<std::vector<engine::Card>> decks, std::vector<engine::Noble> nobles,
                                  engine::GameParams params = engine::GameParams::sp2p()) {
  params.decks = static_cast<int>(decks.size());
  params.noble_count = static_cast<int>(nobles.size());
  return {"tiny", params, {std::move(decks), std::move(nobles)}};
}

inline engine::Card card(int suit, std::vector<int> cost, int points) {
  engine::Card c;
  c.suit = suit;
  for (std::size_t i = 0; i < cost.size(); ++i) c.cost[i] = static_cast<std::int8_t>(cost[i]);
  c.points = points;
  return c;
}

inline engine::Noble noble(std::vector<int> cost, int points) {
  engine::Noble n;
  for (std::size_t i = 0; i < cost.size(); ++i) n.cost[i] = static_cast<std::int8_t>(cost[i]);
  n.points = points;
  return n;
}

}  // namespace sqd::testing
