#include "splendorqd/engine.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace sqd::engine {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument("GameParams: " + message);
}

struct Holdings {
  TokenVec tokens{};
  int jokers = 0;
  int total(int suits) const {
    int n = jokers;
    for (int s = 0; s < suits; ++s) n += tokens[s];
    return n;
  }
};

int effective_cost(const PlayerState& player, const Card& card, int suit) {
  return std::max(0, card.cost[suit] - player.bonuses[suit]);
}

const Card* buy_target(const GameState& state, const Action& action) {
  const GameParams& params = state.params();
  if (action.kind == ActionKind::kBuyFaceUp) {
    if (action.deck < 0 || action.deck >= params.decks || action.slot < 0 ||
        action.slot >= params.face_up)
      return nullptr;
    CardRef ref = state.face_up[action.deck][action.slot];
    return ref.empty() ? nullptr : &state.card(ref);
  }
  const PlayerState& player = state.players[state.current_player];
  if (action.slot < 0 || action.slot >= player.reserved_count) return nullptr;
  return &state.card(player.reserved[action.slot].card);
}

bool any_nonzero(const TokenVec& v) {
  return std::any_of(v.begin(), v.end(), [](std::int8_t x) { return x != 0; });
}

int pick_same_threshold(const GameParams& params) {
  return std::max(params.pick_same_min, params.pick_same_amount);
}

int eligible_pick_different(const GameState& state) {
  const GameParams& params = state.params();
  int eligible = 0;
  for (int s = 0; s < params.token_types; ++s)
    if (state.table_tokens[s] >= params.pick_diff_per_type) ++eligible;
  return eligible;
}

// Player holdings once the action's gains and payments are applied, before discards.
Holdings holdings_after(const GameState& state, const Action& action) {
  const PlayerState& player = state.players[state.current_player];
  Holdings h;
  h.tokens = player.tokens;
  h.jokers = player.jokers;
  const int suits = state.params().token_types;
  for (int s = 0; s < suits; ++s) h.tokens[s] = static_cast<std::int8_t>(h.tokens[s] + action.take[s] - action.pay[s]);
  h.jokers -= action.pay_jokers;
  if (action.is_reserve() && state.table_jokers > 0) h.jokers += 1;
  return h;
}

void fill_discards(const GameState& state, Action& action, Rng& rng) {
  const GameParams& params = state.params();
  Holdings h = holdings_after(state, action);
  int excess = h.total(params.token_types) - params.max_tokens;
  while (excess > 0) {
    int pick = uniform_int(rng, 0, h.total(params.token_types) - 1);
    bool placed = false;
    for (int s = 0; s < params.token_types && !placed; ++s) {
      if (pick < h.tokens[s]) {
        --h.tokens[s];
        ++action.discard[s];
        placed = true;
      } else {
        pick -= h.tokens[s];
      }
    }
    if (!placed) {
      --h.jokers;
      ++action.discard_jokers;
    }
    --excess;
  }
}

}  // namespace

void GameParams::validate() const {
  require(players >= 2 && players <= kMaxPlayers, "P must be in [2, " + std::to_string(kMaxPlayers) + "]");
  require(token_types >= 1 && token_types <= kMaxSuits, "nTT must be in [1, " + std::to_string(kMaxSuits) + "]");
  require(jokers >= 0 && jokers <= kMaxTokensPerSuit, "nJT out of range");
  require(decks >= 1 && decks <= kMaxDecks, "D must be in [1, " + std::to_string(kMaxDecks) + "]");
  require(face_up >= 1 && face_up <= kMaxFaceUp, "FUC must be in [1, " + std::to_string(kMaxFaceUp) + "]");
  require(extra_nobles >= 0, "EN must be >= 0");
  require(nobles_on_table() >= 0 && nobles_on_table() <= kMaxNobles, "noble count out of range");
  require(max_tokens >= 0 && max_tokens <= kMaxTokensPerSuit, "maxT out of range");
  require(max_reserved >= 0 && max_reserved <= kMaxReserved, "maxRC out of range");
  require(end_points > 0, "PP must be > 0");
  require(pick_diff_types >= 0 && pick_diff_types <= token_types, "nTTPD must be in [0, nTT]");
  require(pick_diff_per_type >= 0, "nTPD must be >= 0");
  require(pick_same_amount >= 0, "nTPS must be >= 0");
  require(pick_same_min >= 0, "minTPS must be >= 0");
  require(tokens_per_suit >= 0 && tokens_per_suit <= kMaxTokensPerSuit, "tokensPerSuit out of range");
  require(max_ticks >= 1, "maxTicks must be >= 1");
}

GameParams GameParams::sp2p() {
  GameParams p;
  p.players = 2;
  p.tokens_per_suit = 5;
  p.noble_count = 3;
  return p;
}

GameParams GameParams::w2() {
  GameParams p = sp2p();
  p.pick_diff_types = 2;
  p.pick_diff_per_type = 1;
  p.pick_same_amount = 3;
  p.pick_same_min = 0;
  p.max_tokens = 20;
  p.tokens_per_suit = 10;
  p.noble_count = 1;
  return p;
}

GameParams GameParams::one_card_to_win() { return sp2p(); }

int Card::cost_sum() const { return std::accumulate(cost.begin(), cost.end(), 0); }

int PlayerState::token_total() const {
  return std::accumulate(tokens.begin(), tokens.end(), jokers);
}

int GameState::deck_remaining(int deck) const {
  return static_cast<int>(deal->decks[deck].size()) - deck_pos[deck];
}

int GameState::noble_slots() const { return params().nobles_on_table(); }

const char* to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::kUnset: return "Unset";
    case ActionKind::kPass: return "Pass";
    case ActionKind::kPickDifferent: return "PickDifferent";
    case ActionKind::kPickSame: return "PickSame";
    case ActionKind::kReserveFaceUp: return "ReserveFaceUp";
    case ActionKind::kReserveTopDeck: return "ReserveTopDeck";
    case ActionKind::kBuyFaceUp: return "BuyFaceUp";
    case ActionKind::kBuyReserved: return "BuyReserved";
  }
  return "?";
}

std::string Action::describe() const {
  auto vec = [](const TokenVec& v) {
    std::ostringstream os;
    os << '(';
    for (int s = 0; s < kMaxSuits; ++s) os << (s ? "," : "") << int(v[s]);
    os << ')';
    return os.str();
  };
  std::ostringstream os;
  os << to_string(kind);
  if (deck >= 0) os << " deck=" << int(deck);
  if (slot >= 0) os << " slot=" << int(slot);
  if (any_nonzero(take)) os << " take=" << vec(take);
  if (any_nonzero(pay) || pay_jokers) os << " pay=" << vec(pay) << "+J" << int(pay_jokers);
  if (any_nonzero(discard) || discard_jokers) os << " discard=" << vec(discard) << "+J" << int(discard_jokers);
  return os.str();
}

GameState new_game(const GameParams& params, const std::vector<std::vector<Card>>& decks,
                   const std::vector<Noble>& nobles, std::uint64_t seed) {
  params.validate();
  if (static_cast<int>(decks.size()) != params.decks)
    throw std::invalid_argument("new_game: expected " + std::to_string(params.decks) + " decks, got " +
                                std::to_string(decks.size()));
  for (std::size_t d = 0; d < decks.size(); ++d) {
    if (decks[d].empty()) throw std::invalid_argument("new_game: deck " + std::to_string(d) + " is empty");
    if (decks[d].size() > 30000) throw std::invalid_argument("new_game: deck too large");
  }
  const int noble_count = params.nobles_on_table();
  if (static_cast<int>(nobles.size()) < noble_count)
    throw std::invalid_argument("new_game: need " + std::to_string(noble_count) + " nobles, got " +
                                std::to_string(nobles.size()));

  Rng rng(seed);
  auto deal = std::make_shared<Deal>();
  deal->params = params;
  deal->decks = decks;
  for (auto& deck : deal->decks) std::shuffle(deck.begin(), deck.end(), rng);
  std::vector<int> order(nobles.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < noble_count; ++i) deal->nobles.push_back(nobles[order[i]]);

  GameState state;
  state.deal = deal;
  for (int d = 0; d < params.decks; ++d) {
    for (int slot = 0; slot < params.face_up; ++slot) {
      if (state.deck_remaining(d) > 0)
        state.face_up[d][slot] = CardRef{static_cast<std::int16_t>(d), static_cast<std::int16_t>(state.deck_pos[d]++)};
    }
  }
  state.nobles_on_table.fill(-1);
  for (int i = 0; i < noble_count; ++i) state.nobles_on_table[i] = static_cast<std::int8_t>(i);
  for (int s = 0; s < params.token_types; ++s) state.table_tokens[s] = static_cast<std::int8_t>(params.tokens_per_suit);
  state.table_jokers = params.jokers;
  return state;
}

bool can_afford(const PlayerState& player, const Card& card) {
  int shortfall = 0;
  for (int s = 0; s < kMaxSuits; ++s) shortfall += std::max(0, std::max(0, card.cost[s] - player.bonuses[s]) - player.tokens[s]);
  return shortfall <= player.jokers;
}

Action canonical_payment(const PlayerState& player, const Card& card, Action action) {
  action.pay = {};
  action.pay_jokers = 0;
  for (int s = 0; s < kMaxSuits; ++s) {
    int owed = effective_cost(player, card, s);
    int paid = std::min<int>(owed, player.tokens[s]);
    action.pay[s] = static_cast<std::int8_t>(paid);
    action.pay_jokers = static_cast<std::int8_t>(action.pay_jokers + owed - paid);
  }
  return action;
}

unsigned legal_action_classes(const GameState& state) {
  const GameParams& params = state.params();
  const PlayerState& player = state.players[state.current_player];
  unsigned mask = 0;
  auto set = [&mask](ActionKind kind) {
    mask |= 1u << (static_cast<int>(kind) - static_cast<int>(ActionKind::kPickDifferent));
  };

  if (params.pick_diff_types > 0 && params.pick_diff_per_type > 0 && eligible_pick_different(state) > 0)
    set(ActionKind::kPickDifferent);
  if (params.pick_same_amount > 0) {
    const int threshold = pick_same_threshold(params);
    for (int s = 0; s < params.token_types; ++s)
      if (state.table_tokens[s] >= threshold) {
        set(ActionKind::kPickSame);
        break;
      }
  }
  if (player.reserved_count < params.max_reserved) {
    bool face_up = false, top = false;
    for (int d = 0; d < params.decks; ++d) {
      for (int slot = 0; slot < params.face_up; ++slot) face_up = face_up || !state.face_up[d][slot].empty();
      top = top || state.deck_remaining(d) > 0;
    }
    if (face_up) set(ActionKind::kReserveFaceUp);
    if (top) set(ActionKind::kReserveTopDeck);
  }
  for (int d = 0; d < params.decks; ++d) {
    for (int slot = 0; slot < params.face_up; ++slot) {
      CardRef ref = state.face_up[d][slot];
      if (!ref.empty() && can_afford(player, state.card(ref))) {
        set(ActionKind::kBuyFaceUp);
        d = params.decks;
        break;
      }
    }
  }
  for (int r = 0; r < player.reserved_count; ++r) {
    if (can_afford(player, state.card(player.reserved[r].card))) {
      set(ActionKind::kBuyReserved);
      break;
    }
  }
  return mask;
}

std::optional<std::string> check_action(const GameState& state, const Action& action) {
  if (is_terminal(state)) return "game is over";
  const GameParams& params = state.params();
  const PlayerState& player = state.players[state.current_player];
  const int suits = params.token_types;

  for (int s = suits; s < kMaxSuits; ++s)
    if (action.take[s] || action.pay[s] || action.discard[s]) return "token index beyond nTT";
  for (int s = 0; s < suits; ++s)
    if (action.take[s] < 0 || action.pay[s] < 0 || action.discard[s] < 0) return "negative token count";
  if (action.pay_jokers < 0 || action.discard_jokers < 0) return "negative joker count";
  if (action.kind != ActionKind::kPickDifferent && action.kind != ActionKind::kPickSame && any_nonzero(action.take))
    return "only pick actions take tokens";
  if (!action.is_buy() && (any_nonzero(action.pay) || action.pay_jokers)) return "only buy actions pay";

  switch (action.kind) {
    case ActionKind::kUnset:
      return "unset action";
    case ActionKind::kPass:
      if (legal_action_classes(state) != 0) return "pass is only legal when no other action is";
      if (any_nonzero(action.discard) || action.discard_jokers) return "pass cannot discard";
      return std::nullopt;
    case ActionKind::kPickDifferent: {
      if (params.pick_diff_types <= 0 || params.pick_diff_per_type <= 0) return "pick different disabled";
      int chosen = 0;
      for (int s = 0; s < suits; ++s) {
        if (action.take[s] == 0) continue;
        if (action.take[s] != params.pick_diff_per_type) return "pick different takes nTPD per suit";
        if (state.table_tokens[s] < action.take[s]) return "not enough tokens on table";
        ++chosen;
      }
      const int required = std::min(params.pick_diff_types, eligible_pick_different(state));
      if (chosen == 0 || chosen != required)
        return "pick different must take " + std::to_string(required) + " suits";
      break;
    }
    case ActionKind::kPickSame: {
      if (params.pick_same_amount <= 0) return "pick same disabled";
      int chosen = 0;
      for (int s = 0; s < suits; ++s) {
        if (action.take[s] == 0) continue;
        if (action.take[s] != params.pick_same_amount) return "pick same takes nTPS tokens";
        if (state.table_tokens[s] < pick_same_threshold(params)) return "pick same needs minTPS tokens on table";
        ++chosen;
      }
      if (chosen != 1) return "pick same takes exactly one suit";
      break;
    }
    case ActionKind::kReserveFaceUp:
      if (player.reserved_count >= params.max_reserved) return "reserve limit reached";
      if (action.deck < 0 || action.deck >= params.decks || action.slot < 0 || action.slot >= params.face_up)
        return "face-up slot out of range";
      if (state.face_up[action.deck][action.slot].empty()) return "face-up slot is empty";
      break;
    case ActionKind::kReserveTopDeck:
      if (player.reserved_count >= params.max_reserved) return "reserve limit reached";
      if (action.deck < 0 || action.deck >= params.decks) return "deck out of range";
      if (state.deck_remaining(action.deck) <= 0) return "deck is empty";
      break;
    case ActionKind::kBuyFaceUp:
    case ActionKind::kBuyReserved: {
      const Card* card = buy_target(state, action);
      if (!card) return "no card at buy target";
      int shortfall = 0;
      for (int s = 0; s < suits; ++s) {
        const int owed = effective_cost(player, *card, s);
        if (action.pay[s] > owed) return "overpaying suit " + std::to_string(s);
        if (action.pay[s] > player.tokens[s]) return "paying tokens not held";
        shortfall += owed - action.pay[s];
      }
      if (action.pay_jokers != shortfall) return "jokers must cover the exact shortfall";
      if (action.pay_jokers > player.jokers) return "not enough jokers";
      break;
    }
  }

  Holdings h = holdings_after(state, action);
  const int excess = h.total(suits) - params.max_tokens;
  int discarded = action.discard_jokers;
  for (int s = 0; s < suits; ++s) {
    if (action.discard[s] > h.tokens[s]) return "discarding tokens not held";
    discarded += action.discard[s];
  }
  if (action.discard_jokers > h.jokers) return "discarding jokers not held";
  if (discarded != std::max(0, excess))
    return "must discard exactly " + std::to_string(std::max(0, excess)) + " tokens";
  return std::nullopt;
}

Action sample_action(const GameState& state, Rng& rng) {
  const GameParams& params = state.params();
  const PlayerState& player = state.players[state.current_player];
  const unsigned mask = legal_action_classes(state);
  Action action;
  if (mask == 0) {
    action.kind = ActionKind::kPass;
    return action;
  }
  std::array<int, kActionClassCount> classes{};
  int n = 0;
  for (int i = 0; i < kActionClassCount; ++i)
    if (mask & (1u << i)) classes[n++] = i;
  action.kind = static_cast<ActionKind>(classes[uniform_int(rng, 0, n - 1)] + static_cast<int>(ActionKind::kPickDifferent));

  std::array<int, kMaxDecks * kMaxFaceUp> options{};
  int count = 0;
  switch (action.kind) {
    case ActionKind::kPickDifferent: {
      for (int s = 0; s < params.token_types; ++s)
        if (state.table_tokens[s] >= params.pick_diff_per_type) options[count++] = s;
      const int k = std::min(params.pick_diff_types, count);
      for (int i = 0; i < k; ++i) {
        std::swap(options[i], options[uniform_int(rng, i, count - 1)]);
        action.take[options[i]] = static_cast<std::int8_t>(params.pick_diff_per_type);
      }
      break;
    }
    case ActionKind::kPickSame: {
      const int threshold = pick_same_threshold(params);
      for (int s = 0; s < params.token_types; ++s)
        if (state.table_tokens[s] >= threshold) options[count++] = s;
      action.take[options[uniform_int(rng, 0, count - 1)]] = static_cast<std::int8_t>(params.pick_same_amount);
      break;
    }
    case ActionKind::kReserveFaceUp:
    case ActionKind::kBuyFaceUp: {
      const bool buying = action.kind == ActionKind::kBuyFaceUp;
      for (int d = 0; d < params.decks; ++d)
        for (int slot = 0; slot < params.face_up; ++slot) {
          CardRef ref = state.face_up[d][slot];
          if (!ref.empty() && (!buying || can_afford(player, state.card(ref)))) options[count++] = d * kMaxFaceUp + slot;
        }
      const int choice = options[uniform_int(rng, 0, count - 1)];
      action.deck = static_cast<std::int8_t>(choice / kMaxFaceUp);
      action.slot = static_cast<std::int8_t>(choice % kMaxFaceUp);
      if (buying) action = canonical_payment(player, state.card(state.face_up[action.deck][action.slot]), action);
      break;
    }
    case ActionKind::kReserveTopDeck: {
      for (int d = 0; d < params.decks; ++d)
        if (state.deck_remaining(d) > 0) options[count++] = d;
      action.deck = static_cast<std::int8_t>(options[uniform_int(rng, 0, count - 1)]);
      break;
    }
    case ActionKind::kBuyReserved: {
      for (int r = 0; r < player.reserved_count; ++r)
        if (can_afford(player, state.card(player.reserved[r].card))) options[count++] = r;
      action.slot = static_cast<std::int8_t>(options[uniform_int(rng, 0, count - 1)]);
      action = canonical_payment(player, state.card(player.reserved[action.slot].card), action);
      break;
    }
    default:
      break;
  }
  fill_discards(state, action, rng);
  return action;
}

namespace {

class Emitter {
 public:
  Emitter(EventLog* log, int tick) : log_(log), tick_(tick) {}
  void operator()(int type, int who, int amount = 0, int deck = -1, int suit = -1, int beneficiary = -1) const {
    if (log_) log_->push_back(Event{type, who, tick_, amount, deck, suit, beneficiary});
  }

 private:
  EventLog* log_;
  int tick_;
};

void refill(GameState& state, int deck, int slot, int who, const Emitter& emit) {
  if (state.deck_remaining(deck) > 0) {
    emit(kTableCardDraw, who, 1, deck);
    state.face_up[deck][slot] = CardRef{static_cast<std::int16_t>(deck), static_cast<std::int16_t>(state.deck_pos[deck]++)};
    emit(kTableCardPlace, who, 1, deck);
  } else {
    state.face_up[deck][slot] = CardRef{};
  }
}

void award_noble(GameState& state, int who, const Emitter& emit) {
  PlayerState& player = state.players[who];
  const int suits = state.params().token_types;
  for (int i = 0; i < state.noble_slots(); ++i) {
    const int idx = state.nobles_on_table[i];
    if (idx < 0) continue;
    const Noble& noble = state.deal->nobles[idx];
    bool qualifies = true;
    for (int s = 0; s < suits && qualifies; ++s) qualifies = player.bonuses[s] >= noble.cost[s];
    if (!qualifies) continue;
    state.nobles_on_table[i] = -1;
    player.nobles[player.noble_count++] = static_cast<std::int8_t>(idx);
    player.noble_points += noble.points;
    player.points += noble.points;
    emit(kNobleTake, who, 1);
    emit(kNobleReceive, who, 1);
    if (noble.points > 0) emit(kPointsFromNoble, kEngine, noble.points, -1, -1, who);
    return;
  }
}

}  // namespace

void step(GameState& state, const Action& action, EventLog* events) {
  if (auto problem = check_action(state, action))
    throw IllegalAction("illegal action " + action.describe() + ": " + *problem);

  const GameParams& params = state.params();
  const int who = state.current_player;
  const int suits = params.token_types;
  PlayerState& player = state.players[who];
  const Emitter emit(events, state.tick);

  auto gain_joker = [&] {
    if (state.table_jokers > 0) {
      --state.table_jokers;
      ++player.jokers;
      ++player.tokens_gained;
      emit(kTableJokerDecrease, who, 1);
      emit(kPlayerJokerIncrease, who, 1);
    }
  };

  switch (action.kind) {
    case ActionKind::kPickDifferent:
    case ActionKind::kPickSame:
      for (int s = 0; s < suits; ++s) {
        if (action.take[s] == 0) continue;
        state.table_tokens[s] = static_cast<std::int8_t>(state.table_tokens[s] - action.take[s]);
        player.tokens[s] = static_cast<std::int8_t>(player.tokens[s] + action.take[s]);
        player.tokens_gained += action.take[s];
        emit(kTableTokenDecrease, who, action.take[s], -1, s);
        emit(kPlayerTokenIncrease, who, action.take[s], -1, s);
      }
      break;
    case ActionKind::kReserveFaceUp: {
      CardRef ref = state.face_up[action.deck][action.slot];
      player.reserved[player.reserved_count++] = ReservedCard{ref, false};
      ++player.reserves_made;
      emit(kCardReserve, who, 1, action.deck, state.card(ref).suit);
      refill(state, action.deck, action.slot, who, emit);
      gain_joker();
      break;
    }
    case ActionKind::kReserveTopDeck: {
      CardRef ref{static_cast<std::int16_t>(action.deck), static_cast<std::int16_t>(state.deck_pos[action.deck]++)};
      emit(kTableCardDraw, who, 1, action.deck);
      player.reserved[player.reserved_count++] = ReservedCard{ref, true};
      ++player.reserves_made;
      emit(kCardReserveHidden, who, 1, action.deck);
      gain_joker();
      break;
    }
    case ActionKind::kBuyFaceUp:
    case ActionKind::kBuyReserved: {
      CardRef ref;
      if (action.kind == ActionKind::kBuyFaceUp) {
        ref = state.face_up[action.deck][action.slot];
      } else {
        ref = player.reserved[action.slot].card;
        for (int r = action.slot; r + 1 < player.reserved_count; ++r) player.reserved[r] = player.reserved[r + 1];
        player.reserved[--player.reserved_count] = ReservedCard{};
      }
      const Card& card = state.card(ref);
      for (int s = 0; s < suits; ++s) {
        if (action.pay[s] == 0) continue;
        player.tokens[s] = static_cast<std::int8_t>(player.tokens[s] - action.pay[s]);
        state.table_tokens[s] = static_cast<std::int8_t>(state.table_tokens[s] + action.pay[s]);
        emit(kPlayerTokenDecrease, who, action.pay[s], -1, s);
        emit(kTableTokenIncrease, who, action.pay[s], -1, s);
      }
      if (action.pay_jokers > 0) {
        player.jokers -= action.pay_jokers;
        state.table_jokers += action.pay_jokers;
        emit(kPlayerJokerDecrease, who, action.pay_jokers);
        emit(kTableJokerIncrease, who, action.pay_jokers);
      }
      player.bonuses[card.suit] = static_cast<std::int8_t>(player.bonuses[card.suit] + 1);
      ++player.cards_bought;
      player.bought_cost_sum += card.cost_sum();
      emit(kCardBuy, who, card.cost_sum(), ref.deck, card.suit);
      if (card.points > 0) {
        player.card_points += card.points;
        player.points += card.points;
        emit(kPointsFromCard, who, card.points, ref.deck, card.suit);
      }
      if (action.kind == ActionKind::kBuyFaceUp) refill(state, action.deck, action.slot, who, emit);
      break;
    }
    case ActionKind::kPass:
    case ActionKind::kUnset:
      break;
  }

  bool swapped = false;
  for (int s = 0; s < suits; ++s) {
    if (action.discard[s] == 0) continue;
    player.tokens[s] = static_cast<std::int8_t>(player.tokens[s] - action.discard[s]);
    state.table_tokens[s] = static_cast<std::int8_t>(state.table_tokens[s] + action.discard[s]);
    emit(kPlayerTokenDecrease, who, action.discard[s], -1, s);
    emit(kTableTokenIncrease, who, action.discard[s], -1, s);
    swapped = true;
  }
  if (action.discard_jokers > 0) {
    player.jokers -= action.discard_jokers;
    state.table_jokers += action.discard_jokers;
    emit(kPlayerJokerDecrease, who, action.discard_jokers);
    emit(kTableJokerIncrease, who, action.discard_jokers);
    swapped = true;
  }
  if (swapped) ++player.token_swaps;

  if (action.kind != ActionKind::kPass) award_noble(state, who, emit);
  if (player.points >= params.end_points) state.final_round = true;
  state.current_player = (state.current_player + 1) % params.players;
  ++state.tick;
}

std::pair<GameState, EventLog> apply(const GameState& state, const Action& action) {
  std::pair<GameState, EventLog> out{state, {}};
  step(out.first, action, &out.second);
  return out;
}

void skip_turn(GameState& state) {
  state.current_player = (state.current_player + 1) % state.params().players;
  ++state.tick;
}

bool is_terminal(const GameState& state) {
  return state.tick >= state.params().max_ticks || (state.final_round && state.current_player == 0);
}

std::vector<double> result(const GameState& state) {
  if (!is_terminal(state)) throw std::logic_error("result: game is not over");
  const int n = state.params().players;
  int best_points = -1;
  int best_cards = 0;
  for (int p = 0; p < n; ++p) {
    const PlayerState& ps = state.players[p];
    if (ps.points > best_points || (ps.points == best_points && ps.cards_bought < best_cards)) {
      best_points = ps.points;
      best_cards = ps.cards_bought;
    }
  }
  std::vector<double> out(n, 0.0);
  int winners = 0;
  for (int p = 0; p < n; ++p)
    if (state.players[p].points == best_points && state.players[p].cards_bought == best_cards) ++winners;
  for (int p = 0; p < n; ++p)
    if (state.players[p].points == best_points && state.players[p].cards_bought == best_cards) out[p] = 1.0 / winners;
  return out;
}

}  // namespace sqd::engine
