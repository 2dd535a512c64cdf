#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "splendorqd/rng.hpp"

namespace sqd::engine {

// Fixed capacities keep GameState trivially copyable for the forward model.
inline constexpr int kMaxPlayers = 4;
inline constexpr int kMaxSuits = 7;
inline constexpr int kMaxDecks = 4;
inline constexpr int kMaxFaceUp = 6;
inline constexpr int kMaxReserved = 6;
inline constexpr int kMaxNobles = 10;
inline constexpr int kMaxTokensPerSuit = 100;

/// `who` value for events produced by the engine's passive rules.
inline constexpr int kEngine = -1;

using TokenVec = std::array<std::int8_t, kMaxSuits>;

/// Parametric rule set. Field names follow the parameter symbols used by game
/// designers (P, nTT, nJT, ...); see to_json/from_json in decks.hpp.
struct GameParams {
  int players = 4;              // P
  int token_types = 5;          // nTT
  int jokers = 5;               // nJT
  int decks = 3;                // D
  int face_up = 4;              // FUC
  int extra_nobles = 1;         // EN
  int max_tokens = 10;          // maxT
  int max_reserved = 3;         // maxRC
  int end_points = 15;          // PP
  int pick_diff_types = 3;      // nTTPD
  int pick_diff_per_type = 1;   // nTPD
  int pick_same_amount = 2;     // nTPS
  int pick_same_min = 4;        // minTPS
  int tokens_per_suit = 7;
  std::optional<int> noble_count;
  /// Hard stop so that games between non-scoring policies terminate.
  int max_ticks = 600;

  int nobles_on_table() const { return noble_count.value_or(players + extra_nobles); }

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;

  static GameParams sp2p();
  static GameParams w2();
  static GameParams one_card_to_win();

  bool operator==(const GameParams&) const = default;
};

struct Card {
  int suit = 0;
  TokenVec cost{};
  int points = 0;

  int cost_sum() const;
  bool operator==(const Card&) const = default;
};

struct Noble {
  int points = 0;
  TokenVec cost{};

  bool operator==(const Noble&) const = default;
};

/// Position of a card inside the per-game deal (deck, index in shuffled order).
struct CardRef {
  std::int16_t deck = -1;
  std::int16_t index = 0;

  bool empty() const { return deck < 0; }
  bool operator==(const CardRef&) const = default;
};

struct ReservedCard {
  CardRef card;
  bool hidden = false;
  bool operator==(const ReservedCard&) const = default;
};

/// Immutable per-game data: shuffled decks and the nobles drawn for the table.
struct Deal {
  GameParams params;
  std::vector<std::vector<Card>> decks;
  std::vector<Noble> nobles;
};

struct PlayerState {
  int points = 0;
  int card_points = 0;
  int noble_points = 0;
  TokenVec tokens{};
  int jokers = 0;
  TokenVec bonuses{};  // bought cards per suit
  int cards_bought = 0;
  int bought_cost_sum = 0;
  std::array<ReservedCard, kMaxReserved> reserved{};
  int reserved_count = 0;
  std::array<std::int8_t, kMaxNobles> nobles{};
  int noble_count = 0;

  // Running tallies used by the behaviour metrics.
  int tokens_gained = 0;
  int reserves_made = 0;
  int token_swaps = 0;

  int token_total() const;
  bool operator==(const PlayerState&) const = default;
};

struct GameState {
  std::shared_ptr<const Deal> deal;
  std::array<int, kMaxDecks> deck_pos{};  // next undrawn index per deck
  std::array<std::array<CardRef, kMaxFaceUp>, kMaxDecks> face_up{};
  std::array<std::int8_t, kMaxNobles> nobles_on_table{};  // index into deal->nobles, -1 once taken
  TokenVec table_tokens{};
  int table_jokers = 0;
  std::array<PlayerState, kMaxPlayers> players{};
  int current_player = 0;
  bool final_round = false;
  int tick = 0;

  const GameParams& params() const { return deal->params; }
  const Card& card(CardRef ref) const { return deal->decks[ref.deck][ref.index]; }
  int deck_remaining(int deck) const;
  int noble_slots() const;

  bool operator==(const GameState&) const = default;
};

enum class ActionKind : std::uint8_t {
  kUnset,  // placeholder inside plans; never legal
  kPass,
  kPickDifferent,
  kPickSame,
  kReserveFaceUp,
  kReserveTopDeck,
  kBuyFaceUp,
  kBuyReserved,
};

inline constexpr int kActionClassCount = 6;  // PickDifferent .. BuyReserved

const char* to_string(ActionKind kind);

/// One turn. Token gains, payments and the discards needed to respect maxT
/// are all carried inside the action.
struct Action {
  ActionKind kind = ActionKind::kUnset;
  std::int8_t deck = -1;
  std::int8_t slot = -1;       // face-up slot, or reserved index for kBuyReserved
  TokenVec take{};
  TokenVec pay{};
  std::int8_t pay_jokers = 0;
  TokenVec discard{};
  std::int8_t discard_jokers = 0;

  bool is_buy() const { return kind == ActionKind::kBuyFaceUp || kind == ActionKind::kBuyReserved; }
  bool is_reserve() const {
    return kind == ActionKind::kReserveFaceUp || kind == ActionKind::kReserveTopDeck;
  }
  std::string describe() const;
  bool operator==(const Action&) const = default;
};

/// Event type identifiers. The numbering is the 18-entry taxonomy consumed by
/// the event-value heuristics.
enum EventType : int {
  kNobleTake = 0,
  kTableTokenIncrease = 1,
  kTableTokenDecrease = 2,
  kTableJokerIncrease = 3,
  kTableJokerDecrease = 4,
  kTableCardDraw = 5,
  kTableCardPlace = 6,
  kNoblePlace = 7,
  kPlayerTokenIncrease = 8,
  kPlayerTokenDecrease = 9,
  kPlayerJokerIncrease = 10,
  kPlayerJokerDecrease = 11,
  kCardReserveHidden = 12,
  kCardReserve = 13,
  kNobleReceive = 14,
  kCardBuy = 15,
  kPointsFromCard = 16,
  kPointsFromNoble = 17,
};

inline constexpr int kEventTypeCount = 18;

struct Event {
  int type_id = 0;
  int who = kEngine;
  int tick = 0;
  int amount = 0;
  int deck = -1;
  int suit = -1;
  int beneficiary = -1;  // player credited by engine events

  bool operator==(const Event&) const = default;
};

using EventLog = std::vector<Event>;

class IllegalAction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Deals a new game. Decks are shuffled and nobles drawn deterministically
/// from `seed`.
GameState new_game(const GameParams& params, const std::vector<std::vector<Card>>& decks,
                   const std::vector<Noble>& nobles, std::uint64_t seed);

/// Returns a diagnostic when `action` is not legal in `state`.
std::optional<std::string> check_action(const GameState& state, const Action& action);
inline bool is_legal(const GameState& state, const Action& action) {
  return !check_action(state, action).has_value();
}

/// Bit i set when action class (PickDifferent + i) has at least one legal member.
unsigned legal_action_classes(const GameState& state);

/// Uniform over legal action classes, then uniform inside the class.
/// Falls back to kPass only when no other class is legal.
Action sample_action(const GameState& state, Rng& rng);

/// Applies `action` in place. Events are appended to `events` when non-null.
/// Throws IllegalAction.
void step(GameState& state, const Action& action, EventLog* events = nullptr);

/// Pure transition: the input state is left untouched.
std::pair<GameState, EventLog> apply(const GameState& state, const Action& action);

/// Hands the turn to the next player without acting. Used by no-op opponent
/// models inside forward simulations; not a player action.
void skip_turn(GameState& state);

bool is_terminal(const GameState& state);

/// Per-player outcome in {1, 0.5, 0} (ties split). Throws std::logic_error on
/// non-terminal states.
std::vector<double> result(const GameState& state);

/// Tokens a player needs to pay for `card` after suit discounts, and whether
/// jokers cover the shortfall.
bool can_afford(const PlayerState& player, const Card& card);
Action canonical_payment(const PlayerState& player, const Card& card, Action action);

}  // namespace sqd::engine
