#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "splendorqd/engine.hpp"

namespace sqd::heuristics {

using engine::Event;
using engine::GameParams;
using engine::GameState;

inline constexpr int kDiscard = -1;

/// Maps each of the 18 event types to a feature slot, or kDiscard.
struct EventMapping {
  std::string name;
  std::array<int, engine::kEventTypeCount> table{};
  int feature_count = 0;

  /// 18 features, one per event type.
  static EventMapping identity();
  /// 5 macro features: tokens gained, hidden reserve, reserve, noble, points.
  static EventMapping hand_crafted();

  /// `{"name": ..., "table": [18 ints]}`; the feature count is max(table)+1.
  static EventMapping from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  /// Throws std::out_of_range for type ids outside [0, 18).
  int feature_of(int type_id) const;

  bool operator==(const EventMapping&) const = default;
};

using WeightVector = std::vector<double>;

/// The 11 uniformly spaced weight values in [-1, 1].
extern const std::array<double, 11> kWeightGrid;

enum class HeuristicKind { kPointBased, kEventId, kEventHandCrafted, kStateValue };

/// "PB", "EFID", "EFHC", "SF".
std::string to_string(HeuristicKind kind);
/// Accepts the short names above, also "EF_ID" / "EF_HC".
HeuristicKind heuristic_kind_from_string(const std::string& text);

struct HeuristicSpec {
  HeuristicKind kind = HeuristicKind::kPointBased;
  EventMapping mapping;  // event-value kinds only
  WeightVector weights;  // empty for point-based

  static HeuristicSpec point_based();
  static HeuristicSpec event_value(EventMapping mapping, WeightVector weights);
  static HeuristicSpec state_value(WeightVector weights);

  /// Number of weights this kind expects for the given rules.
  static int weight_count(HeuristicKind kind, const GameParams& params);
};

double pb_value(const GameState& start, const GameState& end, int player);

/// True for events attributable to `player`: its own events plus engine events
/// that credit it.
inline bool credits(const Event& event, int player) {
  return event.who == player || (event.who == engine::kEngine && event.beneficiary == player);
}

std::vector<double> ef_features(std::span<const Event> events, int player, const EventMapping& mapping);
/// Adds counts into `features` (size feature_count); additive over logs.
void accumulate_features(std::span<const Event> events, int player, const EventMapping& mapping,
                         std::span<double> features);
/// Linear mixing. Throws std::invalid_argument on length mismatch.
double ef_value(std::span<const double> features, std::span<const double> weights);

/// Length of encode_state for these rules.
int encoding_length(const GameParams& params);

/// Flat state vector: board (decks with remaining count and face-up cards,
/// noble slots, table tokens incl. jokers) followed by every player starting
/// with `player`. Suits are one-hot; empty slots and opponents' hidden
/// reserved cards are zero blocks.
std::vector<double> encode_state(const GameState& state, int player);
void encode_state_into(const GameState& state, int player, std::span<double> out);

double sf_value(const GameState& start, const GameState& end, int player, std::span<const double> weights);

/// Value of a simulated segment under `spec`. `events` may contain other
/// players' events; they are filtered here.
double evaluate(const HeuristicSpec& spec, const GameState& start, const GameState& end,
                std::span<const Event> events, int player);

}  // namespace sqd::heuristics
