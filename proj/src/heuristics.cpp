#include "splendorqd/heuristics.hpp"

#include <algorithm>
#include <stdexcept>

namespace sqd::heuristics {

const std::array<double, 11> kWeightGrid = {-1.0, -0.8, -0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

EventMapping EventMapping::identity() {
  EventMapping m;
  m.name = "id";
  for (int t = 0; t < engine::kEventTypeCount; ++t) m.table[t] = t;
  m.feature_count = engine::kEventTypeCount;
  return m;
}

EventMapping EventMapping::hand_crafted() {
  EventMapping m;
  m.name = "hc";
  m.table.fill(kDiscard);
  m.table[engine::kPlayerTokenIncrease] = 0;
  m.table[engine::kPlayerJokerIncrease] = 0;
  m.table[engine::kCardReserveHidden] = 1;
  m.table[engine::kCardReserve] = 2;
  m.table[engine::kNobleReceive] = 3;
  m.table[engine::kPointsFromCard] = 4;
  m.table[engine::kPointsFromNoble] = 4;
  m.feature_count = 5;
  return m;
}

EventMapping EventMapping::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("table") || !doc["table"].is_array())
    throw std::invalid_argument("event mapping: expected {\"name\", \"table\"}");
  const auto& table = doc["table"];
  if (table.size() != engine::kEventTypeCount)
    throw std::invalid_argument("event mapping: table must have 18 entries");
  EventMapping m;
  m.name = doc.value("name", std::string("custom"));
  int highest = -1;
  for (int t = 0; t < engine::kEventTypeCount; ++t) {
    const int v = table[t].get<int>();
    if (v < kDiscard) throw std::invalid_argument("event mapping: entries must be >= -1");
    m.table[t] = v;
    highest = std::max(highest, v);
  }
  m.feature_count = highest + 1;
  return m;
}

nlohmann::json EventMapping::to_json() const {
  return {{"name", name}, {"table", table}, {"features", feature_count}};
}

int EventMapping::feature_of(int type_id) const {
  if (type_id < 0 || type_id >= engine::kEventTypeCount)
    throw std::out_of_range("unknown event type id " + std::to_string(type_id));
  return table[type_id];
}

std::string to_string(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::kPointBased: return "PB";
    case HeuristicKind::kEventId: return "EFID";
    case HeuristicKind::kEventHandCrafted: return "EFHC";
    case HeuristicKind::kStateValue: return "SF";
  }
  return "?";
}

HeuristicKind heuristic_kind_from_string(const std::string& text) {
  if (text == "PB") return HeuristicKind::kPointBased;
  if (text == "EFID" || text == "EF_ID") return HeuristicKind::kEventId;
  if (text == "EFHC" || text == "EF_HC") return HeuristicKind::kEventHandCrafted;
  if (text == "SF") return HeuristicKind::kStateValue;
  throw std::invalid_argument("unknown heuristic space '" + text + "' (expected PB, EFID, EFHC or SF)");
}

HeuristicSpec HeuristicSpec::point_based() { return {}; }

HeuristicSpec HeuristicSpec::event_value(EventMapping mapping, WeightVector weights) {
  if (static_cast<int>(weights.size()) != mapping.feature_count)
    throw std::invalid_argument("event-value weights must match the mapping's feature count");
  HeuristicSpec spec;
  spec.kind = mapping.name == "hc" ? HeuristicKind::kEventHandCrafted : HeuristicKind::kEventId;
  spec.mapping = std::move(mapping);
  spec.weights = std::move(weights);
  return spec;
}

HeuristicSpec HeuristicSpec::state_value(WeightVector weights) {
  HeuristicSpec spec;
  spec.kind = HeuristicKind::kStateValue;
  spec.weights = std::move(weights);
  return spec;
}

int HeuristicSpec::weight_count(HeuristicKind kind, const GameParams& params) {
  switch (kind) {
    case HeuristicKind::kPointBased: return 0;
    case HeuristicKind::kEventId: return EventMapping::identity().feature_count;
    case HeuristicKind::kEventHandCrafted: return EventMapping::hand_crafted().feature_count;
    case HeuristicKind::kStateValue: return encoding_length(params);
  }
  return 0;
}

double pb_value(const GameState& start, const GameState& end, int player) {
  return end.players[player].points - start.players[player].points;
}

void accumulate_features(std::span<const Event> events, int player, const EventMapping& mapping,
                         std::span<double> features) {
  if (static_cast<int>(features.size()) != mapping.feature_count)
    throw std::invalid_argument("feature buffer does not match mapping");
  for (const Event& event : events) {
    const int slot = mapping.feature_of(event.type_id);
    if (slot == kDiscard || !credits(event, player)) continue;
    features[slot] += 1.0;
  }
}

std::vector<double> ef_features(std::span<const Event> events, int player, const EventMapping& mapping) {
  std::vector<double> features(mapping.feature_count, 0.0);
  accumulate_features(events, player, mapping, features);
  return features;
}

double ef_value(std::span<const double> features, std::span<const double> weights) {
  if (features.size() != weights.size())
    throw std::invalid_argument("ef_value: " + std::to_string(features.size()) + " features vs " +
                                std::to_string(weights.size()) + " weights");
  double value = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) value += features[i] * weights[i];
  return value;
}

namespace {

int card_block(const GameParams& p) { return 2 * p.token_types + 1; }

}  // namespace

int encoding_length(const GameParams& p) {
  const int card = card_block(p);
  const int board = p.decks * (1 + p.face_up * card) + p.nobles_on_table() * (1 + p.token_types) + p.token_types + 1;
  const int player = 1 + (p.token_types + 1) + p.token_types + p.max_reserved * card;
  return board + p.players * player;
}

void encode_state_into(const GameState& state, int player, std::span<double> out) {
  const GameParams& p = state.params();
  if (static_cast<int>(out.size()) != encoding_length(p)) throw std::invalid_argument("encode_state: bad buffer size");
  std::fill(out.begin(), out.end(), 0.0);
  const int nTT = p.token_types;
  std::size_t at = 0;

  auto put_card = [&](const engine::Card* card) {
    if (card) {
      out[at + card->suit] = 1.0;
      for (int s = 0; s < nTT; ++s) out[at + nTT + s] = card->cost[s];
      out[at + 2 * nTT] = card->points;
    }
    at += 2 * nTT + 1;
  };

  for (int d = 0; d < p.decks; ++d) {
    out[at++] = state.deck_remaining(d);
    for (int slot = 0; slot < p.face_up; ++slot) {
      engine::CardRef ref = state.face_up[d][slot];
      put_card(ref.empty() ? nullptr : &state.card(ref));
    }
  }
  for (int i = 0; i < state.noble_slots(); ++i) {
    const int idx = state.nobles_on_table[i];
    if (idx >= 0) {
      const engine::Noble& noble = state.deal->nobles[idx];
      out[at] = noble.points;
      for (int s = 0; s < nTT; ++s) out[at + 1 + s] = noble.cost[s];
    }
    at += 1 + nTT;
  }
  for (int s = 0; s < nTT; ++s) out[at++] = state.table_tokens[s];
  out[at++] = state.table_jokers;

  for (int k = 0; k < p.players; ++k) {
    const int who = (player + k) % p.players;
    const engine::PlayerState& ps = state.players[who];
    out[at++] = ps.points;
    for (int s = 0; s < nTT; ++s) out[at++] = ps.tokens[s];
    out[at++] = ps.jokers;
    for (int s = 0; s < nTT; ++s) out[at++] = ps.bonuses[s];
    for (int r = 0; r < p.max_reserved; ++r) {
      const bool visible = r < ps.reserved_count && (who == player || !ps.reserved[r].hidden);
      put_card(visible ? &state.card(ps.reserved[r].card) : nullptr);
    }
  }
}

std::vector<double> encode_state(const GameState& state, int player) {
  std::vector<double> out(encoding_length(state.params()));
  encode_state_into(state, player, out);
  return out;
}

double sf_value(const GameState& start, const GameState& end, int player, std::span<const double> weights) {
  const int n = encoding_length(start.params());
  if (static_cast<int>(weights.size()) != n)
    throw std::invalid_argument("sf_value: expected " + std::to_string(n) + " weights, got " +
                                std::to_string(weights.size()));
  std::vector<double> buffer(n);
  encode_state_into(end, player, buffer);
  double value = ef_value(buffer, weights);
  encode_state_into(start, player, buffer);
  return value - ef_value(buffer, weights);
}

double evaluate(const HeuristicSpec& spec, const GameState& start, const GameState& end,
                std::span<const Event> events, int player) {
  switch (spec.kind) {
    case HeuristicKind::kPointBased:
      return pb_value(start, end, player);
    case HeuristicKind::kEventId:
    case HeuristicKind::kEventHandCrafted: {
      if (spec.mapping.feature_count > engine::kEventTypeCount)
        return ef_value(ef_features(events, player, spec.mapping), spec.weights);
      std::array<double, engine::kEventTypeCount> buffer{};
      std::span<double> features(buffer.data(), spec.mapping.feature_count);
      accumulate_features(events, player, spec.mapping, features);
      return ef_value(features, spec.weights);
    }
    case HeuristicKind::kStateValue:
      return sf_value(start, end, player, spec.weights);
  }
  return 0.0;
}

}  // namespace sqd::heuristics
