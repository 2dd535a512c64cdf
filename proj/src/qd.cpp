#include "splendorqd/qd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iterator>
#include <stdexcept>

namespace sqd::qd {

namespace {

template <typename T, std::size_t N>
std::vector<double> as_values(const std::array<T, N>& grid) {
  return std::vector<double>(grid.begin(), grid.end());
}

}  // namespace

GenomeSpace GenomeSpace::make(heuristics::HeuristicKind kind, const engine::GameParams& params) {
  using heuristics::HeuristicKind;
  GenomeSpace space;
  space.kind_ = kind;
  space.genes_ = {
      {"l", as_values(agent::kLengthGrid)},
      {"n", as_values(agent::kEvaluationsGrid)},
      {"usb", {0.0, 1.0}},
      {"mo", {0.0, 1.0}},
      {"ms", as_values(agent::kMutationGrid)},
      {"om", as_values(agent::kOpponentModelGrid)},
      {"ombs", as_values(agent::kOpponentShareGrid)},
      {"dcy", as_values(agent::kDecayGrid)},
      {"mu", as_values(agent::kMuGrid)},
      {"sigma", as_values(agent::kSigmaGrid)},
  };
  if (kind == HeuristicKind::kEventId) space.mapping_ = heuristics::EventMapping::identity();
  if (kind == HeuristicKind::kEventHandCrafted) space.mapping_ = heuristics::EventMapping::hand_crafted();
  const int weights = heuristics::HeuristicSpec::weight_count(kind, params);
  const std::vector<double> grid(heuristics::kWeightGrid.begin(), heuristics::kWeightGrid.end());
  for (int i = 0; i < weights; ++i) space.genes_.push_back({"w" + std::to_string(i), grid});
  return space;
}

Genome GenomeSpace::random(Rng& rng) const {
  Genome genome(genes_.size());
  for (std::size_t i = 0; i < genes_.size(); ++i)
    genome[i] = uniform_int(rng, 0, static_cast<int>(genes_[i].values.size()) - 1);
  return genome;
}

void GenomeSpace::check(const Genome& genome) const {
  if (genome.size() != genes_.size())
    throw std::invalid_argument("genome has " + std::to_string(genome.size()) + " genes, space expects " +
                                std::to_string(genes_.size()));
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    if (genome[i] < 0 || genome[i] >= static_cast<int>(genes_[i].values.size()))
      throw std::invalid_argument("gene " + genes_[i].name + " index " + std::to_string(genome[i]) +
                                  " out of range");
  }
}

std::vector<double> GenomeSpace::values(const Genome& genome) const {
  check(genome);
  std::vector<double> out(genome.size());
  for (std::size_t i = 0; i < genome.size(); ++i) out[i] = genes_[i].values[genome[i]];
  return out;
}

std::pair<agent::BmrhConfig, heuristics::HeuristicSpec> GenomeSpace::decode(const Genome& genome) const {
  const std::vector<double> v = values(genome);
  agent::BmrhConfig config;
  config.length = static_cast<int>(v[0]);
  config.evaluations = static_cast<int>(v[1]);
  config.shift_buffer = v[2] != 0.0;
  config.mutate_once = v[3] != 0.0;
  config.mutation = static_cast<int>(v[4]);
  config.opponent_model = static_cast<int>(v[5]);
  config.opponent_budget_share = v[6];
  config.decay = v[7];
  config.mu = v[8];
  config.sigma = v[9];

  heuristics::WeightVector weights(v.begin() + planner_dims(), v.end());
  switch (kind_) {
    case heuristics::HeuristicKind::kPointBased:
      return {config, heuristics::HeuristicSpec::point_based()};
    case heuristics::HeuristicKind::kStateValue:
      return {config, heuristics::HeuristicSpec::state_value(std::move(weights))};
    default:
      return {config, heuristics::HeuristicSpec::event_value(mapping_, std::move(weights))};
  }
}

nlohmann::json GenomeSpace::agent_space_json() const {
  nlohmann::json genes = nlohmann::json::array();
  for (int i = 0; i < planner_dims(); ++i) genes.push_back({{"name", genes_[i].name}, {"values", genes_[i].values}});
  return {{"algorithm", "BMRH"}, {"genes", genes}};
}

nlohmann::json GenomeSpace::heuristic_space_json() const {
  nlohmann::json doc = {{"type", heuristics::to_string(kind_)},
                        {"mixing", kind_ == heuristics::HeuristicKind::kPointBased ? "none" : "linear"},
                        {"weights", dims() - planner_dims()},
                        {"grid", heuristics::kWeightGrid}};
  if (!mapping_.name.empty()) doc["mapping"] = mapping_.to_json();
  return doc;
}

Genome mutate_genome(const Genome& genome, const GenomeSpace& space, Rng& rng) {
  space.check(genome);
  Genome out = genome;
  const int gene = uniform_int(rng, 0, space.dims() - 1);
  const int cardinality = static_cast<int>(space.genes()[gene].values.size());
  // Draw from the other cardinality-1 values.
  const int pick = uniform_int(rng, 0, cardinality - 2);
  out[gene] = pick >= genome[gene] ? pick + 1 : pick;
  return out;
}

std::vector<double> MetricSpec::edges() const {
  std::vector<double> out(buckets + 1);
  for (int i = 0; i <= buckets; ++i) out[i] = lo + (hi - lo) * i / buckets;
  return out;
}

int bucket_index(double value, double lo, double hi, int k) {
  if (k < 1) throw std::invalid_argument("bucket_index: k must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("bucket_index: lo must be < hi");
  if (!std::isfinite(value)) throw std::invalid_argument("bucket_index: non-finite value");
  const double scaled = std::floor((value - lo) * k / (hi - lo));
  return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(k - 1)));
}

BehaviourSpaceSpec BehaviourSpaceSpec::standard() {
  return {{{
      {"card_count", 0.0, 40.0, 62},
      {"total_coins", 0.0, 120.0, 62},
      {"nobles", 0.0, 4.0, 62},
      {"card_cost", 0.0, 15.0, 62},
      {"reserved_cards", 0.0, 30.0, 62},
  }}};
}

CellKey BehaviourSpaceSpec::cell(const BehaviourVector& behaviour) const {
  CellKey key{};
  for (int i = 0; i < kBehaviourCount; ++i)
    key[i] = bucket_index(behaviour[i], metrics[i].lo, metrics[i].hi, metrics[i].buckets);
  return key;
}

std::vector<int> BehaviourSpaceSpec::size() const {
  std::vector<int> out;
  for (const MetricSpec& m : metrics) out.push_back(m.buckets);
  return out;
}

const std::array<const char*, kSupportCount> kSupportNames = {"game_length", "final_score", "token_swaps"};

bool Archive::insert(const Elite& elite) {
  const CellKey key = spec_.cell(elite.behaviour);
  auto it = cells_.find(key);
  bool stored = false;
  if (it == cells_.end()) {
    cells_.emplace(key, elite);
    stored = true;
  } else if (elite.fitness > it->second.fitness) {
    it->second = elite;
    stored = true;
  }
  history_.push_back({elite, key, stored});
  return stored;
}

const Elite& Archive::sample(Rng& rng) const {
  if (cells_.empty()) throw std::logic_error("Archive::sample on an empty archive");
  auto it = cells_.begin();
  std::advance(it, uniform_int(rng, 0, static_cast<int>(cells_.size()) - 1));
  return it->second;
}

GameMetrics game_metrics(const engine::GameState& final_state, int seat) {
  const engine::PlayerState& ps = final_state.players[seat];
  GameMetrics m;
  m.behaviour[0] = ps.cards_bought;
  m.behaviour[1] = ps.tokens_gained;
  m.behaviour[2] = ps.noble_count;
  m.behaviour[3] = ps.cards_bought > 0 ? static_cast<double>(ps.bought_cost_sum) / ps.cards_bought : 0.0;
  m.behaviour[4] = ps.reserves_made;
  m.support[0] = final_state.tick;
  m.support[1] = ps.points;
  m.support[2] = ps.token_swaps;
  return m;
}

Evaluation evaluate(const Genome& genome, const GenomeSpace& space, const engine::GameSpec& game,
                    const PlayerFactory& opponent, int games, std::uint64_t seed, int decision_budget) {
  if (games < 1) throw std::invalid_argument("evaluate: games must be >= 1");
  if (game.params.players != 2) throw std::invalid_argument("evaluate: two-player games only");
  const auto start = std::chrono::steady_clock::now();
  auto [config, heuristic] = space.decode(genome);
  agent::Bmrh agent(config, std::move(heuristic), decision_budget);

  Evaluation out;
  for (auto& list : out.per_game_behaviour) list.reserve(games);
  for (auto& list : out.per_game_support) list.reserve(games);
  double outcome_sum = 0.0;
  for (int g = 0; g < games; ++g) {
    const int seat = g % 2;
    std::unique_ptr<agent::Player> other = opponent();
    std::array<agent::Player*, 2> seats{};
    seats[seat] = &agent;
    seats[1 - seat] = other.get();
    const agent::MatchResult match = agent::play_match(game, seats, derive_seed(seed, g / 2));
    outcome_sum += match.outcome[seat];
    const GameMetrics metrics = game_metrics(match.final_state, seat);
    for (int i = 0; i < kBehaviourCount; ++i) out.per_game_behaviour[i].push_back(metrics.behaviour[i]);
    for (int i = 0; i < kSupportCount; ++i) out.per_game_support[i].push_back(metrics.support[i]);
  }
  out.fitness = outcome_sum / games;
  for (int i = 0; i < kBehaviourCount; ++i) {
    double sum = 0.0;
    for (double v : out.per_game_behaviour[i]) sum += v;
    out.behaviour[i] = sum / games;
  }
  for (int i = 0; i < kSupportCount; ++i) {
    double sum = 0.0;
    for (double v : out.per_game_support[i]) sum += v;
    out.support[i] = sum / games;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

double confidence_half_width(double p, int n, double z) {
  if (n < 1) throw std::invalid_argument("confidence_half_width: n must be >= 1");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("confidence_half_width: p outside [0,1]");
  return z * std::sqrt(p * (1.0 - p) / n);
}

void boot(Archive& archive, const GenomeSpace& space, int n_boot, const EvalFn& eval, Rng& rng) {
  if (n_boot < 1) throw std::invalid_argument("boot: n_boot must be >= 1");
  const int first = static_cast<int>(archive.history().size());
  for (int i = 0; i < n_boot; ++i) archive.insert(eval(space.random(rng), first + i));
}

void search_step(Archive& archive, const GenomeSpace& space, int iteration, const EvalFn& eval, Rng& rng) {
  const Genome parent = archive.sample(rng).genome;
  archive.insert(eval(mutate_genome(parent, space, rng), iteration));
}

}  // namespace sqd::qd
