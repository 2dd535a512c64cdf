#include "splendorqd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace sqd::experiment {

std::string to_string(OpponentKind kind) { return kind == OpponentKind::kRandom ? "RND" : "BMRH_STAR"; }

OpponentKind opponent_kind_from_string(const std::string& text) {
  if (text == "RND") return OpponentKind::kRandom;
  if (text == "BMRH_STAR" || text == "BMRH*") return OpponentKind::kBmrhStar;
  throw std::invalid_argument("unknown opponent '" + text + "' (expected RND or BMRH_STAR)");
}

agent::BmrhConfig bmrh_star_config() {
  agent::BmrhConfig c;
  c.length = 5;
  c.evaluations = 50;
  c.shift_buffer = true;
  c.mutate_once = true;
  c.mutation = agent::kGaussianBranch;
  c.opponent_model = agent::kRandomOpponent;
  c.opponent_budget_share = 0.01;
  c.decay = 0.8;
  c.mu = 0.3;
  c.sigma = 1.0;
  return c;
}

std::unique_ptr<agent::Player> make_opponent(OpponentKind kind, int decision_budget) {
  if (kind == OpponentKind::kRandom) return std::make_unique<agent::RandomPlayer>();
  return std::make_unique<agent::Bmrh>(bmrh_star_config(), heuristics::HeuristicSpec::point_based(), decision_budget);
}

std::unique_ptr<agent::Player> make_opponent(const std::string& kind, int decision_budget) {
  return make_opponent(opponent_kind_from_string(kind), decision_budget);
}

nlohmann::json opponent_json(OpponentKind kind, int decision_budget) {
  nlohmann::json entry = {{"name", to_string(kind)}};
  if (kind == OpponentKind::kBmrhStar) {
    entry["algorithm"] = "BMRH";
    entry["heuristic"] = "PB";
    entry["config"] = bmrh_star_config().to_json();
    entry["budget"] = decision_budget;
  }
  return nlohmann::json::array({entry});
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("experiment config: " + what); };
  if (game != "SP2P" && game != "W2" && game != "1C2W") fail("game must be SP2P, W2 or 1C2W");
  if (n_boot < 1) fail("n_boot must be >= 1");
  if (n_boot > n_budget) fail("n_boot must not exceed n_budget");
  if (games_per_eval < 1) fail("games_per_eval must be >= 1");
  if (workers < 1) fail("workers must be >= 1");
  if (decision_budget < 1) fail("decision budget must be >= 1");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (checkpoint_interval < 0) fail("checkpoint_interval must be >= 0");
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"game", game},
          {"space", heuristics::to_string(space)},
          {"opponent", to_string(opponent)},
          {"nBoot", n_boot},
          {"nBudget", n_budget},
          {"gamesPerEvaluation", games_per_eval},
          {"workers", workers},
          {"masterSeed", master_seed},
          {"outputDir", output_dir},
          {"decisionBudget", decision_budget},
          {"deckSeed", deck_seed},
          {"batchSize", batch_size},
          {"checkpointInterval", checkpoint_interval},
          {"resume", resume}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  ExperimentConfig c;
  c.game = doc.at("game").get<std::string>();
  c.space = heuristics::heuristic_kind_from_string(doc.at("space").get<std::string>());
  c.opponent = opponent_kind_from_string(doc.at("opponent").get<std::string>());
  c.n_boot = doc.at("nBoot").get<int>();
  c.n_budget = doc.at("nBudget").get<int>();
  c.games_per_eval = doc.at("gamesPerEvaluation").get<int>();
  c.workers = doc.at("workers").get<int>();
  c.master_seed = doc.at("masterSeed").get<std::uint64_t>();
  c.output_dir = doc.at("outputDir").get<std::string>();
  c.decision_budget = doc.at("decisionBudget").get<int>();
  c.deck_seed = doc.at("deckSeed").get<std::uint64_t>();
  c.batch_size = doc.at("batchSize").get<int>();
  c.checkpoint_interval = doc.at("checkpointInterval").get<int>();
  c.resume = doc.at("resume").get<bool>();
  c.validate();
  return c;
}

bool ExperimentConfig::same_search(const ExperimentConfig& o) const {
  return game == o.game && space == o.space && opponent == o.opponent && n_boot == o.n_boot &&
         n_budget == o.n_budget && games_per_eval == o.games_per_eval && master_seed == o.master_seed &&
         decision_budget == o.decision_budget && deck_seed == o.deck_seed && batch_size == o.batch_size;
}

qd::GenomeSpace ExperimentRecord::genome_space() const {
  return qd::GenomeSpace::make(config.space, engine::make_game(config.game, config.deck_seed).params);
}

double ExperimentRecord::total_seconds() const {
  double sum = 0.0;
  for (const qd::Evaluation& e : evaluations) sum += e.seconds;
  return sum;
}

std::uint64_t evaluation_seed(std::uint64_t master_seed, int index) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(index));
}

namespace {

// Stream that picks the genome of evaluation i, disjoint from the game seeds.
std::uint64_t breeding_seed(std::uint64_t master_seed, int index) {
  return derive_seed(evaluation_seed(master_seed, index), 0xB12EEDull << 32);
}

// Batches never straddle the end of the boot phase.
int batch_end(const ExperimentConfig& c, int start) {
  int end = (start / c.batch_size + 1) * c.batch_size;
  if (start < c.n_boot) end = std::min(end, c.n_boot);
  return std::min(end, c.n_budget);
}

void run_parallel(int count, int workers, const std::function<void(int)>& job) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::filesystem::path default_output_dir(const ExperimentConfig& config) {
  return std::filesystem::path("data") / config.game / ("vs " + to_string(config.opponent)) /
         heuristics::to_string(config.space);
}

std::filesystem::path default_analysis_dir(const ExperimentConfig& config) {
  return std::filesystem::path("out") / config.game / (to_string(config.opponent) + " opponent") /
         heuristics::to_string(config.space);
}

ExperimentRecord run(const ExperimentConfig& config, int stop_after) {
  config.validate();
  const engine::GameSpec game = engine::make_game(config.game, config.deck_seed);
  const qd::GenomeSpace space = qd::GenomeSpace::make(config.space, game.params);
  const qd::PlayerFactory opponent = [&config] { return make_opponent(config.opponent, config.decision_budget); };
  const std::filesystem::path out_dir = config.output_dir;

  ExperimentRecord record;
  record.config = config;
  if (config.resume && !out_dir.empty() && std::filesystem::exists(out_dir / "spaceHistory.json")) {
    ExperimentRecord saved = load(out_dir);
    if (!saved.config.same_search(config))
      throw std::invalid_argument("resume: checkpoint in " + out_dir.string() + " belongs to a different search");
    record.archive = std::move(saved.archive);
    record.evaluations = std::move(saved.evaluations);
    record.wall_seconds = saved.wall_seconds;
  }

  const auto started = std::chrono::steady_clock::now();
  const double wall_before = record.wall_seconds;
  auto update_wall = [&] {
    record.wall_seconds =
        wall_before + std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  int done = static_cast<int>(record.evaluations.size());
  int last_checkpoint = done;
  const int target = stop_after >= 0 ? std::min(stop_after, config.n_budget) : config.n_budget;
  while (done < target) {
    const int end = batch_end(config, done);
    const int count = end - done;

    std::vector<qd::Genome> genomes(count);
    for (int j = 0; j < count; ++j) {
      const int index = done + j;
      Rng rng(breeding_seed(config.master_seed, index));
      genomes[j] = index < config.n_boot ? space.random(rng)
                                         : qd::mutate_genome(record.archive.sample(rng).genome, space, rng);
    }

    std::vector<qd::Evaluation> results(count);
    run_parallel(count, config.workers, [&](int j) {
      results[j] = qd::evaluate(genomes[j], space, game, opponent, config.games_per_eval,
                                evaluation_seed(config.master_seed, done + j), config.decision_budget);
    });

    for (int j = 0; j < count; ++j) {
      const qd::Evaluation& r = results[j];
      record.archive.insert({genomes[j], r.fitness, r.behaviour, r.support, done + j});
      record.evaluations.push_back(r);
    }
    done = end;

    if (!out_dir.empty() && config.checkpoint_interval > 0 && done - last_checkpoint >= config.checkpoint_interval) {
      update_wall();
      persist(record, out_dir);
      last_checkpoint = done;
    }
  }
  update_wall();
  if (!out_dir.empty()) persist(record, out_dir);
  return record;
}

}  // namespace sqd::experiment
