#include "splendorqd/cli.hpp"

#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "splendorqd/analysis.hpp"
#include "splendorqd/experiment.hpp"

namespace sqd::cli {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

int cmd_run(experiment::ExperimentConfig config, const std::string& space, const std::string& opponent,
            std::ostream& out) {
  try {
    config.space = heuristics::heuristic_kind_from_string(space);
    config.opponent = experiment::opponent_kind_from_string(opponent);
    if (config.output_dir.empty()) config.output_dir = experiment::default_output_dir(config).string();
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const experiment::ExperimentRecord record = experiment::run(config);
  out << "wrote " << config.output_dir << ": " << record.archive.history().size() << " evaluations, "
      << record.archive.size() << " filled cells\n";
  return kExitOk;
}

int cmd_analyze(const std::string& dir, std::string out_dir, std::ostream& out) {
  const experiment::ExperimentRecord record = experiment::load(dir);
  if (out_dir.empty()) out_dir = experiment::default_analysis_dir(record.config).string();
  const auto files = analysis::write_analysis(record.archive, out_dir);
  out << "wrote " << files.size() << " files to " << out_dir << '\n';
  return kExitOk;
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b, const std::string& out_dir, std::ostream& out) {
  const experiment::ExperimentRecord a = experiment::load(dir_a);
  const experiment::ExperimentRecord b = experiment::load(dir_b);
  const auto files = analysis::write_comparison(a.archive, b.archive, out_dir);
  out << "wrote " << files.size() << " files to " << out_dir << '\n';
  return kExitOk;
}

int cmd_gen_decks(const std::string& game_name, std::uint64_t deck_seed, const std::string& out_dir,
                  std::ostream& out) {
  engine::GameSpec game;
  try {
    game = engine::make_game(game_name, deck_seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  engine::save_game_assets(out_dir, game.params, game.cards);
  out << "wrote " << game.name << " assets to " << out_dir << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& dir, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> problems = experiment::validate_output(dir);
  if (problems.empty()) {
    out << dir << ": ok\n";
    return kExitOk;
  }
  for (const std::string& p : problems) err << p << '\n';
  return kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"MAP-Elites illumination of planning agents in Splendor-like games", "splendorqd"};
  app.require_subcommand(1);

  experiment::ExperimentConfig config;
  std::string space;
  std::string opponent = "RND";
  CLI::App* run = app.add_subcommand("run", "Run one MAP-Elites experiment");
  run->add_option("--game", config.game, "SP2P, W2 or 1C2W")->required();
  run->add_option("--space", space, "PB, EFID, EFHC or SF")->required();
  run->add_option("--opponent", opponent, "RND or BMRH_STAR")->capture_default_str();
  run->add_option("--evals", config.n_budget, "Total evaluations")->capture_default_str();
  run->add_option("--boot", config.n_boot, "Random evaluations before the search loop")->capture_default_str();
  run->add_option("--games", config.games_per_eval, "Games per evaluation")->capture_default_str();
  run->add_option("--workers", config.workers, "Parallel evaluations")->capture_default_str();
  run->add_option("--seed", config.master_seed, "Master seed")->capture_default_str();
  run->add_option("--out", config.output_dir, "Output directory (default data/GAME/vs OPP/SPACE)");
  run->add_option("--budget", config.decision_budget, "Forward-model calls per decision")->capture_default_str();
  run->add_option("--deck-seed", config.deck_seed, "Seed of the generated decks")->capture_default_str();
  run->add_option("--batch", config.batch_size, "Evaluations dispatched together")->capture_default_str();
  run->add_option("--checkpoint", config.checkpoint_interval, "Evaluations between checkpoints (0 = off)")->capture_default_str();
  run->add_flag("--resume", config.resume, "Continue from a checkpoint in the output directory");

  std::string analyze_dir;
  std::string analyze_out;
  CLI::App* analyze = app.add_subcommand("analyze", "Write heatmap, coverage, convergence and histogram CSVs");
  analyze->add_option("dir", analyze_dir, "Experiment output directory")->required();
  analyze->add_option("--out", analyze_out, "Destination (default out/GAME/OPP opponent/SPACE)");

  std::string dir_a;
  std::string dir_b;
  std::string compare_out;
  CLI::App* compare = app.add_subcommand("compare", "Write coverage and delta comparison CSVs for two experiments");
  compare->add_option("a", dir_a, "Experiment A")->required();
  compare->add_option("b", dir_b, "Experiment B")->required();
  compare->add_option("--out", compare_out, "Destination directory")->required();

  std::string deck_game;
  std::uint64_t deck_seed = experiment::kDefaultDeckSeed;
  std::string deck_out;
  CLI::App* gen = app.add_subcommand("gen-decks", "Write the card and noble CSVs plus parameters.json of a game");
  gen->add_option("--game", deck_game, "SP2P, W2 or 1C2W")->required();
  gen->add_option("--deck-seed", deck_seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", deck_out, "Destination directory")->required();

  std::string validate_dir;
  CLI::App* validate = app.add_subcommand("validate", "Check an experiment directory against the document schemas");
  validate->add_option("dir", validate_dir, "Experiment output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(config, space, opponent, out);
    if (*analyze) return cmd_analyze(analyze_dir, analyze_out, out);
    if (*compare) return cmd_compare(dir_a, dir_b, compare_out, out);
    if (*gen) return cmd_gen_decks(deck_game, deck_seed, deck_out, out);
    if (*validate) return cmd_validate(validate_dir, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sqd::cli
