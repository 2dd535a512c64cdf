#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "splendorqd/csv.hpp"
#include "splendorqd/experiment.hpp"

namespace sqd::experiment {

using nlohmann::json;

const std::vector<std::string> kJsonDocuments = {"agentSpace", "behaviours", "bins",        "heuristicSpace",
                                                 "opponents",  "p",          "space",       "spaceHistory",
                                                 "spaceSize",  "summary",    "support",     "timing"};
const std::vector<std::string> kCsvDocuments = {"space", "spaceHistory", "spaceHistory_binned"};

namespace {

namespace fs = std::filesystem;

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

template <typename Range>
json array_of(const Range& range) {
  json out = json::array();
  for (const auto& v : range) out.push_back(v);
  return out;
}

std::string cell_text(double v) { return json(v).dump(); }

csv::Row with_prefix(const std::string& prefix, int count) {
  csv::Row row;
  for (int i = 0; i < count; ++i) row.push_back(prefix + std::to_string(i));
  return row;
}

csv::Row space_csv_header() {
  csv::Row h = with_prefix("Behave_D", qd::kBehaviourCount);
  h.insert(h.end(), {"fitness", "behaviours", "hyperparameters"});
  return h;
}

csv::Row history_csv_header(bool binned) {
  csv::Row h = {"time", "fitness", "behaviours", "agentConfig", "weights"};
  for (const std::string& c : with_prefix("Behaviour", qd::kBehaviourCount)) h.push_back(c);
  for (const std::string& c : with_prefix("Support", qd::kSupportCount)) h.push_back(c);
  if (binned)
    for (const std::string& c : with_prefix("Behave_D", qd::kBehaviourCount)) h.push_back(c);
  return h;
}

json elite_json(const qd::Elite& elite, const qd::CellKey& cell, const qd::GenomeSpace& space) {
  return {{"cell", cell},
          {"fitness", elite.fitness},
          {"behaviour", elite.behaviour},
          {"support", elite.support},
          {"genome", elite.genome},
          {"hyperparameters", space.values(elite.genome)},
          {"iteration", elite.iteration}};
}

}  // namespace

void persist(const ExperimentRecord& record, const fs::path& dir) {
  if (record.evaluations.size() != record.archive.history().size())
    throw std::invalid_argument("persist: evaluations and history differ in length");
  fs::create_directories(dir);
  const ExperimentConfig& config = record.config;
  const engine::GameSpec game = engine::make_game(config.game, config.deck_seed);
  const qd::GenomeSpace space = qd::GenomeSpace::make(config.space, game.params);
  const qd::BehaviourSpaceSpec& bspace = record.archive.spec();

  json behaviours = json::array();
  json dimensions = json::array();
  for (const qd::MetricSpec& m : bspace.metrics) {
    behaviours.push_back(m.name);
    dimensions.push_back({{"name", m.name}, {"lo", m.lo}, {"hi", m.hi}, {"buckets", m.buckets}, {"edges", m.edges()}});
  }

  json p = config.to_json();
  p["gameParameters"] = engine::params_to_json(game.params);

  json space_doc = json::array();
  double best = 0.0;
  for (const auto& [cell, elite] : record.archive.cells()) {
    space_doc.push_back(elite_json(elite, cell, space));
    best = std::max(best, elite.fitness);
  }

  json history_doc = json::array();
  json per_eval = json::array();
  const auto& history = record.archive.history();
  for (std::size_t i = 0; i < history.size(); ++i) {
    const qd::HistoryEntry& h = history[i];
    const qd::Evaluation& e = record.evaluations[i];
    history_doc.push_back({{"iteration", h.elite.iteration},
                           {"genome", h.elite.genome},
                           {"fitness", h.elite.fitness},
                           {"behaviour", h.elite.behaviour},
                           {"support", h.elite.support},
                           {"cell", h.cell},
                           {"inserted", h.inserted},
                           {"perGameBehaviour", e.per_game_behaviour},
                           {"perGameSupport", e.per_game_support}});
    per_eval.push_back(e.seconds);
  }

  const json summary = {{"game", config.game},
                        {"opponent", to_string(config.opponent)},
                        {"agentSpace", "BMRH"},
                        {"heuristic", heuristics::to_string(config.space)},
                        {"evaluations", history.size()},
                        {"filledCells", record.archive.size()},
                        {"bestFitness", best}};

  write_json(dir / "agentSpace.json", space.agent_space_json());
  write_json(dir / "behaviours.json", behaviours);
  write_json(dir / "bins.json", {{"dimensions", dimensions}});
  write_json(dir / "heuristicSpace.json", space.heuristic_space_json());
  write_json(dir / "opponents.json", opponent_json(config.opponent, config.decision_budget));
  write_json(dir / "p.json", p);
  write_json(dir / "space.json", space_doc);
  write_json(dir / "spaceHistory.json", history_doc);
  write_json(dir / "spaceSize.json", bspace.size());
  write_json(dir / "summary.json", summary);
  write_json(dir / "support.json", array_of(qd::kSupportNames));
  write_json(dir / "timing.json",
             {{"total", record.total_seconds()}, {"wall", record.wall_seconds}, {"perEvaluation", per_eval}});

  std::vector<csv::Row> space_rows;
  for (const auto& [cell, elite] : record.archive.cells()) {
    csv::Row row;
    for (int c : cell) row.push_back(std::to_string(c));
    row.push_back(cell_text(elite.fitness));
    row.push_back(json(elite.behaviour).dump());
    row.push_back(json(space.values(elite.genome)).dump());
    space_rows.push_back(std::move(row));
  }
  csv::write_file((dir / "space.csv").string(), space_csv_header(), space_rows);

  std::vector<csv::Row> history_rows;
  std::vector<csv::Row> binned_rows;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const qd::HistoryEntry& h = history[i];
    const qd::Evaluation& e = record.evaluations[i];
    const auto [agent_config, heuristic] = space.decode(h.elite.genome);
    csv::Row row = {std::to_string(h.elite.iteration), cell_text(h.elite.fitness), json(h.elite.behaviour).dump(),
                    agent_config.to_json().dump(), json(heuristic.weights).dump()};
    for (const auto& list : e.per_game_behaviour) row.push_back(json(list).dump());
    for (const auto& list : e.per_game_support) row.push_back(json(list).dump());
    history_rows.push_back(row);
    for (int c : h.cell) row.push_back(std::to_string(c));
    binned_rows.push_back(std::move(row));
  }
  csv::write_file((dir / "spaceHistory.csv").string(), history_csv_header(false), history_rows);
  csv::write_file((dir / "spaceHistory_binned.csv").string(), history_csv_header(true), binned_rows);
}

namespace {

class Checker {
 public:
  explicit Checker(std::vector<std::string>& problems) : problems_(problems) {}

  void fail(const std::string& where, const std::string& what) { problems_.push_back(where + ": " + what); }

  bool number_array(const json& v, const std::string& where, std::size_t size = 0, bool integers = false) {
    if (!v.is_array()) {
      fail(where, "expected an array");
      return false;
    }
    if (size && v.size() != size) {
      fail(where, "expected " + std::to_string(size) + " entries, found " + std::to_string(v.size()));
      return false;
    }
    for (const json& x : v) {
      if (integers ? !x.is_number_integer() : !x.is_number()) {
        fail(where, integers ? "expected integers" : "expected numbers");
        return false;
      }
      if (x.is_number_float() && !std::isfinite(x.get<double>())) {
        fail(where, "non-finite number");
        return false;
      }
    }
    return true;
  }

  bool string_array(const json& v, const std::string& where, std::size_t size) {
    if (!v.is_array() || v.size() != size) {
      fail(where, "expected " + std::to_string(size) + " names");
      return false;
    }
    for (const json& x : v)
      if (!x.is_string()) {
        fail(where, "expected strings");
        return false;
      }
    return true;
  }

  bool field(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
      fail(where, "missing field '" + key + "'");
      return false;
    }
    return true;
  }

 private:
  std::vector<std::string>& problems_;
};

std::optional<json> read_json(const fs::path& path, Checker& check) {
  std::ifstream in(path);
  if (!in) {
    check.fail(path.filename().string(), "missing");
    return std::nullopt;
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    check.fail(path.filename().string(), std::string("not valid JSON: ") + e.what());
    return std::nullopt;
  }
}

void check_elite_fields(const json& e, const std::string& where, std::size_t dims, Checker& check) {
  for (const char* key : {"genome", "fitness", "behaviour", "support", "cell", "iteration"})
    if (!check.field(e, key, where)) return;
  check.number_array(e["genome"], where + ".genome", dims, true);
  check.number_array(e["behaviour"], where + ".behaviour", qd::kBehaviourCount);
  check.number_array(e["support"], where + ".support", qd::kSupportCount);
  check.number_array(e["cell"], where + ".cell", qd::kBehaviourCount, true);
  if (!e["iteration"].is_number_integer()) check.fail(where, "iteration must be an integer");
  if (!e["fitness"].is_number() || e["fitness"].get<double>() < 0.0 || e["fitness"].get<double>() > 1.0)
    check.fail(where, "fitness must be a number in [0,1]");
}

void check_csv(const fs::path& path, const csv::Row& header, std::size_t rows, const std::vector<std::string>& lists,
               Checker& check) {
  const std::string name = path.filename().string();
  csv::Table table;
  try {
    table = csv::read_file(path.string());
  } catch (const std::exception& e) {
    check.fail(name, e.what());
    return;
  }
  if (table.header != header) {
    check.fail(name, "unexpected header");
    return;
  }
  if (table.rows.size() != rows)
    check.fail(name, "expected " + std::to_string(rows) + " rows, found " + std::to_string(table.rows.size()));
  for (const std::string& column : lists) {
    const std::size_t c = table.column(column);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const json cell = json::parse(table.rows[r][c], nullptr, false);
      if (cell.is_discarded() || !(cell.is_array() || cell.is_object())) {
        check.fail(name, "row " + std::to_string(r + 1) + " column " + column + " is not a JSON list");
        break;
      }
    }
  }
}

}  // namespace

std::vector<std::string> validate_output(const fs::path& dir) {
  std::vector<std::string> problems;
  Checker check(problems);
  std::map<std::string, json> docs;
  for (const std::string& name : kJsonDocuments)
    if (auto doc = read_json(dir / (name + ".json"), check)) docs[name] = std::move(*doc);
  for (const std::string& name : kCsvDocuments)
    if (!fs::exists(dir / (name + ".csv"))) check.fail(name + ".csv", "missing");
  if (!problems.empty()) return problems;

  std::optional<ExperimentConfig> config;
  try {
    config = ExperimentConfig::from_json(docs["p"]);
  } catch (const std::exception& e) {
    check.fail("p.json", e.what());
    return problems;
  }
  if (!check.field(docs["p"], "gameParameters", "p.json")) return problems;
  const qd::GenomeSpace space =
      qd::GenomeSpace::make(config->space, engine::make_game(config->game, config->deck_seed).params);
  const std::size_t dims = space.dims();

  const json& agent_space = docs["agentSpace"];
  if (check.field(agent_space, "genes", "agentSpace.json")) {
    const json& genes = agent_space["genes"];
    if (!genes.is_array() || static_cast<int>(genes.size()) != space.planner_dims()) {
      check.fail("agentSpace.json", "expected 10 genes");
    } else {
      for (std::size_t i = 0; i < genes.size(); ++i) {
        const std::string where = "agentSpace.json genes[" + std::to_string(i) + "]";
        if (check.field(genes[i], "name", where) && check.field(genes[i], "values", where) &&
            check.number_array(genes[i]["values"], where) && genes[i]["values"].size() < 2)
          check.fail(where, "a gene needs at least two values");
      }
    }
  }

  check.string_array(docs["behaviours"], "behaviours.json", qd::kBehaviourCount);
  check.string_array(docs["support"], "support.json", qd::kSupportCount);

  const json& bins = docs["bins"];
  std::vector<int> buckets;
  if (check.field(bins, "dimensions", "bins.json")) {
    const json& dimensions = bins["dimensions"];
    if (!dimensions.is_array() || dimensions.size() != qd::kBehaviourCount) {
      check.fail("bins.json", "expected 5 dimensions");
    } else {
      for (std::size_t i = 0; i < dimensions.size(); ++i) {
        const std::string where = "bins.json dimensions[" + std::to_string(i) + "]";
        const json& d = dimensions[i];
        if (!check.field(d, "buckets", where) || !check.field(d, "edges", where)) continue;
        if (!d["buckets"].is_number_integer() || d["buckets"].get<int>() < 1) {
          check.fail(where, "buckets must be a positive integer");
          continue;
        }
        buckets.push_back(d["buckets"].get<int>());
        if (check.number_array(d["edges"], where + ".edges", buckets.back() + 1)) {
          for (std::size_t e = 1; e < d["edges"].size(); ++e)
            if (!(d["edges"][e - 1].get<double>() < d["edges"][e].get<double>())) {
              check.fail(where, "edges must increase");
              break;
            }
        }
      }
    }
  }
  if (check.number_array(docs["spaceSize"], "spaceSize.json", qd::kBehaviourCount, true) &&
      buckets.size() == qd::kBehaviourCount && docs["spaceSize"].get<std::vector<int>>() != buckets)
    check.fail("spaceSize.json", "disagrees with bins.json");

  const json& heuristic = docs["heuristicSpace"];
  if (check.field(heuristic, "type", "heuristicSpace.json") &&
      (!heuristic["type"].is_string() || heuristic["type"].get<std::string>() != heuristics::to_string(config->space)))
    check.fail("heuristicSpace.json", "type disagrees with p.json");
  if (check.field(heuristic, "weights", "heuristicSpace.json") &&
      heuristic["weights"] != json(space.dims() - space.planner_dims()))
    check.fail("heuristicSpace.json", "weight count disagrees with the genome space");

  const json& opponents = docs["opponents"];
  if (!opponents.is_array() || opponents.empty()) {
    check.fail("opponents.json", "expected a non-empty array");
  } else {
    for (const json& o : opponents) check.field(o, "name", "opponents.json");
  }

  for (const char* key : {"game", "opponent", "agentSpace", "heuristic"})
    if (check.field(docs["summary"], key, "summary.json") && !docs["summary"][key].is_string())
      check.fail("summary.json", std::string(key) + " must be a string");

  const json& space_doc = docs["space"];
  if (!space_doc.is_array()) {
    check.fail("space.json", "expected an array");
  } else {
    for (std::size_t i = 0; i < space_doc.size(); ++i) {
      const std::string where = "space.json[" + std::to_string(i) + "]";
      check_elite_fields(space_doc[i], where, dims, check);
      if (check.field(space_doc[i], "hyperparameters", where))
        check.number_array(space_doc[i]["hyperparameters"], where + ".hyperparameters", dims);
    }
  }

  const json& history = docs["spaceHistory"];
  if (!history.is_array()) {
    check.fail("spaceHistory.json", "expected an array");
  } else {
    for (std::size_t i = 0; i < history.size(); ++i) {
      const std::string where = "spaceHistory.json[" + std::to_string(i) + "]";
      const json& h = history[i];
      check_elite_fields(h, where, dims, check);
      if (check.field(h, "inserted", where) && !h["inserted"].is_boolean()) check.fail(where, "inserted must be boolean");
      if (!check.field(h, "perGameBehaviour", where) || !check.field(h, "perGameSupport", where)) continue;
      const json& pb = h["perGameBehaviour"];
      const json& ps = h["perGameSupport"];
      if (!pb.is_array() || pb.size() != qd::kBehaviourCount || !ps.is_array() || ps.size() != qd::kSupportCount) {
        check.fail(where, "per-game lists must be 5 behaviours and 3 supports");
        continue;
      }
      const std::size_t games = static_cast<std::size_t>(config->games_per_eval);
      for (const json& list : pb) check.number_array(list, where + ".perGameBehaviour", games);
      for (const json& list : ps) check.number_array(list, where + ".perGameSupport", games);
    }
  }

  const json& timing = docs["timing"];
  if (check.field(timing, "total", "timing.json") && check.field(timing, "wall", "timing.json") &&
      check.field(timing, "perEvaluation", "timing.json") &&
      check.number_array(timing["perEvaluation"], "timing.json perEvaluation", history.is_array() ? history.size() : 0) &&
      timing["total"].is_number()) {
    double sum = 0.0;
    for (const json& x : timing["perEvaluation"]) sum += x.get<double>();
    const double total = timing["total"].get<double>();
    if (std::abs(total - sum) > 0.01 * std::max(sum, 1e-9) + 1e-9)
      check.fail("timing.json", "total differs from the per-evaluation sum by more than 1%");
  }

  if (space_doc.is_array() && history.is_array()) {
    check_csv(dir / "space.csv", space_csv_header(), space_doc.size(), {"behaviours", "hyperparameters"}, check);
    std::vector<std::string> lists = {"behaviours", "agentConfig", "weights"};
    for (const std::string& c : with_prefix("Behaviour", qd::kBehaviourCount)) lists.push_back(c);
    for (const std::string& c : with_prefix("Support", qd::kSupportCount)) lists.push_back(c);
    check_csv(dir / "spaceHistory.csv", history_csv_header(false), history.size(), lists, check);
    check_csv(dir / "spaceHistory_binned.csv", history_csv_header(true), history.size(), lists, check);
  }
  return problems;
}

ExperimentRecord load(const fs::path& dir) {
  const std::vector<std::string> problems = validate_output(dir);
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid experiment output in " << dir.string() << ":";
    for (const std::string& p : problems) msg << "\n  " << p;
    throw SchemaError(msg.str());
  }
  auto parse = [&](const std::string& name) {
    std::ifstream in(dir / (name + ".json"));
    return json::parse(in);
  };

  ExperimentRecord record;
  record.config = ExperimentConfig::from_json(parse("p"));
  const json history = parse("spaceHistory");
  const json timing = parse("timing");
  for (std::size_t i = 0; i < history.size(); ++i) {
    const json& h = history[i];
    qd::Elite elite;
    elite.genome = h["genome"].get<qd::Genome>();
    elite.fitness = h["fitness"].get<double>();
    elite.behaviour = h["behaviour"].get<qd::BehaviourVector>();
    elite.support = h["support"].get<qd::SupportVector>();
    elite.iteration = h["iteration"].get<int>();
    const bool inserted = record.archive.insert(elite);
    const qd::HistoryEntry& entry = record.archive.history().back();
    if (inserted != h["inserted"].get<bool>() || entry.cell != h["cell"].get<qd::CellKey>())
      throw SchemaError("spaceHistory.json[" + std::to_string(i) + "]: cell or insertion flag inconsistent with replay");

    qd::Evaluation e;
    e.fitness = elite.fitness;
    e.behaviour = elite.behaviour;
    e.support = elite.support;
    for (int b = 0; b < qd::kBehaviourCount; ++b)
      e.per_game_behaviour[b] = h["perGameBehaviour"][b].get<std::vector<double>>();
    for (int s = 0; s < qd::kSupportCount; ++s)
      e.per_game_support[s] = h["perGameSupport"][s].get<std::vector<double>>();
    e.seconds = timing["perEvaluation"][i].get<double>();
    record.evaluations.push_back(std::move(e));
  }
  record.wall_seconds = timing["wall"].get<double>();

  const json space_doc = parse("space");
  if (space_doc.size() != record.archive.size())
    throw SchemaError("space.json: " + std::to_string(space_doc.size()) + " elites, history replay gives " +
                      std::to_string(record.archive.size()));
  for (const json& s : space_doc) {
    auto it = record.archive.cells().find(s["cell"].get<qd::CellKey>());
    if (it == record.archive.cells().end() || it->second.genome != s["genome"].get<qd::Genome>() ||
        it->second.fitness != s["fitness"].get<double>())
      throw SchemaError("space.json: elite disagrees with history replay");
  }
  return record;
}

}  // namespace sqd::experiment
