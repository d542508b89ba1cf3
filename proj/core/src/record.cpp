#include "hyperncs/record.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hyperncs/checkpoint.hpp"

namespace hyperncs::record {

using nlohmann::ordered_json;

std::string header_line(const std::string& config_json,
                        const std::vector<double>& init_fitnesses,
                        long init_evals) {
  ordered_json j;
  j["type"] = "header";
  j["schema"] = "records-v1";
  j["config"] = ordered_json::parse(config_json);
  j["init"]["fitnesses"] = init_fitnesses;
  j["init"]["real_evals_used"] = init_evals;
  return j.dump();
}

std::string generation_line(const search::GenerationRecord& r) {
  ordered_json j;
  j["type"] = "generation";
  j["generation"] = r.generation;
  j["real_evals_used"] = r.real_evals_used;
  j["best_fitness"] = r.best_fitness;
  j["best_id"] = r.best_id;
  ordered_json subs = ordered_json::array();
  for (const auto& s : r.subpops) {
    ordered_json js;
    js["subpop"] = s.subpop;
    js["selected_index"] = s.selected_index;
    js["scores"] = s.scores;
    js["selected_fitness"] = s.selected_fitness;
    js["accepted"] = s.accepted;
    js["parent_fitness"] = s.parent_fitness;
    js["parent_diversity"] = s.parent_diversity;
    js["child_diversity"] = s.child_diversity;
    js["sigma_after"] = s.sigma_after;
    if (s.selected_latent.size() > 0) {
      js["latent"] = std::vector<double>(
          s.selected_latent.data(),
          s.selected_latent.data() + s.selected_latent.size());
    }
    subs.push_back(std::move(js));
  }
  j["subpops"] = std::move(subs);
  if (r.surrogate_metrics) {
    const auto& m = *r.surrogate_metrics;
    j["surrogate"] = {{"train_accuracy", m.train_accuracy},
                      {"val_accuracy", m.val_accuracy},
                      {"test_accuracy", m.test_accuracy},
                      {"final_loss", m.final_loss},
                      {"train_count", m.train_count},
                      {"val_count", m.val_count},
                      {"test_count", m.test_count}};
  }
  if (!r.audit.empty()) {
    ordered_json audit = ordered_json::array();
    for (const auto& a : r.audit) {
      audit.push_back({{"subpop", a.subpop},
                       {"candidate_index", a.candidate_index},
                       {"score", a.score},
                       {"fitness", a.fitness}});
    }
    j["audit"] = std::move(audit);
  }
  return j.dump();
}

RecordStream parse_stream(const std::string& jsonl_text) {
  RecordStream stream;
  std::istringstream in(jsonl_text);
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const ordered_json j = ordered_json::parse(line);
    const std::string type = j.value("type", "");
    if (type == "header") {
      stream.config_json = j.at("config").dump();
      stream.init_fitnesses =
          j.at("init").at("fitnesses").get<std::vector<double>>();
      stream.init_evals = j.at("init").at("real_evals_used").get<long>();
      saw_header = true;
    } else if (type == "generation") {
      search::GenerationRecord r;
      r.generation = j.at("generation").get<int>();
      r.real_evals_used = j.at("real_evals_used").get<long>();
      r.best_fitness = j.at("best_fitness").get<double>();
      r.best_id = j.at("best_id").get<std::string>();
      for (const auto& js : j.at("subpops")) {
        search::SubpopulationRecord s;
        s.subpop = js.at("subpop").get<int>();
        s.selected_index = js.at("selected_index").get<int>();
        s.scores = js.at("scores").get<std::vector<double>>();
        s.selected_fitness = js.at("selected_fitness").get<double>();
        s.accepted = js.at("accepted").get<bool>();
        s.parent_fitness = js.at("parent_fitness").get<double>();
        s.parent_diversity = js.at("parent_diversity").get<double>();
        s.child_diversity = js.at("child_diversity").get<double>();
        s.sigma_after = js.at("sigma_after").get<double>();
        if (js.contains("latent")) {
          const auto v = js.at("latent").get<std::vector<double>>();
          s.selected_latent =
              Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
        }
        r.subpops.push_back(std::move(s));
      }
      if (j.contains("surrogate")) {
        surrogate::TrainMetrics m;
        const auto& jm = j.at("surrogate");
        m.train_accuracy = jm.at("train_accuracy").get<double>();
        m.val_accuracy = jm.at("val_accuracy").get<double>();
        m.test_accuracy = jm.at("test_accuracy").get<double>();
        m.final_loss = jm.at("final_loss").get<double>();
        m.train_count = jm.at("train_count").get<int>();
        m.val_count = jm.at("val_count").get<int>();
        m.test_count = jm.at("test_count").get<int>();
        r.surrogate_metrics = m;
      }
      if (j.contains("audit")) {
        for (const auto& ja : j.at("audit")) {
          search::AuditEntry a;
          a.subpop = ja.at("subpop").get<int>();
          a.candidate_index = ja.at("candidate_index").get<int>();
          a.score = ja.at("score").get<double>();
          a.fitness = ja.at("fitness").get<double>();
          r.audit.push_back(a);
        }
      }
      stream.generations.push_back(std::move(r));
    } else {
      throw std::invalid_argument("record stream: unknown line type '" + type + "'");
    }
  }
  if (!saw_header) {
    throw std::invalid_argument("record stream: missing header line");
  }
  return stream;
}

RecordStream read_stream(const std::string& path) {
  return parse_stream(checkpoint::read_file(path));
}

}  // namespace hyperncs::record
