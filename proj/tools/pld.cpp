// pld: command-line front end for probabilistic law discovery.
// Subcommands: learn, predict, cluster, inspect.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pld/cluster.hpp"
#include "pld/errors.hpp"
#include "pld/inference.hpp"
#include "pld/model_io.hpp"
#include "pld/oracle.hpp"

namespace {

// Stable exit codes, documented in the README.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSchema = 3;
constexpr int kExitPartial = 4;
constexpr int kExitParse = 5;

using namespace pld;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<PredicateId> resolve_predicates(const PredicateLanguage& lang,
                                            const std::vector<std::string>& names) {
  std::vector<PredicateId> ids;
  for (const auto& name : names) {
    auto id = lang.find(name);
    if (!id) throw ConfigError("unknown predicate: " + name);
    ids.push_back(*id);
  }
  return ids;
}

std::string law_to_string(const PredicateLanguage& lang, const Law& law) {
  std::string s;
  for (std::size_t i = 0; i < law.rule.premise.size(); ++i) {
    if (i) s += ", ";
    s += lang.name_of(law.rule.premise[i]);
  }
  s += " -> ";
  s += lang.name_of(law.rule.conclusion);
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << content;
}

// CSV quoting for the prediction output.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += "\"\"";
    quoted += c;
  }
  quoted += "\"";
  return quoted;
}

int cmd_learn(const std::string& data_path, const std::string& config_path,
              const std::string& model_path,
              const std::vector<std::string>& target_names) {
  Hyperparameters hp;
  if (!config_path.empty()) hp = load_config(config_path);
  RawTable table = load_csv(data_path);
  Dataset ds = binarize(table, hp.quantization_depth);
  auto targets = resolve_predicates(ds.language, target_names);

  LearnResult result = learn(ds, targets, hp);
  for (const auto& report : result.reports) {
    std::cout << "target " << ds.language.name_of(report.conclusion) << "\n";
    for (const auto& level : report.levels)
      std::cout << "  level " << level.level << ": nodes=" << level.nodes
                << ", laws=" << level.laws << " (" << level.millis << " ms)\n";
    if (report.partial)
      std::cout << "  PARTIAL: node cap reached at level "
                << report.level_reached << "\n";
  }
  save_model(result.model, model_path);
  write_file(model_path + ".manifest",
             dataset_manifest(ds.language, hp.quantization_depth));
  std::size_t total = 0;
  for (const auto& cm : result.model.conclusions) total += cm.laws.size();
  std::cout << "wrote " << model_path << " (" << total << " laws)\n";
  return result.partial ? kExitPartial : kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path, const std::string& mode,
                const std::vector<std::string>& target_names, double p_min,
                bool strict_ties_flag, bool unweighted) {
  Model m = load_model(model_path);
  RawTable table = load_csv(data_path);
  Dataset ds = apply_language(m.language, table);
  bool strict = strict_ties_flag || m.hp.strict_ties;

  std::vector<PredicateId> predictors;
  if (!target_names.empty())
    predictors = resolve_predicates(m.language, target_names);
  else
    for (const auto& cm : m.conclusions) predictors.push_back(cm.conclusion);

  // Feature predicates derived from predictor columns are hidden from the
  // classifier and the regressor; anomaly scoring sees the whole record.
  std::set<std::string> predictor_columns;
  for (PredicateId p : predictors)
    predictor_columns.insert(
        m.language.predicates[static_cast<std::size_t>(p)].column);
  auto strip_predictors = [&](const ObjectFeatures& f) {
    ObjectFeatures out;
    for (PredicateId p : f.predicates)
      if (!predictor_columns.count(
              m.language.predicates[static_cast<std::size_t>(p)].column))
        out.predicates.push_back(p);
    return out;
  };

  std::ostringstream out;
  if (mode == "classify") {
    out << "object,label,probability,laws,diagnostics\n";
    for (std::size_t o = 0; o < ds.n_objects; ++o) {
      auto obj = strip_predictors(features_of(ds, o));
      auto r = classify(m, obj, predictors, strict);
      if (r.ok) {
        out << o << "," << csv_field(m.language.name_of(r.prediction.label))
            << "," << format_double(r.prediction.probability) << ","
            << r.prediction.support_laws.size() << ",\n";
      } else {
        std::string diag;
        for (const auto* law : r.conflicting) {
          if (!diag.empty()) diag += "; ";
          diag += law_to_string(m.language, *law);
        }
        out << o << ",FAIL,," << r.conflicting.size() << ","
            << csv_field(diag) << "\n";
      }
    }
  } else if (mode == "regress") {
    out << "object,value,laws\n";
    for (std::size_t o = 0; o < ds.n_objects; ++o) {
      auto obj = strip_predictors(features_of(ds, o));
      auto r = regress_average(m, obj, predictors, !unweighted);
      if (r.ok)
        out << o << "," << format_double(r.value) << ","
            << r.support_laws.size() << "\n";
      else
        out << o << ",FAIL," << r.support_laws.size() << "\n";
    }
  } else if (mode == "anomaly") {
    out << "object,score,violated,applicable\n";
    for (std::size_t o = 0; o < ds.n_objects; ++o) {
      auto r = anomaly_score(m, features_of(ds, o), p_min);
      out << o << "," << format_double(r.score) << "," << r.violated << ","
          << r.applicable << "\n";
    }
  } else {
    throw ConfigError("unknown mode: " + mode);
  }
  write_file(out_path, out.str());
  return kExitOk;
}

int cmd_cluster(const std::string& model_path, const std::string& data_path,
                const std::string& out_path, double epsilon) {
  Model m = load_model(model_path);
  auto laws = all_model_laws(m);
  auto clusters = find_feature_clusters(laws, m.language);

  std::ostringstream out;
  out << "# pld cluster report\n";
  out << "epsilon " << format_double(epsilon) << "\n";
  out << "clusters " << clusters.size() << "\n";

  ClusterHierarchy hierarchy;
  if (!data_path.empty()) {
    RawTable table = load_csv(data_path);
    Dataset ds = apply_language(m.language, table);
    hierarchy = assign_objects(clusters, ds, epsilon);
  } else {
    hierarchy.clusters = clusters;
    hierarchy.epsilon = epsilon;
  }

  for (std::size_t c = 0; c < hierarchy.clusters.size(); ++c) {
    const auto& cluster = hierarchy.clusters[c];
    out << "cluster " << c << "\n";
    out << "  features:";
    for (PredicateId p : cluster.features) out << " " << m.language.name_of(p);
    out << "\n  agreement: " << format_double(cluster.agreement) << "\n";
    out << "  characteristic laws: " << cluster.characteristic_set.size()
        << "\n";
    for (const auto& law : cluster.characteristic_set)
      out << "    " << law_to_string(m.language, law)
          << "  p=" << format_double(law.stats.probability) << "\n";

    std::vector<ObjectAssignment> members;
    for (const auto& a : hierarchy.assignments)
      if (a.cluster == static_cast<int>(c)) members.push_back(a);
    std::sort(members.begin(), members.end(),
              [](const auto& x, const auto& y) { return x.score > y.score; });
    out << "  members: " << members.size() << "\n";
    for (std::size_t i = 0; i < members.size(); ++i) {
      out << "    object " << members[i].object
          << " score=" << format_double(members[i].score);
      if (members[i].score < 0.0) out << " [below-zero]";
      if (i > 0 && members[i - 1].score - members[i].score <= epsilon)
        out << " [similar-to-previous]";
      out << "\n";
    }
  }
  if (!hierarchy.order.empty()) {
    out << "order:";
    for (const auto& [i, j] : hierarchy.order)
      out << " " << i << "<" << j;
    out << "\n";
  }
  write_file(out_path, out.str());
  return kExitOk;
}

int cmd_inspect(const std::string& model_path, const std::string& conclusion,
                double min_prob, int max_size_filter,
                const std::string& oracle_csv) {
  Model m = load_model(model_path);
  for (const auto& cm : m.conclusions) {
    if (!conclusion.empty() &&
        m.language.name_of(cm.conclusion) != conclusion)
      continue;
    for (const auto& law : cm.laws) {
      if (law.stats.probability < min_prob) continue;
      if (max_size_filter >= 0 && law.level > max_size_filter) continue;
      std::cout << law_to_string(m.language, law)
                << "  p=" << format_double(law.stats.probability)
                << " support=" << law.stats.support << "\n";
    }
  }

  if (!oracle_csv.empty()) {
    RawTable table = load_csv(oracle_csv);
    Dataset ds = apply_language(m.language, table);
    std::size_t diffs = 0;
    for (const auto& cm : m.conclusions) {
      std::vector<Law> exact;
      try {
        exact = enumerate_all_laws(ds, cm.conclusion, m.hp.max_size,
                                   m.hp.effective_a());
      } catch (const std::invalid_argument& e) {
        std::cout << "oracle refusal: " << e.what() << "\n";
        return kExitValidation;
      }
      auto key = [](const Law& l) { return l.rule; };
      for (const auto& law : exact) {
        bool found = false;
        for (const auto& have : cm.laws)
          if (key(have) == key(law)) found = true;
        if (!found) {
          std::cout << "oracle-only: " << law_to_string(m.language, law)
                    << "  p=" << format_double(law.stats.probability) << "\n";
          ++diffs;
        }
      }
      for (const auto& have : cm.laws) {
        bool found = false;
        for (const auto& law : exact)
          if (key(have) == key(law)) found = true;
        if (!found) {
          std::cout << "model-only: " << law_to_string(m.language, have)
                    << "  p=" << format_double(have.stats.probability) << "\n";
          ++diffs;
        }
      }
    }
    if (diffs == 0) std::cout << "diff: none\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probabilistic law discovery"};
  app.require_subcommand(1);

  std::string data, config, model, out, targets, mode = "classify";
  std::string conclusion, oracle_csv;
  double p_min = 0.9, epsilon = 0.1, min_prob = 0.0;
  int max_size_filter = -1;
  bool strict_ties = false, unweighted = false;

  auto* learn_cmd = app.add_subcommand("learn", "learn laws from CSV data");
  learn_cmd->add_option("--data", data, "training CSV")->required();
  learn_cmd->add_option("--config", config, "hyperparameter config file");
  learn_cmd->add_option("--model", model, "output model path")->required();
  learn_cmd->add_option("--targets", targets, "conclusion predicate names, comma separated")
      ->required();

  auto* predict_cmd = app.add_subcommand("predict", "apply a model to CSV data");
  predict_cmd->add_option("--model", model, "model path")->required();
  predict_cmd->add_option("--data", data, "input CSV")->required();
  predict_cmd->add_option("--out", out, "output CSV")->required();
  predict_cmd->add_option("--mode", mode, "classify | regress | anomaly");
  predict_cmd->add_option("--targets", targets, "predictor names, comma separated");
  predict_cmd->add_option("--p-min", p_min, "anomaly law probability threshold");
  predict_cmd->add_flag("--strict-ties", strict_ties, "fail on any probability tie");
  predict_cmd->add_flag("--unweighted", unweighted, "unweighted range averaging");

  auto* cluster_cmd = app.add_subcommand("cluster", "feature/object clusterization");
  cluster_cmd->add_option("--model", model, "model path")->required();
  cluster_cmd->add_option("--data", data, "CSV for object assignment");
  cluster_cmd->add_option("--out", out, "report path")->required();
  cluster_cmd->add_option("--epsilon", epsilon, "score similarity tolerance");

  auto* inspect_cmd = app.add_subcommand("inspect", "print model laws");
  inspect_cmd->add_option("--model", model, "model path")->required();
  inspect_cmd->add_option("--conclusion", conclusion, "filter by conclusion name");
  inspect_cmd->add_option("--min-prob", min_prob, "minimal law probability");
  inspect_cmd->add_option("--max-size", max_size_filter, "maximal premise size");
  inspect_cmd->add_option("--oracle", oracle_csv, "CSV for exact re-check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (learn_cmd->parsed())
      return cmd_learn(data, config, model, split_list(targets));
    if (predict_cmd->parsed())
      return cmd_predict(model, data, out, mode, split_list(targets), p_min,
                         strict_ties, unweighted);
    if (cluster_cmd->parsed()) return cmd_cluster(model, data, out, epsilon);
    if (inspect_cmd->parsed())
      return cmd_inspect(model, conclusion, min_prob, max_size_filter,
                         oracle_csv);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
