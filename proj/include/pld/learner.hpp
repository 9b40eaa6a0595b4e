#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pld/rule.hpp"

namespace pld {

struct Hyperparameters {
  int d = 2;                    // base enumeration depth
  int max_size = 3;             // maximal premise size
  double a = 0.0;               // significance level; 0 disables the gate
  std::size_t min_support = 1;  // premise-support threshold
  double prob_threshold = 0.0;
  double gain_threshold = 0.0;
  std::map<int, double> per_level_gain;  // level -> gain, overrides global
  std::size_t node_cap = 5'000'000;      // per-conclusion graph size guard
  int quantization_depth = 2;            // q used for binarization
  bool strict_ties = false;              // literal single-law tie rule

  void validate() const;  // throws ConfigError
  double gain_for_level(int level) const;
  double effective_a() const { return a > 0.0 ? a : 0.95; }

  bool operator==(const Hyperparameters&) const = default;
};

/// A rule kept in the model, with the statistics it was accepted under.
struct Law {
  Rule rule;
  RuleStats stats;
  int level = 0;  // premise size

  bool operator==(const Law&) const = default;
};

struct ConclusionModel {
  PredicateId conclusion = 0;
  Law baseline;            // empty-premise rule, always present
  std::vector<Law> laws;   // union of the REG sets; contains the baseline
                           // iff its probability is non-zero
  bool operator==(const ConclusionModel&) const = default;
};

struct Model {
  PredicateLanguage language;
  Hyperparameters hp;
  std::vector<ConclusionModel> conclusions;
  bool partial = false;  // node cap was hit; laws found so far only

  const ConclusionModel* find(PredicateId conclusion) const;
};

struct LevelReport {
  int level = 0;
  std::size_t nodes = 0;
  std::size_t laws = 0;  // |REG_level|
  double millis = 0.0;
};

struct LearnReport {
  PredicateId conclusion = 0;
  std::vector<LevelReport> levels;
  bool partial = false;
  int level_reached = 0;
};

struct LearnResult {
  Model model;
  std::vector<LearnReport> reports;
  bool partial = false;
};

struct RuleNode {
  Rule rule;
  RuleStats stats;
  std::vector<std::uint32_t> object_cache;  // objects satisfying the premise
  double max_subrule_prob = -1.0;  // max probability over all proper subrules
  bool is_law = false;
  bool in_reg = false;
  bool closed = false;  // parents fully linked, max_subrule_prob valid
  int level = 0;
  std::vector<std::size_t> parents;
  std::vector<std::size_t> children;
};

struct FindParentsResult {
  bool connected = false;
  std::optional<Rule> witness;  // subrule with probability >= candidate's
};

/// Leveled DAG of rules for one conclusion. Base enumeration populates all
/// levels up to d completely; additional enumeration extends REG laws by
/// single predicates while probability strictly increases.
class DerivationGraph {
 public:
  DerivationGraph(const Dataset& ds, PredicateId conclusion,
                  const Hyperparameters& hp);

  void run();  // base + additional enumeration; sets partial() on cap abort
  void base_enumeration();
  void additional_enumeration();

  /// Ensures a node for the rule exists with its full parent closure.
  std::size_t materialize(const Rule& r);
  FindParentsResult find_parents(std::size_t node_id);

  const RuleNode& node(std::size_t id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::optional<std::size_t> find_node(const std::vector<PredicateId>& premise) const;

  PredicateId conclusion() const { return conclusion_; }
  double baseline_probability() const;
  const std::vector<std::vector<std::size_t>>& regs() const { return regs_; }
  std::size_t level_size(int level) const;

  bool partial() const { return partial_; }
  int level_reached() const { return level_reached_; }
  const std::vector<LevelReport>& reports() const { return reports_; }

  ConclusionModel extract() const;

 private:
  struct PremiseHash {
    std::size_t operator()(const std::vector<PredicateId>& v) const;
  };
  using LevelMap =
      std::unordered_map<std::vector<PredicateId>, std::size_t, PremiseHash>;

  std::size_t make_node(Rule r, const std::vector<std::uint32_t>* scope);
  std::size_t ensure_node(const std::vector<PredicateId>& premise);
  void close_node(std::size_t id);
  bool passes_thresholds(int level, const RuleNode& n) const;
  Rule walk_to_witness(std::size_t sub_id, double prob) const;
  void link(std::size_t parent, std::size_t child);

  const Dataset& ds_;
  PredicateId conclusion_;
  Hyperparameters hp_;
  std::vector<PredicateId> predicate_pool_;  // all ids except the conclusion
  std::vector<RuleNode> nodes_;
  std::vector<LevelMap> levels_;
  std::vector<std::vector<std::size_t>> regs_;
  std::vector<LevelReport> reports_;
  bool base_done_ = false;
  bool partial_ = false;
  int level_reached_ = 0;
};

Rule refine(const Rule& r, PredicateId p);

/// Runs the derivation-graph search for every target conclusion over a
/// shared dataset. A node-cap abort yields the laws found so far with the
/// partial flag set instead of an exception.
LearnResult learn(const Dataset& ds, const std::vector<PredicateId>& targets,
                  const Hyperparameters& hp);

}  // namespace pld
