#include "pld/learner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "pld/errors.hpp"

namespace pld {

namespace {

struct NodeCapExceeded {};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

void Hyperparameters::validate() const {
  if (d < 1) throw ConfigError("d must be >= 1");
  if (max_size < d) throw ConfigError("max_size must be >= d");
  if (a < 0.0 || a >= 1.0)
    throw ConfigError("a must be in [0,1); 0 disables the significance gate");
  if (!(prob_threshold >= 0.0 && prob_threshold <= 1.0))
    throw ConfigError("prob_threshold must be in [0,1]");
  if (!(gain_threshold >= 0.0) || !std::isfinite(gain_threshold))
    throw ConfigError("gain_threshold must be finite and >= 0");
  for (const auto& [level, g] : per_level_gain) {
    if (level < 1) throw ConfigError("per_level_gain level must be >= 1");
    if (!(g >= 0.0) || !std::isfinite(g))
      throw ConfigError("per_level_gain value must be finite and >= 0");
  }
  if (node_cap == 0) throw ConfigError("node_cap must be positive");
  if (quantization_depth < 1)
    throw ConfigError("quantization_depth must be >= 1");
}

double Hyperparameters::gain_for_level(int level) const {
  auto it = per_level_gain.find(level);
  return it != per_level_gain.end() ? it->second : gain_threshold;
}

const ConclusionModel* Model::find(PredicateId conclusion) const {
  for (const auto& c : conclusions)
    if (c.conclusion == conclusion) return &c;
  return nullptr;
}

Rule refine(const Rule& r, PredicateId p) {
  if (p == r.conclusion)
    throw std::invalid_argument("cannot add the conclusion to the premise");
  if (r.premise_contains(p))
    throw std::invalid_argument("predicate already in the premise");
  Rule out = r;
  out.premise.insert(
      std::upper_bound(out.premise.begin(), out.premise.end(), p), p);
  return out;
}

std::size_t DerivationGraph::PremiseHash::operator()(
    const std::vector<PredicateId>& v) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (PredicateId p : v) {
    h ^= static_cast<std::size_t>(p) + 0x9e3779b97f4a7c15ull;
    h *= 0x100000001b3ull;
  }
  return h;
}

DerivationGraph::DerivationGraph(const Dataset& ds, PredicateId conclusion,
                                 const Hyperparameters& hp)
    : ds_(ds), conclusion_(conclusion), hp_(hp) {
  hp_.validate();
  if (conclusion < 0 ||
      static_cast<std::size_t>(conclusion) >= ds.columns.size())
    throw std::invalid_argument("conclusion id out of range");
  for (std::size_t p = 0; p < ds.columns.size(); ++p)
    if (static_cast<PredicateId>(p) != conclusion)
      predicate_pool_.push_back(static_cast<PredicateId>(p));

  levels_.resize(1);
  regs_.resize(1);
  Rule root{{}, conclusion_};
  std::size_t root_id = make_node(std::move(root), nullptr);
  auto& root_node = nodes_[root_id];
  root_node.closed = true;
  root_node.is_law = root_node.stats.probability > 0.0;
  root_node.in_reg = root_node.is_law;  // baseline is exempt from thresholds
  if (root_node.in_reg) regs_[0].push_back(root_id);
  reports_.push_back({0, 1, regs_[0].size(), 0.0});
}

double DerivationGraph::baseline_probability() const {
  return nodes_[0].stats.probability;
}

std::size_t DerivationGraph::level_size(int level) const {
  return static_cast<std::size_t>(level) < levels_.size()
             ? levels_[static_cast<std::size_t>(level)].size()
             : 0;
}

std::optional<std::size_t> DerivationGraph::find_node(
    const std::vector<PredicateId>& premise) const {
  std::size_t level = premise.size();
  if (level >= levels_.size()) return std::nullopt;
  auto it = levels_[level].find(premise);
  if (it == levels_[level].end()) return std::nullopt;
  return it->second;
}

std::size_t DerivationGraph::make_node(Rule r,
                                       const std::vector<std::uint32_t>* scope) {
  if (nodes_.size() >= hp_.node_cap) throw NodeCapExceeded{};
  RuleNode n;
  n.level = static_cast<int>(r.size());
  n.object_cache = premise_objects(ds_, r.premise, scope);
  n.stats = stats_from_objects(ds_, r, n.object_cache, hp_.effective_a());
  n.rule = std::move(r);
  std::size_t id = nodes_.size();
  if (static_cast<std::size_t>(n.level) >= levels_.size())
    levels_.resize(static_cast<std::size_t>(n.level) + 1);
  levels_[static_cast<std::size_t>(n.level)].emplace(n.rule.premise, id);
  nodes_.push_back(std::move(n));
  return id;
}

void DerivationGraph::link(std::size_t parent, std::size_t child) {
  nodes_[child].parents.push_back(parent);
  nodes_[parent].children.push_back(child);
}

std::size_t DerivationGraph::ensure_node(
    const std::vector<PredicateId>& premise) {
  if (auto found = find_node(premise)) return *found;
  // On-demand subrule node; no cached scope applies, use the full dataset.
  return make_node(Rule{premise, conclusion_}, nullptr);
}

void DerivationGraph::close_node(std::size_t id) {
  if (nodes_[id].closed) return;
  const std::vector<PredicateId> premise = nodes_[id].rule.premise;
  double max_sub = -1.0;
  for (std::size_t i = 0; i < premise.size(); ++i) {
    std::vector<PredicateId> sub = premise;
    sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
    std::size_t sub_id = ensure_node(sub);
    close_node(sub_id);
    link(sub_id, id);
    const auto& s = nodes_[sub_id];
    max_sub = std::max({max_sub, s.stats.probability, s.max_subrule_prob});
  }
  nodes_[id].max_subrule_prob = max_sub;
  nodes_[id].closed = true;
}

std::size_t DerivationGraph::materialize(const Rule& r) {
  if (r.conclusion != conclusion_)
    throw std::invalid_argument("rule conclusion does not match the graph");
  std::size_t id = ensure_node(r.premise);
  close_node(id);
  return id;
}

Rule DerivationGraph::walk_to_witness(std::size_t sub_id, double prob) const {
  // Descend to a concrete subrule whose probability is >= prob.
  std::size_t cur = sub_id;
  while (nodes_[cur].stats.probability < prob) {
    bool moved = false;
    for (std::size_t p : nodes_[cur].parents) {
      const auto& n = nodes_[p];
      if (n.stats.probability >= prob || n.max_subrule_prob >= prob) {
        cur = p;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return nodes_[cur].rule;
}

FindParentsResult DerivationGraph::find_parents(std::size_t node_id) {
  const double prob = nodes_[node_id].stats.probability;
  const std::vector<PredicateId> premise = nodes_[node_id].rule.premise;
  if (premise.empty())
    throw std::invalid_argument("find_parents requires a non-empty premise");

  if (nodes_[node_id].closed) {
    // Already connected once; answer from the recorded subrule maximum
    // instead of duplicating the parent links.
    if (nodes_[node_id].max_subrule_prob < prob) return {true, std::nullopt};
    for (std::size_t p : nodes_[node_id].parents) {
      const auto& s = nodes_[p];
      if (s.stats.probability >= prob) return {false, s.rule};
      if (s.max_subrule_prob >= prob)
        return {false, walk_to_witness(p, prob)};
    }
    return {false, nodes_[node_id].rule};  // unreachable for closed nodes
  }

  std::vector<std::size_t> found;
  found.reserve(premise.size());
  for (std::size_t i = 0; i < premise.size(); ++i) {
    std::vector<PredicateId> sub = premise;
    sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
    std::size_t sub_id = ensure_node(sub);
    close_node(sub_id);
    const auto& s = nodes_[sub_id];
    if (s.stats.probability >= prob)
      return {false, s.rule};
    if (s.max_subrule_prob >= prob)
      return {false, walk_to_witness(sub_id, prob)};
    found.push_back(sub_id);
  }
  double max_sub = -1.0;
  for (std::size_t sub_id : found) {
    link(sub_id, node_id);
    const auto& s = nodes_[sub_id];
    max_sub = std::max({max_sub, s.stats.probability, s.max_subrule_prob});
  }
  nodes_[node_id].max_subrule_prob = max_sub;
  nodes_[node_id].closed = true;
  return {true, std::nullopt};
}

bool DerivationGraph::passes_thresholds(int level, const RuleNode& n) const {
  if (n.stats.probability < hp_.prob_threshold) return false;
  double best_reg_parent = -1.0;
  for (std::size_t p : n.parents)
    if (nodes_[p].in_reg)
      best_reg_parent = std::max(best_reg_parent, nodes_[p].stats.probability);
  if (best_reg_parent >= 0.0 &&
      n.stats.probability - best_reg_parent < hp_.gain_for_level(level))
    return false;
  return true;
}

void DerivationGraph::base_enumeration() {
  if (base_done_) throw std::logic_error("base enumeration already ran");
  base_done_ = true;
  const SignificanceContext sig{hp_.min_support, baseline_probability(), hp_.a};

  // Nothing can be a law when the conclusion never holds; the graph stays
  // at its root and every REG set is empty.
  if (nodes_[0].stats.co_support == 0) {
    levels_.resize(static_cast<std::size_t>(hp_.d) + 1);
    regs_.resize(static_cast<std::size_t>(hp_.d) + 1);
    for (int k = 1; k <= hp_.d; ++k) reports_.push_back({k, 0, 0, 0.0});
    level_reached_ = hp_.d;
    return;
  }

  const std::size_t pool = predicate_pool_.size();
  for (int k = 1; k <= hp_.d; ++k) {
    auto start = std::chrono::steady_clock::now();
    level_reached_ = k;
    levels_.resize(static_cast<std::size_t>(k) + 1);
    regs_.resize(static_cast<std::size_t>(k) + 1);
    if (static_cast<std::size_t>(k) > pool) break;

    // Ascending lexicographic combinations of pool indices.
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    while (true) {
      std::vector<PredicateId> premise(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i)
        premise[i] = predicate_pool_[idx[i]];

      // Scope: the cache of the (premise minus last element) node.
      std::vector<PredicateId> scope_key(premise.begin(), premise.end() - 1);
      std::size_t scope_id = *find_node(scope_key);
      std::size_t id =
          make_node(Rule{premise, conclusion_}, &nodes_[scope_id].object_cache);

      double max_sub = -1.0;
      for (std::size_t i = 0; i < premise.size(); ++i) {
        std::vector<PredicateId> sub = premise;
        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
        std::size_t sub_id = *find_node(sub);
        link(sub_id, id);
        const auto& s = nodes_[sub_id];
        max_sub = std::max({max_sub, s.stats.probability, s.max_subrule_prob});
      }
      auto& n = nodes_[id];
      n.max_subrule_prob = max_sub;
      n.closed = true;
      n.is_law = n.stats.probability > 0.0 && n.stats.probability > max_sub;
      if (n.is_law && significance_check(n.stats, sig) &&
          passes_thresholds(k, n)) {
        n.in_reg = true;
        regs_[static_cast<std::size_t>(k)].push_back(id);
      }

      // Next combination.
      std::ptrdiff_t i = static_cast<std::ptrdiff_t>(idx.size()) - 1;
      while (i >= 0 &&
             idx[static_cast<std::size_t>(i)] ==
                 static_cast<std::size_t>(i) + pool - idx.size())
        --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (std::size_t j = static_cast<std::size_t>(i) + 1; j < idx.size(); ++j)
        idx[j] = idx[j - 1] + 1;
    }
    reports_.push_back({k, levels_[static_cast<std::size_t>(k)].size(),
                        regs_[static_cast<std::size_t>(k)].size(),
                        elapsed_ms(start)});
  }
}

void DerivationGraph::additional_enumeration() {
  if (!base_done_)
    throw std::logic_error("base enumeration must run first");
  const SignificanceContext sig{hp_.min_support, baseline_probability(), hp_.a};

  for (int k = hp_.d + 1; k <= hp_.max_size; ++k) {
    if (regs_[static_cast<std::size_t>(k) - 1].empty()) break;
    auto start = std::chrono::steady_clock::now();
    level_reached_ = k;
    levels_.resize(static_cast<std::size_t>(k) + 1);
    regs_.resize(static_cast<std::size_t>(k) + 1);

    // Seeds are the previous level's REG laws, refined by every absent
    // predicate in ascending id order; duplicates keep the first node.
    const std::vector<std::size_t> seeds = regs_[static_cast<std::size_t>(k) - 1];
    for (std::size_t seed_id : seeds) {
      for (PredicateId p : predicate_pool_) {
        if (nodes_[seed_id].rule.premise_contains(p)) continue;
        Rule candidate = refine(nodes_[seed_id].rule, p);
        if (find_node(candidate.premise)) continue;
        std::size_t id =
            make_node(std::move(candidate), &nodes_[seed_id].object_cache);
        if (!significance_check(nodes_[id].stats, sig)) continue;
        if (!find_parents(id).connected) continue;
        auto& n = nodes_[id];
        n.is_law = n.stats.probability > 0.0 &&
                   n.stats.probability > n.max_subrule_prob;
        if (n.is_law && passes_thresholds(k, n)) {
          n.in_reg = true;
          regs_[static_cast<std::size_t>(k)].push_back(id);
        }
      }
    }
    reports_.push_back({k, levels_[static_cast<std::size_t>(k)].size(),
                        regs_[static_cast<std::size_t>(k)].size(),
                        elapsed_ms(start)});
  }
}

void DerivationGraph::run() {
  try {
    base_enumeration();
    additional_enumeration();
  } catch (const NodeCapExceeded&) {
    partial_ = true;
  }
}

ConclusionModel DerivationGraph::extract() const {
  ConclusionModel cm;
  cm.conclusion = conclusion_;
  const auto& root = nodes_[0];
  cm.baseline = Law{root.rule, root.stats, 0};
  for (const auto& reg : regs_)
    for (std::size_t id : reg) {
      const auto& n = nodes_[id];
      cm.laws.push_back(Law{n.rule, n.stats, n.level});
    }
  return cm;
}

LearnResult learn(const Dataset& ds, const std::vector<PredicateId>& targets,
                  const Hyperparameters& hp) {
  hp.validate();
  if (targets.empty()) throw ConfigError("at least one target is required");
  std::set<PredicateId> seen;
  LearnResult result;
  result.model.language = ds.language;
  result.model.hp = hp;

  for (PredicateId target : targets) {
    if (!seen.insert(target).second) continue;
    DerivationGraph graph(ds, target, hp);
    graph.run();
    result.model.conclusions.push_back(graph.extract());
    result.reports.push_back({target, graph.reports(), graph.partial(),
                              graph.level_reached()});
    if (graph.partial()) result.partial = true;
  }
  result.model.partial = result.partial;
  return result;
}

}  // namespace pld
