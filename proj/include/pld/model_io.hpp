#pragma once

#include <string>

#include "pld/learner.hpp"

namespace pld {

inline constexpr int kModelFormatVersion = 1;

/// Plain-text model file: header (format version, language fingerprint,
/// hyperparameters, schema, predicate definitions) followed by one tab
/// separated record per law. parse(serialize(m)) == m.
std::string serialize_model(const Model& m);
Model parse_model(const std::string& text);  // throws ParseError

void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path);

/// Flat key-value config: one `key = value` per line, `#` comments.
/// Unknown keys are rejected. Keys: d, max_size, a, min_support,
/// prob_threshold, gain_threshold, per_level_gain.<k>, quantization_depth,
/// node_cap, strict_ties.
Hyperparameters parse_config_text(const std::string& text);
Hyperparameters load_config(const std::string& path);

/// Key-value manifest recording column kinds and the quantization depth.
std::string dataset_manifest(const PredicateLanguage& language, int q);

}  // namespace pld
