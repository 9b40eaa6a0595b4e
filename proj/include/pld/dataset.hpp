#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pld/bitvector.hpp"

namespace pld {

using PredicateId = int;

enum class ColumnKind { Boolean, Categorical, Numeric };

std::string column_kind_name(ColumnKind k);
std::optional<ColumnKind> column_kind_from_name(const std::string& s);

struct Cell {
  std::string text;
  bool missing = false;
};

struct RawColumn {
  std::string name;
  ColumnKind kind = ColumnKind::Categorical;
  std::vector<Cell> cells;
};

struct RawTable {
  std::vector<RawColumn> columns;
  std::size_t n_objects = 0;

  const RawColumn* find_column(const std::string& name) const;
};

enum class TransformKind { Identity, OneHot, Threshold };

struct PredicateDef {
  PredicateId id = 0;
  std::string name;
  std::string column;  // source column name
  TransformKind transform = TransformKind::Identity;
  std::string category;    // OneHot only
  double threshold = 0.0;  // Threshold only: predicate is "value <= threshold"
  int split_level = 0;
  double range_lo = 0.0;  // parent range that the threshold splits
  double range_hi = 0.0;
  bool column_has_missing = false;

  bool operator==(const PredicateDef&) const = default;
};

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::Categorical;
  bool operator==(const ColumnSchema&) const = default;
};

struct PredicateLanguage {
  std::vector<PredicateDef> predicates;
  std::vector<ColumnSchema> columns;  // training-time column schema

  std::size_t size() const { return predicates.size(); }
  std::optional<PredicateId> find(const std::string& name) const;
  const std::string& name_of(PredicateId id) const;

  bool operator==(const PredicateLanguage&) const = default;
};

/// Immutable Boolean object x predicate matrix, stored column-wise.
struct Dataset {
  PredicateLanguage language;
  std::vector<BitVector> columns;  // one bit-vector per predicate
  std::size_t n_objects = 0;
};

struct ThresholdSplit {
  double threshold = 0.0;
  int level = 0;
  double lo = 0.0;  // bounds of the sub-range the split was computed on
  double hi = 0.0;
};

/// Loads a CSV file (first row is the header). Column kinds are inferred
/// unless overridden by a hint; a hinted kind that fails to parse some cell
/// raises DataError with the row/column location.
RawTable load_csv(const std::string& path,
                  const std::map<std::string, ColumnKind>& type_hints = {});
RawTable parse_csv_text(const std::string& text, const std::string& origin,
                        const std::map<std::string, ColumnKind>& type_hints = {});

/// Recursive median splitting of a numeric value multiset, depth q >= 1.
/// Level-order output; degenerate sub-ranges yield no threshold.
std::vector<ThresholdSplit> median_thresholds(std::vector<double> values,
                                              int depth);

/// Converts a raw table into the Boolean predicate representation. Numeric
/// columns are split by iterated medians to depth q.
Dataset binarize(const RawTable& table, int q);

/// Evaluates the predicate columns of a stored language on new raw data.
/// The table must match the language's training schema exactly (same column
/// names and kinds); otherwise SchemaError names the first offender.
Dataset apply_language(const PredicateLanguage& language, const RawTable& table);

bool holds(const Dataset& ds, PredicateId predicate, std::size_t object);

std::string fingerprint_hex(const PredicateLanguage& language);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace pld
