#include "pld/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pld/errors.hpp"

namespace pld {

namespace {

std::string to_lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::optional<bool> parse_bool(const std::string& raw) {
  std::string s = to_lower(raw);
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  return std::nullopt;
}

std::optional<double> parse_number(const std::string& raw) {
  if (raw.empty()) return std::nullopt;
  const char* begin = raw.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin) return std::nullopt;
  while (*end == ' ' || *end == '\t') ++end;
  if (*end != '\0') return std::nullopt;
  return v;
}

// Character-level CSV split: quoted fields, "" escapes, embedded newlines.
std::vector<std::vector<std::string>> split_csv(const std::string& text,
                                                const std::string& origin) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          in_quotes = true;
          field_started = true;
        } else {
          field += c;
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        field += c;
        field_started = true;
        break;
    }
  }
  if (in_quotes) throw DataError(origin + ": unterminated quoted field");
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

}  // namespace

std::string column_kind_name(ColumnKind k) {
  switch (k) {
    case ColumnKind::Boolean: return "boolean";
    case ColumnKind::Categorical: return "categorical";
    case ColumnKind::Numeric: return "numeric";
  }
  return "?";
}

std::optional<ColumnKind> column_kind_from_name(const std::string& s) {
  std::string n = to_lower(s);
  if (n == "boolean" || n == "bool") return ColumnKind::Boolean;
  if (n == "categorical" || n == "cat") return ColumnKind::Categorical;
  if (n == "numeric" || n == "num") return ColumnKind::Numeric;
  return std::nullopt;
}

const RawColumn* RawTable::find_column(const std::string& name) const {
  for (const auto& c : columns)
    if (c.name == name) return &c;
  return nullptr;
}

std::optional<PredicateId> PredicateLanguage::find(const std::string& name) const {
  for (const auto& p : predicates)
    if (p.name == name) return p.id;
  return std::nullopt;
}

const std::string& PredicateLanguage::name_of(PredicateId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= predicates.size())
    throw std::invalid_argument("predicate id out of range: " + std::to_string(id));
  return predicates[static_cast<std::size_t>(id)].name;
}

RawTable parse_csv_text(const std::string& text, const std::string& origin,
                        const std::map<std::string, ColumnKind>& type_hints) {
  auto rows = split_csv(text, origin);
  if (rows.empty()) throw DataError(origin + ": empty file, header row required");
  const auto& header = rows.front();

  RawTable table;
  table.n_objects = rows.size() - 1;
  table.columns.resize(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    table.columns[c].name = header[c];
    table.columns[c].cells.reserve(table.n_objects);
  }

  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size())
      throw DataError(origin + ": row " + std::to_string(r + 1) + " has " +
                      std::to_string(rows[r].size()) + " fields, expected " +
                      std::to_string(header.size()));
    for (std::size_t c = 0; c < header.size(); ++c) {
      Cell cell;
      cell.text = rows[r][c];
      cell.missing = cell.text.empty();
      table.columns[c].cells.push_back(std::move(cell));
    }
  }

  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    auto& col = table.columns[c];
    auto hint = type_hints.find(col.name);
    if (hint != type_hints.end()) {
      col.kind = hint->second;
      for (std::size_t r = 0; r < col.cells.size(); ++r) {
        const auto& cell = col.cells[r];
        if (cell.missing) continue;
        bool ok = true;
        if (col.kind == ColumnKind::Boolean)
          ok = parse_bool(cell.text).has_value();
        else if (col.kind == ColumnKind::Numeric)
          ok = parse_number(cell.text).has_value();
        if (!ok)
          throw DataError(origin + ": row " + std::to_string(r + 2) +
                          ", column '" + col.name + "': cell '" + cell.text +
                          "' is not " + column_kind_name(col.kind));
      }
      continue;
    }
    bool all_bool = true, all_num = true, any_value = false;
    for (const auto& cell : col.cells) {
      if (cell.missing) continue;
      any_value = true;
      if (!parse_bool(cell.text)) all_bool = false;
      if (!parse_number(cell.text)) all_num = false;
    }
    if (any_value && all_bool)
      col.kind = ColumnKind::Boolean;
    else if (any_value && all_num)
      col.kind = ColumnKind::Numeric;
    else
      col.kind = ColumnKind::Categorical;
  }
  return table;
}

RawTable load_csv(const std::string& path,
                  const std::map<std::string, ColumnKind>& type_hints) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_text(buf.str(), path, type_hints);
}

std::vector<ThresholdSplit> median_thresholds(std::vector<double> values,
                                              int depth) {
  if (depth < 1) throw ConfigError("quantization depth must be >= 1");
  std::sort(values.begin(), values.end());
  std::vector<ThresholdSplit> out;

  struct Range { std::size_t first, last; };  // [first, last)
  std::vector<Range> frontier;
  if (values.size() >= 2) frontier.push_back({0, values.size()});

  for (int level = 1; level <= depth && !frontier.empty(); ++level) {
    std::vector<Range> next;
    for (auto r : frontier) {
      std::size_t n = r.last - r.first;
      if (n < 2 || values[r.first] == values[r.last - 1]) continue;
      std::size_t mid = r.first + n / 2;
      double median = (n % 2 == 1) ? values[mid]
                                   : 0.5 * (values[mid - 1] + values[mid]);
      auto cut = static_cast<std::size_t>(
          std::upper_bound(values.begin() + static_cast<std::ptrdiff_t>(r.first),
                           values.begin() + static_cast<std::ptrdiff_t>(r.last),
                           median) -
          values.begin());
      if (cut == r.last) continue;  // nothing above the median; vacuous split
      out.push_back({median, level, values[r.first], values[r.last - 1]});
      next.push_back({r.first, cut});
      next.push_back({cut, r.last});
    }
    frontier = std::move(next);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

BitVector identity_bits(const RawColumn& col) {
  BitVector bits(col.cells.size());
  for (std::size_t i = 0; i < col.cells.size(); ++i) {
    const auto& cell = col.cells[i];
    if (cell.missing) continue;
    auto b = parse_bool(cell.text);
    if (b && *b) bits.set(i);
  }
  return bits;
}

BitVector onehot_bits(const RawColumn& col, const std::string& category) {
  BitVector bits(col.cells.size());
  for (std::size_t i = 0; i < col.cells.size(); ++i)
    if (!col.cells[i].missing && col.cells[i].text == category) bits.set(i);
  return bits;
}

BitVector threshold_bits(const RawColumn& col, double threshold) {
  BitVector bits(col.cells.size());
  for (std::size_t i = 0; i < col.cells.size(); ++i) {
    const auto& cell = col.cells[i];
    if (cell.missing) continue;
    auto v = parse_number(cell.text);
    if (v && *v <= threshold) bits.set(i);
  }
  return bits;
}

BitVector predicate_bits(const PredicateDef& def, const RawColumn& col) {
  switch (def.transform) {
    case TransformKind::Identity: return identity_bits(col);
    case TransformKind::OneHot: return onehot_bits(col, def.category);
    case TransformKind::Threshold: return threshold_bits(col, def.threshold);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Dataset binarize(const RawTable& table, int q) {
  if (q < 1) throw ConfigError("quantization depth must be >= 1");
  Dataset ds;
  ds.n_objects = table.n_objects;

  for (const auto& col : table.columns) {
    if (col.cells.size() != table.n_objects)
      throw DataError("column '" + col.name + "' has " +
                      std::to_string(col.cells.size()) + " cells, expected " +
                      std::to_string(table.n_objects));
    bool has_missing = false, has_value = false;
    for (const auto& cell : col.cells) (cell.missing ? has_missing : has_value) = true;
    if (!has_value)
      throw DataError("column '" + col.name + "' has no values");

    ds.language.columns.push_back({col.name, col.kind});
    std::vector<PredicateDef> defs;
    switch (col.kind) {
      case ColumnKind::Boolean: {
        PredicateDef def;
        def.name = col.name;
        def.column = col.name;
        def.transform = TransformKind::Identity;
        defs.push_back(def);
        break;
      }
      case ColumnKind::Categorical: {
        std::set<std::string> categories;
        for (const auto& cell : col.cells)
          if (!cell.missing) categories.insert(cell.text);
        for (const auto& cat : categories) {
          PredicateDef def;
          def.name = col.name + "=" + cat;
          def.column = col.name;
          def.transform = TransformKind::OneHot;
          def.category = cat;
          defs.push_back(def);
        }
        break;
      }
      case ColumnKind::Numeric: {
        std::vector<double> values;
        for (std::size_t i = 0; i < col.cells.size(); ++i) {
          const auto& cell = col.cells[i];
          if (cell.missing) continue;
          auto v = parse_number(cell.text);
          if (!v)
            throw DataError("row " + std::to_string(i + 2) + ", column '" +
                            col.name + "': cell '" + cell.text +
                            "' is not numeric");
          values.push_back(*v);
        }
        for (const auto& split : median_thresholds(values, q)) {
          PredicateDef def;
          def.name = col.name + "<=" + format_double(split.threshold);
          def.column = col.name;
          def.transform = TransformKind::Threshold;
          def.threshold = split.threshold;
          def.split_level = split.level;
          def.range_lo = split.lo;
          def.range_hi = split.hi;
          defs.push_back(def);
        }
        break;
      }
    }
    for (auto& def : defs) {
      def.column_has_missing = has_missing;
      def.id = static_cast<PredicateId>(ds.language.predicates.size());
      ds.columns.push_back(predicate_bits(def, col));
      ds.language.predicates.push_back(std::move(def));
    }
  }

  std::set<std::string> names;
  for (const auto& p : ds.language.predicates)
    if (!names.insert(p.name).second)
      throw DataError("duplicate predicate name: " + p.name);
  return ds;
}

Dataset apply_language(const PredicateLanguage& language, const RawTable& table) {
  for (const auto& schema : language.columns) {
    const RawColumn* col = table.find_column(schema.name);
    if (!col) throw SchemaError("missing column: " + schema.name);
    if (col->kind != schema.kind)
      throw SchemaError("column '" + schema.name + "' is " +
                        column_kind_name(col->kind) + ", model expects " +
                        column_kind_name(schema.kind));
  }
  for (const auto& col : table.columns) {
    bool known = false;
    for (const auto& schema : language.columns)
      if (schema.name == col.name) known = true;
    if (!known) throw SchemaError("extra column: " + col.name);
  }

  Dataset ds;
  ds.language = language;
  ds.n_objects = table.n_objects;
  for (const auto& def : language.predicates)
    ds.columns.push_back(predicate_bits(def, *table.find_column(def.column)));
  return ds;
}

bool holds(const Dataset& ds, PredicateId predicate, std::size_t object) {
  if (predicate < 0 || static_cast<std::size_t>(predicate) >= ds.columns.size())
    throw std::invalid_argument("predicate id out of range: " +
                                std::to_string(predicate));
  if (object >= ds.n_objects)
    throw std::invalid_argument("object index out of range: " +
                                std::to_string(object));
  return ds.columns[static_cast<std::size_t>(predicate)].test(object);
}

std::string fingerprint_hex(const PredicateLanguage& language) {
  // FNV-1a over a canonical serialization of schema and predicates.
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ull;
  };
  for (const auto& c : language.columns) {
    mix(c.name);
    mix(column_kind_name(c.kind));
  }
  for (const auto& p : language.predicates) {
    mix(p.name);
    mix(p.column);
    mix(std::to_string(static_cast<int>(p.transform)));
    mix(p.category);
    mix(format_double(p.threshold));
    mix(std::to_string(p.split_level));
    mix(format_double(p.range_lo));
    mix(format_double(p.range_hi));
    mix(p.column_has_missing ? "1" : "0");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace pld
