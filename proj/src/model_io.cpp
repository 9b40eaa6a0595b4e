#include "pld/model_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pld/errors.hpp"

namespace pld {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

const std::string& checked_name(const std::string& name) {
  if (name.find('\t') != std::string::npos ||
      name.find('\n') != std::string::npos)
    throw DataError("name contains tab or newline: " + name);
  return name;
}

double parse_double_field(const std::string& s, std::size_t line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw ParseError(line, "bad number: " + s);
  return v;
}

long long parse_int_field(const std::string& s, std::size_t line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') throw ParseError(line, "bad integer: " + s);
  return v;
}

std::string transform_name(TransformKind t) {
  switch (t) {
    case TransformKind::Identity: return "identity";
    case TransformKind::OneHot: return "onehot";
    case TransformKind::Threshold: return "threshold";
  }
  return "?";
}

void write_hp(std::ostringstream& out, const Hyperparameters& hp) {
  out << "hp\td\t" << hp.d << "\n";
  out << "hp\tmax_size\t" << hp.max_size << "\n";
  out << "hp\ta\t" << format_double(hp.a) << "\n";
  out << "hp\tmin_support\t" << hp.min_support << "\n";
  out << "hp\tprob_threshold\t" << format_double(hp.prob_threshold) << "\n";
  out << "hp\tgain_threshold\t" << format_double(hp.gain_threshold) << "\n";
  for (const auto& [level, g] : hp.per_level_gain)
    out << "hp\tper_level_gain\t" << level << "\t" << format_double(g) << "\n";
  out << "hp\tnode_cap\t" << hp.node_cap << "\n";
  out << "hp\tquantization_depth\t" << hp.quantization_depth << "\n";
  out << "hp\tstrict_ties\t" << (hp.strict_ties ? 1 : 0) << "\n";
}

void write_law_line(std::ostringstream& out, const PredicateLanguage& lang,
                    const char* tag, const Law& law) {
  out << tag << "\t" << law.level << "\t" << law.stats.support << "\t"
      << law.stats.co_support << "\t" << format_double(law.stats.probability)
      << "\t" << format_double(law.stats.wilson_lb) << "\t"
      << checked_name(lang.name_of(law.rule.conclusion));
  for (PredicateId p : law.rule.premise)
    out << "\t" << checked_name(lang.name_of(p));
  out << "\n";
}

}  // namespace

std::string serialize_model(const Model& m) {
  std::ostringstream out;
  out << "pldmodel\t" << kModelFormatVersion << "\n";
  out << "fingerprint\t" << fingerprint_hex(m.language) << "\n";
  if (m.partial) out << "partial\n";
  write_hp(out, m.hp);
  for (const auto& c : m.language.columns)
    out << "column\t" << checked_name(c.name) << "\t" << column_kind_name(c.kind)
        << "\n";
  for (const auto& p : m.language.predicates) {
    out << "predicate\t" << p.id << "\t" << checked_name(p.name) << "\t"
        << checked_name(p.column) << "\t" << transform_name(p.transform);
    if (p.transform == TransformKind::OneHot)
      out << "\t" << checked_name(p.category);
    else if (p.transform == TransformKind::Threshold)
      out << "\t" << format_double(p.threshold) << "\t" << p.split_level << "\t"
          << format_double(p.range_lo) << "\t" << format_double(p.range_hi);
    out << "\t" << (p.column_has_missing ? 1 : 0) << "\n";
  }
  for (const auto& cm : m.conclusions) {
    write_law_line(out, m.language, "baseline", cm.baseline);
    for (const auto& law : cm.laws)
      if (!law.rule.premise.empty() || law.level != 0)
        write_law_line(out, m.language, "law", law);
  }
  out << "end\n";
  return out.str();
}

Model parse_model(const std::string& text) {
  Model m;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false, saw_end = false;
  std::string recorded_fingerprint;

  auto conclusion_of = [&](const std::string& name,
                           std::size_t at) -> ConclusionModel& {
    auto id = m.language.find(name);
    if (!id) throw ParseError(at, "unknown conclusion predicate: " + name);
    for (auto& cm : m.conclusions)
      if (cm.conclusion == *id) return cm;
    throw ParseError(at, "law before baseline for conclusion: " + name);
  };

  auto law_from = [&](const std::vector<std::string>& f, std::size_t at) {
    if (f.size() < 7) throw ParseError(at, "truncated law record");
    Law law;
    law.level = static_cast<int>(parse_int_field(f[1], at));
    law.stats.support = static_cast<std::size_t>(parse_int_field(f[2], at));
    law.stats.co_support = static_cast<std::size_t>(parse_int_field(f[3], at));
    law.stats.probability = parse_double_field(f[4], at);
    law.stats.wilson_lb = parse_double_field(f[5], at);
    auto conclusion = m.language.find(f[6]);
    if (!conclusion) throw ParseError(at, "unknown predicate: " + f[6]);
    law.rule.conclusion = *conclusion;
    for (std::size_t i = 7; i < f.size(); ++i) {
      auto p = m.language.find(f[i]);
      if (!p) throw ParseError(at, "unknown predicate: " + f[i]);
      law.rule.premise.push_back(*p);
    }
    std::sort(law.rule.premise.begin(), law.rule.premise.end());
    if (static_cast<std::size_t>(law.level) != law.rule.premise.size())
      throw ParseError(at, "law level does not match premise size");
    return law;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_tabs(line);
    const std::string& tag = f[0];

    if (!saw_header) {
      if (tag != "pldmodel" || f.size() != 2)
        throw ParseError(lineno, "expected pldmodel header");
      if (parse_int_field(f[1], lineno) != kModelFormatVersion)
        throw ParseError(lineno, "unsupported format version: " + f[1]);
      saw_header = true;
      continue;
    }
    if (saw_end) throw ParseError(lineno, "content after end marker");

    if (tag == "fingerprint") {
      if (f.size() != 2) throw ParseError(lineno, "bad fingerprint record");
      recorded_fingerprint = f[1];
    } else if (tag == "partial") {
      m.partial = true;
    } else if (tag == "hp") {
      if (f.size() < 3) throw ParseError(lineno, "bad hp record");
      const std::string& key = f[1];
      if (key == "d")
        m.hp.d = static_cast<int>(parse_int_field(f[2], lineno));
      else if (key == "max_size")
        m.hp.max_size = static_cast<int>(parse_int_field(f[2], lineno));
      else if (key == "a")
        m.hp.a = parse_double_field(f[2], lineno);
      else if (key == "min_support")
        m.hp.min_support = static_cast<std::size_t>(parse_int_field(f[2], lineno));
      else if (key == "prob_threshold")
        m.hp.prob_threshold = parse_double_field(f[2], lineno);
      else if (key == "gain_threshold")
        m.hp.gain_threshold = parse_double_field(f[2], lineno);
      else if (key == "per_level_gain") {
        if (f.size() != 4) throw ParseError(lineno, "bad per_level_gain record");
        m.hp.per_level_gain[static_cast<int>(parse_int_field(f[2], lineno))] =
            parse_double_field(f[3], lineno);
      } else if (key == "node_cap")
        m.hp.node_cap = static_cast<std::size_t>(parse_int_field(f[2], lineno));
      else if (key == "quantization_depth")
        m.hp.quantization_depth =
            static_cast<int>(parse_int_field(f[2], lineno));
      else if (key == "strict_ties")
        m.hp.strict_ties = parse_int_field(f[2], lineno) != 0;
      else
        throw ParseError(lineno, "unknown hyperparameter: " + key);
    } else if (tag == "column") {
      if (f.size() != 3) throw ParseError(lineno, "bad column record");
      auto kind = column_kind_from_name(f[2]);
      if (!kind) throw ParseError(lineno, "unknown column kind: " + f[2]);
      m.language.columns.push_back({f[1], *kind});
    } else if (tag == "predicate") {
      if (f.size() < 6) throw ParseError(lineno, "bad predicate record");
      PredicateDef def;
      def.id = static_cast<PredicateId>(parse_int_field(f[1], lineno));
      if (static_cast<std::size_t>(def.id) != m.language.predicates.size())
        throw ParseError(lineno, "predicate ids must be dense and in order");
      def.name = f[2];
      def.column = f[3];
      const std::string& kind = f[4];
      if (kind == "identity") {
        if (f.size() != 6) throw ParseError(lineno, "bad identity predicate");
        def.transform = TransformKind::Identity;
        def.column_has_missing = parse_int_field(f[5], lineno) != 0;
      } else if (kind == "onehot") {
        if (f.size() != 7) throw ParseError(lineno, "bad onehot predicate");
        def.transform = TransformKind::OneHot;
        def.category = f[5];
        def.column_has_missing = parse_int_field(f[6], lineno) != 0;
      } else if (kind == "threshold") {
        if (f.size() != 10) throw ParseError(lineno, "bad threshold predicate");
        def.transform = TransformKind::Threshold;
        def.threshold = parse_double_field(f[5], lineno);
        def.split_level = static_cast<int>(parse_int_field(f[6], lineno));
        def.range_lo = parse_double_field(f[7], lineno);
        def.range_hi = parse_double_field(f[8], lineno);
        def.column_has_missing = parse_int_field(f[9], lineno) != 0;
      } else {
        throw ParseError(lineno, "unknown transform: " + kind);
      }
      m.language.predicates.push_back(std::move(def));
    } else if (tag == "baseline") {
      Law law = law_from(f, lineno);
      if (!law.rule.premise.empty())
        throw ParseError(lineno, "baseline must have an empty premise");
      ConclusionModel cm;
      cm.conclusion = law.rule.conclusion;
      cm.baseline = law;
      if (law.stats.probability > 0.0) cm.laws.push_back(law);
      m.conclusions.push_back(std::move(cm));
    } else if (tag == "law") {
      Law law = law_from(f, lineno);
      conclusion_of(f[6], lineno).laws.push_back(std::move(law));
    } else if (tag == "end") {
      saw_end = true;
    } else {
      throw ParseError(lineno, "unknown record: " + tag);
    }
  }
  if (!saw_header) throw ParseError(lineno, "empty model file");
  if (!saw_end) throw ParseError(lineno, "missing end marker");
  if (recorded_fingerprint.empty())
    throw ParseError(lineno, "missing fingerprint");
  if (recorded_fingerprint != fingerprint_hex(m.language))
    throw ParseError(lineno, "fingerprint does not match the language");
  return m;
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << serialize_model(m);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

Hyperparameters parse_config_text(const std::string& text) {
  Hyperparameters hp;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto as_double = [&] {
      const char* b = value.c_str();
      char* e = nullptr;
      double v = std::strtod(b, &e);
      if (e == b || *e != '\0')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": bad number '" + value + "'");
      return v;
    };
    auto as_int = [&] {
      const char* b = value.c_str();
      char* e = nullptr;
      long long v = std::strtoll(b, &e, 10);
      if (e == b || *e != '\0')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": bad integer '" + value + "'");
      return v;
    };
    if (key == "d")
      hp.d = static_cast<int>(as_int());
    else if (key == "max_size")
      hp.max_size = static_cast<int>(as_int());
    else if (key == "a")
      hp.a = as_double();
    else if (key == "min_support")
      hp.min_support = static_cast<std::size_t>(as_int());
    else if (key == "prob_threshold")
      hp.prob_threshold = as_double();
    else if (key == "gain_threshold")
      hp.gain_threshold = as_double();
    else if (key.rfind("per_level_gain.", 0) == 0) {
      std::string level_str = key.substr(std::string("per_level_gain.").size());
      const char* b = level_str.c_str();
      char* e = nullptr;
      long long level = std::strtoll(b, &e, 10);
      if (e == b || *e != '\0' || level < 1)
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": bad per_level_gain key '" + key + "'");
      hp.per_level_gain[static_cast<int>(level)] = as_double();
    } else if (key == "node_cap")
      hp.node_cap = static_cast<std::size_t>(as_int());
    else if (key == "quantization_depth")
      hp.quantization_depth = static_cast<int>(as_int());
    else if (key == "strict_ties") {
      if (value == "true" || value == "1")
        hp.strict_ties = true;
      else if (value == "false" || value == "0")
        hp.strict_ties = false;
      else
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": strict_ties must be true/false");
    } else {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    }
  }
  hp.validate();
  return hp;
}

Hyperparameters load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string dataset_manifest(const PredicateLanguage& language, int q) {
  std::ostringstream out;
  out << "quantization_depth = " << q << "\n";
  for (const auto& c : language.columns)
    out << "column." << c.name << " = " << column_kind_name(c.kind) << "\n";
  out << "fingerprint = " << fingerprint_hex(language) << "\n";
  return out.str();
}

}  // namespace pld
