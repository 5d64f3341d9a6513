#include "shapfoil/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "shapfoil/strings.hpp"

namespace shapfoil {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::string format_double_roundtrip(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string format_double_trimmed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s = buf;
  if (s.find('.') != std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << content;
}

int Schema::feature_index(const std::string& name) const {
  for (std::size_t i = 0; i < feature_names.size(); ++i)
    if (feature_names[i] == name) return static_cast<int>(i);
  return -1;
}

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(),
                    [&](const Sample& s) { return s.label == label; }));
}

Schema parse_schema_text(const std::string& text) {
  Schema s;
  bool have_target = false;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "feature") {
      std::string name, kind;
      ls >> name >> kind;
      if (name.empty() || kind.empty())
        throw DataError("schema line " + std::to_string(lineno) + ": malformed feature");
      if (s.feature_index(name) >= 0)
        throw DataError("schema: duplicate feature '" + name + "'");
      if (kind == "numeric") {
        s.feature_names.push_back(name);
        s.kinds.emplace_back(NumericKind{});
      } else if (kind == "categorical") {
        std::string domain_csv;
        ls >> domain_csv;
        CategoricalKind ck;
        for (auto& tok : split_on(domain_csv, ',')) {
          tok = trim(tok);
          if (tok.empty())
            throw DataError("schema: empty domain token for '" + name + "'");
          ck.domain.push_back(tok);
        }
        if (ck.domain.empty())
          throw DataError("schema: empty domain for '" + name + "'");
        std::sort(ck.domain.begin(), ck.domain.end());
        if (std::adjacent_find(ck.domain.begin(), ck.domain.end()) != ck.domain.end())
          throw DataError("schema: duplicate domain value for '" + name + "'");
        s.feature_names.push_back(name);
        s.kinds.emplace_back(std::move(ck));
      } else {
        throw DataError("schema line " + std::to_string(lineno) + ": unknown kind '" + kind + "'");
      }
    } else if (kw == "target") {
      std::string name, positive_kw, token;
      ls >> name >> positive_kw >> token;
      if (name.empty() || positive_kw != "positive" || token.empty())
        throw DataError("schema line " + std::to_string(lineno) + ": malformed target");
      s.target_name = name;
      s.positive_label = token;
      have_target = true;
    } else {
      throw DataError("schema line " + std::to_string(lineno) + ": unknown keyword '" + kw + "'");
    }
  }
  if (!have_target) throw DataError("schema: missing target line");
  if (s.feature_names.empty()) throw DataError("schema: no features declared");
  if (s.feature_index(s.target_name) >= 0)
    throw DataError("schema: target '" + s.target_name + "' is also a feature");
  return s;
}

Schema load_schema(const std::string& path) { return parse_schema_text(read_file(path)); }

std::string schema_to_text(const Schema& s) {
  std::ostringstream out;
  for (std::size_t i = 0; i < s.feature_names.size(); ++i) {
    out << "feature " << s.feature_names[i] << ' ';
    if (s.is_numeric(i)) {
      out << "numeric\n";
    } else {
      out << "categorical ";
      const auto& dom = s.domain(i);
      for (std::size_t j = 0; j < dom.size(); ++j) out << (j ? "," : "") << dom[j];
      out << '\n';
    }
  }
  out << "target " << s.target_name << " positive " << s.positive_label << '\n';
  return out.str();
}

void save_schema(const Schema& s, const std::string& path) {
  write_file(path, schema_to_text(s));
}

namespace {

// RFC-4180: quoted fields may contain commas, doubled quotes and newlines.
std::vector<std::vector<std::string>> parse_csv_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool in_quotes = false, field_started = false;
  std::size_t i = 0, n = text.size();
  auto end_field = [&] {
    rec.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(rec);
    rec.clear();
  };
  while (i < n) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        field.push_back(c);
        ++i;
      }
    } else if (c == '"' && !field_started && field.empty()) {
      in_quotes = true;
      field_started = true;
      ++i;
    } else if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < n && text[i + 1] == '\n') {
      end_record();
      i += 2;
    } else if (c == '\n') {
      end_record();
      ++i;
    } else {
      field.push_back(c);
      field_started = true;
      ++i;
    }
  }
  if (in_quotes) throw DataError("CSV: unterminated quoted field");
  if (field_started || !field.empty() || !rec.empty()) end_record();
  return records;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

Dataset parse_csv(const std::string& csv_text, const Schema& schema) {
  auto records = parse_csv_records(csv_text);
  if (records.empty()) throw DataError("CSV: no header row");
  const auto& header = records[0];

  // Header must be a permutation of feature names + target.
  std::vector<int> col_to_feature(header.size(), -1);  // -2 marks the target column
  int target_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string name = trim(header[c]);
    if (name == schema.target_name) {
      if (target_col >= 0) throw DataError("CSV: duplicate target column", 1, name);
      target_col = static_cast<int>(c);
      col_to_feature[c] = -2;
      continue;
    }
    int fi = schema.feature_index(name);
    if (fi < 0) throw DataError("CSV: unexpected column '" + name + "'", 1, name);
    if (std::find(col_to_feature.begin(), col_to_feature.end(), fi) != col_to_feature.end())
      throw DataError("CSV: duplicate column '" + name + "'", 1, name);
    col_to_feature[c] = fi;
  }
  if (target_col < 0) throw DataError("CSV: missing target column '" + schema.target_name + "'");
  for (std::size_t f = 0; f < schema.feature_names.size(); ++f)
    if (std::find(col_to_feature.begin(), col_to_feature.end(), static_cast<int>(f)) ==
        col_to_feature.end())
      throw DataError("CSV: missing column '" + schema.feature_names[f] + "'");

  Dataset d;
  d.schema = schema;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() == 1 && trim(rec[0]).empty()) continue;  // trailing blank line
    if (rec.size() != header.size())
      throw DataError("CSV row " + std::to_string(r) + ": expected " +
                          std::to_string(header.size()) + " fields, got " +
                          std::to_string(rec.size()),
                      r);
    Sample s;
    s.values.resize(schema.feature_names.size());
    s.label = 0;
    for (std::size_t c = 0; c < rec.size(); ++c) {
      std::string cell = trim(rec[c]);
      if (col_to_feature[c] == -2) {
        if (cell == schema.positive_label) {
          s.label = +1;
        } else if (!cell.empty()) {
          s.label = -1;
        } else {
          throw DataError("empty target cell", r, schema.target_name);
        }
        continue;
      }
      int fi = col_to_feature[c];
      const std::string& fname = schema.feature_names[fi];
      if (cell.empty() || cell == "?")
        throw DataError("missing value", r, fname);
      if (schema.is_numeric(fi)) {
        double v;
        if (!parse_double(cell, v) || !std::isfinite(v))
          throw DataError("non-finite numeric cell '" + cell + "'", r, fname);
        s.values[fi] = v;
      } else {
        const auto& dom = schema.domain(fi);
        if (!std::binary_search(dom.begin(), dom.end(), cell))
          throw DataError("unknown token '" + cell + "'", r, fname);
        s.values[fi] = cell;
      }
    }
    d.samples.push_back(std::move(s));
  }
  return d;
}

Dataset load_csv(const std::string& csv_path, const std::string& schema_path) {
  Schema schema = load_schema(schema_path);
  return parse_csv(read_file(csv_path), schema);
}

std::string to_csv(const Dataset& d) {
  std::ostringstream out;
  const Schema& s = d.schema;
  for (std::size_t f = 0; f < s.feature_names.size(); ++f)
    out << csv_escape(s.feature_names[f]) << ',';
  out << csv_escape(s.target_name) << '\n';
  for (const Sample& sm : d.samples) {
    for (std::size_t f = 0; f < s.feature_names.size(); ++f) {
      if (s.is_numeric(f))
        out << format_double_roundtrip(std::get<double>(sm.values[f]));
      else
        out << csv_escape(std::get<std::string>(sm.values[f]));
      out << ',';
    }
    // Negative labels render as the literal token "neg" unless the schema's
    // domain is binary with an obvious complement; we keep whatever was loaded
    // by storing the original token. Since Sample only keeps +-1, serialize
    // positive_label or "not_" + positive_label.
    out << (sm.label > 0 ? s.positive_label : "not_" + s.positive_label) << '\n';
  }
  return out.str();
}

void save_csv(const Dataset& d, const std::string& path) { write_file(path, to_csv(d)); }

BinarizedMatrix binarize(const Dataset& d, bool standardize_numeric) {
  const Schema& s = d.schema;
  BinarizedMatrix m;
  for (std::size_t f = 0; f < s.feature_names.size(); ++f) {
    if (s.is_numeric(f)) {
      m.column_map.push_back({static_cast<int>(f), -1});
      m.column_names.push_back(s.feature_names[f]);
    } else {
      const auto& dom = s.domain(f);
      for (std::size_t v = 0; v < dom.size(); ++v) {
        m.column_map.push_back({static_cast<int>(f), static_cast<int>(v)});
        m.column_names.push_back(s.feature_names[f] + "_" + dom[v]);
      }
    }
  }
  const std::size_t ncol = m.column_map.size();
  m.numeric_scaling.assign(ncol, {0.0, 1.0});

  m.rows.reserve(d.samples.size());
  for (const Sample& sm : d.samples) {
    std::vector<double> row(ncol, 0.0);
    for (std::size_t c = 0; c < ncol; ++c) {
      const ColumnRef& ref = m.column_map[c];
      if (ref.is_indicator()) {
        const std::string& tok = std::get<std::string>(sm.values[ref.feature]);
        row[c] = (tok == s.domain(ref.feature)[ref.domain_index]) ? 1.0 : 0.0;
      } else {
        row[c] = std::get<double>(sm.values[ref.feature]);
      }
    }
    m.rows.push_back(std::move(row));
  }

  if (standardize_numeric && !m.rows.empty()) {
    for (std::size_t c = 0; c < ncol; ++c) {
      if (m.column_map[c].is_indicator()) continue;
      double mean = 0;
      for (const auto& r : m.rows) mean += r[c];
      mean /= static_cast<double>(m.rows.size());
      double var = 0;
      for (const auto& r : m.rows) var += (r[c] - mean) * (r[c] - mean);
      var /= static_cast<double>(m.rows.size());  // population variance
      double sd = std::sqrt(var);
      if (sd == 0.0) {
        m.numeric_scaling[c] = {mean, 1.0};
        m.warnings.push_back(m.column_names[c]);
        for (auto& r : m.rows) r[c] -= mean;
      } else {
        m.numeric_scaling[c] = {mean, sd};
        for (auto& r : m.rows) r[c] = (r[c] - mean) / sd;
      }
    }
  }
  return m;
}

std::vector<double> binarize_sample(const BinarizedMatrix& ref, const Schema& schema,
                                    const Sample& s) {
  std::vector<double> row(ref.cols(), 0.0);
  for (std::size_t c = 0; c < ref.cols(); ++c) {
    const ColumnRef& cr = ref.column_map[c];
    if (cr.is_indicator()) {
      const std::string& tok = std::get<std::string>(s.values[cr.feature]);
      row[c] = (tok == schema.domain(cr.feature)[cr.domain_index]) ? 1.0 : 0.0;
    } else {
      const auto& [mean, sd] = ref.numeric_scaling[c];
      row[c] = (std::get<double>(s.values[cr.feature]) - mean) / sd;
    }
  }
  return row;
}

std::pair<Dataset, Dataset> split(const Dataset& d, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw DataError("split: test_fraction must lie in (0,1)");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < d.samples.size(); ++i)
    (d.samples[i].label > 0 ? pos : neg).push_back(i);
  if (pos.size() < 2 || neg.size() < 2)
    throw DataError("split: each class needs at least 2 members");

  std::set<std::size_t> test_idx;
  auto pick = [&](std::vector<std::size_t> idx, std::uint64_t stream) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + stream);
    std::shuffle(idx.begin(), idx.end(), rng);
    auto want = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(idx.size())));
    want = std::min(want, idx.size() - 1);  // keep at least one in train
    for (std::size_t k = 0; k < want; ++k) test_idx.insert(idx[k]);
  };
  pick(pos, 1);
  pick(neg, 2);

  Dataset train, test;
  train.schema = test.schema = d.schema;
  for (std::size_t i = 0; i < d.samples.size(); ++i)
    (test_idx.count(i) ? test : train).samples.push_back(d.samples[i]);
  return {std::move(train), std::move(test)};
}

}  // namespace shapfoil
