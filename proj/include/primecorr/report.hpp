// report.hpp
//
// Flat report rows with a fixed key order, CSV and JSON emission (floats at
// 12 significant digits, rationals as "p/q" strings), the key=value run
// configuration format, and atomic artifact writes (temp file + rename).

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "primecorr/common.hpp"
#include "primecorr/compare.hpp"

namespace primecorr {

inline std::string fmt_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string fmt_int(i64 v) { return std::to_string(v); }

struct report_cell {
  std::string key;
  std::string text;
  bool quote = false;  // JSON: emit as string
};

struct report_row {
  std::vector<report_cell> cells;

  void num(const std::string& k, double v) { cells.push_back({k, fmt_sig(v), false}); }
  void num(const std::string& k, i64 v) { cells.push_back({k, fmt_int(v), false}); }
  void num(const std::string& k, u64 v) { cells.push_back({k, std::to_string(v), false}); }
  void str(const std::string& k, const std::string& v) { cells.push_back({k, v, true}); }
};

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

// CSV: header row from the first row's keys; every row must match.
inline std::string to_csv(const std::vector<report_row>& rows) {
  if (rows.empty()) return "";
  std::ostringstream os;
  for (std::size_t i = 0; i < rows[0].cells.size(); ++i) {
    if (i) os << ",";
    os << rows[0].cells[i].key;
  }
  os << "\n";
  for (const auto& r : rows) {
    if (r.cells.size() != rows[0].cells.size())
      throw validation_error("to_csv: ragged rows");
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
      if (i) os << ",";
      os << r.cells[i].text;
    }
    os << "\n";
  }
  return os.str();
}

// JSON array of objects mirroring the CSV keys 1:1.
inline std::string to_json(const std::vector<report_row>& rows) {
  std::ostringstream os;
  os << "[\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << "  {";
    for (std::size_t i = 0; i < rows[r].cells.size(); ++i) {
      const auto& c = rows[r].cells[i];
      if (i) os << ", ";
      os << "\"" << json_escape(c.key) << "\": ";
      if (c.quote)
        os << "\"" << json_escape(c.text) << "\"";
      else
        os << c.text;
    }
    os << "}" << (r + 1 < rows.size() ? "," : "") << "\n";
  }
  os << "]\n";
  return os.str();
}

// Flat "key = value" config, UTF-8, '#' comments, later keys override.
struct run_config {
  std::vector<std::pair<std::string, std::string>> kv;

  void set(const std::string& k, const std::string& v) {
    for (auto& [key, val] : kv) {
      if (key == k) {
        val = v;
        return;
      }
    }
    kv.emplace_back(k, v);
  }
  const std::string* get(const std::string& k) const {
    for (const auto& [key, val] : kv)
      if (key == k) return &val;
    return nullptr;
  }
  friend bool operator==(const run_config& a, const run_config& b) {
    return a.kv == b.kv;
  }
};

inline std::string config_to_text(const run_config& c) {
  std::ostringstream os;
  for (const auto& [k, v] : c.kv) os << k << " = " << v << "\n";
  return os.str();
}

inline run_config config_parse(const std::string& text) {
  run_config c;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t\r");
      std::size_t b = s.find_last_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      return s.substr(a, b - a + 1);
    };
    std::string k = trim(line.substr(0, eq));
    std::string v = trim(line.substr(eq + 1));
    if (!k.empty()) c.set(k, v);
  }
  return c;
}

// Write via temp file in the same directory, then rename.
inline void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw validation_error("atomic_write: cannot open " + tmp.string());
    f << content;
    if (!f) throw validation_error("atomic_write: short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

// Fixed column order for twin/goldbach rows.  The ratio cell reads
// "degenerate" when the prediction vanishes.
inline report_row to_row(const corr_report& r) {
  report_row row;
  row.str("command", r.command);
  row.num("X_or_h", r.X_or_h);
  row.num("h", r.h);
  row.num("d", r.d);
  row.num("u", r.u);
  row.num("z", r.z);
  row.num("empirical", r.empirical);
  row.num("predicted", r.predicted);
  row.num("kappa", r.kappa);
  if (r.degenerate)
    row.str("ratio", "degenerate");
  else
    row.num("ratio", r.ratio);
  row.num("err_budget_1", r.err_budget[0]);
  row.num("err_budget_2", r.err_budget[1]);
  row.num("err_budget_3", r.err_budget[2]);
  row.num("runtime_ms", r.runtime_ms);
  return row;
}

}  // namespace primecorr
