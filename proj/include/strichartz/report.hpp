#pragma once

// Tabular reports and their JSON / CSV serialization. Output is a pure function
// of the table contents: fixed column order, fixed row order, locale-independent
// number formatting.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace strichartz::report {

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

enum class Method { closed_form, quadrature, optimization };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    case Method::optimization: return "optimization";
  }
  return "unknown";
}

/// One reported number. `source` names the identity or procedure the value comes from.
struct ReportRow {
  std::string quantity;
  std::string exact_expression;
  double numeric = 0.0;
  Method method = Method::closed_form;
  double error_estimate = 0.0;
  std::string source;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      throw std::logic_error("Table::add: row has " + std::to_string(row.size()) + " cells, expected " +
                             std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
  }
};

inline Table table_of(const std::vector<ReportRow>& rows) {
  Table t{{"quantity", "exact_expression", "numeric", "method", "error_estimate", "source"}, {}};
  for (const ReportRow& r : rows) {
    if (!(r.error_estimate >= 0.0)) throw std::logic_error("ReportRow: error_estimate must be >= 0");
    t.add({r.quantity, r.exact_expression, r.numeric, std::string(to_string(r.method)), r.error_estimate, r.source});
  }
  return t;
}

/// 17 significant digits, '.' decimal point, independent of the locale.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline Json to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      c);
}

inline Json to_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return csv_escape(v);
        }
      },
      c);
}

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
}

/// {"meta": ..., "<rows_key>": [...], extra keys...}
inline void write_json(std::ostream& os, const Json& meta, const Table& t, const Json& extra = Json::object(),
                       const std::string& rows_key = "rows") {
  Json doc = Json::object();
  doc["meta"] = meta;
  doc[rows_key] = to_json(t);
  for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
  os << doc.dump(2) << '\n';
}

}  // namespace strichartz::report
