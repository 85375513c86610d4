#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "soak/errors.hpp"

namespace soak {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Column-ordered result table; the one shape every subcommand emits.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      throw ShapeError("row width does not match the table header");
    }
    rows.push_back(std::move(row));
  }
};

/// Locale-independent decimal text with 17 significant digits.
inline std::string format_double(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    return std::to_string(*i);
  }
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::get<std::string>(cell);
}

inline std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

/// One JSON object per row. Non-finite numbers become their text form so no
/// value degrades to null.
inline std::string to_json_lines(const Table& table) {
  std::string out;
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& cell = row[c];
      if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        obj[table.columns[c]] = *i;
      } else if (const auto* d = std::get_if<double>(&cell)) {
        if (std::isfinite(*d)) {
          obj[table.columns[c]] = *d;
        } else {
          obj[table.columns[c]] = format_double(*d);
        }
      } else {
        obj[table.columns[c]] = std::get<std::string>(cell);
      }
    }
    out += obj.dump();
    out += '\n';
  }
  return out;
}

/// Writes through a temp file in the target directory and renames into
/// place, so a failed run leaves no partial output.
inline void write_text_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os.write(content.data(),
             static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into " + path.string());
  }
}

/// Pre-flight check that the output target accepts writes.
inline void require_writable(const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  std::ofstream probe(tmp, std::ios::binary | std::ios::trunc);
  if (!probe) {
    throw std::runtime_error("output path not writable: " + path.string());
  }
  probe.close();
  std::error_code ec;
  std::filesystem::remove(tmp, ec);
}

}  // namespace soak
