#include "qdnuc/core/sweep.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace qdnuc {

std::size_t SweepResult::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return i;
  throw std::out_of_range("no column named " + name);
}

double SweepResult::value(std::size_t row, const std::string& column) const {
  return rows.at(row).values.at(column_index(column));
}

void SweepResult::locate_optimum() {
  optimum.reset();
  const std::size_t k = column_index(objective);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].flag != "ok" || !std::isfinite(rows[i].values[k])) continue;
    if (!optimum || rows[i].values[k] > rows[*optimum].values[k]) optimum = i;
  }
}

void SweepResult::write_csv(std::ostream& out) const {
  bool first = true;
  auto sep = [&] {
    if (!first) out << ',';
    first = false;
  };
  for (const auto& a : axes) {
    sep();
    out << header_label(a.name, a.unit);
  }
  for (const auto& c : columns) {
    sep();
    out << header_label(c.name, c.unit);
  }
  sep();
  out << "flag\n";
  for (const auto& r : rows) {
    first = true;
    for (double v : r.coords) {
      sep();
      out << format_number(v);
    }
    for (double v : r.values) {
      sep();
      out << format_number(v);
    }
    sep();
    out << r.flag << '\n';
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string header_label(const std::string& name, const std::string& unit) {
  return unit.empty() ? name : name + "_" + unit;
}

}  // namespace qdnuc
