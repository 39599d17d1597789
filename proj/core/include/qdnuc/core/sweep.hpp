#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qdnuc {

// Grid-scan container. Rows are stored in canonical order (first axis
// slowest); each row carries its coordinates, one value per column and a
// reason code ("ok" or why the cell is masked).
struct SweepResult {
  struct Axis {
    std::string name;
    std::string unit;
    std::vector<double> values;
  };
  struct Column {
    std::string name;
    std::string unit;
  };
  struct Row {
    std::vector<double> coords;
    std::vector<double> values;
    std::string flag = "ok";
  };

  std::vector<Axis> axes;
  std::vector<Column> columns;
  std::vector<Row> rows;
  std::string objective;
  std::optional<std::size_t> optimum;

  std::size_t column_index(const std::string& name) const;
  double value(std::size_t row, const std::string& column) const;
  // Argmax of the objective over unmasked rows; ties go to the lowest index.
  void locate_optimum();
  void write_csv(std::ostream& out) const;
};

// Shortest decimal text that round-trips; "nan" for NaN.
std::string format_number(double v);
// "name_unit", or just "name" when the unit is empty.
std::string header_label(const std::string& name, const std::string& unit);

}  // namespace qdnuc
