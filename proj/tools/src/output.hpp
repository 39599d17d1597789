#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qdnuc/core/config.hpp"
#include "qdnuc/core/sweep.hpp"

namespace qdnuc::cli {

using json = nlohmann::ordered_json;

// Column-major numeric table with unit-suffixed labels.
struct Table {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
};

struct RunContext {
  std::string command;
  RunConfig config;
  std::string out_dir;
  std::string format = "csv";  // csv or json
  bool plot = false;
};

void ensure_dir(const std::string& dir);
void write_file(const std::string& path, const std::string& content);
void write_json(const std::string& path, const json& j);

// Writes <stem>.csv or <stem>.json depending on ctx.format; returns the file name.
std::string write_table(const RunContext& ctx, const std::string& stem, const Table& t);
std::string write_sweep(const RunContext& ctx, const std::string& stem, const SweepResult& s);

// metadata.json: command, files and the resolved config.
void write_metadata(const RunContext& ctx, const std::vector<std::string>& files);

// plot_<command>.py rendering the emitted CSVs with matplotlib.
std::string write_plot_script(const RunContext& ctx, const std::string& body);

json to_json_number(double v);

}  // namespace qdnuc::cli
