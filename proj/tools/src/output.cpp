#include "output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qdnuc/core/error.hpp"

namespace qdnuc::cli {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("io", "cannot create output directory " + dir + ": " + ec.message());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path);
  out << content;
  if (!out) throw Error("io", "write failed for " + path);
}

void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

json to_json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string write_table(const RunContext& ctx, const std::string& stem, const Table& t) {
  if (ctx.format == "json") {
    json j;
    j["columns"] = t.labels;
    json rows = json::array();
    for (const auto& r : t.rows) {
      json row = json::array();
      for (double v : r) row.push_back(to_json_number(v));
      rows.push_back(row);
    }
    j["rows"] = rows;
    write_json((fs::path(ctx.out_dir) / (stem + ".json")).string(), j);
    return stem + ".json";
  }
  std::ostringstream ss;
  for (std::size_t i = 0; i < t.labels.size(); ++i) ss << (i ? "," : "") << t.labels[i];
  ss << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) ss << (i ? "," : "") << format_number(r[i]);
    ss << '\n';
  }
  write_file((fs::path(ctx.out_dir) / (stem + ".csv")).string(), ss.str());
  return stem + ".csv";
}

std::string write_sweep(const RunContext& ctx, const std::string& stem, const SweepResult& s) {
  if (ctx.format == "json") {
    json j;
    json cols = json::array();
    for (const auto& a : s.axes) cols.push_back(header_label(a.name, a.unit));
    for (const auto& c : s.columns) cols.push_back(header_label(c.name, c.unit));
    cols.push_back("flag");
    j["columns"] = cols;
    json rows = json::array();
    for (const auto& r : s.rows) {
      json row = json::array();
      for (double v : r.coords) row.push_back(to_json_number(v));
      for (double v : r.values) row.push_back(to_json_number(v));
      row.push_back(r.flag);
      rows.push_back(row);
    }
    j["rows"] = rows;
    write_json((fs::path(ctx.out_dir) / (stem + ".json")).string(), j);
    return stem + ".json";
  }
  std::ostringstream ss;
  s.write_csv(ss);
  write_file((fs::path(ctx.out_dir) / (stem + ".csv")).string(), ss.str());
  return stem + ".csv";
}

void write_metadata(const RunContext& ctx, const std::vector<std::string>& files) {
  json j;
  j["command"] = ctx.command;
  j["format"] = ctx.format;
  j["files"] = files;
  j["units"] = {{"frequency", "MHz"}, {"time", "us"}, {"field", "T"}, {"temperature", "mK"}};
  j["config"] = json::parse(serialize_config(ctx.config));
  write_json((fs::path(ctx.out_dir) / "metadata.json").string(), j);
}

std::string write_plot_script(const RunContext& ctx, const std::string& body) {
  const std::string name = "plot_" + ctx.command + ".py";
  std::string script =
      "#!/usr/bin/env python3\n"
      "# Renders the CSV output of `qdnuc " + ctx.command + "` found next to this file.\n"
      "import os\n"
      "import numpy as np\n"
      "import matplotlib\n"
      "matplotlib.use('Agg')\n"
      "import matplotlib.pyplot as plt\n\n"
      "here = os.path.dirname(os.path.abspath(__file__))\n\n"
      "def load(name):\n"
      "    return np.genfromtxt(os.path.join(here, name), delimiter=',', names=True, dtype=None, encoding='utf-8')\n\n" +
      body;
  write_file((fs::path(ctx.out_dir) / name).string(), script);
  return name;
}

}  // namespace qdnuc::cli
