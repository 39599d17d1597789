#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "qdnuc/core/config.hpp"
#include "qdnuc/core/error.hpp"

namespace {

using qdnuc::cli::json;

int report(const std::string& kind, const std::string& field, const std::string& message, int code) {
  json e;
  e["error"] = kind;
  if (!field.empty()) e["field"] = field;
  e["message"] = message;
  std::cerr << e.dump() << '\n';
  return code;
}

struct CommonFlags {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string format = "csv";
  bool plot = false;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "JSON config file (default: $QDNUC_CONFIG)");
  sub->add_option("--out", f.out, "output directory, created if absent");
  sub->add_option("--seed", f.seed, "RNG seed (overrides config)");
  sub->add_option("--workers", f.workers, "worker threads (overrides config)")->check(CLI::PositiveNumber);
  sub->add_option("--format", f.format, "table format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--plot", f.plot, "also write a matplotlib script rendering the outputs");
}

qdnuc::cli::RunContext make_context(const std::string& command, const CommonFlags& f) {
  qdnuc::cli::RunContext ctx;
  ctx.command = command;
  std::string path = f.config;
  if (path.empty())
    if (const char* env = std::getenv(qdnuc::kConfigEnvVar)) path = env;
  ctx.config = path.empty() ? qdnuc::parse_config("") : qdnuc::load_config(path);
  if (f.seed) ctx.config.seed = *f.seed;
  if (f.workers) ctx.config.workers = *f.workers;
  ctx.config.output.dir = f.out;
  ctx.config.validate();
  ctx.out_dir = f.out;
  ctx.format = f.format;
  ctx.plot = f.plot;
  qdnuc::cli::ensure_dir(ctx.out_dir);
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nuclear-spin cooling and magnon dynamics of a quantum dot"};
  app.require_subcommand(1);
  CommonFlags flags;
  qdnuc::cli::FitRequest fit;

  struct Entry {
    const char* name;
    const char* help;
    void (*run)(qdnuc::cli::RunContext&);
  };
  const Entry entries[] = {
      {"cool-map", "cooling performance over a (Rabi, linewidth) grid", qdnuc::cli::cmd_cool_map},
      {"field-scan", "optimal cooling performance versus magnetic field", qdnuc::cli::cmd_field_scan},
      {"spectrum", "time-resolved sideband spectrum averaged over the Overhauser distribution",
       qdnuc::cli::cmd_spectrum},
      {"rabi", "sideband Rabi oscillations of a single magnon", qdnuc::cli::cmd_rabi},
      {"thermometry", "thermal polarization and fluctuations versus inverse temperature",
       qdnuc::cli::cmd_thermometry},
  };
  for (const auto& e : entries) add_common(app.add_subcommand(e.name, e.help), flags);

  auto* fit_cmd = app.add_subcommand("fit", "fit a model to two columns of a CSV file");
  add_common(fit_cmd, flags);
  fit_cmd->add_option("--input", fit.input, "CSV file")->required();
  fit_cmd->add_option("--x", fit.x_column, "abscissa column")->required();
  fit_cmd->add_option("--y", fit.y_column, "ordinate column")->required();
  fit_cmd->add_option("--model", fit.model, "fit model")
      ->required()
      ->check(CLI::IsMember({"gaussian_sum", "stretched_exponential", "exponential_relaxation", "frequency"}));
  fit_cmd->add_option("--peaks", fit.peaks, "number of Gaussian peaks")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--spacing", fit.spacing, "initial peak spacing in x units (default: omega_n)");
  fit_cmd->add_option("--sigma", fit.sigma, "initial peak width in x units");
  fit_cmd->add_option("--x-min", fit.x_min, "ignore rows with x below");
  fit_cmd->add_option("--x-max", fit.x_max, "ignore rows with x above");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", "", e.what(), 2);
  }

  try {
    for (const auto& e : entries) {
      if (app.got_subcommand(e.name)) {
        auto ctx = make_context(e.name, flags);
        e.run(ctx);
        return 0;
      }
    }
    auto ctx = make_context("fit", flags);
    qdnuc::cli::cmd_fit(ctx, fit);
    return 0;
  } catch (const qdnuc::ConfigError& e) {
    return report(e.kind(), e.field(), e.what(), 2);
  } catch (const qdnuc::Error& e) {
    return report(e.kind(), "", e.what(), 3);
  } catch (const std::exception& e) {
    return report("internal", "", e.what(), 3);
  }
}
