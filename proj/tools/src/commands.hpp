#pragma once

#include <string>

#include "output.hpp"

namespace qdnuc::cli {

// Each command fills missing sweep axes with its defaults (so metadata.json
// echoes the grid actually used), writes its files into ctx.out_dir and
// returns nothing; failures surface as qdnuc::Error.
void cmd_cool_map(RunContext& ctx);
void cmd_field_scan(RunContext& ctx);
void cmd_spectrum(RunContext& ctx);
void cmd_rabi(RunContext& ctx);
void cmd_thermometry(RunContext& ctx);

struct FitRequest {
  std::string input;
  std::string x_column;
  std::string y_column;
  std::string model;  // gaussian_sum | stretched_exponential | exponential_relaxation | frequency
  int peaks = 5;
  double spacing = 0.0;  // default: omega_n of the config
  double sigma = 8.0;
  double x_min = -1e300;
  double x_max = 1e300;
};
void cmd_fit(RunContext& ctx, const FitRequest& req);

}  // namespace qdnuc::cli
