#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qdnuc/analysis/fit.hpp"
#include "qdnuc/cooling/scans.hpp"
#include "qdnuc/core/error.hpp"
#include "qdnuc/dynamics/hamiltonian.hpp"
#include "qdnuc/dynamics/spectrum.hpp"
#include "qdnuc/thermometry/overhauser.hpp"
#include "qdnuc/thermometry/partition.hpp"

namespace qdnuc::cli {

namespace {

const SweepAxis& axis_or_default(RunConfig& c, const std::string& name, double min, double max, int steps) {
  if (const auto* a = c.find_axis(name)) return *a;
  c.sweep.push_back({name, min, max, steps});
  return c.sweep.back();
}

// Cooling grid shared by cool-map, field-scan and the cooled spectrum prior.
void default_cooling_axes(RunConfig& c) {
  axis_or_default(c, "rabi", 1.0, 40.0, 40);
  axis_or_default(c, "gamma_eff", 1.0, 37.0, 40);
}

json fit_to_json(const analysis::FitResult& r) {
  json j;
  j["model"] = r.model;
  json ps = json::array();
  for (const auto& p : r.params)
    ps.push_back({{"name", p.name},
                  {"unit", p.unit},
                  {"value", p.value},
                  {"uncertainty", to_json_number(p.uncertainty)},
                  {"lower", p.lower},
                  {"upper", p.upper}});
  j["parameters"] = ps;
  j["rss"] = r.rss;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["flags"] = r.flags;
  return j;
}

std::string rabi_stem(double rabi) {
  std::string s = format_number(rabi);
  for (char& ch : s)
    if (ch == '.') ch = 'p';
  return "rabi_" + s;
}

}  // namespace

void cmd_cool_map(RunContext& ctx) {
  auto& c = ctx.config;
  default_cooling_axes(c);
  const auto rabi = c.axis("rabi").values();
  const auto gamma = c.axis("gamma_eff").values();
  const auto map = cooling::performance_map(c.model, c.drive.detuning, rabi, gamma, {}, c.workers);

  std::vector<std::string> files{write_sweep(ctx, "cool_map", map)};
  json s;
  s["command"] = ctx.command;
  s["b_field_t"] = c.model.b_field;
  s["omega_n_mhz"] = c.model.omega_n();
  s["grid_points"] = map.rows.size();
  s["masked_points"] = std::count_if(map.rows.begin(), map.rows.end(), [](const auto& r) { return r.flag != "ok"; });
  if (map.optimum) {
    const auto k = *map.optimum;
    const double r = map.rows[k].coords[0], g = map.rows[k].coords[1];
    s["optimum"] = {{"rabi_mhz", r},
                    {"gamma_eff_mhz", g},
                    {"performance", map.value(k, "performance")},
                    {"variance", map.value(k, "variance")},
                    {"i0", map.value(k, "i0")},
                    {"damping", map.value(k, "damping")},
                    {"rabi_over_omega_n", r / c.model.omega_n()},
                    {"gamma_over_rabi", g / r}};
  } else {
    s["optimum"] = nullptr;
  }
  write_json((std::filesystem::path(ctx.out_dir) / "summary.json").string(), s);
  files.push_back("summary.json");
  if (ctx.plot && ctx.format == "csv")
    files.push_back(write_plot_script(ctx,
        "d = load('cool_map.csv')\n"
        "r = np.unique(d['rabi_mhz']); g = np.unique(d['gamma_eff_mhz'])\n"
        "z = d['performance'].reshape(len(r), len(g))\n"
        "plt.pcolormesh(r, g, z.T, shading='auto')\n"
        "plt.colorbar(label='cooling performance')\n"
        "plt.xlabel('Rabi frequency (MHz)'); plt.ylabel('effective linewidth (MHz)')\n"
        "plt.savefig(os.path.join(here, 'cool_map.png'), dpi=150)\n"));
  write_metadata(ctx, files);
}

void cmd_field_scan(RunContext& ctx) {
  auto& c = ctx.config;
  axis_or_default(c, "b_field", 2.0, 6.0, 41);
  default_cooling_axes(c);
  const auto scan = cooling::field_scan(c.model, c.axis("b_field").values(), c.axis("rabi").values(),
                                        c.axis("gamma_eff").values(), 3, c.workers);

  std::vector<std::string> files{write_sweep(ctx, "field_scan", scan)};
  json s;
  s["command"] = ctx.command;
  if (scan.optimum) {
    const auto k = *scan.optimum;
    s["peak"] = {{"b_field_t", scan.rows[k].coords[0]},
                 {"performance", scan.value(k, "full_performance")},
                 {"rabi_mhz", scan.value(k, "full_rabi")},
                 {"gamma_eff_mhz", scan.value(k, "full_gamma_eff")}};
  } else {
    s["peak"] = nullptr;
  }
  bool above = true;
  for (std::size_t k = 0; k < scan.rows.size(); ++k)
    above = above && scan.value(k, "no_em_performance") > scan.value(k, "full_performance");
  s["no_em_exceeds_full_everywhere"] = above;
  write_json((std::filesystem::path(ctx.out_dir) / "summary.json").string(), s);
  files.push_back("summary.json");
  if (ctx.plot && ctx.format == "csv")
    files.push_back(write_plot_script(ctx,
        "d = load('field_scan.csv')\n"
        "plt.semilogy(d['b_field_t'], d['full_performance'], label='full model')\n"
        "plt.semilogy(d['b_field_t'], d['no_em_performance'], ':', label='without electron-mediated diffusion')\n"
        "plt.semilogy(d['b_field_t'], d['low_field_limit'], '--', label='low-field limit')\n"
        "plt.ylim(1, 2e3); plt.xlabel('B (T)'); plt.ylabel('optimal cooling performance'); plt.legend()\n"
        "plt.savefig(os.path.join(here, 'field_scan.png'), dpi=150)\n"));
  write_metadata(ctx, files);
}

void cmd_spectrum(RunContext& ctx) {
  auto& c = ctx.config;
  const auto& dax = axis_or_default(c, "detuning", -70.0, 70.0, 141);
  const std::vector<double> detuning = dax.values();
  const auto tgrid = dynamics::TimeGrid::from_axis(axis_or_default(c, "tau", 0.0, 1.0, 101));
  const auto& o = c.spectrum.overhauser;

  double variance = 0.0;
  json prior;
  prior["mode"] = o.mode;
  if (o.mode == "cooled") {
    default_cooling_axes(c);
    const auto opt = cooling::optimize_drive(c.model, c.axis("rabi").values(), c.axis("gamma_eff").values());
    if (!opt.found) throw NumericalError("no-convergence", "no valid cooling point for the cooled prior");
    variance = c.model.thermal_variance() / opt.performance;
    prior["cooling_performance"] = opt.performance;
  } else if (o.mode == "variance") {
    variance = o.variance;
  } else if (o.mode == "sigma_mhz") {
    const double s = o.sigma_mhz / c.model.a_c;
    variance = s * s;
  }
  const auto p = o.mode == "delta"
                     ? thermometry::OverhauserDistribution::delta(o.iz, c.model.a_c)
                     : thermometry::OverhauserDistribution::gaussian(0.0, variance, o.points, o.sigma_range, c.model.a_c);
  prior["iz_variance"] = p.variance();
  prior["carrier_shift_sigma_mhz"] = c.model.a_c * std::sqrt(p.variance());
  prior["points"] = p.size();

  const auto map = dynamics::spectrum_map(detuning, tgrid, c.drive.rabi, c.model, c.magnon, p, c.integrator,
                                          c.spectrum.readout_scale, c.workers);

  Table t;
  t.labels = {"detuning_mhz", "tau_us", "p_down_raw", "p_down_scaled", "p_magnon"};
  for (std::size_t i = 0; i < map.detuning.size(); ++i)
    for (std::size_t k = 0; k < map.tau.size(); ++k)
      t.rows.push_back({map.detuning[i], map.tau[k], map.p_down(i, k), map.readout_scale * map.p_down(i, k),
                        map.p_sideband(i, k)});
  std::vector<std::string> files{write_table(ctx, "spectrum", t)};

  Table sl;
  sl.labels = {"detuning_mhz"};
  std::vector<std::vector<double>> cuts;
  json slices = json::array();
  for (const auto& [lo, hi] : c.spectrum.slices) {
    std::ostringstream name;
    name << "slice_" << format_number(lo) << "_" << format_number(hi) << "_us";
    sl.labels.push_back(name.str());
    cuts.push_back(map.slice(lo, hi));
    json entry{{"tau_lo_us", lo}, {"tau_hi_us", hi}, {"column", name.str()}};
    if (detuning.size() >= 4) {
      const auto guess = analysis::default_peak_guesses(detuning, cuts.back(), 1, 0.0, 8.0);
      entry["carrier_fit"] = fit_to_json(analysis::fit_gaussian_sum(detuning, cuts.back(), guess));
    }
    if (detuning.size() >= 16) {
      const auto guess = analysis::default_peak_guesses(detuning, cuts.back(), 5, c.model.omega_n(), 8.0);
      entry["five_peak_fit"] = fit_to_json(analysis::fit_gaussian_sum(detuning, cuts.back(), guess));
    }
    slices.push_back(entry);
  }
  for (std::size_t i = 0; i < detuning.size(); ++i) {
    std::vector<double> row{detuning[i]};
    for (const auto& cut : cuts) row.push_back(cut[i]);
    sl.rows.push_back(row);
  }
  files.push_back(write_table(ctx, "slices", sl));

  json s;
  s["command"] = ctx.command;
  s["omega_n_mhz"] = c.model.omega_n();
  s["t2_us"] = c.model.t2();
  s["readout_scale"] = map.readout_scale;
  s["overhauser"] = prior;
  s["slices"] = slices;
  write_json((std::filesystem::path(ctx.out_dir) / "summary.json").string(), s);
  files.push_back("summary.json");
  if (ctx.plot && ctx.format == "csv")
    files.push_back(write_plot_script(ctx,
        "d = load('spectrum.csv')\n"
        "x = np.unique(d['detuning_mhz']); t = np.unique(d['tau_us'])\n"
        "z = d['p_down_scaled'].reshape(len(x), len(t))\n"
        "fig, ax = plt.subplots(1, 2, figsize=(10, 4))\n"
        "m = ax[0].pcolormesh(x, t * 1e3, z.T, shading='auto'); fig.colorbar(m, ax=ax[0])\n"
        "ax[0].set_xlabel('detuning (MHz)'); ax[0].set_ylabel('tau (ns)')\n"
        "s = load('slices.csv')\n"
        "for name in s.dtype.names[1:]:\n"
        "    ax[1].plot(s['detuning_mhz'], s[name], label=name)\n"
        "ax[1].set_xlabel('detuning (MHz)'); ax[1].legend()\n"
        "fig.savefig(os.path.join(here, 'spectrum.png'), dpi=150)\n"));
  write_metadata(ctx, files);
}

void cmd_rabi(RunContext& ctx) {
  auto& c = ctx.config;
  const auto tgrid = dynamics::TimeGrid::from_axis(axis_or_default(c, "tau", 0.0, 3.0, 1501));
  std::vector<std::string> files;
  json runs = json::array();
  for (double rabi : c.rabi.rabi_values) {
    const int order = c.rabi.sideband_order;
    const double detuning =
        c.rabi.detuning ? *c.rabi.detuning : dynamics::sideband_resonance(c.model, c.magnon, rabi, order);
    const auto tr = dynamics::rabi_trace({rabi, 0.0, detuning}, c.model, c.magnon, tgrid, order, c.integrator);
    Table t;
    t.labels = {"tau_us", "p_down_raw", "p_down_scaled", "p_magnon"};
    for (std::size_t k = 0; k < tr.tau.size(); ++k)
      t.rows.push_back({tr.tau[k], tr.p_down[k], c.spectrum.readout_scale * tr.p_down[k], tr.p_magnon[k]});
    const std::string stem = rabi_stem(rabi);
    files.push_back(write_table(ctx, stem, t));

    json run{{"rabi_mhz", rabi}, {"detuning_mhz", detuning}, {"order", order}, {"file", files.back()}};
    auto freq = [&](const std::vector<double>& y, double fmax) -> json {
      try {
        return analysis::extract_oscillation_frequency(tr.tau, y, 0.0, fmax);
      } catch (const NumericalError&) {
        return nullptr;
      } catch (const DomainError&) {
        return nullptr;
      }
    };
    run["f_down_mhz"] = freq(tr.p_down, 0.0);
    run["f_slow_mhz"] = freq(tr.p_down, 0.5 * rabi);
    run["f_magnon_mhz"] = freq(tr.p_magnon, 0.5 * rabi);
    double pmax = 0.0;
    for (double v : tr.p_magnon) pmax = std::max(pmax, v);
    // Without any sideband transfer the slow window only sees noise.
    run["eta"] = run["f_slow_mhz"].is_null() || pmax < 0.01 ? json(nullptr)
                                                             : json(run["f_slow_mhz"].get<double>() / rabi);
    run["max_p_magnon"] = pmax;
    runs.push_back(run);
  }
  json s;
  s["command"] = ctx.command;
  s["omega_n_mhz"] = c.model.omega_n();
  s["runs"] = runs;
  write_json((std::filesystem::path(ctx.out_dir) / "summary.json").string(), s);
  files.push_back("summary.json");
  if (ctx.plot && ctx.format == "csv") {
    std::string body = "files = [";
    for (std::size_t i = 0; i + 1 < files.size(); ++i) body += "'" + files[i] + "', ";
    body +=
        "]\n"
        "fig, ax = plt.subplots(len(files), 1, figsize=(6, 2.5 * len(files)), squeeze=False)\n"
        "for a, f in zip(ax[:, 0], files):\n"
        "    d = load(f)\n"
        "    a.plot(d['tau_us'], d['p_down_scaled'], label='spin down (scaled)')\n"
        "    a.plot(d['tau_us'], d['p_magnon'], label='target nuclear state')\n"
        "    a.set_title(f); a.set_xlabel('tau (us)'); a.legend()\n"
        "fig.tight_layout(); fig.savefig(os.path.join(here, 'rabi.png'), dpi=150)\n";
    files.push_back(write_plot_script(ctx, body));
  }
  write_metadata(ctx, files);
}

void cmd_thermometry(RunContext& ctx) {
  auto& c = ctx.config;
  const auto betas = axis_or_default(c, "beta", 1.0, 10.0, 91).values();
  const long n = c.model.n_nuclei;
  const double f_curve = c.model.omega_n();
  Table t;
  t.labels = {"beta", "mean_iz", "variance", "polarization_fraction", "temperature_mk"};
  for (double b : betas) {
    const auto st = thermometry::thermal_state(b, n, f_curve);
    t.rows.push_back({b, st.mean_iz, st.variance, st.polarization_fraction, st.temperature_mk});
  }
  if (c.thermometry.include_infinite_beta) {
    const auto st = thermometry::thermal_state(INFINITY, n, f_curve);
    t.rows.push_back({INFINITY, st.mean_iz, st.variance, st.polarization_fraction, st.temperature_mk});
  }
  std::vector<std::string> files{write_table(ctx, "thermometry", t)};

  const double f_conv = c.model.gamma_ratio * c.thermometry.temperature_field;
  json conv = json::array();
  for (double v : c.thermometry.variance_targets) {
    const double beta = thermometry::invert_variance(v, n);
    conv.push_back({{"variance", v},
                    {"beta", beta},
                    {"temperature_field_t", c.thermometry.temperature_field},
                    {"temperature_mk", thermometry::effective_temperature(beta, f_conv)},
                    {"performance", c.model.thermal_variance() / v},
                    {"t2star_ns", 1e3 * thermometry::variance_to_t2star(v, c.model.a_c)}});
  }
  json s;
  s["command"] = ctx.command;
  s["n_nuclei"] = n;
  s["curve_field_t"] = c.model.b_field;
  s["temperature_scale_mk"] = thermometry::effective_temperature(1.0, f_curve);
  s["thermal_t2star_ns"] = 1e3 * thermometry::variance_to_t2star(c.model.thermal_variance(), c.model.a_c);
  s["conversions"] = conv;
  write_json((std::filesystem::path(ctx.out_dir) / "summary.json").string(), s);
  files.push_back("summary.json");
  if (ctx.plot && ctx.format == "csv")
    files.push_back(write_plot_script(ctx,
        "d = load('thermometry.csv')\n"
        "d = d[np.isfinite(d['beta'])]\n"
        "fig, ax = plt.subplots()\n"
        "ax.semilogy(d['beta'], d['variance'], label='variance')\n"
        "ax.set_xlabel('beta'); ax.set_ylabel('variance')\n"
        "ax2 = ax.twinx(); ax2.plot(d['beta'], d['polarization_fraction'], 'r', label='polarization')\n"
        "fig.savefig(os.path.join(here, 'thermometry.png'), dpi=150)\n"));
  write_metadata(ctx, files);
}

void cmd_fit(RunContext& ctx, const FitRequest& req) {
  std::ifstream in(req.input);
  if (!in) throw ConfigError("input", "cannot open " + req.input);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("input", "empty CSV");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw ConfigError("column", "no column named " + name + " in " + req.input);
  };
  const std::size_t xi = col(req.x_column), yi = col(req.y_column);
  std::vector<double> x, y;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() <= std::max(xi, yi)) throw ConfigError("input", "short CSV row");
    const double xv = std::stod(cells[xi]), yv = std::stod(cells[yi]);
    if (xv < req.x_min || xv > req.x_max || !std::isfinite(xv) || !std::isfinite(yv)) continue;
    x.push_back(xv);
    y.push_back(yv);
  }
  analysis::FitOptions opt;
  opt.seed = ctx.config.seed;
  json s;
  s["command"] = ctx.command;
  s["input"] = req.input;
  if (req.model == "gaussian_sum") {
    const double spacing = req.spacing > 0.0 ? req.spacing : ctx.config.model.omega_n();
    s["fit"] = fit_to_json(
        analysis::fit_gaussian_sum(x, y, analysis::default_peak_guesses(x, y, req.peaks, spacing, req.sigma), opt));
  } else if (req.model == "stretched_exponential") {
    s["fit"] = fit_to_json(analysis::fit_stretched_exponential(x, y, std::nullopt, opt));
  } else if (req.model == "exponential_relaxation") {
    s["fit"] = fit_to_json(analysis::fit_exponential_relaxation(x, y, opt));
  } else if (req.model == "frequency") {
    s["frequency"] = analysis::extract_oscillation_frequency(x, y);
  } else {
    throw ConfigError("model", "unknown fit model " + req.model);
  }
  write_json((std::filesystem::path(ctx.out_dir) / "fit.json").string(), s);
  write_metadata(ctx, {"fit.json"});
}

}  // namespace qdnuc::cli
