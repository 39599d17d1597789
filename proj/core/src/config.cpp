#include "qdnuc/core/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qdnuc/core/error.hpp"

namespace qdnuc {

using json = nlohmann::ordered_json;

namespace {

// Walks one JSON object, reading known keys and rejecting the rest.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "config" : path_, "expected an object");
  }

  template <class T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    auto it = node_.find(key);
    if (it == node_.end()) return;
    convert(*it, field(key), out);
  }

  template <class T>
  void read(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    auto it = node_.find(key);
    if (it == node_.end()) return;
    if (it->is_null()) {
      out.reset();
      return;
    }
    T v{};
    convert(*it, field(key), v);
    out = v;
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
  }

 private:
  static void convert(const json& v, const std::string& f, double& out) {
    if (!v.is_number()) throw ConfigError(f, "expected a number");
    out = v.get<double>();
  }
  static void convert(const json& v, const std::string& f, long& out) {
    if (!v.is_number_integer() && !(v.is_number() && v.get<double>() == static_cast<long>(v.get<double>())))
      throw ConfigError(f, "expected an integer");
    out = static_cast<long>(v.get<double>());
  }
  static void convert(const json& v, const std::string& f, int& out) {
    long l = 0;
    convert(v, f, l);
    out = static_cast<int>(l);
  }
  static void convert(const json& v, const std::string& f, std::uint64_t& out) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
      throw ConfigError(f, "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }
  static void convert(const json& v, const std::string& f, bool& out) {
    if (!v.is_boolean()) throw ConfigError(f, "expected true or false");
    out = v.get<bool>();
  }
  static void convert(const json& v, const std::string& f, std::string& out) {
    if (!v.is_string()) throw ConfigError(f, "expected a string");
    out = v.get<std::string>();
  }
  static void convert(const json& v, const std::string& f, std::vector<double>& out) {
    if (!v.is_array()) throw ConfigError(f, "expected an array of numbers");
    out.clear();
    for (const auto& e : v) {
      double d = 0.0;
      convert(e, f, d);
      out.push_back(d);
    }
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_model(const json& node, ModelParams& m) {
  Section s(node, "model");
  s.read("n_nuclei", m.n_nuclei);
  s.read("spin", m.spin);
  s.read("a_c", m.a_c);
  s.read("a_nc", m.a_nc);
  s.read("b_q", m.b_q);
  s.read("theta", m.theta);
  s.read("alpha", m.alpha);
  s.read("gamma_ratio", m.gamma_ratio);
  s.read("gamma0", m.gamma0);
  s.read("delta_omega_n", m.delta_omega_n);
  s.read("eta_cool", m.eta_cool);
  s.read("eta_ref_field", m.eta_ref_field);
  s.read("gamma_em_ref", m.gamma_em_ref);
  s.read("b_ref", m.b_ref);
  s.read("b_field", m.b_field);
  s.read("t2_us", m.t2_us);
  if (const json* t = s.child("t2_table")) {
    if (!t->is_array()) throw ConfigError("model.t2_table", "expected an array of [field_t, t2_us] pairs");
    m.t2_table.points.clear();
    for (const auto& e : *t) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ConfigError("model.t2_table", "expected [field_t, t2_us] pairs");
      m.t2_table.points.push_back({e[0].get<double>(), e[1].get<double>()});
    }
  }
  s.finish();
}

void read_drive(const json& node, DriveSettings& d) {
  Section s(node, "drive");
  s.read("rabi", d.rabi);
  s.read("pump_rabi", d.pump_rabi);
  s.read("detuning", d.detuning);
  s.finish();
}

void read_magnon(const json& node, MagnonParams& mp) {
  Section s(node, "magnon");
  s.read("eta1", mp.eta1);
  s.read("eta2", mp.eta2);
  s.read("gamma_n", mp.gamma_n);
  s.read("delta_q", mp.delta_q);
  s.read("anharmonic", mp.anharmonic);
  s.finish();
}

void read_sweep(const json& node, std::vector<SweepAxis>& axes) {
  if (!node.is_object()) throw ConfigError("sweep", "expected an object of named axes");
  axes.clear();
  for (auto it = node.begin(); it != node.end(); ++it) {
    SweepAxis a;
    a.name = it.key();
    Section s(it.value(), "sweep." + a.name);
    s.read("min", a.min);
    s.read("max", a.max);
    s.read("steps", a.steps);
    if (!it.value().contains("min")) throw ConfigError("sweep." + a.name + ".min", "required");
    if (!it.value().contains("max")) a.max = a.min;
    s.finish();
    axes.push_back(a);
  }
}

void read_spectrum(const json& node, SpectrumSettings& sp) {
  Section s(node, "spectrum");
  s.read("readout_scale", sp.readout_scale);
  if (const json* o = s.child("overhauser")) {
    Section so(*o, "spectrum.overhauser");
    so.read("mode", sp.overhauser.mode);
    so.read("variance", sp.overhauser.variance);
    so.read("sigma_mhz", sp.overhauser.sigma_mhz);
    so.read("iz", sp.overhauser.iz);
    so.read("points", sp.overhauser.points);
    so.read("sigma_range", sp.overhauser.sigma_range);
    so.finish();
  }
  if (const json* sl = s.child("slices")) {
    if (!sl->is_array()) throw ConfigError("spectrum.slices", "expected an array of [tau_lo, tau_hi] pairs");
    sp.slices.clear();
    for (const auto& e : *sl) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ConfigError("spectrum.slices", "expected [tau_lo, tau_hi] pairs");
      sp.slices.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
  }
  s.finish();
}

void read_rabi(const json& node, RabiSettings& r) {
  Section s(node, "rabi");
  s.read("rabi_values", r.rabi_values);
  s.read("sideband_order", r.sideband_order);
  if (const json* d = s.child("detuning")) {
    if (d->is_string() && d->get<std::string>() == "auto") {
      r.detuning.reset();
    } else if (d->is_number()) {
      r.detuning = d->get<double>();
    } else if (!d->is_null()) {
      throw ConfigError("rabi.detuning", "expected a number or \"auto\"");
    }
  }
  s.finish();
}

void read_thermometry(const json& node, ThermometrySettings& t) {
  Section s(node, "thermometry");
  s.read("variance_targets", t.variance_targets);
  s.read("temperature_field", t.temperature_field);
  s.read("include_infinite_beta", t.include_infinite_beta);
  s.finish();
}

json to_json(const RunConfig& c) {
  json j;
  const auto& m = c.model;
  json t2 = json::array();
  for (const auto& p : m.t2_table.points) t2.push_back({p.field_t, p.t2_us});
  j["model"] = {
      {"n_nuclei", m.n_nuclei},
      {"spin", m.spin},
      {"a_c", m.a_c},
      {"a_nc", m.a_nc ? json(*m.a_nc) : json(nullptr)},
      {"b_q", m.b_q},
      {"theta", m.theta},
      {"alpha", m.alpha},
      {"gamma_ratio", m.gamma_ratio},
      {"gamma0", m.gamma0},
      {"delta_omega_n", m.delta_omega_n},
      {"eta_cool", m.eta_cool},
      {"eta_ref_field", m.eta_ref_field},
      {"gamma_em_ref", m.gamma_em_ref},
      {"b_ref", m.b_ref},
      {"b_field", m.b_field},
      {"t2_us", m.t2_us ? json(*m.t2_us) : json(nullptr)},
      {"t2_table", t2},
  };
  j["drive"] = {{"rabi", c.drive.rabi}, {"pump_rabi", c.drive.pump_rabi}, {"detuning", c.drive.detuning}};
  j["magnon"] = {{"eta1", c.magnon.eta1},
                 {"eta2", c.magnon.eta2},
                 {"gamma_n", c.magnon.gamma_n},
                 {"delta_q", c.magnon.delta_q},
                 {"anharmonic", c.magnon.anharmonic}};
  json sweep = json::object();
  for (const auto& a : c.sweep) sweep[a.name] = {{"min", a.min}, {"max", a.max}, {"steps", a.steps}};
  j["sweep"] = sweep;
  j["integrator"] = {{"max_step_us", c.integrator.max_step_us}, {"rel_tol", c.integrator.rel_tol}};
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["output"] = {{"dir", c.output.dir}, {"plot_script", c.output.plot_script}};
  const auto& o = c.spectrum.overhauser;
  json slices = json::array();
  for (const auto& [lo, hi] : c.spectrum.slices) slices.push_back({lo, hi});
  j["spectrum"] = {{"overhauser",
                    {{"mode", o.mode},
                     {"variance", o.variance},
                     {"sigma_mhz", o.sigma_mhz},
                     {"iz", o.iz},
                     {"points", o.points},
                     {"sigma_range", o.sigma_range}}},
                   {"slices", slices},
                   {"readout_scale", c.spectrum.readout_scale}};
  j["rabi"] = {{"rabi_values", c.rabi.rabi_values},
               {"detuning", c.rabi.detuning ? json(*c.rabi.detuning) : json("auto")},
               {"sideband_order", c.rabi.sideband_order}};
  j["thermometry"] = {{"variance_targets", c.thermometry.variance_targets},
                      {"temperature_field", c.thermometry.temperature_field},
                      {"include_infinite_beta", c.thermometry.include_infinite_beta}};
  return j;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i)
    v[i] = steps == 1 ? min : min + (max - min) * static_cast<double>(i) / (steps - 1);
  return v;
}

const SweepAxis* RunConfig::find_axis(const std::string& name) const {
  for (const auto& a : sweep)
    if (a.name == name) return &a;
  return nullptr;
}

const SweepAxis& RunConfig::axis(const std::string& name) const {
  if (const auto* a = find_axis(name)) return *a;
  throw ConfigError("sweep." + name, "axis required by this command is missing");
}

void RunConfig::validate() const {
  model.validate();
  drive.validate();
  magnon.validate();
  for (const auto& a : sweep) {
    const std::string f = "sweep." + a.name;
    if (a.steps < 1) throw ConfigError(f + ".steps", "must be >= 1");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw ConfigError(f, "bounds must be finite");
    if (a.steps > 1 && !(a.max > a.min)) throw ConfigError(f + ".max", "must exceed min when steps > 1");
  }
  if (!(integrator.rel_tol > 0.0)) throw ConfigError("integrator.rel_tol", "must be > 0");
  if (!(integrator.max_step_us >= 0.0)) throw ConfigError("integrator.max_step_us", "must be >= 0");
  if (workers < 1) throw ConfigError("workers", "must be >= 1");
  if (output.dir.empty()) throw ConfigError("output.dir", "must not be empty");
  const auto& o = spectrum.overhauser;
  if (o.mode != "cooled" && o.mode != "variance" && o.mode != "sigma_mhz" && o.mode != "delta")
    throw ConfigError("spectrum.overhauser.mode", "expected cooled, variance, sigma_mhz or delta");
  if (o.mode == "variance" && !(o.variance > 0.0))
    throw ConfigError("spectrum.overhauser.variance", "must be > 0");
  if (o.mode == "sigma_mhz" && !(o.sigma_mhz > 0.0))
    throw ConfigError("spectrum.overhauser.sigma_mhz", "must be > 0");
  if (o.points < 1) throw ConfigError("spectrum.overhauser.points", "must be >= 1");
  if (!(o.sigma_range > 0.0)) throw ConfigError("spectrum.overhauser.sigma_range", "must be > 0");
  for (const auto& [lo, hi] : spectrum.slices)
    if (!(hi >= lo && lo >= 0.0)) throw ConfigError("spectrum.slices", "need 0 <= tau_lo <= tau_hi");
  if (!(spectrum.readout_scale > 0.0 && spectrum.readout_scale <= 1.0))
    throw ConfigError("spectrum.readout_scale", "must lie in (0, 1]");
  for (double r : rabi.rabi_values)
    if (!(r > 0.0)) throw ConfigError("rabi.rabi_values", "must be > 0");
  if (rabi.sideband_order == 0 || rabi.sideband_order < -2 || rabi.sideband_order > 2)
    throw ConfigError("rabi.sideband_order", "must be one of -2, -1, 1, 2");
  for (double v : thermometry.variance_targets)
    if (!(v > 0.0)) throw ConfigError("thermometry.variance_targets", "must be > 0");
  if (!(thermometry.temperature_field > 0.0))
    throw ConfigError("thermometry.temperature_field", "must be > 0");
}

RunConfig parse_config(const std::string& text) {
  json root;
  bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) {
    root = json::object();
  } else {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("", std::string("parse error: ") + e.what());
    }
  }
  RunConfig c;
  Section s(root, "");
  if (const json* n = s.child("model")) read_model(*n, c.model);
  if (const json* n = s.child("drive")) read_drive(*n, c.drive);
  if (const json* n = s.child("magnon")) read_magnon(*n, c.magnon);
  if (const json* n = s.child("sweep")) read_sweep(*n, c.sweep);
  if (const json* n = s.child("integrator")) {
    Section si(*n, "integrator");
    si.read("max_step_us", c.integrator.max_step_us);
    si.read("rel_tol", c.integrator.rel_tol);
    si.finish();
  }
  s.read("seed", c.seed);
  s.read("workers", c.workers);
  if (const json* n = s.child("output")) {
    Section so(*n, "output");
    so.read("dir", c.output.dir);
    so.read("plot_script", c.output.plot_script);
    so.finish();
  }
  if (const json* n = s.child("spectrum")) read_spectrum(*n, c.spectrum);
  if (const json* n = s.child("rabi")) read_rabi(*n, c.rabi);
  if (const json* n = s.child("thermometry")) read_thermometry(*n, c.thermometry);
  s.finish();
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

}  // namespace qdnuc
