#include "xxz/cli/config.hpp"

#include "xxz/errors.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

namespace xxz::cli {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Reads keys from one JSON object and remembers which ones were consumed so
// leftovers can be reported.
class Section {
 public:
  Section(const json& j, std::string path) : path_(std::move(path)) {
    if (j.is_null()) return;
    if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
    obj_ = &j;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_ && obj_->contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    static const json null_value;
    return obj_ && obj_->contains(key) ? obj_->at(key) : null_value;
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_->at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where(key) + ": must be finite");
    return x;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key) || obj_->at(key).is_null()) return std::nullopt;
    return number(key, 0.0);
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_->at(key);
    // Sweeps write every value as a double, so integral floats are accepted.
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError(where(key) + ": expected an integer");
      return static_cast<int>(d);
    }
    if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
    return v.get<int>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_->at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_->at(key);
    if (v.is_number()) return {number(key, 0.0)};
    if (!v.is_array()) throw ConfigError(where(key) + ": expected a number or an array");
    std::vector<double> out;
    for (const json& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>()))
        throw ConfigError(where(key) + ": expected finite numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  Vec3 vector(const std::string& key, const Vec3& fallback) {
    if (!has(key)) return fallback;
    const std::vector<double> v = numbers(key, {});
    if (v.size() != 3) throw ConfigError(where(key) + ": expected three components");
    return Vec3(v[0], v[1], v[2]);
  }

  // Throws on any key that was never asked for.
  void finish() const {
    if (!obj_) return;
    for (const auto& [key, value] : obj_->items())
      if (!seen_.contains(key)) throw ConfigError(where(key) + ": unknown key");
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json* obj_ = nullptr;
  std::string path_;
  std::set<std::string> seen_;
};

// Accepts a list or {"min", "max", "n"}.
std::vector<double> grid(Section& s, const std::string& key, std::vector<double> fallback) {
  const json& v = s.raw(key);
  if (v.is_null()) return fallback;
  if (v.is_object()) {
    Section g(v, s.where(key));
    const double lo = g.number("min", 0.0);
    const double hi = g.number("max", 0.0);
    const int n = g.integer("n", 2);
    g.finish();
    if (n < 1) throw ConfigError(s.where(key) + ".n must be positive");
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
  }
  return s.numbers(key, std::move(fallback));
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

PhysicalParams parse_physical(const json& j) {
  Section s(j, "physical");
  PhysicalParams p;
  p.g = hz_to_angular(s.number("g_hz", angular_to_hz(p.g)));
  p.atom_detuning = hz_to_angular(s.number("delta_atom_hz", angular_to_hz(p.atom_detuning)));
  p.drive_detuning = hz_to_angular(s.number("delta_drive_hz", angular_to_hz(p.drive_detuning)));
  p.omega_per_photon = hz_to_angular(s.number("omega_per_photon_hz", angular_to_hz(p.omega_per_photon)));
  p.n_photons = s.number("n_photons", p.n_photons);
  p.kappa = hz_to_angular(s.number("kappa_hz", angular_to_hz(p.kappa)));
  p.larmor = hz_to_angular(s.number("larmor_hz", angular_to_hz(p.larmor)));
  p.theta = s.number("theta_deg", p.theta / kDeg) * kDeg;
  s.finish();
  p.validate();
  return p;
}

CouplingProfile parse_profile(const json& j, const std::string& path) {
  if (j.is_null()) return CouplingProfile::lorentzian();
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "lorentzian") return CouplingProfile::lorentzian();
    if (name == "uniform") return CouplingProfile::uniform();
    throw ConfigError(path + ": unknown profile '" + name + "'");
  }
  Section s(j, path);
  const json& table = s.raw("table");
  s.finish();
  if (!table.is_array()) throw ConfigError(path + ".table: expected [[zeta, c], ...]");
  std::vector<std::pair<double, double>> knots;
  for (const json& row : table) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
      throw ConfigError(path + ".table: expected [[zeta, c], ...]");
    knots.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  return CouplingProfile::from_table(std::move(knots));
}

EnsembleConfig parse_ensemble(const json& j, Protocol protocol, double window) {
  Section s(j, "ensemble");
  EnsembleConfig e;
  // Dephasing runs default to the measured initial contrast and a cloud
  // spanning exactly the winding window.
  if (protocol == Protocol::Dephase) {
    e.contrast = 0.67;
    e.sites = 200;
    e.cloud.zeta_min = -0.5 * window;
    e.cloud.zeta_max = 0.5 * window;
    e.profile = CouplingProfile::uniform();
  }
  e.atoms = s.number("atoms", e.atoms);
  e.sites = s.integer("sites", e.sites);
  {
    Section c(s.raw("cloud"), "ensemble.cloud");
    const std::string shape = c.string("shape", "uniform");
    if (shape == "uniform") e.cloud.shape = CloudShape::Uniform;
    else if (shape == "gaussian") e.cloud.shape = CloudShape::Gaussian;
    else throw ConfigError("ensemble.cloud.shape: expected uniform or gaussian");
    e.cloud.zeta_min = c.number("zeta_min", e.cloud.zeta_min);
    e.cloud.zeta_max = c.number("zeta_max", e.cloud.zeta_max);
    e.cloud.center = c.number("center", e.cloud.center);
    e.cloud.sigma = c.number("sigma", e.cloud.sigma);
    c.finish();
  }
  if (s.has("profile")) e.profile = parse_profile(s.raw("profile"), "ensemble.profile");
  e.contrast = s.number("contrast", e.contrast);
  e.rayleigh_range_m = s.number("rayleigh_range_m", e.rayleigh_range_m);
  e.spin_noise = s.number("spin_noise", e.spin_noise);
  s.finish();
  if (!(e.spin_noise >= 0.0)) throw ConfigError("ensemble.spin_noise must be non-negative");
  if (!(e.rayleigh_range_m > 0.0)) throw ConfigError("ensemble.rayleigh_range_m must be positive");
  return e;
}

CouplingSet parse_couplings(const json& j) {
  Section s(j, "couplings");
  CouplingSet c;
  c.j_xy = hz_to_angular(s.number("jxy_hz", 0.0));
  c.j_z = hz_to_angular(s.number("jz_hz", 0.0));
  c.h_x = hz_to_angular(s.number("hx_hz", 0.0));
  c.h_z = hz_to_angular(s.number("hz_hz", 0.0));
  c.gradient = hz_to_angular(s.number("gradient_hz_per_zr", 0.0));
  c.scattering = s.number("scattering_rate_per_s", 0.0);
  for (double x : s.numbers("inhom_hz", {})) c.inhom.push_back(hz_to_angular(x));
  s.finish();
  c.validate();
  return c;
}

InteractionKind interaction_from_string(const std::string& s) {
  if (s == "none") return InteractionKind::None;
  if (s == "ising") return InteractionKind::Ising;
  if (s == "xy") return InteractionKind::XY;
  throw ConfigError("options.interaction: expected none, ising or xy");
}

std::string to_string(InteractionKind k) {
  switch (k) {
    case InteractionKind::None: return "none";
    case InteractionKind::Ising: return "ising";
    case InteractionKind::XY: return "xy";
  }
  return "none";
}

json profile_json(const CouplingProfile& p) {
  switch (p.kind) {
    case CouplingProfile::Kind::Uniform: return "uniform";
    case CouplingProfile::Kind::Lorentzian: return "lorentzian";
    case CouplingProfile::Kind::Table: {
      json rows = json::array();
      for (const auto& [z, c] : p.table) rows.push_back({z, c});
      return {{"table", rows}};
    }
  }
  return "lorentzian";
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Evolve: return "evolve";
    case Protocol::Tomography: return "tomography";
    case Protocol::Susceptibility: return "susceptibility";
    case Protocol::PhaseDiagram: return "phase-diagram";
    case Protocol::Dephase: return "dephase";
  }
  return "evolve";
}

Protocol protocol_from_string(const std::string& name) {
  for (Protocol p : {Protocol::Evolve, Protocol::Tomography, Protocol::Susceptibility,
                     Protocol::PhaseDiagram, Protocol::Dephase})
    if (to_string(p) == name) return p;
  throw ConfigError("unknown protocol '" + name + "'");
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  Section top(j, "");
  RunConfig cfg;
  cfg.protocol = protocol_from_string(top.string("protocol", "evolve"));
  cfg.physical = parse_physical(top.raw("physical"));
  cfg.couplings = parse_couplings(top.raw("couplings"));
  cfg.sample_dt = top.number("sample_dt", cfg.sample_dt);
  if (!(cfg.sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
  cfg.output_dir = top.string("output_dir", cfg.output_dir.string());
  {
    const json& seed = top.raw("seed");
    if (!seed.is_null()) {
      if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
        throw ConfigError("seed must be a non-negative integer");
      cfg.seed = seed.get<std::uint64_t>();
    }
  }

  Section o(top.raw("options"), "options");
  double window = cfg.dephase.options.window_length;
  switch (cfg.protocol) {
    case Protocol::Evolve: {
      EvolveSettings& e = cfg.evolve;
      e.initial = o.string("initial", e.initial);
      if (e.initial != "polarized" && e.initial != "texture")
        throw ConfigError("options.initial: expected polarized or texture");
      e.direction = o.vector("direction", e.direction);
      e.duration = o.number("duration", e.duration);
      e.max_step_angle = o.number("max_step_angle", e.max_step_angle);
      e.probes = o.numbers("probes", e.probes);
      e.winding_length = o.optional_number("winding_length");
      if (!(e.duration > 0.0)) throw ConfigError("options.duration must be positive");
      if (std::abs(e.direction.norm() - 1.0) > 1e-9) throw ConfigError("options.direction must be a unit vector");
      break;
    }
    case Protocol::Tomography: {
      TomographySettings& t = cfg.tomography;
      t.theta_deg = o.numbers("theta_deg", {cfg.physical.theta / kDeg});
      t.delta_signs.clear();
      for (double s : o.numbers("delta_sign", {1.0})) {
        if (s != 1.0 && s != -1.0) throw ConfigError("options.delta_sign entries must be +1 or -1");
        t.delta_signs.push_back(static_cast<int>(s));
      }
      t.options.duration_ising = o.number("duration_ising", t.options.duration_ising);
      t.options.duration_xy = o.number("duration_xy", t.options.duration_xy);
      t.options.samples = o.integer("samples", t.options.samples);
      t.options.probe_b = o.optional_number("probe_b");
      t.options.probe_c = o.optional_number("probe_c");
      t.options.max_step_angle = o.number("max_step_angle", t.options.max_step_angle);
      for (double th : t.theta_deg)
        if (th < 0.0 || th > 90.0) throw ConfigError("options.theta_deg must lie in [0, 90]");
      break;
    }
    case Protocol::Susceptibility: {
      SusceptibilitySettings& s = cfg.susceptibility;
      s.options.epsilon = o.number("epsilon", s.options.epsilon);
      s.options.ramp_duration = o.number("ramp_duration", s.options.ramp_duration);
      s.options.ramp_knots = o.integer("ramp_knots", s.options.ramp_knots);
      s.options.sample_dt = o.number("sample_dt", s.options.sample_dt);
      s.options.max_step_angle = o.number("max_step_angle", s.options.max_step_angle);
      s.curve_lambda_eff_over_hx = grid(o, "curve_lambda_eff_over_hx", {});
      s.curve_axis = o.string("curve_axis", s.curve_axis);
      if (s.curve_axis != "z" && s.curve_axis != "xy") throw ConfigError("options.curve_axis: expected z or xy");
      break;
    }
    case Protocol::PhaseDiagram: {
      PhaseDiagramSettings& p = cfg.phase_diagram;
      p.lambda_z_over_hx = grid(o, "lambda_z_over_hx", linspace(-2.0, 2.0, 41));
      p.lambda_xy_over_hx = grid(o, "lambda_xy_over_hx", linspace(-2.0, 2.0, 41));
      p.cut_lambda0_over_hx = o.optional_number("cut_lambda0_over_hx");
      p.cut_theta_deg = grid(o, "cut_theta_deg", p.cut_lambda0_over_hx ? linspace(0.0, 90.0, 91) : std::vector<double>{});
      break;
    }
    case Protocol::Dephase: {
      DephasingOptions& d = cfg.dephase.options;
      if (const auto hx = o.optional_number("hx_pre_hz")) d.hx_pre = hz_to_angular(*hx);
      d.duration = o.number("duration", d.duration);
      d.sample_dt = cfg.sample_dt;
      d.window_length = o.number("window_length", d.window_length);
      d.interaction = interaction_from_string(o.string("interaction", "none"));
      d.lambda_over_muL = o.number("lambda_over_muL", d.lambda_over_muL);
      d.max_step_angle = o.number("max_step_angle", d.max_step_angle);
      // The gradient defaults to the measured one unless couplings set it.
      if (cfg.couplings.gradient == 0.0) cfg.couplings.gradient = d.gradient;
      d.gradient = cfg.couplings.gradient;
      d.scattering = cfg.couplings.scattering;
      window = d.window_length;
      break;
    }
  }
  o.finish();

  cfg.ensemble = parse_ensemble(top.raw("ensemble"), cfg.protocol, window);
  top.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["protocol"] = to_string(c.protocol);
  const PhysicalParams& p = c.physical;
  j["physical"] = {{"g_hz", angular_to_hz(p.g)},
                   {"delta_atom_hz", angular_to_hz(p.atom_detuning)},
                   {"delta_drive_hz", angular_to_hz(p.drive_detuning)},
                   {"omega_per_photon_hz", angular_to_hz(p.omega_per_photon)},
                   {"n_photons", p.n_photons},
                   {"kappa_hz", angular_to_hz(p.kappa)},
                   {"larmor_hz", angular_to_hz(p.larmor)},
                   {"theta_deg", p.theta / kDeg}};
  const EnsembleConfig& e = c.ensemble;
  j["ensemble"] = {{"atoms", e.atoms},
                   {"sites", e.sites},
                   {"cloud",
                    {{"shape", e.cloud.shape == CloudShape::Uniform ? "uniform" : "gaussian"},
                     {"zeta_min", e.cloud.zeta_min},
                     {"zeta_max", e.cloud.zeta_max},
                     {"center", e.cloud.center},
                     {"sigma", e.cloud.sigma}}},
                   {"profile", profile_json(e.profile)},
                   {"contrast", e.contrast},
                   {"rayleigh_range_m", e.rayleigh_range_m},
                   {"spin_noise", e.spin_noise}};
  const CouplingSet& k = c.couplings;
  json inhom = json::array();
  for (double x : k.inhom) inhom.push_back(angular_to_hz(x));
  j["couplings"] = {{"jxy_hz", angular_to_hz(k.j_xy)},
                    {"jz_hz", angular_to_hz(k.j_z)},
                    {"hx_hz", angular_to_hz(k.h_x)},
                    {"hz_hz", angular_to_hz(k.h_z)},
                    {"gradient_hz_per_zr", angular_to_hz(k.gradient)},
                    {"scattering_rate_per_s", k.scattering},
                    {"inhom_hz", inhom}};

  json o;
  switch (c.protocol) {
    case Protocol::Evolve:
      o = {{"initial", c.evolve.initial},
           {"direction", vec_json(c.evolve.direction)},
           {"duration", c.evolve.duration},
           {"max_step_angle", c.evolve.max_step_angle},
           {"probes", c.evolve.probes},
           {"winding_length", c.evolve.winding_length ? json(*c.evolve.winding_length) : json(nullptr)}};
      break;
    case Protocol::Tomography: {
      const TomographyOptions& t = c.tomography.options;
      o = {{"theta_deg", c.tomography.theta_deg},
           {"delta_sign", c.tomography.delta_signs},
           {"duration_ising", t.duration_ising},
           {"duration_xy", t.duration_xy},
           {"samples", t.samples},
           {"probe_b", t.probe_b ? json(*t.probe_b) : json(nullptr)},
           {"probe_c", t.probe_c ? json(*t.probe_c) : json(nullptr)},
           {"max_step_angle", t.max_step_angle}};
      break;
    }
    case Protocol::Susceptibility: {
      const SusceptibilityOptions& s = c.susceptibility.options;
      o = {{"epsilon", s.epsilon},
           {"ramp_duration", s.ramp_duration},
           {"ramp_knots", s.ramp_knots},
           {"sample_dt", s.sample_dt},
           {"max_step_angle", s.max_step_angle},
           {"curve_lambda_eff_over_hx", c.susceptibility.curve_lambda_eff_over_hx},
           {"curve_axis", c.susceptibility.curve_axis}};
      break;
    }
    case Protocol::PhaseDiagram: {
      const PhaseDiagramSettings& p = c.phase_diagram;
      o = {{"lambda_z_over_hx", p.lambda_z_over_hx},
           {"lambda_xy_over_hx", p.lambda_xy_over_hx},
           {"cut_lambda0_over_hx", p.cut_lambda0_over_hx ? json(*p.cut_lambda0_over_hx) : json(nullptr)},
           {"cut_theta_deg", p.cut_theta_deg}};
      break;
    }
    case Protocol::Dephase: {
      const DephasingOptions& d = c.dephase.options;
      o = {{"hx_pre_hz", d.hx_pre ? json(angular_to_hz(*d.hx_pre)) : json(nullptr)},
           {"duration", d.duration},
           {"window_length", d.window_length},
           {"interaction", to_string(d.interaction)},
           {"lambda_over_muL", d.lambda_over_muL},
           {"max_step_angle", d.max_step_angle}};
      break;
    }
  }
  j["options"] = o;
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  j["sample_dt"] = c.sample_dt;
  return j;
}

EnsembleState build_ensemble(const RunConfig& config) {
  const EnsembleConfig& e = config.ensemble;
  EnsembleState state = make_ensemble(e.atoms, e.sites, e.cloud, e.profile, e.contrast);
  state.rayleigh_range_m = e.rayleigh_range_m;
  return state;
}

}  // namespace xxz::cli
