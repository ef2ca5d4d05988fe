#include "smoothpic/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "smoothpic/error.hpp"

namespace smoothpic {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& key, const std::string& what) { throw InvalidArgument(key + ": " + what); }

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) fail(key, "expected a real number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) fail(key, "expected an integer, got '" + text + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) fail(key, "expected a non-negative integer, got '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  fail(key, "expected a boolean, got '" + text + "'");
}

// Kernel keys are collected first and combined once the whole file is read.
struct KernelDraft {
  std::string family = "laplace";
  double width = 1.0;
  int order = 4;
};

KernelDraft draft_of(const SimulationConfig& c) {
  if (!c.kernel) return {"none", 1.0, 4};
  return {to_string(c.kernel->family), c.kernel->width, c.kernel->order};
}

struct KeyDescriptor {
  const char* section;
  const char* name;
  const char* doc;
  std::function<void(SimulationConfig&, KernelDraft&, const std::string&, const std::string&)> set;
  std::function<std::string(const SimulationConfig&)> get;
};

std::string loading_name(Loading l) { return l == Loading::Quiet ? "quiet" : "random"; }

const std::vector<KeyDescriptor>& descriptors() {
  using C = SimulationConfig;
  using D = KernelDraft;
  using S = std::string;
  static const std::vector<KeyDescriptor> keys = {
      {"model", "type", "vp1d | vortex2d | vm1d2v | kernel_check",
       [](C& c, D&, const S& k, const S& v) {
         try {
           c.model = parse_model_type(v);
         } catch (const InvalidArgument&) {
           fail(k, "unknown model '" + v + "'");
         }
       },
       [](const C& c) { return to_string(c.model); }},
      {"model", "dt", "time step, > 0", [](C& c, D&, const S& k, const S& v) { c.dt = to_double(k, v); },
       [](const C& c) { return format_double(c.dt); }},
      {"model", "n_steps", "number of steps, >= 1",
       [](C& c, D&, const S& k, const S& v) { c.n_steps = to_unsigned(k, v); },
       [](const C& c) { return std::to_string(c.n_steps); }},
      {"model", "seed", "sampler seed (non-negative integer)",
       [](C& c, D&, const S& k, const S& v) { c.seed = to_unsigned(k, v); },
       [](const C& c) { return std::to_string(c.seed); }},
      {"model", "n_cells", "spline cells (vm1d2v) or grid size (kernel_check)",
       [](C& c, D&, const S& k, const S& v) { c.n_cells = static_cast<int>(to_integer(k, v)); },
       [](const C& c) { return std::to_string(c.n_cells); }},
      {"model", "degree", "spline degree p of V0, 1..9",
       [](C& c, D&, const S& k, const S& v) { c.degree = static_cast<int>(to_integer(k, v)); },
       [](const C& c) { return std::to_string(c.degree); }},
      {"model", "coupling", "attractive | repulsive (vp1d pair term sign)",
       [](C& c, D&, const S& k, const S& v) {
         try {
           c.coupling = parse_pair_coupling(v);
         } catch (const InvalidArgument&) {
           fail(k, "expected attractive or repulsive, got '" + v + "'");
         }
       },
       [](const C& c) { return to_string(c.coupling); }},
      {"model", "cache_resolution", "filtered-basis samples per cell, >= 6",
       [](C& c, D&, const S& k, const S& v) { c.cache_resolution = static_cast<int>(to_integer(k, v)); },
       [](const C& c) { return std::to_string(c.cache_resolution); }},
      {"model", "midpoint_tol", "implicit midpoint residual tolerance, > 0",
       [](C& c, D&, const S& k, const S& v) { c.midpoint_tol = to_double(k, v); },
       [](const C& c) { return format_double(c.midpoint_tol); }},
      {"model", "midpoint_max_iter", "implicit midpoint iteration cap, >= 1",
       [](C& c, D&, const S& k, const S& v) { c.midpoint_max_iter = static_cast<int>(to_integer(k, v)); },
       [](const C& c) { return std::to_string(c.midpoint_max_iter); }},
      {"kernel", "family", "laplace | gaussian | bspline | none",
       [](C&, D& d, const S& k, const S& v) {
         if (v != "none" && v != "laplace" && v != "gaussian" && v != "bspline") fail(k, "unknown kernel family '" + v + "'");
         d.family = v;
       },
       [](const C& c) { return draft_of(c).family; }},
      {"kernel", "width", "alpha (laplace), sigma (gaussian) or support half-width (bspline), > 0",
       [](C&, D& d, const S& k, const S& v) { d.width = to_double(k, v); },
       [](const C& c) { return format_double(draft_of(c).width); }},
      {"kernel", "order", "B-spline kernel order: 2, 4, 6 or 8",
       [](C&, D& d, const S& k, const S& v) { d.order = static_cast<int>(to_integer(k, v)); },
       [](const C& c) { return std::to_string(draft_of(c).order); }},
      {"scenario", "name", "landau_damping | two_stream | weibel | two_vortex | two_particle (empty: model default)",
       [](C& c, D&, const S&, const S& v) { c.scenario.name = v; }, [](const C& c) { return c.scenario.name; }},
      {"scenario", "n_particles", "number of particles, >= 1",
       [](C& c, D&, const S& k, const S& v) { c.scenario.n_particles = to_unsigned(k, v); },
       [](const C& c) { return std::to_string(c.scenario.n_particles); }},
      {"scenario", "epsilon", "density perturbation amplitude, |epsilon| < 1",
       [](C& c, D&, const S& k, const S& v) { c.scenario.epsilon = to_double(k, v); },
       [](const C& c) { return format_double(c.scenario.epsilon); }},
      {"scenario", "wavenumber", "perturbation wavenumber k, domain L = 2 pi / k, > 0",
       [](C& c, D&, const S& k, const S& v) { c.scenario.wavenumber = to_double(k, v); },
       [](const C& c) { return format_double(c.scenario.wavenumber); }},
      {"scenario", "thermal_velocity", "thermal spread, >= 0",
       [](C& c, D&, const S& k, const S& v) { c.scenario.thermal_velocity = to_double(k, v); },
       [](const C& c) { return format_double(c.scenario.thermal_velocity); }},
      {"scenario", "drift_velocity", "beam drift (two_stream) or initial speed (two_particle)",
       [](C& c, D&, const S& k, const S& v) { c.scenario.drift_velocity = to_double(k, v); },
       [](const C& c) { return format_double(c.scenario.drift_velocity); }},
      {"scenario", "circulation", "vortex circulation, != 0",
       [](C& c, D&, const S& k, const S& v) { c.scenario.circulation = to_double(k, v); },
       [](const C& c) { return format_double(c.scenario.circulation); }},
      {"scenario", "separation", "initial separation (two_vortex, two_particle), >= 0",
       [](C& c, D&, const S& k, const S& v) { c.scenario.separation = to_double(k, v); },
       [](const C& c) { return format_double(c.scenario.separation); }},
      {"scenario", "anisotropy", "temperature ratio T_y / T_x (weibel), > 0",
       [](C& c, D&, const S& k, const S& v) { c.scenario.anisotropy = to_double(k, v); },
       [](const C& c) { return format_double(c.scenario.anisotropy); }},
      {"scenario", "total_mass", "total particle weight, <= 0 selects the scenario default",
       [](C& c, D&, const S& k, const S& v) { c.scenario.total_mass = to_double(k, v); },
       [](const C& c) { return format_double(c.scenario.total_mass); }},
      {"scenario", "loading", "quiet | random",
       [](C& c, D&, const S& k, const S& v) {
         if (v == "quiet") c.scenario.loading = Loading::Quiet;
         else if (v == "random") c.scenario.loading = Loading::Random;
         else fail(k, "expected quiet or random, got '" + v + "'");
       },
       [](const C& c) { return loading_name(c.scenario.loading); }},
      {"scenario", "b_perturbation", "initial Bz amplitude, Bz = b cos(kx) (vm1d2v)",
       [](C& c, D&, const S& k, const S& v) { c.b_perturbation = to_double(k, v); },
       [](const C& c) { return format_double(c.b_perturbation); }},
      {"output", "dir", "output directory", [](C& c, D&, const S&, const S& v) { c.output_dir = v; },
       [](const C& c) { return c.output_dir; }},
      {"output", "interval", "diagnostics row every N steps, >= 1",
       [](C& c, D&, const S& k, const S& v) { c.output_interval = to_unsigned(k, v); },
       [](const C& c) { return std::to_string(c.output_interval); }},
      {"output", "snapshot_interval", "particle snapshot every N steps, 0 disables",
       [](C& c, D&, const S& k, const S& v) { c.snapshot_interval = to_unsigned(k, v); },
       [](const C& c) { return std::to_string(c.snapshot_interval); }},
      {"output", "dump_matrices", "write mass and derivative matrices as CSV (vm1d2v)",
       [](C& c, D&, const S& k, const S& v) { c.dump_matrices = to_bool(k, v); },
       [](const C& c) { return std::string(c.dump_matrices ? "true" : "false"); }},
  };
  return keys;
}

const KeyDescriptor* find_key(const std::string& section, const std::string& name) {
  for (const auto& d : descriptors())
    if (section == d.section && name == d.name) return &d;
  return nullptr;
}

}  // namespace

std::string to_string(ModelType model) {
  switch (model) {
    case ModelType::Vp1d: return "vp1d";
    case ModelType::Vortex2d: return "vortex2d";
    case ModelType::Vm1d2v: return "vm1d2v";
    case ModelType::KernelCheck: return "kernel_check";
  }
  return "unknown";
}

ModelType parse_model_type(const std::string& name) {
  if (name == "vp1d") return ModelType::Vp1d;
  if (name == "vortex2d") return ModelType::Vortex2d;
  if (name == "vm1d2v") return ModelType::Vm1d2v;
  if (name == "kernel_check") return ModelType::KernelCheck;
  throw InvalidArgument("unknown model '" + name + "'");
}

ScenarioSpec resolved_scenario(const SimulationConfig& config) {
  ScenarioSpec s = config.scenario;
  if (s.name.empty()) {
    switch (config.model) {
      case ModelType::Vp1d: s.name = "two_particle"; break;
      case ModelType::Vortex2d: s.name = "two_vortex"; break;
      case ModelType::Vm1d2v: s.name = "two_stream"; break;
      case ModelType::KernelCheck: s.name = "landau_damping"; break;
    }
  }
  s.velocity_dim = config.model == ModelType::Vm1d2v ? 2 : 1;
  return s;
}

std::optional<KernelSpec> resolved_kernel(const SimulationConfig& config) {
  if (!config.kernel) return std::nullopt;
  KernelSpec k = *config.kernel;
  k.dim = config.model == ModelType::Vortex2d ? 2 : 1;
  return k;
}

void validate_config(const SimulationConfig& c) {
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) fail("model.dt", "must be positive");
  if (c.n_steps < 1) fail("model.n_steps", "must be at least 1");
  if (c.degree < 1 || c.degree > 9) fail("model.degree", "must be between 1 and 9");
  if (c.model == ModelType::Vm1d2v && c.n_cells < c.degree + 1) fail("model.n_cells", "must be at least degree + 1");
  if (c.model == ModelType::KernelCheck && c.n_cells < 8) fail("model.n_cells", "must be at least 8");
  if (c.n_cells < 2) fail("model.n_cells", "must be at least 2");
  if (c.cache_resolution < 6) fail("model.cache_resolution", "must be at least 6");
  if (!(c.midpoint_tol > 0.0)) fail("model.midpoint_tol", "must be positive");
  if (c.midpoint_max_iter < 1) fail("model.midpoint_max_iter", "must be at least 1");

  if (c.kernel) {
    if (!(c.kernel->width > 0.0) || !std::isfinite(c.kernel->width)) fail("kernel.width", "must be positive");
    if (c.kernel->family == KernelFamily::BSpline &&
        (c.kernel->order < 2 || c.kernel->order > 8 || c.kernel->order % 2 != 0))
      fail("kernel.order", "must be 2, 4, 6 or 8");
  } else if (c.model == ModelType::Vp1d || c.model == ModelType::KernelCheck) {
    fail("kernel.family", "model " + to_string(c.model) + " needs a smoothing kernel");
  }

  const ScenarioSpec s = resolved_scenario(c);
  std::vector<std::string> allowed;
  switch (c.model) {
    case ModelType::Vp1d: allowed = {"two_particle", "landau_damping", "two_stream"}; break;
    case ModelType::Vortex2d: allowed = {"two_vortex"}; break;
    case ModelType::Vm1d2v: allowed = {"landau_damping", "two_stream", "weibel"}; break;
    case ModelType::KernelCheck: allowed = {"landau_damping", "two_stream", "weibel"}; break;
  }
  bool known = false;
  for (const auto& a : allowed) known = known || a == s.name;
  if (!known) fail("scenario.name", "scenario '" + s.name + "' is not available for model " + to_string(c.model));
  if (s.n_particles < 1) fail("scenario.n_particles", "must be at least 1");
  if (!(std::abs(s.epsilon) < 1.0)) fail("scenario.epsilon", "must satisfy |epsilon| < 1");
  if (!(s.wavenumber > 0.0)) fail("scenario.wavenumber", "must be positive");
  if (!(s.thermal_velocity >= 0.0)) fail("scenario.thermal_velocity", "must be non-negative");
  if (s.circulation == 0.0 || !std::isfinite(s.circulation)) fail("scenario.circulation", "must be nonzero");
  if (!(s.separation >= 0.0)) fail("scenario.separation", "must be non-negative");
  if (s.name == "two_vortex" && !(s.separation > 0.0)) fail("scenario.separation", "must be positive for two_vortex");
  if (!(s.anisotropy > 0.0)) fail("scenario.anisotropy", "must be positive");
  if (!std::isfinite(s.total_mass)) fail("scenario.total_mass", "must be finite");

  if (c.output_interval < 1) fail("output.interval", "must be at least 1");
  if (c.output_dir.empty()) fail("output.dir", "must not be empty");
}

SimulationConfig parse_config_text(const std::string& text, bool* model_given, ModelType default_model) {
  boost::property_tree::ptree tree;
  std::istringstream is(text);
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidArgument("config syntax error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  SimulationConfig c;
  c.model = default_model;
  KernelDraft draft = draft_of(c);
  if (model_given) *model_given = false;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw InvalidArgument(section + ": unknown key (keys must live in a section)");
    for (const auto& [name, value] : body) {
      const std::string key = section + "." + name;
      const KeyDescriptor* d = find_key(section, name);
      if (!d) throw InvalidArgument(key + ": unknown key");
      d->set(c, draft, key, value.data());
      if (model_given && key == "model.type") *model_given = true;
    }
  }
  if (draft.family == "none") {
    c.kernel.reset();
  } else {
    c.kernel = KernelSpec{parse_kernel_family(draft.family), draft.width, draft.order, 1};
  }
  validate_config(c);
  return c;
}

SimulationConfig parse_config(const std::string& path, bool* model_given, ModelType default_model) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << is.rdbuf();
  return parse_config_text(text.str(), model_given, default_model);
}

std::vector<std::tuple<std::string, std::string, std::string>> config_entries(const SimulationConfig& config) {
  std::vector<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& d : descriptors()) out.emplace_back(d.section, d.name, d.get(config));
  return out;
}

std::string serialize_config(const SimulationConfig& config) {
  std::ostringstream os;
  std::string current;
  for (const auto& [section, name, value] : config_entries(config)) {
    if (section != current) {
      os << (current.empty() ? "" : "\n") << '[' << section << "]\n";
      current = section;
    }
    os << name << " = " << value << '\n';
  }
  return os.str();
}

std::string config_schema() {
  const SimulationConfig defaults;
  std::ostringstream os;
  os << "Config file keys (INI sections; lines starting with ';' or '#' are comments):\n";
  std::string current;
  for (const auto& d : descriptors()) {
    if (current != d.section) {
      os << "  [" << d.section << "]\n";
      current = d.section;
    }
    os << "    " << d.name << " = " << d.get(defaults) << "    ; " << d.doc << '\n';
  }
  return os.str();
}

}  // namespace smoothpic
