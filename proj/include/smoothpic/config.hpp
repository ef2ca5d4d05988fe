#pragma once

// Simulation configuration: a sectioned key-value (INI) file with sections
// [model], [kernel], [scenario] and [output]. Parsing is strict: unknown
// keys, malformed values and violated constraints are errors naming the key.
// Lines starting with ';' or '#' are comments.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "smoothpic/kernels.hpp"
#include "smoothpic/meanfield.hpp"
#include "smoothpic/particles.hpp"

namespace smoothpic {

enum class ModelType { Vp1d, Vortex2d, Vm1d2v, KernelCheck };

std::string to_string(ModelType model);
ModelType parse_model_type(const std::string& name);

struct SimulationConfig {
  // [model]
  ModelType model = ModelType::Vp1d;
  double dt = 1e-3;
  std::size_t n_steps = 100;
  std::uint64_t seed = 1;
  int n_cells = 32;
  int degree = 3;
  PairCoupling coupling = PairCoupling::Attractive;
  int cache_resolution = 64;
  double midpoint_tol = 1e-12;
  int midpoint_max_iter = 50;

  // [kernel]; family "none" leaves the kernel empty
  std::optional<KernelSpec> kernel = KernelSpec::laplace(1.0);

  // [scenario]; an empty name selects the model's default scenario
  ScenarioSpec scenario{.name = ""};
  double b_perturbation = 0.0;

  // [output]
  std::string output_dir = "out";
  std::size_t output_interval = 1;
  std::size_t snapshot_interval = 0;  // 0 disables snapshots
  bool dump_matrices = false;

  bool operator==(const SimulationConfig&) const = default;
};

/// Scenario with the model default name, velocity dimension and defaults
/// resolved.
ScenarioSpec resolved_scenario(const SimulationConfig& config);

/// Kernel with the model's spatial dimension.
std::optional<KernelSpec> resolved_kernel(const SimulationConfig& config);

/// Parses and validates a configuration file. `default_model` applies when
/// the file does not set model.type; when `model_given` is not null it
/// reports whether the file did.
SimulationConfig parse_config(const std::string& path, bool* model_given = nullptr,
                              ModelType default_model = ModelType::Vp1d);

/// Same as parse_config for in-memory text.
SimulationConfig parse_config_text(const std::string& text, bool* model_given = nullptr,
                                   ModelType default_model = ModelType::Vp1d);

/// Throws InvalidArgument naming the offending key.
void validate_config(const SimulationConfig& config);

/// (section, key, value) for every key, values formatted losslessly.
std::vector<std::tuple<std::string, std::string, std::string>> config_entries(const SimulationConfig& config);

/// INI text that parses back to an identical configuration.
std::string serialize_config(const SimulationConfig& config);

/// Human-readable list of sections, keys, defaults and constraints.
std::string config_schema();

}  // namespace smoothpic
