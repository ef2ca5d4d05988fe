#pragma once

// Scenario orchestration, diagnostics output and the command-line front end.
//
// Output files (in config.output_dir):
//   diagnostics.csv   first column t, 17 significant digits
//     vp1d:     t,kinetic,potential,total,momentum
//     vortex2d: t,hamiltonian,impulse_x,impulse_y,angular_impulse
//     vm1d2v:   t,energy_kinetic,energy_Ex,energy_Ey,energy_B,gauss_residual_max,momentum_x
//   snap_<step>.csv   particle snapshots (id,x[,y],vx[,vy],w)
//   kernel_check.csv  check,value,tolerance,pass (kernel_check model)
//   run_meta.json     config echo, version string, wall-clock time
//   M0.csv, M1.csv, M01.csv, G.csv with dump_matrices (vm1d2v)

#include <string>
#include <vector>

#include "smoothpic/config.hpp"

namespace smoothpic {

struct KernelCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Invariant checks of the configured kernel on an n_cells grid over
/// [0, 2π/wavenumber): normalization, symmetry, Young bound, constants,
/// potential consistency and, for Laplace kernels, the inverse-operator
/// round trip and the reproducing property.
std::vector<KernelCheck> run_kernel_checks(const SimulationConfig& config);

struct RunResult {
  int exit_status = 0;
  std::size_t rows_written = 0;
  double wall_seconds = 0.0;
};

/// Runs the configured model and writes all output files. Module errors
/// propagate as exceptions; kernel_check reports exit status 1 when a check
/// fails.
RunResult run_simulation(const SimulationConfig& config);

/// Exit codes: 0 ok, 1 runtime failure, 2 usage or configuration error.
int cli(int argc, char** argv);

}  // namespace smoothpic
