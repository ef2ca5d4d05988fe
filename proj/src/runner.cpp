#include "smoothpic/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "smoothpic/error.hpp"
#include "smoothpic/feec1d.hpp"
#include "smoothpic/gempic.hpp"
#include "smoothpic/integrators.hpp"
#include "smoothpic/meanfield.hpp"
#include "smoothpic/parallel.hpp"
#include "smoothpic/particles.hpp"
#include "smoothpic/quadrature.hpp"

#ifndef SMOOTHPIC_GIT_DESCRIBE
#define SMOOTHPIC_GIT_DESCRIBE "unknown"
#endif

namespace smoothpic {
namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
    if (!out_) throw Error("cannot write '" + path.string() + "'");
    out_ << header << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << fmt(values[i]);
    out_ << '\n';
    ++rows_;
  }

  std::size_t rows() const { return rows_; }

 private:
  std::ofstream out_;
  std::size_t rows_ = 0;
};

// Integral of f over [-R, R] split into panels of width `panel` around 0.
template <class F>
double symmetric_integral(double R, double panel, F&& f) {
  const auto& rule = gauss_legendre(20);
  double sum = 0.0;
  for (double a = 0.0; a < R; a += panel) {
    const double b = std::min(R, a + panel);
    sum += integrate(rule, a, b, f) + integrate(rule, -b, -a, f);
  }
  return sum;
}

double panel_width(const KernelSpec& k) {
  return k.family == KernelFamily::BSpline ? k.width / k.order : 0.25 * k.width;
}

double five_point_derivative(const std::function<double(double)>& f, double r, double e) {
  return (f(r - 2 * e) - 8 * f(r - e) + 8 * f(r + e) - f(r + 2 * e)) / (12 * e);
}

double relative_l2(const GridFunction& a, const GridFunction& b) { return (a - b).l2_norm() / b.l2_norm(); }

// Random real trigonometric polynomial with frequencies below max_mode.
GridFunction random_trig_polynomial(double L, std::size_t n, int max_mode, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<double> a(max_mode), b(max_mode);
  for (int m = 0; m < max_mode; ++m) {
    a[m] = gauss(rng);
    b[m] = m == 0 ? 0.0 : gauss(rng);
  }
  return GridFunction::sample(L, n, [&](double x) {
    double v = 0.0;
    for (int m = 0; m < max_mode; ++m) v += a[m] * std::cos(2 * kPi * m * x / L) + b[m] * std::sin(2 * kPi * m * x / L);
    return v;
  });
}

}  // namespace

std::vector<KernelCheck> run_kernel_checks(const SimulationConfig& config) {
  if (!config.kernel) throw InvalidArgument("kernel checks need a kernel");
  KernelSpec k1 = *config.kernel;
  k1.dim = 1;
  KernelSpec k2 = k1;
  k2.dim = 2;
  k1.validate();
  const double L = 2 * kPi / config.scenario.wavenumber;
  const auto n = static_cast<std::size_t>(config.n_cells);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<KernelCheck> checks;
  auto add = [&](std::string name, double value, double tol) {
    checks.push_back({std::move(name), value, tol, std::isfinite(value) && value <= tol});
  };

  const double panel = panel_width(k1);
  const double R1 = k1.family == KernelFamily::BSpline ? k1.width : tail_radius(k1, 1e-17);
  add("normalization_1d",
      std::abs(symmetric_integral(R1, panel, [&](double r) { return eval_kernel(k1, r); }) - 1.0), 1e-10);
  const double R2 = k2.family == KernelFamily::BSpline ? k2.width : tail_radius(k2, 1e-17);
  double mass2 = 0.0;
  for (double a = 0.0; a < R2; a += panel)
    mass2 += integrate(gauss_legendre(20), a, std::min(R2, a + panel),
                       [&](double r) { return 2 * kPi * r * eval_kernel(k2, r); });
  add("normalization_2d", std::abs(mass2 - 1.0), 1e-8);

  double asym = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double r = 3.0 * k1.width * i / 200.0;
    asym = std::max(asym, std::abs(eval_kernel(k1, r) - eval_kernel(k1, -r)));
  }
  add("symmetry", asym, 0.0);

  const GridFunction ones(L, n, 1.0);
  const GridFunction lc = convolve_grid(k1, ones);
  double cdev = 0.0;
  for (std::size_t i = 0; i < n; ++i) cdev = std::max(cdev, std::abs(lc[i] - 1.0));
  add("constant_preservation", cdev, 1e-12);

  double young = -1.0;
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 100; ++t) {
    GridFunction f(L, n);
    for (std::size_t i = 0; i < n; ++i) f[i] = gauss(rng);
    young = std::max(young, convolve_grid(k1, f).l2_norm() / f.l2_norm() - 1.0);
  }
  add("young_bound", young, 1e-8);

  double dv_err = 0.0, d2v_err = 0.0;
  for (const KernelSpec& k : {k1, k2}) {
    const PairPotential& pot = pair_potential(k);
    const auto V = [&](double r) { return pot(r).value; };
    for (double s : {0.5, 1.0, 2.0}) {
      const double r = s * k.width;
      const double e = 1e-3 * k.width;
      const PotentialValue pv = pot(r);
      dv_err = std::max(dv_err, std::abs(five_point_derivative(V, r, e) - pv.derivative) / std::abs(pv.derivative));
      const double e2 = 1e-3 * k.width;
      double lap = (V(r + e2) - 2 * V(r) + V(r - e2)) / (e2 * e2);
      if (k.dim == 2) lap += pv.derivative / r;
      d2v_err = std::max(d2v_err, std::abs(lap - eval_kernel(k, r)) / eval_kernel(k, 0.0));
    }
  }
  add("potential_derivative", dv_err, 1e-8);
  add("potential_second_difference", d2v_err, 1e-5);

  if (k1.family == KernelFamily::Laplace) {
    const double alpha = k1.width;
    double rt = 0.0;
    for (int t = 0; t < 10; ++t) {
      const GridFunction f = random_trig_polynomial(L, n, static_cast<int>(n / 8), rng);
      rt = std::max(rt, relative_l2(apply_inverse_laplace(alpha, convolve_grid(k1, f)), f));
    }
    add("inverse_round_trip", rt, 1e-6);

    const double kw = 2 * kPi / L;
    const auto g = [&](double x) { return std::exp(std::sin(kw * x)) + 0.5 * std::cos(2 * kw * x); };
    const auto dg = [&](double x) { return kw * std::cos(kw * x) * std::exp(std::sin(kw * x)) - kw * std::sin(2 * kw * x); };
    const GridFunction gg = GridFunction::sample(L, n, g);
    double rep = 0.0, deriv = 0.0;
    const double eps = 1e-4 * L;
    for (int t = 0; t < 10; ++t) {
      const double x0 = L * uniform(rng);
      const GridFunction K0 = kernel_section(k1, x0, L, n);
      rep = std::max(rep, std::abs(rkhs_inner_product(alpha, K0, gg) - g(x0)));
      const GridFunction diff = (1.0 / eps) * (kernel_section(k1, x0 + eps, L, n) - K0);
      deriv = std::max(deriv, std::abs(rkhs_inner_product(alpha, diff, gg) - dg(x0 + 0.5 * eps)) / kw);
    }
    add("reproducing_property", rep, 1e-6);
    add("derivative_of_evaluation", deriv, 1e-3);
  }
  return checks;
}

namespace {

struct Outputs {
  std::filesystem::path dir;
  std::size_t interval;
  std::size_t snapshot_interval;

  bool diagnostics_due(std::size_t step) const { return step % interval == 0; }
  void maybe_snapshot(std::size_t step, const ParticleEnsemble& ens) const {
    if (snapshot_interval > 0 && step % snapshot_interval == 0)
      write_snapshot((dir / ("snap_" + std::to_string(step) + ".csv")).string(), ens);
  }
};

std::size_t run_vp1d(const SimulationConfig& c, const Outputs& out) {
  const KernelSpec kernel = *resolved_kernel(c);
  ParticleEnsemble ens = sample_scenario(resolved_scenario(c), c.seed);
  const ForceFn force = [&](const ParticleEnsemble& e) { return vp1d_forces(e, kernel, c.coupling); };
  CsvWriter csv(out.dir / "diagnostics.csv", "t,kinetic,potential,total,momentum");
  for (std::size_t step = 0;; ++step) {
    if (out.diagnostics_due(step)) {
      const Vp1dEnergy e = vp1d_energy(ens, kernel, c.coupling);
      csv.row({static_cast<double>(step) * c.dt, e.kinetic, e.potential, e.total(), vp1d_momentum(ens)});
    }
    out.maybe_snapshot(step, ens);
    if (step == c.n_steps) break;
    ens = leapfrog_step(ens, force, c.dt);
  }
  return csv.rows();
}

std::size_t run_vortex2d(const SimulationConfig& c, const Outputs& out) {
  const std::optional<KernelSpec> kernel = resolved_kernel(c);
  ParticleEnsemble ens = sample_scenario(resolved_scenario(c), c.seed);
  const VelocityFn velocity = [&](const ParticleEnsemble& e) { return vortex2d_velocities(e, kernel); };
  const StepperConfig stepper{c.dt, c.midpoint_tol, c.midpoint_max_iter};
  CsvWriter csv(out.dir / "diagnostics.csv", "t,hamiltonian,impulse_x,impulse_y,angular_impulse");
  for (std::size_t step = 0;; ++step) {
    if (out.diagnostics_due(step)) {
      const VortexImpulse imp = vortex_impulse(ens);
      csv.row({static_cast<double>(step) * c.dt, vortex2d_hamiltonian(ens, kernel), imp.x, imp.y, imp.angular});
    }
    out.maybe_snapshot(step, ens);
    if (step == c.n_steps) break;
    ens = implicit_midpoint_step(ens, velocity, stepper);
  }
  return csv.rows();
}

std::size_t run_vm1d2v(const SimulationConfig& c, const Outputs& out) {
  const ScenarioSpec scenario = resolved_scenario(c);
  const SplineComplex complex(c.n_cells, c.degree, scenario.domain_length());
  const std::optional<KernelSpec> kernel = resolved_kernel(c);
  FilteredBasisCache cache = kernel ? build_filtered_basis(complex, *kernel, c.cache_resolution)
                                    : FilteredBasisCache::unfiltered(complex);
  auto disc = std::make_shared<const VmDiscretization>(complex, std::move(cache));
  if (c.dump_matrices) {
    write_matrix_csv((out.dir / "M0.csv").string(), disc->m0());
    write_matrix_csv((out.dir / "M1.csv").string(), disc->m1());
    write_matrix_csv((out.dir / "M01.csv").string(), disc->m01());
    write_matrix_csv((out.dir / "G.csv").string(), disc->g());
  }
  EMState state = make_em_state(sample_scenario(scenario, c.seed), disc);
  solve_gauss_law(state);
  if (c.b_perturbation != 0.0) {
    const double beta = c.b_perturbation, kw = scenario.wavenumber;
    state.bz = dof_project(complex, 1, [&](double x) { return beta * std::cos(kw * x); });
  }
  CsvWriter csv(out.dir / "diagnostics.csv",
                "t,energy_kinetic,energy_Ex,energy_Ey,energy_B,gauss_residual_max,momentum_x");
  for (std::size_t step = 0;; ++step) {
    if (out.diagnostics_due(step)) {
      const VmEnergy e = vm_energy_parts(state);
      csv.row({static_cast<double>(step) * c.dt, e.kinetic, e.ex, e.ey, e.bz, gauss_residual(state).max_norm,
               vm_momentum_x(state)});
    }
    out.maybe_snapshot(step, state.particles);
    if (step == c.n_steps) break;
    vm_advance(state, c.dt);
  }
  return csv.rows();
}

std::size_t run_checks(const SimulationConfig& c, const Outputs& out, bool& all_pass) {
  const auto checks = run_kernel_checks(c);
  std::ofstream csv(out.dir / "kernel_check.csv");
  if (!csv) throw Error("cannot write kernel_check.csv");
  csv << "check,value,tolerance,pass\n";
  all_pass = true;
  for (const auto& k : checks) {
    csv << k.name << ',' << fmt(k.value) << ',' << fmt(k.tolerance) << ',' << (k.pass ? "true" : "false") << '\n';
    all_pass = all_pass && k.pass;
  }
  return checks.size();
}

void write_meta(const SimulationConfig& c, const RunResult& r) {
  nlohmann::ordered_json meta;
  for (const auto& [section, key, value] : config_entries(c)) meta["config"][section][key] = value;
  meta["version"] = SMOOTHPIC_GIT_DESCRIBE;
  meta["workers"] = worker_count();
  meta["rows"] = r.rows_written;
  meta["exit_status"] = r.exit_status;
  meta["wall_seconds"] = r.wall_seconds;
  std::ofstream os(std::filesystem::path(c.output_dir) / "run_meta.json");
  if (!os) throw Error("cannot write run_meta.json");
  os << meta.dump(2) << '\n';
}

}  // namespace

RunResult run_simulation(const SimulationConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  const Outputs out{config.output_dir, config.output_interval, config.snapshot_interval};
  std::filesystem::create_directories(out.dir);
  RunResult result;
  switch (config.model) {
    case ModelType::Vp1d: result.rows_written = run_vp1d(config, out); break;
    case ModelType::Vortex2d: result.rows_written = run_vortex2d(config, out); break;
    case ModelType::Vm1d2v: result.rows_written = run_vm1d2v(config, out); break;
    case ModelType::KernelCheck: {
      bool pass = false;
      result.rows_written = run_checks(config, out, pass);
      result.exit_status = pass ? 0 : 1;
      break;
    }
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_meta(config, result);
  return result;
}

int cli(int argc, char** argv) {
  CLI::App app{"Smoothed particle-in-cell simulations with kernel-filtered interactions", "smoothpic"};
  app.footer("Configuration file schema:\n" + config_schema());
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool dump = false;
  const std::vector<std::pair<std::string, ModelType>> commands = {{"vp", ModelType::Vp1d},
                                                                   {"vortex", ModelType::Vortex2d},
                                                                   {"vm", ModelType::Vm1d2v},
                                                                   {"kernel-check", ModelType::KernelCheck}};
  const std::vector<std::string> descriptions = {"1D Vlasov-Poisson particles (leapfrog)",
                                                 "2D point vortices (implicit midpoint)",
                                                 "1D2V filtered Vlasov-Maxwell (GEMPIC splitting)",
                                                 "kernel invariant report"};
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_opts;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, descriptions[i]);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    seed_opts.push_back(sub->add_option("--seed", seed, "random seed (overrides model.seed)"));
    sub->add_flag("--dump-matrices", dump, "write mass and derivative matrices (vm)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "smoothpic: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  std::size_t which = 0;
  while (!subs[which]->parsed()) ++which;
  const ModelType model = commands[which].second;

  SimulationConfig config;
  try {
    bool model_given = false;
    config = parse_config(config_path, &model_given, model);
    if (model_given && config.model != model)
      throw InvalidArgument("model.type: file sets '" + to_string(config.model) + "' but the subcommand is '" +
                            commands[which].first + "'");
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (seed_opts[which]->count() > 0) config.seed = seed;
    if (dump) config.dump_matrices = true;
    validate_config(config);
  } catch (const std::exception& e) {
    std::cerr << "smoothpic: " << e.what() << '\n';
    return 2;
  }

  try {
    const RunResult r = run_simulation(config);
    if (r.exit_status != 0) std::cerr << "smoothpic: kernel checks failed, see kernel_check.csv\n";
    return r.exit_status;
  } catch (const std::exception& e) {
    std::cerr << "smoothpic: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace smoothpic
