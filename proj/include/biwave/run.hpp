#pragma once

#include <cstdio>
#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "biwave/config.hpp"
#include "biwave/diagnostics.hpp"
#include "biwave/errors.hpp"
#include "biwave/initial_data.hpp"
#include "biwave/mesh.hpp"
#include "biwave/output.hpp"
#include "biwave/scheme.hpp"
#include "biwave/stepper.hpp"

namespace biwave {

enum ExitCode : int { kExitOk = 0, kExitConfigError = 2, kExitSolverFailure = 3 };

struct RunOutcome {
  int exit_code{kExitOk};
  std::size_t steps_done{0};
  std::string message;
  std::vector<EnergyRecord> history;  ///< step 0 followed by every accepted step
};

/// U0 and V0 for a configuration.
inline InitialData initial_data_for(const RunConfig& c, const Mesh& mesh) {
  if (c.initial != InitialKind::FromFile) return builtin_initial(c.initial, mesh, c.frequency);
  const FieldSnapshot f = read_field_snapshot(c.initial_path);
  require_compatible(f, mesh);
  InitialData d{f.u, c.initial_velocity ? f.v : VectorField(mesh)};
  d.u0.mark_sphere_valued();
  return d;
}

/// Scheme parameters; Dirichlet data are the boundary values of U0.
inline SchemeParams scheme_params_for(const RunConfig& c, const VectorField& u0) {
  SchemeParams p;
  p.variant = c.scheme_variant();
  p.tau = c.tau;
  p.fp_tolerance = c.fp_tolerance;
  p.fp_max_iters = c.fp_max_iters;
  p.linear_tolerance = c.linear_tolerance;
  p.linear_max_iters = c.linear_max_iters;
  if (c.bc == BoundaryMode::DirichletU) p.bc = BoundaryCondition::dirichlet(u0);
  return p;
}

namespace detail {
inline std::string increment_tail(const std::vector<double>& tail) {
  std::string s;
  for (double x : tail) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.3e", s.empty() ? "" : " ", x);
    s += buf;
  }
  return s;
}
}  // namespace detail

/// Runs a configuration to t_end. Writes the CSV (one row per accepted step)
/// and snapshots; returns the exit code instead of throwing.
inline RunOutcome run(const RunConfig& config, std::ostream& log) {
  RunOutcome out;
  Mesh mesh;
  SchemeParams params;
  SimState state;
  std::filesystem::path snap_dir;
  std::unique_ptr<CsvWriter> csv;
  try {
    validate(config);
    mesh = build_mesh(config.mesh_kind, config.mesh_n, config.box());
    const InitialData init = initial_data_for(config, mesh);
    params = scheme_params_for(config, init.u0);
    state = init_state(mesh, init.u0, init.v0, params);
    csv = std::make_unique<CsvWriter>(config.csv_path);
    if (!config.snapshot_dir.empty()) {
      snap_dir = config.snapshot_dir;
      std::error_code ec;
      std::filesystem::create_directories(snap_dir, ec);
      if (ec) throw ConfigError("cannot create snapshot directory " + snap_dir.string());
      write_snapshot_pair(snap_dir, mesh, state);
    }
  } catch (const Error& e) {
    out.exit_code = kExitConfigError;
    out.message = std::string("configuration error: ") + e.what();
    log << out.message << '\n';
    return out;
  }

  out.history.push_back(energy(mesh, state, params));
  const std::size_t steps = config.steps();
  log << "biwave run: " << to_string(mesh.kind()) << " n=" << mesh.cells_per_axis()
      << " nodes=" << mesh.num_nodes() << " variant=" << to_string(params.variant.kind)
      << " tau=" << format_real(params.tau) << " steps=" << steps << '\n';

  for (std::size_t k = 0; k < steps; ++k) {
    try {
      StepResult r = advance(mesh, state, params);
      state = std::move(r.state);
      const auto& fp = r.report.fixed_point;
      EnergyRecord rec = energy(mesh, state, params, fp.iterations, fp.cg_iterations_total);
      csv->write(rec);
      out.history.push_back(rec);
      if (!snap_dir.empty() && state.step_index % config.snapshot_every == 0)
        write_snapshot_pair(snap_dir, mesh, state);
      out.steps_done = k + 1;
    } catch (const SolverError& e) {
      out.exit_code = kExitSolverFailure;
      out.message = "solver failure at step " + std::to_string(state.step_index + 1) + ": " +
                    e.what();
      if (const auto* nc = dynamic_cast<const NonConvergence*>(&e))
        out.message += "; last increments: " + detail::increment_tail(nc->increment_tail());
      log << out.message << '\n';
      return out;
    } catch (const Error& e) {
      out.exit_code = kExitConfigError;
      out.message = std::string("output error: ") + e.what();
      log << out.message << '\n';
      return out;
    }
  }
  const EnergyRecord& last = out.history.back();
  log << "done: t=" << format_real(last.time) << " e_h=" << format_real(last.e_h)
      << " constraint=" << format_real(last.constraint_violation) << '\n';
  return out;
}

}  // namespace biwave
