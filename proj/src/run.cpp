#include "mcf/run.hpp"

#include "mcf/diagnostics.hpp"
#include "mcf/geometry.hpp"
#include "mcf/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace mcf {

namespace {

std::string join(const std::vector<double> &v) {
  std::ostringstream os;
  os << std::setprecision(10) << "(";
  for (std::size_t i = 0; i < v.size(); ++i)
    os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

std::vector<double> grid_origin(const RunConfig &cfg) {
  if (!cfg.origin.empty())
    return cfg.origin;
  std::vector<double> o(cfg.lengths.size());
  for (std::size_t a = 0; a < o.size(); ++a)
    o[a] = -0.5 * cfg.lengths[a];
  return o;
}

} // namespace

ResolvedRun resolve(const RunConfig &cfg) {
  auto split = split_tensions(cfg.sigma_pairs);
  if (auto *bad = std::get_if<NotAdditive>(&split))
    throw TensionsNotAdditive(bad->reason);

  std::optional<MobilitySet> mob;
  try {
    mob.emplace(cfg.mobility_pairs);
  } catch (const InvalidArgument &e) {
    throw ConfigInvalid("mobilities", e.what());
  }

  HarmonicDecomposition dec;
  bool fallback = false;
  std::string reason;
  switch (cfg.decomposition) {
  case DecompositionMode::canonical:
    dec = canonical_decomposition(*mob);
    break;
  case DecompositionMode::sparse: {
    auto fit = harmonic_fit(*mob);
    if (auto *bad = std::get_if<NotAdditive>(&fit)) {
      fallback = true;
      reason = bad->reason;
    }
    dec = sparse_decomposition(*mob);
    break;
  }
  case DecompositionMode::explicit_list: {
    std::vector<HarmonicComponent> comps;
    for (const auto &c : cfg.explicit_components)
      comps.emplace_back(c);
    dec = HarmonicDecomposition(cfg.n_phases, std::move(comps));
    break;
  }
  }
  const auto report = validate(dec, *mob);
  if (!report.passed) {
    std::ostringstream os;
    os << "decomposition does not reproduce the mobility matrix (max error "
       << report.max_abs_error << ")";
    throw ConfigInvalid("mobilities.components", os.str());
  }

  SolverParams params;
  params.epsilon = cfg.resolved_epsilon();
  params.dt = cfg.resolved_dt();
  params.alpha = cfg.alpha;
  params.beta = cfg.beta;
  params.n_steps = cfg.resolved_steps();
  params.decomposition = cfg.decomposition;
  try {
    params.check();
  } catch (const InvalidArgument &e) {
    throw ConfigInvalid("numerics", e.what());
  }

  return ResolvedRun{SpectralGrid(cfg.sizes, cfg.lengths, grid_origin(cfg)),
                     std::get<TensionSet>(std::move(split)),
                     std::move(*mob),
                     std::move(dec),
                     report,
                     params,
                     fallback,
                     std::move(reason)};
}

void ValidationReport::print(std::ostream &os) const {
  for (const auto &l : lines)
    os << l << "\n";
  for (const auto &w : warnings)
    os << "warning: " << w << "\n";
  for (const auto &e : errors)
    os << "error: " << e << "\n";
  os << (ok ? "config OK" : "config INVALID") << "\n";
}

ValidationReport validate_config(const RunConfig &cfg) {
  ValidationReport rep;
  try {
    const ResolvedRun r = resolve(cfg);
    std::ostringstream os;
    os << std::setprecision(17);
    os << "grid: dim " << cfg.dim << ", K = " << cfg.resolution() << ", sizes";
    for (int k : cfg.sizes)
      os << " " << k;
    rep.lines.push_back(os.str());
    os.str("");
    os << "epsilon = " << r.params.epsilon << " (" << cfg.epsilon.describe() << ")";
    rep.lines.push_back(os.str());
    os.str("");
    os << "dt = " << r.params.dt << " (" << cfg.dt.describe() << ")";
    rep.lines.push_back(os.str());
    os.str("");
    os << "n_steps = " << r.params.n_steps << ", alpha = " << r.params.alpha
       << ", beta = " << r.params.beta;
    rep.lines.push_back(os.str());
    rep.lines.push_back("sigma_k = " + join(r.tensions.sigma_phase()));
    os.str("");
    os << "decomposition: " << to_string(cfg.decomposition) << ", P = "
       << r.decomposition.n_components();
    if (r.sparse_fallback)
      os << " (fallback to canonical: " << r.fallback_reason << ")";
    rep.lines.push_back(os.str());
    for (std::size_t p = 0; p < r.decomposition.n_components(); ++p)
      rep.lines.push_back("  component " + std::to_string(p + 1) + ": " +
                          join(r.decomposition.component(p).phase_coeffs()));
    rep.lines.push_back("m_k^* = " + join(r.decomposition.m_star()));
    if (r.sparse_fallback)
      rep.warnings.push_back("mobilities are not harmonically additive; sparse mode uses the "
                             "canonical decomposition");
    for (auto &w : check_shape_separation(r.grid, cfg.shapes))
      rep.warnings.push_back(std::move(w));
    rep.ok = true;
  } catch (const std::exception &e) {
    rep.errors.emplace_back(e.what());
  }
  return rep;
}

int run(const RunConfig &cfg, const RunOptions &options, std::ostream &out, std::ostream &err) {
  std::optional<ResolvedRun> r;
  try {
    r.emplace(resolve(cfg));
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  for (const auto &w : check_shape_separation(r->grid, cfg.shapes))
    err << "warning: " << w << "\n";

  const auto dir = options.output_dir.value_or(cfg.output_dir);
  const long snapshot_every = options.snapshot_every.value_or(cfg.snapshot_every);
  std::filesystem::create_directories(dir);

  const auto weights = cfg.composite_weights.empty() ? io::default_composite_weights(cfg.n_phases)
                                                      : cfg.composite_weights;
  const double eps = r->params.epsilon;
  const long n_steps = r->params.n_steps;
  TimeSeries series(cfg.n_phases);

  auto snapshot = [&](const PhaseState &s, long step) {
    io::write_snapshot(dir, s, step);
    if (cfg.dim == 2) {
      io::write_pgm(dir / io::composite_name(step), io::composite_image(s, weights));
    } else {
      io::write_pgm(dir / io::composite_name(step), io::composite_image(s, weights, 2));
      if (cfg.axis_slices)
        for (int a = 0; a < 3; ++a)
          io::write_pgm(dir / io::composite_name(step, "_axis" + std::to_string(a)),
                        io::composite_image(s, weights, a));
    }
  };

  std::vector<StepHook> hooks;
  hooks.push_back({cfg.diagnostic_every, [&](const PhaseState &s, long step) {
                     series.record(s, r->tensions, eps);
                     if (!options.quiet) {
                       const auto &row = series.rows().back();
                       out << "step " << step << "/" << n_steps << "  t = " << row.time
                           << "  constraint_err = " << row.constraint_error
                           << "  energy = " << row.energy << "\n";
                     }
                   }});
  // snapshot_every = 0: initial and final state only.
  hooks.push_back({snapshot_every > 0 ? snapshot_every : std::max(n_steps, 1L),
                   [&](const PhaseState &s, long step) { snapshot(s, step); }});

  int status = kExitOk;
  try {
    PhaseState state = init_phases(r->grid, cfg.shapes, eps);
    evolve(std::move(state), r->tensions, r->decomposition, r->params, hooks);
  } catch (const NonFiniteField &e) {
    err << "error: " << e.what() << "\n";
    status = kExitNonFinite;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    status = kExitInvalid;
  }

  std::ofstream csv(dir / "diagnostics.csv", std::ios::binary);
  series.write_csv(csv);
  if (!csv)
    throw std::runtime_error("cannot write " + (dir / "diagnostics.csv").string());
  if (status == kExitOk && !options.quiet)
    out << "wrote " << series.rows().size() << " diagnostic rows to " << dir.string() << "\n";
  return status;
}

} // namespace mcf
