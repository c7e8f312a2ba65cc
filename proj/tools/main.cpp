// Command-line front end: thin wrappers around the library, CSV/JSON output.
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavedisp/adaptive_depth.hpp"
#include "wavedisp/collocation.hpp"
#include "wavedisp/diagnostics.hpp"
#include "wavedisp/errors.hpp"
#include "wavedisp/path_following.hpp"
#include "wavedisp/polar_field.hpp"
#include "wavedisp/profile_io.hpp"
#include "wavedisp/shear.hpp"
#include "wavedisp/spectral.hpp"

namespace {

using namespace wavedisp;

struct CommonOpts {
  std::string profile = "UT";
  double froude_sq = 0.05;
  int nz = 64;
  double tol = 1e-11;
  double theta = 0.0;
  std::string output;
  int jobs = 1;
};

int default_jobs() {
  if (const char* env = std::getenv("WAVEDISP_JOBS")) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  return 1;
}

void add_common(CLI::App* cmd, CommonOpts& c, bool with_theta = true) {
  cmd->add_option("--profile", c.profile,
                  "Builtin profile name (UT, quiescent, linear, polynomial) "
                  "or path to a profile-spec JSON file")
      ->capture_default_str();
  cmd->add_option("--F2", c.froude_sq, "Squared Froude number")
      ->capture_default_str();
  cmd->add_option("--Nz", c.nz, "Collocation order")->capture_default_str();
  cmd->add_option("--tol", c.tol, "Integrator tolerance")->capture_default_str();
  if (with_theta)
    cmd->add_option("--theta", c.theta, "Wave-vector angle (radians)")
        ->capture_default_str();
  cmd->add_option("-o,--output", c.output, "Output file (default: stdout)");
  cmd->add_option("--jobs", c.jobs,
                  "Worker threads (default: WAVEDISP_JOBS or 1)");
}

shear::ShearProfile load_profile(const CommonOpts& c) {
  if (std::filesystem::exists(c.profile))
    return io::make_profile(io::read_profile_spec(c.profile));
  return shear::builtin_profile(c.profile, c.froude_sq);
}

spectral::CollocationOperator unit_op(int nz) {
  return spectral::map_operator(spectral::make_operator(nz), 1.0);
}

void emit(const CommonOpts& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(c.output, text);
  }
}

void summary(const std::string& line) { std::cerr << line << "\n"; }

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(static_cast<size_t>(n));
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] =
        std::exp(la + (lb - la) * i / std::max(1, n - 1));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Dispersion relations of linear surface waves on depth-dependent "
               "shear currents: direct collocation solves, continuation in k "
               "and angle, polar query grids, and depth-adaptive blending."};
  app.require_subcommand(1);
  argv = app.ensure_utf8(argv);

  // solve-forward -------------------------------------------------------
  auto* sf = app.add_subcommand("solve-forward", "c(k) by direct collocation");
  CommonOpts sf_c;
  sf_c.jobs = default_jobs();
  double sf_k = 1.0;
  bool sf_json = false;
  add_common(sf, sf_c);
  sf->add_option("--k", sf_k, "Wavenumber")->required();
  sf->add_flag("--json", sf_json, "Full JSON record including eigenvector");
  sf->callback([&] {
    const auto profile = shear::project(load_profile(sf_c), sf_c.theta);
    const auto sol = collocation::solve_forward(profile, unit_op(sf_c.nz), sf_k);
    if (sf_json) {
      nlohmann::json j;
      j["k"] = sol.k;
      j["c"] = sol.c;
      j["critical_layer_warning"] = sol.critical_layer_warning;
      j["near_essential_warning"] = sol.near_essential_warning;
      j["essential_gap"] = sol.essential_gap;
      j["w_re"] = std::vector<double>(sol.w.size());
      j["w_im"] = std::vector<double>(sol.w.size());
      for (Eigen::Index i = 0; i < sol.w.size(); ++i) {
        j["w_re"][static_cast<size_t>(i)] = sol.w[i].real();
        j["w_im"][static_cast<size_t>(i)] = sol.w[i].imag();
      }
      emit(sf_c, j.dump(2) + "\n");
    } else {
      emit(sf_c, io::table_to_csv({{"k", "c"}, {{sol.k, sol.c}}}));
    }
    summary("solve-forward: k=" + std::to_string(sol.k) +
            " c=" + std::to_string(sol.c));
  });

  // solve-backward ------------------------------------------------------
  auto* sb = app.add_subcommand("solve-backward", "k(c) by direct collocation");
  CommonOpts sb_c;
  double sb_cval = 2.0;
  add_common(sb, sb_c);
  sb->add_option("--c", sb_cval, "Phase velocity")->required();
  sb->callback([&] {
    const auto profile = shear::project(load_profile(sb_c), sb_c.theta);
    const auto sol =
        collocation::solve_backward(profile, unit_op(sb_c.nz), sb_cval);
    emit(sb_c, io::table_to_csv({{"k", "c"}, {{sol.k, sol.c}}}));
    summary("solve-backward: c=" + std::to_string(sol.c) +
            " k=" + std::to_string(sol.k));
  });

  // path ----------------------------------------------------------------
  auto* pa = app.add_subcommand("path", "continuation of c(k) over a k range");
  CommonOpts pa_c;
  double pa_kmin = 0.5, pa_kmax = 5.0, pa_kseed = 0.0;
  int pa_query = 200;
  bool pa_logk = false;
  std::string pa_seed_in, pa_seed_out;
  add_common(pa, pa_c);
  pa->add_option("--k-min", pa_kmin)->required();
  pa->add_option("--k-max", pa_kmax)->required();
  pa->add_option("--k-seed", pa_kseed, "Seed wavenumber (default: geometric mean)");
  pa->add_option("--query", pa_query, "Number of output samples")
      ->capture_default_str();
  pa->add_flag("--log-k", pa_logk, "Integrate in ln k");
  pa->add_option("--seed-in", pa_seed_in, "Seed record JSON to import");
  pa->add_option("--seed-out", pa_seed_out, "Write the seed record JSON here");
  pa->callback([&] {
    const auto profile = shear::project(load_profile(pa_c), pa_c.theta);
    const auto op = unit_op(pa_c.nz);
    const double kseed =
        pa_kseed > 0.0 ? pa_kseed : std::sqrt(pa_kmin * pa_kmax);
    pathfollow::PathOptions opts;
    opts.tol = pa_c.tol;
    opts.log_k = pa_logk;
    std::optional<collocation::EigenSolution> seed;
    if (!pa_seed_in.empty()) {
      const auto rec =
          pathfollow::seed_from_json(io::read_text_file(pa_seed_in));
      seed = pathfollow::import_seed(rec, profile, op);
    }
    if (!pa_seed_out.empty()) {
      const auto sol = seed ? *seed
                            : collocation::solve_forward(profile, op, kseed);
      io::write_text_file(
          pa_seed_out,
          pathfollow::seed_to_json(
              pathfollow::make_seed_record(sol, op, profile)) + "\n");
    }
    const auto path =
        pathfollow::pf_radial(profile, op, pa_kmin, pa_kmax, kseed, opts, seed);
    io::CsvTable table{{"k", "c"}, {}};
    for (double k : log_spaced(pa_kmin, pa_kmax, pa_query))
      table.rows.push_back({k, pathfollow::dense_eval_c(path, k)});
    emit(pa_c, io::table_to_csv(table));
    summary("path: " + std::to_string(path.t.size()) + " control points, " +
            std::to_string(pa_query) + " samples");
  });

  // path-angular --------------------------------------------------------
  auto* pt = app.add_subcommand("path-angular",
                                "continuation of c(theta) at fixed k");
  CommonOpts pt_c;
  double pt_k0 = 1.0, pt_tmin = 0.0, pt_tmax = 2.0 * M_PI, pt_tseed = 0.0;
  int pt_query = 200;
  add_common(pt, pt_c, false);
  pt->add_option("--k0", pt_k0, "Fixed wavenumber")->required();
  pt->add_option("--theta-min", pt_tmin)->capture_default_str();
  pt->add_option("--theta-max", pt_tmax)->capture_default_str();
  pt->add_option("--theta-seed", pt_tseed)->capture_default_str();
  pt->add_option("--query", pt_query)->capture_default_str();
  pt->callback([&] {
    const auto profile2d = load_profile(pt_c);
    const auto op = unit_op(pt_c.nz);
    pathfollow::PathOptions opts;
    opts.tol = pt_c.tol;
    const auto path = pathfollow::pf_angular(profile2d, op, pt_k0, pt_tmin,
                                             pt_tmax, pt_tseed, opts);
    io::CsvTable table{{"k", "c", "theta"}, {}};
    for (int i = 0; i < pt_query; ++i) {
      const double th =
          pt_tmin + (pt_tmax - pt_tmin) * i / std::max(1, pt_query - 1);
      table.rows.push_back({pt_k0, pathfollow::dense_eval_c(path, th), th});
    }
    emit(pt_c, io::table_to_csv(table));
    summary("path-angular: " + std::to_string(path.t.size()) +
            " control points");
  });

  // grid-build ----------------------------------------------------------
  auto* gb = app.add_subcommand("grid-build", "precompute a polar query field");
  CommonOpts gb_c;
  double gb_kmin = 0.25, gb_kmax = 4.0, gb_k0 = 0.0;
  int gb_i = 64, gb_j = 64;
  add_common(gb, gb_c, false);
  gb->add_option("--k-min", gb_kmin)->capture_default_str();
  gb->add_option("--k-max", gb_kmax)->capture_default_str();
  gb->add_option("--k0", gb_k0, "Nominal seed radius (default: geometric mean)");
  gb->add_option("--radii", gb_i, "Number of radius knots I")
      ->capture_default_str();
  gb->add_option("--angles", gb_j, "Number of angle knots J")
      ->capture_default_str();
  gb->callback([&] {
    if (gb_c.output.empty())
      throw CLI::ValidationError("grid-build requires --output");
    const auto profile2d = load_profile(gb_c);
    const auto op = unit_op(gb_c.nz);
    std::vector<double> thetas(static_cast<size_t>(gb_j));
    for (int j = 0; j < gb_j; ++j)
      thetas[static_cast<size_t>(j)] = 2.0 * M_PI * j / gb_j;
    pathfollow::PathOptions opts;
    opts.tol = gb_c.tol;
    const double k0 = gb_k0 > 0.0 ? gb_k0 : std::sqrt(gb_kmin * gb_kmax);
    const auto field =
        grid::build_field(profile2d, op, log_spaced(gb_kmin, gb_kmax, gb_i),
                          thetas, k0, opts, gb_c.jobs);
    io::write_text_file(gb_c.output, field.to_json());
    summary("grid-build: " + std::to_string(gb_j) + " slices x " +
            std::to_string(gb_i) + " radii -> " + gb_c.output);
  });

  // grid-query ----------------------------------------------------------
  auto* gq = app.add_subcommand("grid-query", "query a precomputed polar field");
  CommonOpts gq_c;
  std::string gq_field;
  std::vector<double> gq_k, gq_theta;
  add_common(gq, gq_c, false);
  gq->add_option("--field", gq_field, "Field container from grid-build")
      ->required();
  gq->add_option("--k", gq_k, "Query wavenumbers")->required();
  gq->add_option("--query-theta", gq_theta, "Query angles (same length as --k)")
      ->required();
  gq->callback([&] {
    if (gq_k.size() != gq_theta.size())
      throw CLI::ValidationError("--k and --query-theta lengths differ");
    const auto profile2d = load_profile(gq_c);
    const auto field =
        grid::load_field(io::read_text_file(gq_field), profile2d);
    io::CsvTable table{{"k", "c", "theta"}, {}};
    for (size_t i = 0; i < gq_k.size(); ++i)
      table.rows.push_back(
          {gq_k[i], field.query_c(gq_k[i], gq_theta[i]), gq_theta[i]});
    emit(gq_c, io::table_to_csv(table));
    summary("grid-query: " + std::to_string(gq_k.size()) + " queries");
  });

  // adaptive-path -------------------------------------------------------
  auto* ap = app.add_subcommand(
      "adaptive-path", "depth-adaptive blended continuation for large k");
  CommonOpts ap_c;
  double ap_kmin = 0.025, ap_kmax = 250.0;
  double ap_delta = std::ldexp(1.0, -52), ap_cmin = 0.3, ap_cmax = 0.8;
  int ap_query = 1000;
  std::string ap_plan_out;
  add_common(ap, ap_c);
  ap->add_option("--k-min", ap_kmin)->capture_default_str();
  ap->add_option("--k-max", ap_kmax)->capture_default_str();
  ap->add_option("--delta", ap_delta, "Decay tolerance")->capture_default_str();
  ap->add_option("--c-min", ap_cmin)->capture_default_str();
  ap->add_option("--c-max", ap_cmax)->capture_default_str();
  ap->add_option("--query", ap_query)->capture_default_str();
  ap->add_option("--plan-out", ap_plan_out, "Write the depth plan JSON here");
  ap->callback([&] {
    const auto profile = shear::project(load_profile(ap_c), ap_c.theta);
    pathfollow::PathOptions opts;
    opts.tol = ap_c.tol;
    const auto disp = depth::pf_radial_adaptive(
        profile, ap_kmin, ap_kmax, opts, ap_delta, ap_cmin, ap_cmax, ap_c.nz);
    if (!ap_plan_out.empty())
      io::write_text_file(ap_plan_out, depth::plan_to_json(disp.plan()) + "\n");
    io::CsvTable table{{"k", "c"}, {}};
    for (double k : log_spaced(ap_kmin, ap_kmax, ap_query))
      table.rows.push_back({k, disp.eval(k)});
    emit(ap_c, io::table_to_csv(table));
    summary("adaptive-path: " + std::to_string(disp.plan().intervals.size()) +
            " depth intervals, " + std::to_string(ap_query) + " samples");
  });

  // convergence ---------------------------------------------------------
  auto* cv = app.add_subcommand(
      "convergence", "Chebyshev-tail convergence report for the eigenfunction");
  CommonOpts cv_c;
  double cv_k = 2.5;
  add_common(cv, cv_c);
  cv->add_option("--k", cv_k)->capture_default_str();
  cv->callback([&] {
    const auto profile = shear::project(load_profile(cv_c), cv_c.theta);
    const auto op = unit_op(cv_c.nz);
    const auto sol = collocation::solve_forward(profile, op, cv_k);
    Eigen::VectorXd w_full = Eigen::VectorXd::Zero(op.nodes.size());
    w_full.head(sol.w.size()) = sol.real_eigenvector();
    const auto report =
        spectral::series_convergence(spectral::cheb_coefficients(w_full));
    nlohmann::json j;
    j["k"] = cv_k;
    j["Nz"] = cv_c.nz;
    j["converged"] = report.converged;
    j["required_order"] = report.required_order;
    j["plateau_level"] = report.plateau_level;
    emit(cv_c, j.dump(2) + "\n");
    summary("convergence: converged=" + std::to_string(report.converged) +
            " required_order=" + std::to_string(report.required_order));
  });

  // stability -----------------------------------------------------------
  auto* st = app.add_subcommand(
      "stability", "backward errors and condition numbers over a k sweep");
  CommonOpts st_c;
  double st_kmin = 0.25, st_kmax = 2.5;
  int st_points = 20;
  add_common(st, st_c);
  st->add_option("--k-min", st_kmin)->capture_default_str();
  st->add_option("--k-max", st_kmax)->capture_default_str();
  st->add_option("--points", st_points)->capture_default_str();
  st->callback([&] {
    const auto profile = shear::project(load_profile(st_c), st_c.theta);
    const auto rep = diag::stability_sweep(profile, unit_op(st_c.nz),
                                           log_spaced(st_kmin, st_kmax, st_points));
    io::CsvTable table{{"k", "eta_L", "eta_Q", "kappa_L", "kappa_Q"}, {}};
    for (size_t i = 0; i < rep.k.size(); ++i)
      table.rows.push_back(
          {rep.k[i], rep.eta_l[i], rep.eta_q[i], rep.kappa_l[i], rep.kappa_q[i]});
    emit(st_c, io::table_to_csv(table));
    summary("stability: median eta_L=" + std::to_string(rep.eta_l_median) +
            " eta_Q=" + std::to_string(rep.eta_q_median));
  });

  // bench ---------------------------------------------------------------
  auto* be = app.add_subcommand("bench", "query-count timing table");
  CommonOpts be_c;
  diag::BenchmarkConfig cfg;
  double be_eps = 1e-7;
  int be_nz = 32;
  add_common(be, be_c);
  be->add_option("--n-q", cfg.n_q, "Query counts")->capture_default_str();
  be->add_option("--eps", be_eps, "Accuracy target label")->capture_default_str();
  be->add_option("--bench-nz", be_nz, "Collocation order for the target")
      ->capture_default_str();
  be->add_option("--reps", cfg.reps, "Repetitions per measurement")
      ->capture_default_str();
  be->add_option("--k-min", cfg.k_min)->capture_default_str();
  be->add_option("--k-max", cfg.k_max)->capture_default_str();
  be->callback([&] {
    const auto profile = shear::project(load_profile(be_c), be_c.theta);
    cfg.targets = {{be_eps, be_nz, be_c.tol}};
    const auto rows = diag::run_benchmark(profile, cfg);
    emit(be_c, diag::benchmark_csv(rows));
    summary("bench: " + std::to_string(rows.size()) + " rows");
  });

  // flow-field ----------------------------------------------------------
  auto* ff = app.add_subcommand(
      "flow-field", "velocity and pressure perturbations on the grid");
  CommonOpts ff_c;
  double ff_kx = 1.0, ff_ky = 0.0;
  add_common(ff, ff_c, false);
  ff->add_option("--kx", ff_kx)->required();
  ff->add_option("--ky", ff_ky)->capture_default_str();
  ff->callback([&] {
    const auto profile2d = load_profile(ff_c);
    const double theta = std::atan2(ff_ky, ff_kx);
    const double k = std::hypot(ff_kx, ff_ky);
    const auto op = unit_op(ff_c.nz);
    const auto sol =
        collocation::solve_forward(shear::project(profile2d, theta), op, k);
    const auto flow = collocation::reconstruct_flow(profile2d, ff_kx, ff_ky, sol, op);
    io::CsvTable table{{"z", "u_re", "u_im", "v_re", "v_im", "w_re", "w_im",
                        "p_re", "p_im"},
                       {}};
    for (Eigen::Index i = 0; i < op.nodes.size(); ++i)
      table.rows.push_back({op.nodes[i], flow.u[i].real(), flow.u[i].imag(),
                            flow.v[i].real(), flow.v[i].imag(),
                            flow.w[i].real(), flow.w[i].imag(),
                            flow.p[i].real(), flow.p[i].imag()});
    emit(ff_c, io::table_to_csv(table));
    summary("flow-field: k=" + std::to_string(k) + " c=" + std::to_string(sol.c));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2; --help exits 0
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const wavedisp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
