// Command-line surface for the Spartan time-series library: simulate
// synthetic series, fit model parameters, fill gaps, and export plot data
// and benchmark reports.
//
// Exit codes: 0 success, 2 input/parse error, 3 numerical/convergence error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spartan/bench.hpp"
#include "spartan/covariance.hpp"
#include "spartan/errors.hpp"
#include "spartan/fit.hpp"
#include "spartan/io.hpp"
#include "spartan/predict.hpp"
#include "spartan/series.hpp"
#include "spartan/stats.hpp"
#include "spartan/synth.hpp"

using nlohmann::json;
using namespace spartan;

namespace {

// Relative output paths land in $SPARTAN_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
  if (path.empty() || path == "-") return path;
  const char* dir = std::getenv("SPARTAN_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

// "-" means stdout.
void write_text(const std::string& out_path, const std::string& text) {
  if (out_path == "-") {
    std::cout << text;
    return;
  }
  const std::string resolved = resolve_out(out_path);
  std::ofstream f(resolved, std::ios::binary);
  if (!f) throw InputError("cannot open output file: " + resolved);
  f << text;
  if (!f) throw InputError("failed while writing: " + resolved);
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ModelFlags {
  std::string model = "gaussian";
  double sigma = 1.0;
  double b = 1.0;
  double kappa = 1.0;
  double nu = 0.5;
  double eta0 = 1.0;
  double eta1 = 0.0;
  double xi = 1.0;

  CovarianceSpec spec(double alpha) const {
    CovarianceSpec s;
    s.kind = cov_kind_from_name(model);
    s.sigma = sigma;
    s.b = b;
    s.kappa = kappa;
    s.nu = nu;
    s.sp = {eta0, eta1, xi, alpha};
    validate(s);
    return s;
  }
};

void add_model_flags(CLI::App* cmd, ModelFlags& m) {
  cmd->add_option("--model", m.model,
                  "Covariance family: spartan, gaussian, exponential, "
                  "spherical, whittle_matern")
      ->capture_default_str();
  cmd->add_option("--sigma", m.sigma, "Standard deviation (classical models)")
      ->capture_default_str();
  cmd->add_option("--b", m.b, "Correlation time (classical models)")
      ->capture_default_str();
  cmd->add_option("--kappa", m.kappa, "Inverse length (whittle_matern)")
      ->capture_default_str();
  cmd->add_option("--nu", m.nu, "Half-integer smoothness (whittle_matern)")
      ->capture_default_str();
  cmd->add_option("--eta0", m.eta0, "Scale coefficient (spartan)")
      ->capture_default_str();
  cmd->add_option("--eta1", m.eta1, "Shape coefficient (spartan)")
      ->capture_default_str();
  cmd->add_option("--xi", m.xi, "Characteristic time (spartan)")
      ->capture_default_str();
}

GappySeries load_series(const std::string& input, bool no_detrend,
                        SeriesFile* file_out = nullptr) {
  SeriesFile f = read_series_csv(input);
  if (file_out != nullptr) *file_out = f;
  GappySeries x = std::move(f.series);
  if (!no_detrend) detrend(x);
  return x;
}

json fit_report(const FitResult& fit, const GappySeries& x, bool timings) {
  json j;
  j["method"] = fit_method_name(fit.method);
  j["eta0"] = fit.params.eta0;
  j["eta1"] = fit.params.eta1;
  j["xi"] = fit.params.xi;
  j["alpha"] = fit.params.alpha;
  j["objective"] = fit.objective;
  j["iterations"] = fit.iterations;
  j["n"] = x.values.size();
  j["n_present"] = n_present(x);
  j["mean_offset"] = x.mean_offset;
  if (timings) j["elapsed_seconds"] = fit.elapsed_seconds;
  return j;
}

void cmd_simulate(const ModelFlags& model, std::size_t n, double alpha,
                  double mean, double t0, std::uint64_t seed, bool lattice,
                  const std::string& out) {
  GappySeries x;
  if (lattice) {
    const CovarianceSpec spec = model.spec(alpha);
    if (spec.kind != CovKind::spartan) {
      throw InputError("--lattice requires --model spartan");
    }
    x = simulate_lattice(n, spec.sp, mean, seed);
  } else {
    SimConfig cfg;
    cfg.spec = model.spec(alpha);
    cfg.n = n;
    cfg.mean = mean;
    cfg.seed = seed;
    cfg.alpha = alpha;
    x = simulate_series(cfg);
  }
  write_series_csv(resolve_out(out), x, t0);
}

void cmd_infer(const std::string& input, const std::string& method,
               bool no_detrend, bool timings, const std::string& out) {
  const GappySeries x = load_series(input, no_detrend);
  const FitMethod m = fit_method_from_name(method);
  const FitResult fit = m == FitMethod::mmom ? fit_mmom(x) : fit_mle(x);
  if (timings) {
    std::cerr << "fit elapsed: " << fit.elapsed_seconds << " s\n";
  }
  write_text(out, fit_report(fit, x, timings).dump(2) + "\n");
}

void cmd_fill(const std::string& input, const std::string& predictor,
              const std::string& method, const std::vector<double>& params_opt,
              std::size_t window, bool no_detrend, bool timings,
              std::string out) {
  SeriesFile file;
  GappySeries x = load_series(input, no_detrend, &file);

  if (out.empty()) {
    out = std::filesystem::path(input).stem().string() + ".filled.csv";
  }
  const std::string resolved = resolve_out(out);

  if (n_present(x) == x.values.size()) {
    // Nothing to fill: the output is a verbatim copy of the input.
    std::ifstream src(input, std::ios::binary);
    std::ostringstream bytes;
    bytes << src.rdbuf();
    std::ofstream dst(resolved, std::ios::binary);
    if (!dst) throw InputError("cannot open output file: " + resolved);
    dst << bytes.str();
    std::cerr << "no gaps in " << input << "; copied unchanged\n";
    return;
  }

  SpartanParams p;
  if (!params_opt.empty()) {
    p = {params_opt[0], params_opt[1], params_opt[2], x.alpha};
    require_permissible(p);
  } else {
    const FitMethod m = fit_method_from_name(method);
    const FitResult fit = m == FitMethod::mmom ? fit_mmom(x) : fit_mle(x);
    p = fit.params;
  }

  FilledSeries filled;
  if (predictor == "sp") {
    filled = sp_fill(x, p);
  } else if (predictor == "kwp") {
    CovarianceSpec spec;
    spec.kind = CovKind::spartan;
    spec.sp = p;
    filled = kwp_fill(x, spec, window);
  } else {
    throw InputError("unknown predictor \"" + predictor +
                     "\" (expected sp or kwp)");
  }
  write_filled_csv(resolved, file, filled);
  if (timings) std::cerr << "filled " << input << " -> " << resolved << "\n";
}

void cmd_acf(const std::string& input, std::size_t max_lag, bool no_detrend,
             const std::string& out) {
  const GappySeries x = load_series(input, no_detrend);
  const AcfResult acf = empirical_acf(x, max_lag);
  std::string text = "lag,rho\n";
  for (std::size_t k = 0; k < acf.rho.size(); ++k) {
    text += format_value(static_cast<double>(k) * x.alpha);
    text += ',';
    if (std::isfinite(acf.rho[k])) text += format_value(acf.rho[k]);
    text += '\n';
  }
  write_text(out, text);
}

void cmd_surface(const std::string& input, const std::string& objective,
                 const SurfaceRanges& ranges, bool no_detrend,
                 const std::string& out) {
  const GappySeries x = load_series(input, no_detrend);
  ObjectiveKind kind;
  if (objective == "dm") {
    kind = ObjectiveKind::dm;
  } else if (objective == "nll") {
    kind = ObjectiveKind::nll;
  } else {
    throw InputError("unknown objective \"" + objective +
                     "\" (expected dm or nll)");
  }
  const SurfaceGrid grid = surface_grid(x, kind, ranges);

  std::string text = "# objective " + objective + "\n";
  if (grid.has_optimum) {
    text += "# optimum eta1=" + format_value(grid.opt_eta1) +
            " xi=" + format_value(grid.opt_xi) + "\n";
  }
  text += "eta1,xi,value\n";
  for (std::size_t i = 0; i < grid.eta1_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.xi_axis.size(); ++j) {
      text += format_value(grid.eta1_axis[i]);
      text += ',';
      text += format_value(grid.xi_axis[j]);
      text += ',';
      const double v = grid.values[i * grid.xi_axis.size() + j];
      if (std::isfinite(v)) text += format_value(v);
      text += '\n';
    }
  }
  write_text(out, text);
}

void cmd_bench(const std::string& plan_path, bool timings, bool seed_set,
               std::uint64_t seed, const std::string& out) {
  std::ifstream f(plan_path);
  if (!f) throw InputError("cannot open plan file: " + plan_path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw InputError(std::string("plan file is not valid JSON: ") + e.what());
  }
  BenchPlan plan = parse_plan(j);
  if (timings) plan.timings = true;
  if (seed_set) plan.seed = seed;
  const json report = run_benchmark(plan);
  write_text(out, report.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spartan time-series modeling: simulation, inference, gap "
               "filling, and benchmarks"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand(
      "simulate", "Draw a synthetic series and write it as CSV");
  ModelFlags sim_model;
  std::size_t sim_n = 1000;
  double sim_alpha = 1.0, sim_mean = 0.0, sim_t0 = 0.0;
  std::uint64_t sim_seed = 1;
  bool sim_lattice = false;
  std::string sim_out = "series.csv";
  add_model_flags(sim, sim_model);
  sim->add_option("--n", sim_n, "Series length")->capture_default_str();
  sim->add_option("--alpha", sim_alpha, "Grid step")->capture_default_str();
  sim->add_option("--mean", sim_mean, "Series mean")->capture_default_str();
  sim->add_option("--t0", sim_t0, "First time stamp")->capture_default_str();
  sim->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
  sim->add_flag("--lattice", sim_lattice,
                "Sample through the banded precision factor (spartan only)");
  sim->add_option("--out", sim_out, "Output CSV path")->capture_default_str();
  sim->callback([&] {
    cmd_simulate(sim_model, sim_n, sim_alpha, sim_mean, sim_t0, sim_seed,
                 sim_lattice, sim_out);
  });

  // infer
  auto* inf = app.add_subcommand("infer",
                                 "Fit model parameters to a series file");
  std::string inf_input, inf_method = "mmom", inf_out = "-";
  bool inf_no_detrend = false, inf_timings = false;
  inf->add_option("--input", inf_input, "Input CSV series")->required();
  inf->add_option("--method", inf_method, "Fit method: mmom or mle")
      ->capture_default_str();
  inf->add_flag("--no-detrend", inf_no_detrend,
                "Skip mean subtraction before fitting");
  inf->add_flag("--timings", inf_timings,
                "Include wall-clock time in the report");
  inf->add_option("--out", inf_out, "Report path (- for stdout)")
      ->capture_default_str();
  inf->callback([&] {
    cmd_infer(inf_input, inf_method, inf_no_detrend, inf_timings, inf_out);
  });

  // fill
  auto* fil = app.add_subcommand("fill", "Fill the gaps of a series file");
  std::string fil_input, fil_predictor = "sp", fil_method = "mmom", fil_out;
  std::vector<double> fil_params;
  std::size_t fil_window = 0;
  bool fil_no_detrend = false, fil_timings = false;
  fil->add_option("--input", fil_input, "Input CSV series")->required();
  fil->add_option("--predictor", fil_predictor, "Predictor: sp or kwp")
      ->capture_default_str();
  fil->add_option("--method", fil_method,
                  "Fit method when --params is absent: mmom or mle")
      ->capture_default_str();
  fil->add_option("--params", fil_params,
                  "Skip fitting and use these eta0 eta1 xi")
      ->expected(3);
  fil->add_option("--window", fil_window,
                  "KWP neighborhood half-width (0 = full training set)")
      ->capture_default_str();
  fil->add_flag("--no-detrend", fil_no_detrend,
                "Skip mean subtraction before fitting");
  fil->add_flag("--timings", fil_timings, "Report elapsed time on stderr");
  fil->add_option("--out", fil_out,
                  "Output CSV path (default: <input stem>.filled.csv)");
  fil->callback([&] {
    cmd_fill(fil_input, fil_predictor, fil_method, fil_params, fil_window,
             fil_no_detrend, fil_timings, fil_out);
  });

  // acf
  auto* acf = app.add_subcommand(
      "acf", "Empirical autocorrelation of a series as plot data");
  std::string acf_input, acf_out = "-";
  std::size_t acf_max_lag = 20;
  bool acf_no_detrend = false;
  acf->add_option("--input", acf_input, "Input CSV series")->required();
  acf->add_option("--max-lag", acf_max_lag, "Largest lag in grid steps")
      ->capture_default_str();
  acf->add_flag("--no-detrend", acf_no_detrend, "Skip mean subtraction");
  acf->add_option("--out", acf_out, "Output path (- for stdout)")
      ->capture_default_str();
  acf->callback([&] {
    cmd_acf(acf_input, acf_max_lag, acf_no_detrend, acf_out);
  });

  // surface
  auto* sur = app.add_subcommand(
      "surface", "Objective surface over (eta1, xi) as plot data");
  std::string sur_input, sur_objective = "dm", sur_out = "-";
  SurfaceRanges sur_ranges;
  bool sur_no_detrend = false;
  sur->add_option("--input", sur_input, "Input CSV series")->required();
  sur->add_option("--objective", sur_objective, "Objective: dm or nll")
      ->capture_default_str();
  sur->add_option("--eta1-min", sur_ranges.eta1_min)->capture_default_str();
  sur->add_option("--eta1-max", sur_ranges.eta1_max)->capture_default_str();
  sur->add_option("--eta1-steps", sur_ranges.eta1_steps)
      ->capture_default_str();
  sur->add_option("--xi-min", sur_ranges.xi_min)->capture_default_str();
  sur->add_option("--xi-max", sur_ranges.xi_max)->capture_default_str();
  sur->add_option("--xi-steps", sur_ranges.xi_steps)->capture_default_str();
  sur->add_flag("--no-detrend", sur_no_detrend, "Skip mean subtraction");
  sur->add_option("--out", sur_out, "Output path (- for stdout)")
      ->capture_default_str();
  sur->callback([&] {
    cmd_surface(sur_input, sur_objective, sur_ranges, sur_no_detrend,
                sur_out);
  });

  // bench
  auto* ben = app.add_subcommand(
      "bench", "Run a benchmark plan and write the JSON report");
  std::string ben_plan, ben_out = "-";
  std::uint64_t ben_seed = 0;
  bool ben_timings = false;
  ben->add_option("--plan", ben_plan, "Benchmark plan (JSON)")->required();
  auto* ben_seed_opt =
      ben->add_option("--seed", ben_seed, "Override the plan's master seed");
  ben->add_flag("--timings", ben_timings,
                "Include wall-clock fields in the report");
  ben->add_option("--out", ben_out, "Report path (- for stdout)")
      ->capture_default_str();
  ben->callback([&] {
    cmd_bench(ben_plan, ben_timings, ben_seed_opt->count() > 0, ben_seed,
              ben_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\nbest point:";
    for (double v : e.best_point()) std::cerr << ' ' << v;
    std::cerr << "\nbest value: " << e.best_value() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
