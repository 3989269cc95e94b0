#include "spartan/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "spartan/errors.hpp"
#include "spartan/predict.hpp"
#include "spartan/stats.hpp"
#include "spartan/synth.hpp"

namespace spartan {

namespace {

using nlohmann::json;

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

json spec_to_json(const CovarianceSpec& spec) {
  json j;
  j["kind"] = cov_kind_name(spec.kind);
  switch (spec.kind) {
    case CovKind::spartan:
      j["eta0"] = spec.sp.eta0;
      j["eta1"] = spec.sp.eta1;
      j["xi"] = spec.sp.xi;
      break;
    case CovKind::whittle_matern:
      j["sigma"] = spec.sigma;
      j["kappa"] = spec.kappa;
      j["nu"] = spec.nu;
      break;
    default:
      j["sigma"] = spec.sigma;
      j["b"] = spec.b;
      break;
  }
  return j;
}

CovarianceSpec spec_from_json(const json& j, double alpha) {
  if (!j.is_object() || !j.contains("kind")) {
    throw InputError("benchmark plan: \"model\" must be an object with a "
                     "\"kind\" field");
  }
  CovarianceSpec spec;
  spec.kind = cov_kind_from_name(j.at("kind").get<std::string>());
  switch (spec.kind) {
    case CovKind::spartan:
      spec.sp.eta0 = j.value("eta0", 1.0);
      spec.sp.eta1 = j.value("eta1", 0.0);
      spec.sp.xi = j.value("xi", 1.0);
      spec.sp.alpha = alpha;
      break;
    case CovKind::whittle_matern:
      spec.sigma = j.value("sigma", 1.0);
      spec.kappa = j.value("kappa", 1.0);
      spec.nu = j.value("nu", 0.5);
      break;
    default:
      spec.sigma = j.value("sigma", 1.0);
      spec.b = j.value("b", 1.0);
      break;
  }
  validate(spec);
  return spec;
}

json metrics_to_json(const MetricSet& m) {
  json j;
  j["count"] = m.count;
  if (m.count == 0) return j;
  j["mae"] = m.mae;
  j["rmse"] = m.rmse;
  j["relative_excluded"] = m.excluded_relative;
  if (m.count > m.excluded_relative) {
    j["mre"] = m.mre;
    j["mare"] = m.mare;
  }
  return j;
}

json report_to_json(const ErrorReport& rep) {
  json j;
  json cats;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      const std::string key =
          "(" + std::to_string(i) + "," + std::to_string(k) + ")";
      cats[key] = metrics_to_json(
          rep.by_category[static_cast<std::size_t>(i)]
                         [static_cast<std::size_t>(k)]);
    }
  }
  j["categories"] = std::move(cats);
  j["total"] = metrics_to_json(rep.total);
  if (std::isfinite(rep.r)) j["r"] = rep.r;
  return j;
}

json fit_to_json(const FitResult& fit, bool timings) {
  json j;
  j["eta0"] = fit.params.eta0;
  j["eta1"] = fit.params.eta1;
  j["xi"] = fit.params.xi;
  j["objective"] = fit.objective;
  j["iterations"] = fit.iterations;
  if (timings) j["elapsed_seconds"] = fit.elapsed_seconds;
  return j;
}

// Running mean over replicates that produced a value.
struct MeanAccum {
  double sum = 0.0;
  std::size_t count = 0;
  void add(double v) {
    if (std::isfinite(v)) {
      sum += v;
      ++count;
    }
  }
  void emit(json& j, const char* key) const {
    if (count > 0) j[key] = sum / static_cast<double>(count);
  }
};

struct FillAggregate {
  MeanAccum mae, mare, mre, rmse, r;
  MeanAccum cat_mare[3][3];
  MeanAccum cat_rmse[3][3];
  std::size_t cat_count[3][3] = {};

  void add(const ErrorReport& rep) {
    mae.add(rep.total.mae);
    mare.add(rep.total.mare);
    mre.add(rep.total.mre);
    rmse.add(rep.total.rmse);
    r.add(rep.r);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const MetricSet& m = rep.by_category[static_cast<std::size_t>(i)]
                                            [static_cast<std::size_t>(j)];
        if (m.count == 0) continue;
        cat_count[i][j] += m.count;
        cat_rmse[i][j].add(m.rmse);
        cat_mare[i][j].add(m.mare);
      }
    }
  }

  json to_json() const {
    json j;
    mae.emit(j, "mean_mae");
    mare.emit(j, "mean_mare");
    mre.emit(j, "mean_mre");
    rmse.emit(j, "mean_rmse");
    r.emit(j, "mean_r");
    json cats;
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) {
        json c;
        c["count"] = cat_count[i][k];
        cat_rmse[i][k].emit(c, "mean_rmse");
        cat_mare[i][k].emit(c, "mean_mare");
        cats["(" + std::to_string(i) + "," + std::to_string(k) + ")"] =
            std::move(c);
      }
    }
    j["categories"] = std::move(cats);
    return j;
  }
};

struct FitAggregate {
  MeanAccum eta0, eta1, xi, objective, iterations;
  void add(const FitResult& fit) {
    eta0.add(fit.params.eta0);
    eta1.add(fit.params.eta1);
    xi.add(fit.params.xi);
    objective.add(fit.objective);
    iterations.add(static_cast<double>(fit.iterations));
  }
  json to_json() const {
    json j;
    eta0.emit(j, "mean_eta0");
    eta1.emit(j, "mean_eta1");
    xi.emit(j, "mean_xi");
    objective.emit(j, "mean_objective");
    iterations.emit(j, "mean_iterations");
    return j;
  }
};

}  // namespace

BenchPlan parse_plan(const json& j) {
  if (!j.is_object()) {
    throw InputError("benchmark plan must be a JSON object");
  }
  BenchPlan plan;
  try {
    plan.n = j.value("n", plan.n);
    plan.mean = j.value("mean", plan.mean);
    plan.alpha = j.value("alpha", plan.alpha);
    plan.replicates = j.value("replicates", plan.replicates);
    plan.seed = j.value("seed", plan.seed);
    plan.lattice = j.value("lattice", plan.lattice);
    plan.timings = j.value("timings", plan.timings);
    if (j.contains("thinning")) {
      plan.thinning = j.at("thinning").get<std::vector<double>>();
    }
    if (j.contains("fits")) {
      plan.fits.clear();
      for (const auto& name : j.at("fits")) {
        plan.fits.push_back(fit_method_from_name(name.get<std::string>()));
      }
    }
    if (j.contains("predictors")) {
      plan.fill_sp = false;
      plan.fill_kwp = false;
      for (const auto& name : j.at("predictors")) {
        const std::string s = name.get<std::string>();
        if (s == "sp") {
          plan.fill_sp = true;
        } else if (s == "kwp") {
          plan.fill_kwp = true;
        } else {
          throw InputError("benchmark plan: unknown predictor \"" + s + "\"");
        }
      }
    }
    plan.model = spec_from_json(j.value("model", json::object(
                                    {{"kind", "gaussian"}})), plan.alpha);
  } catch (const json::exception& e) {
    throw InputError(std::string("benchmark plan: ") + e.what());
  }

  if (plan.n < 3) throw InputError("benchmark plan: need n >= 3");
  if (plan.replicates < 1) {
    throw InputError("benchmark plan: need at least one replicate");
  }
  if (plan.thinning.empty()) {
    throw InputError("benchmark plan: need at least one thinning fraction");
  }
  for (double p : plan.thinning) {
    if (!(p > 0.0) || !(p < 1.0)) {
      throw InputError("benchmark plan: thinning fractions must lie in (0,1)");
    }
  }
  if (plan.fits.empty()) {
    throw InputError("benchmark plan: need at least one fit method");
  }
  if (plan.lattice && plan.model.kind != CovKind::spartan) {
    throw InputError("benchmark plan: lattice sampling requires the spartan "
                     "model");
  }
  return plan;
}

json plan_to_json(const BenchPlan& plan) {
  json j;
  j["model"] = spec_to_json(plan.model);
  j["n"] = plan.n;
  j["mean"] = plan.mean;
  j["alpha"] = plan.alpha;
  j["thinning"] = plan.thinning;
  j["replicates"] = plan.replicates;
  j["seed"] = plan.seed;
  json fits = json::array();
  for (FitMethod m : plan.fits) fits.push_back(fit_method_name(m));
  j["fits"] = std::move(fits);
  json preds = json::array();
  if (plan.fill_sp) preds.push_back("sp");
  if (plan.fill_kwp) preds.push_back("kwp");
  j["predictors"] = std::move(preds);
  j["lattice"] = plan.lattice;
  j["timings"] = plan.timings;
  return j;
}

json run_benchmark(const BenchPlan& plan) {
  validate(plan.model);

  json results = json::array();
  for (double p : plan.thinning) {
    json replicates = json::array();
    FitAggregate fit_agg[2];
    FillAggregate sp_agg, kwp_agg;
    std::size_t failed = 0;

    for (std::size_t r = 0; r < plan.replicates; ++r) {
      const std::uint64_t seed = plan.seed + r;
      json entry;
      entry["replicate"] = r;
      entry["seed"] = seed;
      try {
        GappySeries complete;
        if (plan.lattice) {
          SpartanParams sp = plan.model.sp;
          sp.alpha = plan.alpha;
          complete = simulate_lattice(plan.n, sp, plan.mean, seed);
          complete.alpha = plan.alpha;
        } else {
          SimConfig cfg;
          cfg.spec = plan.model;
          cfg.n = plan.n;
          cfg.mean = plan.mean;
          cfg.seed = seed;
          cfg.alpha = plan.alpha;
          complete = simulate_series(cfg);
        }

        ThinResult parts = thin(complete, p, seed);
        GappySeries training = parts.training;
        detrend(training);

        // Fit with each requested method; fills use the method-of-moments
        // parameters when available, otherwise the likelihood ones.
        json fits;
        FitResult fill_params_fit;
        bool have_fit = false;
        bool fill_from_mmom = false;
        for (const FitMethod method : plan.fits) {
          const FitResult fit = method == FitMethod::mmom
                                    ? fit_mmom(training)
                                    : fit_mle(training);
          fits[fit_method_name(method)] = fit_to_json(fit, plan.timings);
          fit_agg[method == FitMethod::mmom ? 0 : 1].add(fit);
          if (!have_fit || (method == FitMethod::mmom && !fill_from_mmom)) {
            fill_params_fit = fit;
            fill_from_mmom = method == FitMethod::mmom;
            have_fit = true;
          }
        }
        entry["fits"] = std::move(fits);

        std::vector<std::pair<int, int>> categories;
        categories.reserve(parts.validation_index.size());
        for (std::size_t idx : parts.validation_index) {
          categories.push_back(classify_category(idx, training.present));
        }

        json fills;
        const SpartanParams fitted = fill_params_fit.params;
        if (plan.fill_sp) {
          const auto t0 = std::chrono::steady_clock::now();
          const FilledSeries filled = sp_fill(training, fitted);
          std::vector<double> predicted;
          predicted.reserve(parts.validation_index.size());
          for (std::size_t idx : parts.validation_index) {
            predicted.push_back(filled.values[idx]);
          }
          const ErrorReport rep =
              error_stats(predicted, parts.validation_value, categories);
          json jr = report_to_json(rep);
          if (plan.timings) jr["elapsed_seconds"] = elapsed_since(t0);
          fills["sp"] = std::move(jr);
          sp_agg.add(rep);
        }
        if (plan.fill_kwp) {
          CovarianceSpec cov;
          cov.kind = CovKind::spartan;
          cov.sp = fitted;
          const auto t0 = std::chrono::steady_clock::now();
          const FilledSeries filled = kwp_fill(training, cov);
          std::vector<double> predicted;
          predicted.reserve(parts.validation_index.size());
          for (std::size_t idx : parts.validation_index) {
            predicted.push_back(filled.values[idx]);
          }
          const ErrorReport rep =
              error_stats(predicted, parts.validation_value, categories);
          json jr = report_to_json(rep);
          if (plan.timings) jr["elapsed_seconds"] = elapsed_since(t0);
          fills["kwp"] = std::move(jr);
          kwp_agg.add(rep);
        }
        entry["fills"] = std::move(fills);
      } catch (const std::exception& e) {
        entry["error"] = e.what();
        ++failed;
      }
      replicates.push_back(std::move(entry));
    }

    json aggregate;
    json agg_fits;
    for (FitMethod m : plan.fits) {
      agg_fits[fit_method_name(m)] =
          fit_agg[m == FitMethod::mmom ? 0 : 1].to_json();
    }
    aggregate["fits"] = std::move(agg_fits);
    json agg_fills;
    if (plan.fill_sp) agg_fills["sp"] = sp_agg.to_json();
    if (plan.fill_kwp) agg_fills["kwp"] = kwp_agg.to_json();
    aggregate["fills"] = std::move(agg_fills);
    aggregate["failed_replicates"] = failed;

    json block;
    block["p"] = p;
    block["replicates"] = std::move(replicates);
    block["aggregate"] = std::move(aggregate);
    results.push_back(std::move(block));
  }

  json report;
  report["plan"] = plan_to_json(plan);
  report["results"] = std::move(results);
  return report;
}

}  // namespace spartan
