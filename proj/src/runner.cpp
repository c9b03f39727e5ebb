#include "adia/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "adia/conditions.hpp"
#include "adia/dynamics.hpp"
#include "adia/errors.hpp"
#include "adia/numerics.hpp"
#include "adia/oracles.hpp"
#include "adia/spectral.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adia {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Pipeline {
  TimeGrid grid;
  EigenFrameSequence frames;
  SpectralFlow flow;
  Trajectory traj;
  CoefficientSeries coeffs;
  std::vector<double> survival;
  std::vector<double> first_order;
};

Pipeline run_pipeline(const HamiltonianModel& model, const ExperimentConfig& cfg,
                      bool with_dynamics = true) {
  Pipeline p;
  p.grid = TimeGrid::uniform(cfg.grid.t_max, cfg.grid.steps);
  p.frames = track_frames(model, p.grid);
  p.flow = compute_flow(p.frames, model);
  if (!with_dynamics) return p;

  const State psi0 = p.frames.level(0, cfg.initial_level);
  IntegratorOptions iopts;
  iopts.rk4_cross_check = cfg.rk4_cross_check;
  p.traj = integrate_schrodinger(model, psi0, p.grid, iopts);

  std::vector<std::vector<State>> orbits;
  orbits.reserve(static_cast<size_t>(model.dim()));
  for (int n = 0; n < model.dim(); ++n) orbits.push_back(adiabatic_orbit(p.frames, p.flow, n));
  p.coeffs = project_onto_adiabatic(p.traj, orbits);
  p.survival = survival_probability(p.coeffs, cfg.initial_level);
  p.first_order = first_order_survival(p.flow, p.frames, cfg.initial_level);
  return p;
}

fs::path resolve(const std::string& out_dir, const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) p = fs::path(out_dir) / p;
  return p;
}

std::ofstream open_output(const fs::path& p, const std::string& field) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p);
  if (!out) throw ConfigInvalid(field, "path '" + p.string() + "' is not writable");
  return out;
}

void write_series_csv(std::ofstream& out, const Pipeline& p, int dim) {
  out << "tau,P_m,P_m_first_order";
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) {
      if (n == m) continue;
      out << ",gamma_abs_" << n << m << ",theta_" << n << m << ",delta_" << m << n;
    }
  for (int n = 0; n < dim; ++n) out << ",e_" << n;
  out << "\n";

  for (int k = 0; k < p.grid.size(); ++k) {
    out << format17(p.grid[k]) << ',' << format17(p.survival[static_cast<size_t>(k)]) << ','
        << format17(p.first_order[static_cast<size_t>(k)]);
    for (int n = 0; n < dim; ++n)
      for (int m = 0; m < dim; ++m) {
        if (n == m) continue;
        out << ',' << format17(p.flow.gamma_abs(k, n, m)) << ','
            << format17(p.flow.theta[static_cast<size_t>(p.flow.pair_index(n, m))][static_cast<size_t>(k)])
            << ','
            << format17(p.flow.delta[static_cast<size_t>(p.flow.pair_index(m, n))][static_cast<size_t>(k)]);
      }
    for (int n = 0; n < dim; ++n) out << ',' << format17(p.frames.value(k, n));
    out << "\n";
  }
}

double clamp_ratio(double v) { return std::isfinite(v) ? v : 1e300; }

json pair_json(const PairConditionResult& pr) {
  return json{{"n", pr.n},
              {"m", pr.m},
              {"max_traditional_ratio", clamp_ratio(pr.max_traditional_ratio)},
              {"max_pointwise_ratio", clamp_ratio(pr.max_pointwise_ratio)},
              {"integral_lhs", pr.integral_lhs},
              {"integral_rhs", pr.integral_rhs},
              {"phase_span_ok", pr.phase.span_ok},
              {"phase_rate_ok", pr.phase.rate_ok},
              {"vacuous", pr.vacuous},
              {"traditional_satisfied", pr.traditional_satisfied},
              {"pointwise_satisfied", pr.pointwise_satisfied},
              {"integral_satisfied", pr.integral_satisfied},
              {"traditional", verdict_label(pr.traditional_verdict)},
              {"pointwise", verdict_label(pr.pointwise_verdict)},
              {"integral", verdict_label(pr.integral_verdict)}};
}

json conditions_json(const ConditionReport& rep) {
  json pairs = json::array();
  for (const auto& pr : rep.pairs) pairs.push_back(pair_json(pr));
  return json{{"threshold", rep.threshold},
              {"window", {rep.window.first, rep.window.second}},
              {"pairs", pairs}};
}

void print_condition_table(const ConditionReport& rep, const std::string& title) {
  std::printf("%s (threshold R = %g, window [%g, %g])\n", title.c_str(), rep.threshold,
              rep.window.first, rep.window.second);
  std::printf("  %-8s %-13s %-13s %-13s %-13s %-13s %-13s %-13s\n", "pair", "max trad", "max pointwise",
              "int lhs", "int rhs", "traditional", "pointwise", "integral");
  for (const auto& pr : rep.pairs)
    std::printf("  (%d,%d)    %-13.4e %-13.4e %-13.4e %-13.4e %-13s %-13s %-13s\n", pr.n, pr.m,
                pr.max_traditional_ratio, pr.max_pointwise_ratio, pr.integral_lhs, pr.integral_rhs,
                verdict_label(pr.traditional_verdict).c_str(),
                verdict_label(pr.pointwise_verdict).c_str(),
                verdict_label(pr.integral_verdict).c_str());
}

json config_echo(const ExperimentConfig& cfg) {
  json j{{"schema_version", kSchemaVersion},
         {"mode", mode_name(cfg.mode)},
         {"model", cfg.model_spec},
         {"grid", {{"t_max", cfg.grid.t_max}, {"steps", cfg.grid.steps}}},
         {"initial_level", cfg.initial_level},
         {"threshold", cfg.threshold},
         {"outputs", {{"csv_path", cfg.outputs.csv_path}, {"json_path", cfg.outputs.json_path}}},
         {"rk4_cross_check", cfg.rk4_cross_check}};
  if (cfg.sweep)
    j["sweep"] = json{{"parameter", cfg.sweep->parameter},
                      {"min", cfg.sweep->min},
                      {"max", cfg.sweep->max},
                      {"count", cfg.sweep->count},
                      {"scale", cfg.sweep->scale}};
  return j;
}

// sign convention for the two-level closed forms: level 0 -> lower (-), 1 -> upper (+)
int level_sign(int level) { return level == 0 ? -1 : +1; }

json oracle_deltas(const SpinHalfModel& model, const ExperimentConfig& cfg, const Pipeline& p) {
  SpinHalfClosedForm cf(model.params());
  double max_surv_err = 0.0, max_infidelity = 0.0;
  for (int k = 0; k < p.grid.size(); ++k) {
    const double tau = p.grid[k];
    max_surv_err =
        std::max(max_surv_err, std::abs(p.survival[static_cast<size_t>(k)] - cf.survival(tau)));
    const State exact = cf.exact_state(level_sign(cfg.initial_level), tau);
    max_infidelity =
        std::max(max_infidelity, 1.0 - fidelity(exact, p.traj.states[static_cast<size_t>(k)]));
  }
  return json{{"max_survival_error", max_surv_err}, {"max_state_infidelity", max_infidelity}};
}

struct SweepRow {
  double value = 0.0;
  double min_p = 0.0;
  double final_p = 0.0;
  std::string traditional, pointwise, integral, regime;
};

Verdict aggregate(const ConditionReport& rep, Verdict PairConditionResult::*member) {
  bool any_fail = false, any_inapplicable = false;
  for (const auto& pr : rep.pairs) {
    if (pr.*member == Verdict::Fail) any_fail = true;
    if (pr.*member == Verdict::Inapplicable) any_inapplicable = true;
  }
  if (any_fail) return Verdict::Fail;
  if (any_inapplicable) return Verdict::Inapplicable;
  return Verdict::Pass;
}

int sweep_workers() {
  int workers = 1;
#ifdef _OPENMP
  workers = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("ADIACHECK_WORKERS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) workers = std::min(workers, cap);
  }
  return workers;
}

}  // namespace

void validate_report_json(const json& report) {
  const auto fail = [](const std::string& what) {
    throw NumericalError("report schema violation: " + what);
  };
  if (!report.is_object()) fail("not an object");
  if (!report.contains("schema_version") ||
      report["schema_version"].get<int>() != kSchemaVersion)
    fail("schema_version");
  if (!report.contains("tool_version") || !report["tool_version"].is_string())
    fail("tool_version");
  if (!report.contains("mode") || !report["mode"].is_string()) fail("mode");
  if (!report.contains("config") || !report["config"].is_object()) fail("config");
  if (!report.contains("results") || !report["results"].is_object()) fail("results");
  if (!report.contains("wall_time_seconds") || !report["wall_time_seconds"].is_number())
    fail("wall_time_seconds");

  // every numeric entry must be finite
  std::function<void(const json&)> walk = [&](const json& j) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) fail("non-finite number");
    if (j.is_object() || j.is_array())
      for (const auto& item : j) walk(item);
  };
  walk(report);
}

json run(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.mode == RunMode::Sweep) return run_sweep(cfg, out_dir);

  std::shared_ptr<HamiltonianModel> model = build_model(cfg.model_spec);
  const auto* spin_half = dynamic_cast<const SpinHalfModel*>(model.get());

  json results;
  results["initial_level"] = cfg.initial_level;

  std::ofstream csv = open_output(resolve(out_dir, cfg.outputs.csv_path), "outputs.csv_path");

  if (cfg.mode == RunMode::Oracle) {
    if (!spin_half)
      throw ConfigInvalid("model.type", "oracle mode needs the spin_half closed forms");
    SpinHalfClosedForm cf(spin_half->params());
    const TimeGrid grid = TimeGrid::uniform(cfg.grid.t_max, cfg.grid.steps);
    csv << "tau,omega,mixing_angle,delta,P_closed_form\n";
    double min_p = 1.0;
    for (int k = 0; k < grid.size(); ++k) {
      const double tau = grid[k];
      const double p = cf.survival(tau);
      min_p = std::min(min_p, p);
      csv << format17(tau) << ',' << format17(cf.omega(tau)) << ','
          << format17(cf.mixing_angle(tau)) << ',' << format17(cf.delta(tau)) << ','
          << format17(p) << "\n";
    }
    results["regime"] = regime_label(regime_classify(cf, {0.0, cfg.grid.t_max}, cfg.threshold));
    results["min_survival_closed_form"] = min_p;
    results["final_survival_closed_form"] = cf.survival(cfg.grid.t_max);
  } else {
    Pipeline p = run_pipeline(*model, cfg);
    write_series_csv(csv, p, model->dim());

    results["min_survival"] = *std::min_element(p.survival.begin(), p.survival.end());
    results["final_survival"] = p.survival.back();
    results["min_first_order_survival"] =
        *std::min_element(p.first_order.begin(), p.first_order.end());
    results["final_first_order_survival"] = p.first_order.back();
    if (spin_half) {
      results["oracle"] = oracle_deltas(*spin_half, cfg, p);
      results["regime"] = regime_label(
          regime_classify(SpinHalfClosedForm(spin_half->params()), {0.0, cfg.grid.t_max},
                          cfg.threshold));
    }

    if (cfg.mode == RunMode::Check || cfg.mode == RunMode::Dual) {
      const ConditionReport rep = evaluate_conditions(p.flow, p.frames, cfg.threshold);
      results["conditions"] = conditions_json(rep);
      print_condition_table(rep, "conditions: base system");

      if (cfg.mode == RunMode::Dual) {
        if (!model->has_propagator())
          throw ConfigInvalid("model.type", "dual mode needs a model with a propagator");
        auto dual = std::make_shared<DualModel>(model);
        Pipeline pd = run_pipeline(*dual, cfg, /*with_dynamics=*/false);
        const ConditionReport dual_rep = evaluate_conditions(pd.flow, pd.frames, cfg.threshold);
        results["dual_conditions"] = conditions_json(dual_rep);
        print_condition_table(dual_rep, "conditions: dual system");

        const double residual =
            dual_gamma_residual(p.frames, p.flow, pd.frames, pd.flow, *model);
        const DualComparison cmp = compare_dual_conditions(rep, dual_rep);
        results["dual"] = json{{"gamma_residual_max", residual},
                               {"ratio_identity_residual", cmp.ratio_identity_residual},
                               {"summary", cmp.summary}};
        std::printf("dual relation: gamma residual %.3e, ratio identity residual %.3e\n%s\n",
                    residual, cmp.ratio_identity_residual, cmp.summary.c_str());
      }
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json report{{"schema_version", kSchemaVersion},
              {"tool_version", kToolVersion},
              {"mode", mode_name(cfg.mode)},
              {"config", config_echo(cfg)},
              {"results", results},
              {"wall_time_seconds", wall}};
  validate_report_json(report);
  std::ofstream jout = open_output(resolve(out_dir, cfg.outputs.json_path), "outputs.json_path");
  jout << report.dump(2) << "\n";
  return report;
}

json run_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const SweepSpec& sw = *cfg.sweep;

  std::vector<double> values(static_cast<size_t>(sw.count));
  for (int i = 0; i < sw.count; ++i) {
    const double f = static_cast<double>(i) / (sw.count - 1);
    values[static_cast<size_t>(i)] = sw.scale == "log"
                                         ? sw.min * std::pow(sw.max / sw.min, f)
                                         : sw.min + (sw.max - sw.min) * f;
  }

  const std::string type =
      cfg.model_spec.contains("type") ? cfg.model_spec["type"].get<std::string>() : "";
  if ((sw.parameter == "eta" || sw.parameter == "xi.constant") && type != "spin_half")
    throw ConfigInvalid("sweep.parameter", "'" + sw.parameter + "' sweeps need a spin_half model");
  if (sw.parameter == "xi.constant" &&
      cfg.model_spec["xi"].value("kind", std::string{}) != "constant")
    throw ConfigInvalid("sweep.parameter", "xi.constant sweeps need a constant xi schedule");

  std::vector<SweepRow> rows(values.size());
  std::exception_ptr eptr = nullptr;
  const int workers = sweep_workers();

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
  for (long i = 0; i < static_cast<long>(values.size()); ++i) {
    try {
      const double v = values[static_cast<size_t>(i)];
      ExperimentConfig point = cfg;
      point.mode = RunMode::Check;
      if (sw.parameter == "eta")
        point.model_spec["eta"] = v;
      else if (sw.parameter == "xi.constant")
        point.model_spec["xi"]["value"] = v;
      else
        point.grid.t_max = v;

      std::shared_ptr<HamiltonianModel> model = build_model(point.model_spec);
      if (point.grid.t_max > model->horizon())
        throw ConfigInvalid("sweep", "swept t_max exceeds the model horizon");

      Pipeline p = run_pipeline(*model, point);
      const ConditionReport rep = evaluate_conditions(p.flow, p.frames, point.threshold);

      SweepRow row;
      row.value = v;
      row.min_p = *std::min_element(p.survival.begin(), p.survival.end());
      row.final_p = p.survival.back();
      row.traditional = verdict_label(aggregate(rep, &PairConditionResult::traditional_verdict));
      row.pointwise = verdict_label(aggregate(rep, &PairConditionResult::pointwise_verdict));
      row.integral = verdict_label(aggregate(rep, &PairConditionResult::integral_verdict));
      if (const auto* sh = dynamic_cast<const SpinHalfModel*>(model.get()))
        row.regime = regime_label(regime_classify(SpinHalfClosedForm(sh->params()),
                                                  {0.0, point.grid.t_max}, point.threshold));
      else
        row.regime = "n/a";
      rows[static_cast<size_t>(i)] = std::move(row);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!eptr) eptr = std::current_exception();
    }
  }
  if (eptr) std::rethrow_exception(eptr);

  // single writer, deterministic order
  std::ofstream csv = open_output(resolve(out_dir, cfg.outputs.csv_path), "outputs.csv_path");
  csv << "value,min_P,final_P,traditional_verdict,pointwise_verdict,integral_verdict,regime\n";
  for (const SweepRow& r : rows)
    csv << format17(r.value) << ',' << format17(r.min_p) << ',' << format17(r.final_p) << ','
        << r.traditional << ',' << r.pointwise << ',' << r.integral << ',' << r.regime << "\n";

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json values_json = json::array();
  for (double v : values) values_json.push_back(v);
  json report{{"schema_version", kSchemaVersion},
              {"tool_version", kToolVersion},
              {"mode", mode_name(RunMode::Sweep)},
              {"config", config_echo(cfg)},
              {"results", json{{"rows", static_cast<int>(rows.size())},
                               {"parameter", sw.parameter},
                               {"values", values_json},
                               {"workers", workers}}},
              {"wall_time_seconds", wall}};
  validate_report_json(report);
  std::ofstream jout = open_output(resolve(out_dir, cfg.outputs.json_path), "outputs.json_path");
  jout << report.dump(2) << "\n";
  return report;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"adiacheck: numerical adiabaticity analysis for time-dependent quantum models"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  for (const char* name : {"simulate", "check", "dual", "sweep", "oracle"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (default: current)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunMode cli_mode = mode_from_name(app.get_subcommands().front()->get_name());
    ExperimentConfig cfg = load_config_file(config_path);
    if (cfg.mode_explicit && cfg.mode != cli_mode)
      throw ConfigInvalid("mode", "config says '" + mode_name(cfg.mode) +
                                      "' but the subcommand is '" + mode_name(cli_mode) + "'");
    cfg.mode = cli_mode;
    if (cfg.mode == RunMode::Sweep && !cfg.sweep)
      throw ConfigInvalid("sweep", "sweep mode needs a sweep block");
    run(cfg, out_dir);
    return 0;
  } catch (const ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace adia
