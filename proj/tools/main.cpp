// Command-line front end: solve, analyze, bounds, scan, verify, closed-form,
// and ufm subcommands over the spherecode library.
//
// Exit codes: 0 success, 2 flag or configuration errors, 3 solver failure,
// 4 malformed input files, 5 no closed form for the requested shape.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spherecode/spherecode.hpp"

namespace {

struct CliExit {
  int code;
};

struct SolveOptions {
  int dim = 2;
  int classes = 2;
  int samples = 1;
  int restarts = -1;  // resolved from dim when not set
  int max_iters = 5000;
  double step_size = 1.0;
  double grad_tol = 1e-7;
  double tau_start = 1.0;
  int tau_stages = 8;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
};

int default_restarts(int dim) { return dim <= 4 ? 16 : 8; }

spherecode::SolverConfig to_solver_config(const SolveOptions& opt) {
  spherecode::SolverConfig config;
  config.dim = opt.dim;
  config.count = opt.classes;
  config.samples_per_class = opt.samples;
  config.restarts = opt.restarts >= 0 ? opt.restarts : default_restarts(opt.dim);
  config.max_iters = opt.max_iters;
  config.step_size = opt.step_size;
  config.grad_tol = opt.grad_tol;
  config.seed = opt.seed;
  config.threads = opt.threads;
  config.tau_schedule.clear();
  double tau = opt.tau_start;
  for (int i = 0; i < opt.tau_stages; ++i) {
    config.tau_schedule.push_back(tau);
    tau *= 0.5;
  }
  return config;
}

void add_solve_flags(CLI::App* cmd, SolveOptions* opt, bool with_samples) {
  cmd->add_option("--dim,-d", opt->dim, "Ambient dimension")->required();
  cmd->add_option("--classes,-k", opt->classes, "Number of points")->required();
  if (with_samples) {
    cmd->add_option("--samples,-n", opt->samples, "Feature samples per class");
  }
  cmd->add_option("--restarts", opt->restarts,
                  "Random restarts (default 16 for d <= 4, else 8)");
  cmd->add_option("--max-iters", opt->max_iters, "Iteration cap per stage");
  cmd->add_option("--step-size", opt->step_size, "Initial line-search step");
  cmd->add_option("--grad-tol", opt->grad_tol, "Gradient norm stopping tolerance");
  cmd->add_option("--tau-start", opt->tau_start, "First temperature stage");
  cmd->add_option("--tau-stages", opt->tau_stages,
                  "Number of halving temperature stages");
  cmd->add_option("--seed", opt->seed, "Random seed");
  cmd->add_option("--threads", opt->threads, "Worker threads (0 = hardware)")
      ->envname("SPHERECODE_THREADS");
  cmd->add_option("--out", opt->out,
                  "Output prefix; writes <out>.csv and <out>.json");
}

void emit_solve_report(const spherecode::SolveReport& report,
                       const std::string& out) {
  if (!std::isfinite(report.achieved)) {
    std::cerr << "solver produced a non-finite margin\n";
    throw CliExit{3};
  }
  const std::string json = spherecode::solve_report_to_json(report);
  if (out.empty()) {
    std::cout << json;
  } else {
    spherecode::write_configuration_csv(out + ".csv", report.best_config);
    spherecode::write_text_file(out + ".json", json);
    std::cout << "achieved " << spherecode::format_double(report.achieved)
              << " (" << spherecode::to_string(report.objective_kind) << ")\n"
              << "wrote " << out << ".csv and " << out << ".json\n";
  }
}

std::optional<double> resolve_reference(const std::string& spec, int dim,
                                        int count) {
  if (spec == "none") {
    return std::nullopt;
  }
  if (spec == "auto") {
    if (const auto closed = spherecode::closed_form_optimum(dim, count)) {
      return closed->rho_one_vs_rest;
    }
    return std::nullopt;
  }
  try {
    std::size_t consumed = 0;
    const double value = std::stod(spec, &consumed);
    if (consumed != spec.size()) {
      throw std::invalid_argument(spec);
    }
    return value;
  } catch (const std::exception&) {
    std::cerr << "--reference must be 'auto', 'none', or a number, got '"
              << spec << "'\n";
    throw CliExit{2};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximally separated spherical configurations and collapse metrics"};
  app.require_subcommand(1);

  // solve softmax-code | solve tammes
  CLI::App* solve = app.add_subcommand("solve", "Run a multistart solver");
  solve->require_subcommand(1);
  SolveOptions sc_opt;
  CLI::App* softmax = solve->add_subcommand(
      "softmax-code", "Maximize the one-vs-rest margin");
  add_solve_flags(softmax, &sc_opt, true);
  softmax->callback([&] {
    emit_solve_report(spherecode::solve_softmax_code(to_solver_config(sc_opt)),
                      sc_opt.out);
  });
  SolveOptions tam_opt;
  CLI::App* tammes = solve->add_subcommand(
      "tammes", "Maximize the minimum pairwise distance");
  add_solve_flags(tammes, &tam_opt, false);
  tammes->callback([&] {
    emit_solve_report(spherecode::solve_tammes(to_solver_config(tam_opt)),
                      tam_opt.out);
  });

  // analyze metrics
  CLI::App* analyze = app.add_subcommand("analyze", "Evaluate collapse metrics");
  analyze->require_subcommand(1);
  CLI::App* metrics = analyze->add_subcommand(
      "metrics", "Collapse metrics for a classifier and features");
  std::string features_path;
  std::string weights_path;
  std::string reference_spec = "auto";
  std::string metrics_out;
  bool allow_denormalized = false;
  metrics->add_option("--features", features_path,
                      "Feature CSV (header label,f0,...)")->required();
  metrics->add_option("--weights", weights_path,
                      "Classifier CSV (one row per class)")->required();
  metrics->add_option("--reference", reference_spec,
                      "Margin reference: auto, none, or a number");
  metrics->add_flag("--allow-denormalized", allow_denormalized,
                    "Skip the unit-norm check on classifier rows");
  metrics->add_option("--out", metrics_out, "Write the report JSON here");
  metrics->callback([&] {
    spherecode::CsvReadOptions read_options;
    read_options.allow_denormalized = allow_denormalized;
    const spherecode::SphericalConfiguration classifier =
        spherecode::read_configuration_csv(weights_path, read_options);
    const spherecode::LabeledFeatureSet features = spherecode::read_features_csv(
        features_path, static_cast<int>(classifier.count()));
    const std::optional<double> reference = resolve_reference(
        reference_spec, static_cast<int>(classifier.dim()),
        static_cast<int>(classifier.count()));
    const spherecode::GncReport report = spherecode::compute_gnc_report(
        classifier.matrix(), features, reference);
    const std::string json = spherecode::gnc_report_to_json(report);
    if (metrics_out.empty()) {
      std::cout << json;
    } else {
      spherecode::write_text_file(metrics_out, json);
      std::cout << "wrote " << metrics_out << "\n";
    }
  });

  // bounds
  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", "Analytic margin bounds for one (d, K)");
  int bounds_dim = 0;
  int bounds_classes = 0;
  std::string bounds_out;
  bounds_cmd->add_option("--dim,-d", bounds_dim, "Ambient dimension")->required();
  bounds_cmd->add_option("--classes,-k", bounds_classes, "Number of points")
      ->required();
  bounds_cmd->add_option("--out", bounds_out, "Write the JSON here");
  bounds_cmd->callback([&] {
    const spherecode::MarginBounds bounds =
        spherecode::margin_bounds(bounds_dim, bounds_classes);
    const std::string json = spherecode::margin_bounds_to_json(bounds);
    if (bounds_out.empty()) {
      std::cout << json;
    } else {
      spherecode::write_text_file(bounds_out, json);
      std::cout << "wrote " << bounds_out << "\n";
    }
  });

  // scan
  CLI::App* scan_cmd = app.add_subcommand(
      "scan", "Tabulate margin bounds across dimensions at fixed K");
  int scan_classes = 0;
  std::vector<int> scan_dims;
  bool with_solver = false;
  SolveOptions scan_solver_opt;
  std::string scan_out;
  std::string scan_json;
  scan_cmd->add_option("--classes,-k", scan_classes, "Number of points")
      ->required();
  scan_cmd->add_option("--dims", scan_dims, "Comma-separated dimensions")
      ->required()
      ->delimiter(',');
  scan_cmd->add_flag("--with-solver", with_solver,
                     "Fill the rho column by running the solver per dimension");
  scan_cmd->add_option("--restarts", scan_solver_opt.restarts,
                       "Solver restarts (default 16 for d <= 4, else 8)");
  scan_cmd->add_option("--seed", scan_solver_opt.seed, "Solver seed");
  scan_cmd->add_option("--threads", scan_solver_opt.threads,
                       "Solver threads (0 = hardware)")
      ->envname("SPHERECODE_THREADS");
  scan_cmd->add_option("--out", scan_out, "Write the CSV here");
  scan_cmd->add_option("--json", scan_json, "Also write a JSON table here");
  scan_cmd->callback([&] {
    std::function<double(int, int)> solver;
    if (with_solver) {
      solver = [&](int dim, int count) {
        SolveOptions opt = scan_solver_opt;
        opt.dim = dim;
        opt.classes = count;
        const spherecode::SolveReport report =
            spherecode::solve_softmax_code(to_solver_config(opt));
        if (!std::isfinite(report.achieved)) {
          std::cerr << "solver produced a non-finite margin at d=" << dim
                    << "\n";
          throw CliExit{3};
        }
        return report.achieved;
      };
    }
    const std::vector<spherecode::DimensionScanRow> rows =
        spherecode::scan_dimensions(scan_classes, scan_dims, solver);
    const std::string csv = spherecode::scan_rows_to_csv(rows);
    if (scan_out.empty()) {
      std::cout << csv;
    } else {
      spherecode::write_text_file(scan_out, csv);
      std::cout << "wrote " << scan_out << "\n";
    }
    if (!scan_json.empty()) {
      spherecode::write_text_file(scan_json,
                                  spherecode::scan_rows_to_json(rows));
      std::cout << "wrote " << scan_json << "\n";
    }
  });

  // verify hardmax
  CLI::App* verify = app.add_subcommand(
      "verify", "Consistency checks against reference solutions");
  verify->require_subcommand(1);
  CLI::App* hardmax_cmd = verify->add_subcommand(
      "hardmax", "Fixed-temperature solves against the continuation reference");
  int hm_dim = 3;
  int hm_classes = 7;
  std::vector<double> hm_taus;
  int hm_restarts = -1;
  std::uint64_t hm_seed = 0;
  int hm_threads = 1;
  double gate_tol = 0.02;
  bool no_gate = false;
  std::string hm_out;
  hardmax_cmd->add_option("--dim,-d", hm_dim, "Ambient dimension")->required();
  hardmax_cmd->add_option("--classes,-k", hm_classes, "Number of points")
      ->required();
  hardmax_cmd->add_option("--taus", hm_taus, "Comma-separated temperatures")
      ->required()
      ->delimiter(',');
  hardmax_cmd->add_option("--restarts", hm_restarts,
                          "Restarts per temperature (default 16 for d <= 4, else 8)");
  hardmax_cmd->add_option("--seed", hm_seed, "Random seed");
  hardmax_cmd->add_option("--threads", hm_threads, "Worker threads (0 = hardware)")
      ->envname("SPHERECODE_THREADS");
  hardmax_cmd->add_option("--gate-tol", gate_tol,
                          "Maximum allowed gap at the final temperature");
  hardmax_cmd->add_flag("--no-gate", no_gate, "Report only, never fail");
  hardmax_cmd->add_option("--out", hm_out, "Write the CSV table here");
  hardmax_cmd->callback([&] {
    const int restarts = hm_restarts >= 0 ? hm_restarts : default_restarts(hm_dim);
    const std::vector<spherecode::HardmaxSweepRow> rows =
        spherecode::verify_hardmax_convergence(hm_dim, hm_classes, hm_taus,
                                               restarts, hm_seed, hm_threads);
    const std::string csv = spherecode::hardmax_rows_to_csv(rows);
    if (hm_out.empty()) {
      std::cout << csv;
    } else {
      spherecode::write_text_file(hm_out, csv);
      std::cout << "wrote " << hm_out << "\n";
    }
    if (!no_gate) {
      const spherecode::HardmaxSweepRow& last = rows.back();
      const double gap = std::abs(last.ce_max_cosine - last.hardmax_reference);
      if (!(gap < gate_tol)) {
        std::cerr << "final gap " << spherecode::format_double(gap)
                  << " is not below " << spherecode::format_double(gate_tol)
                  << "\n";
        throw CliExit{1};
      }
    }
  });

  // closed-form
  CLI::App* closed = app.add_subcommand(
      "closed-form", "Emit a provably optimal configuration when one exists");
  int cf_dim = 0;
  int cf_classes = 0;
  std::string cf_out;
  closed->add_option("--dim,-d", cf_dim, "Ambient dimension")->required();
  closed->add_option("--classes,-k", cf_classes, "Number of points")->required();
  closed->add_option("--out", cf_out, "Write the configuration CSV here");
  closed->callback([&] {
    const auto optimum = spherecode::closed_form_optimum(cf_dim, cf_classes);
    if (!optimum.has_value()) {
      std::cerr << "no closed form for d=" << cf_dim << " K=" << cf_classes
                << "\n";
      throw CliExit{5};
    }
    if (cf_out.empty()) {
      std::ostringstream buffer;
      for (Eigen::Index k = 0; k < optimum->configuration.count(); ++k) {
        for (Eigen::Index i = 0; i < optimum->configuration.dim(); ++i) {
          if (i > 0) {
            buffer << ',';
          }
          buffer << spherecode::format_double(
              optimum->configuration.matrix()(i, k));
        }
        buffer << '\n';
      }
      std::cout << buffer.str();
    } else {
      spherecode::write_configuration_csv(cf_out, optimum->configuration);
      std::cout << "wrote " << cf_out << " (rho "
                << spherecode::format_double(optimum->rho_one_vs_rest) << ")\n";
    }
  });

  // ufm
  CLI::App* ufm_cmd = app.add_subcommand(
      "ufm", "Train the free-feature model and report collapse metrics");
  spherecode::UfmConfig ufm_config;
  std::string regime = "sphere";
  std::string rule = "trainable";
  std::string ufm_out;
  std::string ufm_trace;
  ufm_cmd->add_option("--dim,-d", ufm_config.dim, "Ambient dimension")->required();
  ufm_cmd->add_option("--classes,-k", ufm_config.classes, "Number of classes")
      ->required();
  ufm_cmd->add_option("--samples,-n", ufm_config.samples_per_class,
                      "Samples per class");
  ufm_cmd->add_option("--regime", regime, "sphere or weight-decay")
      ->check(CLI::IsMember({"sphere", "weight-decay"}));
  ufm_cmd->add_option("--tau", ufm_config.tau, "Cross-entropy temperature");
  ufm_cmd->add_option("--lambda", ufm_config.lambda, "Weight-decay strength");
  ufm_cmd->add_option("--classifier", rule, "trainable or cmf")
      ->check(CLI::IsMember({"trainable", "cmf"}));
  ufm_cmd->add_option("--beta", ufm_config.cmf_beta, "EMA coefficient for cmf");
  ufm_cmd->add_option("--iters", ufm_config.iters, "Training iterations");
  ufm_cmd->add_option("--step-size", ufm_config.step_size,
                      "Initial line-search step");
  ufm_cmd->add_option("--seed", ufm_config.seed, "Random seed");
  ufm_cmd->add_option("--log-every", ufm_config.log_every, "Trace cadence");
  ufm_cmd->add_option("--out", ufm_out, "Write the metrics JSON here");
  ufm_cmd->add_option("--trace", ufm_trace, "Write the training trace CSV here");
  ufm_cmd->callback([&] {
    ufm_config.regime = regime == "sphere" ? spherecode::UfmRegime::kSphere
                                           : spherecode::UfmRegime::kWeightDecay;
    ufm_config.classifier_rule =
        rule == "trainable" ? spherecode::ClassifierRule::kTrainable
                            : spherecode::ClassifierRule::kClassMeanFeature;
    const spherecode::UfmResult result = spherecode::train_ufm(ufm_config);
    const std::string json = spherecode::gnc_report_to_json(result.report);
    if (ufm_out.empty()) {
      std::cout << json;
    } else {
      spherecode::write_text_file(ufm_out, json);
      std::cout << "wrote " << ufm_out << "\n";
    }
    if (!ufm_trace.empty()) {
      spherecode::write_text_file(ufm_trace,
                                  spherecode::ufm_trace_to_csv(result.trace));
      std::cout << "wrote " << ufm_trace << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const CliExit& e) {
    return e.code;
  } catch (const spherecode::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const spherecode::LabelOutOfRange& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const spherecode::DimensionMismatch& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const spherecode::ShapeMismatch& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const spherecode::NonFiniteLoss& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const spherecode::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
