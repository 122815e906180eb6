#include "uavplan/commands.hpp"

#include <ostream>
#include <sstream>

#include "uavplan/io.hpp"

namespace uavplan {

namespace {

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const IoError& e) {
    log << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const UnservableError& e) {
    log << "error: " << e.what() << '\n';
    return kExitUnservable;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapacityDeadlockError& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

ScenarioDocument load_scenario(const std::filesystem::path& path) {
  try {
    return read_scenario_file(path);
  } catch (const ConfigError& e) {
    throw ConfigError(e.where().empty() ? path.string() : path.string() + ": " + e.where(), e.message());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  try {
    return read_run_config(path);
  } catch (const ConfigError& e) {
    throw ConfigError(e.where().empty() ? path.string() : path.string() + ": " + e.where(), e.message());
  }
}

std::string trace_csv(const std::vector<std::vector<TracePoint>>& traces) {
  std::ostringstream out;
  out << "uav,iteration,gbest_fitness_bps,x_m,y_m,z_m\n";
  for (std::size_t k = 0; k < traces.size(); ++k) {
    for (const auto& t : traces[k]) {
      out << k << ',' << t.iteration << ',' << format_number(t.gbest_fitness) << ','
          << format_number(t.gbest_position.x) << ',' << format_number(t.gbest_position.y) << ','
          << format_number(t.gbest_position.z) << '\n';
    }
  }
  return out.str();
}

}  // namespace

std::filesystem::path sibling_path(const std::filesystem::path& out, const std::string& suffix) {
  std::filesystem::path p = out;
  p += suffix;
  return p;
}

int cmd_generate(ScenarioKind kind, std::size_t variant, std::uint64_t seed, const std::filesystem::path& out,
                 std::ostream& log) {
  return guarded(log, [&] {
    ScenarioDocument doc;
    doc.scenario = generate_scenario(kind, variant, seed);
    write_text_file(out, dump_json(scenario_to_json(doc)));
    log << "wrote " << out.string() << " (" << doc.scenario.size() << " UEs)\n";
    return kExitOk;
  });
}

int cmd_plan(const PlanRequest& request, std::ostream& log) {
  return guarded(log, [&] {
    ScenarioDocument doc = load_scenario(request.scenario);
    std::optional<std::filesystem::path> out = request.out;
    if (request.config) {
      const RunConfig config = load_config(*request.config);
      apply_run_config(config, doc);
      if (!out && config.out) out = *config.out;
    }
    if (!out) throw ConfigError("out", "no output path given (use --out or the config's \"out\")");
    if (request.seed) doc.pso.seed = *request.seed;

    PlanOptions options;
    options.record_traces = request.pso_trace;
    Deployment deployment;
    ValidationReport report;
    std::optional<PlanResult> plan;

    if (!request.baseline || *request.baseline == BaselineKind::fixed_altitude) {
      plan = plan_deployment(doc.scenario, doc.channel, doc.pso, options);
    }
    if (request.baseline) {
      deployment = run_baseline(*request.baseline, doc.scenario, doc.channel, doc.pso, plan ? &*plan : nullptr);
      report = validate_deployment(deployment, doc.scenario, doc.channel);
    } else {
      deployment = plan->deployment;
      report = plan->validation;
    }

    write_text_file(*out, dump_json(results_to_json(deployment, report)));
    if (request.validation_csv) {
      std::ostringstream csv;
      write_validation_csv(csv, report);
      write_text_file(sibling_path(*out, ".validation.csv"), csv.str());
    }
    if (plan && request.dump_zones) write_text_file(sibling_path(*out, ".zones.json"), dump_json(zones_to_json(plan->zones)));
    if (plan && request.dump_pool) {
      write_text_file(sibling_path(*out, ".pool.json"), dump_json(pool_to_json(plan->pool, plan->deployment)));
    }
    if (plan && request.pso_trace && !request.baseline) {
      write_text_file(sibling_path(*out, ".pso_trace.csv"), trace_csv(plan->traces));
    }
    log << "uav_count " << deployment.uav_count << ", aggregate " << format_number(deployment.aggregate_throughput_bps)
        << " bps, validation " << (report.passed() ? "passed" : "failed") << '\n';
    return kExitOk;
  });
}

int cmd_sweep(const SweepRequest& request, std::ostream& log) {
  return guarded(log, [&] {
    ScenarioDocument defaults;
    ExperimentOptions options;
    options.variants = request.variants;
    if (request.config) {
      const RunConfig config = load_config(*request.config);
      if (config.channel) defaults.channel = parse_channel(*config.channel, defaults.channel);
      if (config.pso) defaults.pso = parse_swarm(*config.pso, defaults.pso);
      if (config.seed) defaults.pso.seed = *config.seed;
      options.policy = config.policy;
    }
    if (request.runs == 0) throw ConfigError("runs", "must be >= 1");
    for (auto v : request.variants) variant_value(request.kind, v);

    const ExperimentTable table =
        run_experiment(request.kind, defaults.channel, defaults.pso, request.runs, request.base_seed, options);

    std::error_code ec;
    std::filesystem::create_directories(request.out_dir, ec);
    if (ec) throw IoError("cannot create '" + request.out_dir.string() + "': " + ec.message());
    const std::string kind(to_string(request.kind));
    std::ostringstream runs, summary, counts, throughput;
    write_runs_csv(runs, table);
    write_summary_csv(summary, table);
    write_plot_csv(counts, table, request.kind, "uav_count");
    write_plot_csv(throughput, table, request.kind, "throughput");
    write_text_file(request.out_dir / "runs.csv", runs.str());
    write_text_file(request.out_dir / "summary.csv", summary.str());
    write_text_file(request.out_dir / (kind + "_uav_count.csv"), counts.str());
    write_text_file(request.out_dir / (kind + "_throughput.csv"), throughput.str());

    std::size_t failed = 0;
    for (const auto& row : table.rows) failed += row.ok() ? 0 : 1;
    log << "wrote " << table.rows.size() << " rows to " << request.out_dir.string() << " (" << failed << " failed)\n";
    return table.all_failed() ? kExitAllRunsFailed : kExitOk;
  });
}

}  // namespace uavplan
