// splitq: analyze whether splitting a service into an n-stage chain beats the
// monolith, sweep arrival rates, cross-check against simulation, and verify
// the improvement theorems on randomized draws.

#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "splitq/decomposition.hpp"
#include "splitq/errors.hpp"
#include "splitq/sim.hpp"
#include "splitq/text.hpp"
#include "splitq/verification.hpp"

namespace {

using json = nlohmann::ordered_json;
using splitq::format_double;

constexpr const char* kToolName = "splitq";
constexpr const char* kToolVersion = "0.1.0";

enum class CaseKind { Worst, Best, Custom };
enum class Format { Csv, Json };

const std::map<std::string, CaseKind> kCaseNames{
    {"worst", CaseKind::Worst}, {"best", CaseKind::Best}, {"custom", CaseKind::Custom}};
const std::map<std::string, splitq::Discipline> kDisciplineNames{
    {"mm1", splitq::Discipline::ExponentialService},
    {"md1", splitq::Discipline::DeterministicService}};
const std::map<std::string, Format> kFormatNames{{"csv", Format::Csv}, {"json", Format::Json}};
const std::map<std::string, splitq::sim::FeedMode> kFeedNames{
    {"independent", splitq::sim::FeedMode::IndependentStages},
    {"tandem", splitq::sim::FeedMode::Tandem}};

const char* case_name(CaseKind c) {
    switch (c) {
        case CaseKind::Worst: return "worst";
        case CaseKind::Best: return "best";
        case CaseKind::Custom: return "custom";
    }
    return "?";
}

const char* feed_name(splitq::sim::FeedMode f) {
    return f == splitq::sim::FeedMode::Tandem ? "tandem" : "independent";
}

// ---------------------------------------------------------------------------
// Output plumbing

std::string shell_quote(const std::string& arg) {
    const bool plain = !arg.empty() && arg.find_first_not_of(
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
        "0123456789_./=:,+-") == std::string::npos;
    if (plain) {
        return arg;
    }
    std::string quoted = "'";
    for (char c : arg) {
        if (c == '\'') {
            quoted += "'\\''";
        } else {
            quoted += c;
        }
    }
    quoted += "'";
    return quoted;
}

std::string join_command_line(int argc, char** argv) {
    std::string line;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) {
            line += ' ';
        }
        line += shell_quote(argv[i]);
    }
    return line;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw splitq::Error("cannot open output file: " + path);
    }
    out << content;
}

/// Data goes to stdout unless --output was given; the manifest sidecar
/// accompanies file output only.
void emit(const std::string& output_path, const std::string& content,
          const std::string& command_line, json parameters,
          std::optional<std::uint64_t> seed) {
    if (output_path.empty()) {
        std::cout << content;
        return;
    }
    write_file(output_path, content);
    json manifest;
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["command_line"] = command_line;
    manifest["generated_at"] = utc_timestamp();
    if (seed) {
        manifest["seed"] = *seed;
    }
    manifest["parameters"] = std::move(parameters);
    write_file(output_path + ".manifest.json", manifest.dump(2) + "\n");
    std::cerr << "wrote " << output_path << " (+ manifest)\n";
}

void warn_near_saturation(const splitq::ComparisonResult& result) {
    for (std::size_t i = 0; i < result.per_stage.size(); ++i) {
        if (result.per_stage[i].near_saturation) {
            std::cerr << "warning: stage " << (i + 1) << " utilization "
                      << format_double(result.per_stage[i].rho) << " exceeds "
                      << format_double(splitq::kSaturationWarningRho) << "\n";
        }
    }
    if (result.monolith.near_saturation) {
        std::cerr << "warning: monolith utilization " << format_double(result.monolith.rho)
                  << " exceeds " << format_double(splitq::kSaturationWarningRho) << "\n";
    }
}

// ---------------------------------------------------------------------------
// Scenario options shared by analyze / sweep / simulate

struct ScenarioOpts {
    CaseKind kind = CaseKind::Best;
    splitq::Discipline discipline = splitq::Discipline::ExponentialService;
    int n = 2;
    double lambda = 0.0;
    double mu = 0.0;
    double epsilon = 0.0;
    bool epsilon_given = false;
    std::vector<double> stage_rates;   // custom only
    double monolith_rate = 0.0;        // custom only
};

void require_epsilon_iff_worst(const ScenarioOpts& opts) {
    if (opts.kind == CaseKind::Worst && !opts.epsilon_given) {
        throw splitq::InvalidParameter("--case worst requires --epsilon");
    }
    if (opts.kind != CaseKind::Worst && opts.epsilon_given) {
        throw splitq::InvalidParameter("--epsilon is only meaningful with --case worst");
    }
}

void require_mu(const ScenarioOpts& opts) {
    if (!(opts.mu > 0.0)) {
        throw splitq::InvalidParameter("--mu is required for the worst and best cases");
    }
}

splitq::ChainSpec build_scenario_chain(const ScenarioOpts& opts) {
    require_epsilon_iff_worst(opts);
    if (opts.kind != CaseKind::Custom) {
        require_mu(opts);
    }
    switch (opts.kind) {
        case CaseKind::Worst:
            return splitq::build_worst_case(opts.n, splitq::Rate(opts.lambda),
                                            splitq::Rate(opts.mu), splitq::Epsilon(opts.epsilon),
                                            opts.discipline);
        case CaseKind::Best:
            return splitq::build_best_case(opts.n, splitq::Rate(opts.lambda),
                                           splitq::Rate(opts.mu), opts.discipline);
        case CaseKind::Custom: {
            if (opts.stage_rates.empty()) {
                throw splitq::InvalidParameter("--case custom requires --stage-rates");
            }
            if (!(opts.monolith_rate > 0.0)) {
                throw splitq::InvalidParameter("--case custom requires --monolith-rate");
            }
            std::vector<splitq::Rate> rates;
            rates.reserve(opts.stage_rates.size());
            for (double r : opts.stage_rates) {
                rates.emplace_back(r);
            }
            return splitq::build_custom(splitq::Rate(opts.lambda), std::move(rates),
                                        splitq::Rate(opts.monolith_rate), opts.discipline);
        }
    }
    throw splitq::InvalidParameter("unreachable case kind");
}

json scenario_json(const ScenarioOpts& opts, const splitq::ChainSpec& spec) {
    json j;
    j["case"] = case_name(opts.kind);
    j["discipline"] = std::string(splitq::to_string(opts.discipline));
    j["n"] = spec.stage_count();
    j["lambda"] = spec.lambda.value();
    if (opts.kind != CaseKind::Custom) {
        j["mu"] = opts.mu;
    }
    if (opts.kind == CaseKind::Worst) {
        j["epsilon"] = opts.epsilon;
    }
    json rates = json::array();
    for (const splitq::Rate& r : spec.stage_rates) {
        rates.push_back(r.value());
    }
    j["stage_rates"] = std::move(rates);
    j["monolith_rate"] = spec.monolith_rate.value();
    return j;
}

json parameters_json(const ScenarioOpts& opts) {
    json j;
    j["case"] = case_name(opts.kind);
    j["discipline"] = std::string(splitq::to_string(opts.discipline));
    if (opts.kind == CaseKind::Custom) {
        j["lambda"] = opts.lambda;
        j["stage_rates"] = opts.stage_rates;
        j["monolith_rate"] = opts.monolith_rate;
    } else {
        j["n"] = opts.n;
        j["lambda"] = opts.lambda;
        j["mu"] = opts.mu;
        if (opts.kind == CaseKind::Worst) {
            j["epsilon"] = opts.epsilon;
        }
    }
    return j;
}

// ---------------------------------------------------------------------------
// analyze

std::string analyze_csv(const splitq::ChainSpec& spec, const splitq::ComparisonResult& r) {
    std::ostringstream os;
    os << "lambda";
    for (int i = 1; i <= spec.stage_count(); ++i) {
        os << ",stage_" << i;
    }
    os << ",micro_total,monolith,improvement,speedup\n";
    os << format_double(spec.lambda.value());
    for (const splitq::StageMetrics& m : r.per_stage) {
        os << ',' << format_double(m.sojourn_time);
    }
    os << ',' << format_double(r.micro_total_time) << ',' << format_double(r.monolith_time)
       << ',' << format_double(r.absolute_improvement) << ',' << format_double(r.speedup)
       << '\n';
    return os.str();
}

json stage_metrics_json(const splitq::StageMetrics& m, double rate) {
    json j;
    j["rate"] = rate;
    j["rho"] = m.rho;
    j["wait_time"] = m.wait_time;
    j["sojourn_time"] = m.sojourn_time;
    j["near_saturation"] = m.near_saturation;
    return j;
}

std::string analyze_json(const ScenarioOpts& opts, const splitq::ChainSpec& spec,
                         const splitq::ComparisonResult& r) {
    json j = scenario_json(opts, spec);
    json stages = json::array();
    for (std::size_t i = 0; i < r.per_stage.size(); ++i) {
        json s = stage_metrics_json(r.per_stage[i], spec.stage_rates[i].value());
        s["stage"] = static_cast<int>(i + 1);
        stages.push_back(std::move(s));
    }
    j["per_stage"] = std::move(stages);
    j["monolith"] = stage_metrics_json(r.monolith, spec.monolith_rate.value());
    j["micro_total_time"] = r.micro_total_time;
    j["monolith_time"] = r.monolith_time;
    j["absolute_improvement"] = r.absolute_improvement;
    j["speedup"] = r.speedup;
    return j.dump(2) + "\n";
}

int run_analyze(const ScenarioOpts& opts, Format format, const std::string& output,
                const std::string& command_line) {
    const splitq::ChainSpec spec = build_scenario_chain(opts);
    const splitq::ComparisonResult result = splitq::analyze(spec);
    if (opts.kind == CaseKind::Custom && !splitq::rate_conservation_holds(spec)) {
        std::cerr << "warning: custom stage rates do not conserve the monolith's service"
                     " work (sum of 1/rate differs from 1/monolith_rate)\n";
    }
    warn_near_saturation(result);
    const std::string content = format == Format::Csv ? analyze_csv(spec, result)
                                                      : analyze_json(opts, spec, result);
    emit(output, content, command_line, parameters_json(opts), std::nullopt);
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct GridOpts {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    int steps = 0;
    int flags_given = 0;
    bool given() const { return flags_given > 0; }
};

std::vector<double> make_grid(const splitq::SweepScenario& scenario, const GridOpts& grid) {
    if (!grid.given()) {
        return splitq::default_lambda_grid(scenario);
    }
    if (grid.flags_given != 3) {
        throw splitq::InvalidParameter(
            "--lambda-min, --lambda-max, and --steps must be given together");
    }
    if (grid.steps < 2) {
        throw splitq::InvalidParameter("--steps must be >= 2");
    }
    if (!(grid.lambda_min > 0.0) || !(grid.lambda_max > grid.lambda_min)) {
        throw splitq::InvalidParameter("need 0 < --lambda-min < --lambda-max");
    }
    std::vector<double> lambdas(static_cast<std::size_t>(grid.steps));
    for (int i = 0; i < grid.steps; ++i) {
        lambdas[static_cast<std::size_t>(i)] =
            grid.lambda_min + (grid.lambda_max - grid.lambda_min) * static_cast<double>(i) /
                                  static_cast<double>(grid.steps - 1);
    }
    return lambdas;
}

std::string sweep_csv(const splitq::SweepTable& table) {
    std::ostringstream os;
    os << "lambda";
    for (int i = 1; i <= table.scenario.n; ++i) {
        os << ",stage_" << i;
    }
    os << ",micro_total,monolith\n";
    for (const splitq::SweepRow& row : table.rows) {
        os << format_double(row.lambda);
        for (double t : row.per_stage_times) {
            os << ',' << format_double(t);
        }
        os << ',' << format_double(row.micro_total) << ',' << format_double(row.monolith)
           << '\n';
    }
    return os.str();
}

std::string sweep_json(const ScenarioOpts& opts, const splitq::SweepTable& table) {
    json j;
    j["case"] = case_name(opts.kind);
    j["discipline"] = std::string(splitq::to_string(opts.discipline));
    j["n"] = table.scenario.n;
    j["mu"] = table.scenario.mu.value();
    if (opts.kind == CaseKind::Worst) {
        j["epsilon"] = opts.epsilon;
    }
    json rows = json::array();
    for (const splitq::SweepRow& row : table.rows) {
        json r;
        r["lambda"] = row.lambda;
        r["per_stage_times"] = row.per_stage_times;
        r["micro_total"] = row.micro_total;
        r["monolith"] = row.monolith;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["skipped_lambdas"] = table.skipped;
    return j.dump(2) + "\n";
}

int run_sweep(const ScenarioOpts& opts, const GridOpts& grid, bool lenient, Format format,
              const std::string& output, const std::string& command_line) {
    require_epsilon_iff_worst(opts);
    if (opts.kind == CaseKind::Custom) {
        throw splitq::InvalidParameter("sweep supports --case worst|best");
    }
    require_mu(opts);
    splitq::SplitCase split = opts.kind == CaseKind::Worst
                                  ? splitq::SplitCase(splitq::WorstCase{splitq::Epsilon(opts.epsilon)})
                                  : splitq::SplitCase(splitq::BestCase{});
    const splitq::SweepScenario scenario{split, opts.n, splitq::Rate(opts.mu), opts.discipline};
    const std::vector<double> lambdas = make_grid(scenario, grid);
    const splitq::SweepTable table = splitq::sweep(
        scenario, lambdas, lenient ? splitq::SweepMode::Lenient : splitq::SweepMode::Strict);
    if (!table.skipped.empty()) {
        std::cerr << "warning: skipped " << table.skipped.size()
                  << " infeasible grid point(s)\n";
    }

    json params = parameters_json(opts);
    params.erase("lambda");
    if (grid.given()) {
        params["lambda_min"] = grid.lambda_min;
        params["lambda_max"] = grid.lambda_max;
        params["steps"] = grid.steps;
    } else {
        params["grid"] = "default";
    }
    params["lenient"] = lenient;

    const std::string content =
        format == Format::Csv ? sweep_csv(table) : sweep_json(opts, table);
    emit(output, content, command_line, std::move(params), std::nullopt);
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
    splitq::sim::SimConfig config;
    std::string trace_path;
};

std::string simulate_csv(const splitq::sim::SimEstimate& est,
                         const splitq::ComparisonResult& analytic) {
    const double rel_err =
        (est.mean_sojourn - analytic.micro_total_time) / analytic.micro_total_time;
    std::ostringstream os;
    os << "mean_sojourn,std_error,ci95_half_width,samples,analytic_total,relative_error";
    for (std::size_t i = 1; i <= est.per_stage_means.size(); ++i) {
        os << ",stage_" << i << "_mean,stage_" << i << "_analytic";
    }
    os << '\n';
    os << format_double(est.mean_sojourn) << ',' << format_double(est.std_error) << ','
       << format_double(est.ci95_half_width) << ',' << est.samples << ','
       << format_double(analytic.micro_total_time) << ',' << format_double(rel_err);
    for (std::size_t i = 0; i < est.per_stage_means.size(); ++i) {
        os << ',' << format_double(est.per_stage_means[i]) << ','
           << format_double(analytic.per_stage[i].sojourn_time);
    }
    os << '\n';
    return os.str();
}

std::string simulate_json(const ScenarioOpts& opts, const SimulateOpts& sim_opts,
                          const splitq::ChainSpec& spec, const splitq::sim::SimEstimate& est,
                          const splitq::ComparisonResult& analytic) {
    json j;
    j["scenario"] = scenario_json(opts, spec);
    json cfg;
    cfg["seed"] = sim_opts.config.seed;
    cfg["jobs_per_replication"] = sim_opts.config.jobs_per_replication;
    cfg["replications"] = sim_opts.config.replications;
    cfg["warmup_fraction"] = sim_opts.config.warmup_fraction;
    cfg["feed"] = feed_name(sim_opts.config.feed_mode);
    j["config"] = std::move(cfg);
    json est_json;
    est_json["mean_sojourn"] = est.mean_sojourn;
    est_json["std_error"] = est.std_error;
    est_json["ci95_half_width"] = est.ci95_half_width;
    est_json["samples"] = est.samples;
    est_json["per_stage_means"] = est.per_stage_means;
    j["estimate"] = std::move(est_json);
    json ana;
    ana["micro_total_time"] = analytic.micro_total_time;
    json stage_times = json::array();
    for (const splitq::StageMetrics& m : analytic.per_stage) {
        stage_times.push_back(m.sojourn_time);
    }
    ana["per_stage_times"] = std::move(stage_times);
    ana["monolith_time"] = analytic.monolith_time;
    j["analytic"] = std::move(ana);
    j["relative_error"] =
        (est.mean_sojourn - analytic.micro_total_time) / analytic.micro_total_time;
    return j.dump(2) + "\n";
}

int run_simulate(const ScenarioOpts& opts, const SimulateOpts& sim_opts, Format format,
                 const std::string& output, const std::string& command_line) {
    const splitq::ChainSpec spec = build_scenario_chain(opts);
    const splitq::ComparisonResult analytic = splitq::analyze(spec);

    std::ofstream trace_file;
    splitq::sim::TraceSink sink;
    if (!sim_opts.trace_path.empty()) {
        trace_file.open(sim_opts.trace_path, std::ios::binary);
        if (!trace_file) {
            throw splitq::Error("cannot open trace file: " + sim_opts.trace_path);
        }
        trace_file << "job_id,stage,arrival,service_start,departure\n";
        sink = [&trace_file](const splitq::sim::TraceRow& row) {
            trace_file << row.job_id << ',' << row.stage << ',' << format_double(row.arrival)
                       << ',' << format_double(row.service_start) << ','
                       << format_double(row.departure) << '\n';
        };
    }

    const splitq::sim::SimEstimate est = splitq::sim::simulate_chain(spec, sim_opts.config, sink);

    json params = parameters_json(opts);
    params["feed"] = feed_name(sim_opts.config.feed_mode);
    params["seed"] = sim_opts.config.seed;
    params["jobs"] = sim_opts.config.jobs_per_replication;
    params["reps"] = sim_opts.config.replications;
    params["warmup"] = sim_opts.config.warmup_fraction;

    const std::string content = format == Format::Csv
                                    ? simulate_csv(est, analytic)
                                    : simulate_json(opts, sim_opts, spec, est, analytic);
    emit(output, content, command_line, std::move(params), sim_opts.config.seed);
    return 0;
}

// ---------------------------------------------------------------------------
// verify

json cell_json(const splitq::CellReport& cell) {
    json j;
    j["case"] = cell.worst ? "worst" : "best";
    j["discipline"] = std::string(splitq::to_string(cell.discipline));
    j["trials"] = cell.trials;
    j["passes"] = cell.passes;
    if (cell.counterexample) {
        const splitq::Counterexample& ce = *cell.counterexample;
        json c;
        c["n"] = ce.params.n;
        c["lambda"] = ce.params.lambda;
        c["mu"] = ce.params.mu;
        if (ce.params.worst) {
            c["epsilon"] = ce.params.epsilon;
        }
        c["micro_total"] = ce.micro_total;
        c["monolith"] = ce.monolith;
        j["counterexample"] = std::move(c);
    } else {
        j["counterexample"] = nullptr;
    }
    return j;
}

int run_verify(long trials, std::uint64_t seed, const std::string& report_path,
               const std::string& command_line) {
    const splitq::VerificationReport report = splitq::run_theorem_trials(trials, seed);

    std::ostringstream os;
    for (const splitq::CellReport& cell : report.cells) {
        os << "cell " << (cell.worst ? "worst" : "best") << '/'
           << splitq::to_string(cell.discipline) << ": " << cell.passes << '/' << cell.trials
           << " passed\n";
        if (cell.counterexample) {
            const splitq::Counterexample& ce = *cell.counterexample;
            os << "counterexample: case=" << (ce.params.worst ? "worst" : "best")
               << " discipline=" << splitq::to_string(ce.params.discipline)
               << " n=" << ce.params.n << " lambda=" << format_double(ce.params.lambda)
               << " mu=" << format_double(ce.params.mu);
            if (ce.params.worst) {
                os << " epsilon=" << format_double(ce.params.epsilon);
            }
            os << " micro_total=" << format_double(ce.micro_total)
               << " monolith=" << format_double(ce.monolith) << '\n';
        }
    }
    os << (report.all_passed() ? "all cells passed" : "FAILED") << " ("
       << report.trials_per_cell * static_cast<long>(report.cells.size()) << " trials)\n";
    std::cout << os.str();

    if (!report_path.empty()) {
        json j;
        j["tool"] = kToolName;
        j["version"] = kToolVersion;
        j["command_line"] = command_line;
        j["seed"] = report.seed;
        j["trials_per_cell"] = report.trials_per_cell;
        json cells = json::array();
        for (const splitq::CellReport& cell : report.cells) {
            cells.push_back(cell_json(cell));
        }
        j["cells"] = std::move(cells);
        j["all_passed"] = report.all_passed();
        write_file(report_path, j.dump(2) + "\n");
    }
    return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string command_line = join_command_line(argc, argv);

    CLI::App app{"closed-form queueing analysis of service decompositions, with a"
                 " discrete-event simulation cross-check"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    ScenarioOpts scenario;
    std::string case_str;
    std::string discipline_str;
    std::string format_str = "csv";
    Format format = Format::Csv;
    std::string output;
    GridOpts grid;
    bool lenient = false;
    SimulateOpts sim_opts;
    std::string feed = "tandem";
    long trials = 10'000;
    std::uint64_t verify_seed = 1;
    std::string report_path;

    const auto add_scenario_flags = [&](CLI::App* cmd, bool with_lambda) {
        cmd->add_option("--case", case_str, "scenario family (worst | best | custom)")
            ->required()
            ->transform(CLI::IsMember({"worst", "best", "custom"}, CLI::ignore_case));
        cmd->add_option("--discipline", discipline_str, "service-time law (mm1 | md1)")
            ->required()
            ->transform(CLI::IsMember({"mm1", "md1"}, CLI::ignore_case));
        cmd->add_option("--n", scenario.n, "number of microservice stages");
        if (with_lambda) {
            cmd->add_option("--lambda", scenario.lambda, "arrival rate")->required();
        }
        cmd->add_option("--mu", scenario.mu, "base service rate");
        cmd->add_option("--epsilon", scenario.epsilon,
                        "hot-stage headroom above lambda (worst case only)")
            ->each([&](const std::string&) { scenario.epsilon_given = true; });
        cmd->add_option("--format", format_str, "output format (csv | json)")
            ->transform(CLI::IsMember({"csv", "json"}, CLI::ignore_case));
        cmd->add_option("--output", output, "write data here instead of stdout"
                                            " (a .manifest.json sidecar accompanies it)");
    };

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "closed-form chain-vs-monolith comparison at one lambda");
    add_scenario_flags(analyze_cmd, true);
    analyze_cmd->add_option("--stage-rates", scenario.stage_rates,
                            "custom case: comma-separated stage service rates")
        ->delimiter(',');
    analyze_cmd->add_option("--monolith-rate", scenario.monolith_rate,
                            "custom case: monolith service rate");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "tabulate the comparison over a lambda grid");
    add_scenario_flags(sweep_cmd, false);
    sweep_cmd->add_option("--lambda-min", grid.lambda_min, "grid start (default: 2% of max)")
        ->each([&](const std::string&) { ++grid.flags_given; });
    sweep_cmd->add_option("--lambda-max", grid.lambda_max, "grid end (default: 95% of max)")
        ->each([&](const std::string&) { ++grid.flags_given; });
    sweep_cmd->add_option("--steps", grid.steps, "grid size (default 64)")
        ->each([&](const std::string&) { ++grid.flags_given; });
    sweep_cmd->add_flag("--lenient", lenient, "skip infeasible grid points instead of aborting");

    CLI::App* simulate_cmd = app.add_subcommand(
        "simulate", "estimate the chain total by discrete-event simulation");
    add_scenario_flags(simulate_cmd, true);
    simulate_cmd->add_option("--stage-rates", scenario.stage_rates,
                             "custom case: comma-separated stage service rates")
        ->delimiter(',');
    simulate_cmd->add_option("--monolith-rate", scenario.monolith_rate,
                             "custom case: monolith service rate");
    simulate_cmd->add_option("--feed", feed, "independent | tandem")
        ->transform(CLI::IsMember({"independent", "tandem"}, CLI::ignore_case));
    simulate_cmd->add_option("--seed", sim_opts.config.seed, "master RNG seed");
    simulate_cmd->add_option("--jobs", sim_opts.config.jobs_per_replication,
                             "completed jobs measured per replication");
    simulate_cmd->add_option("--reps", sim_opts.config.replications,
                             "independent replications");
    simulate_cmd->add_option("--warmup", sim_opts.config.warmup_fraction,
                             "leading fraction of jobs discarded, in [0, 0.5]");
    simulate_cmd->add_option("--trace", sim_opts.trace_path,
                             "write a per-job CSV trace of replication 0 here");

    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "randomized check of the four split-improvement theorems");
    verify_cmd->add_option("--trials", trials, "random draws per (case x discipline) cell");
    verify_cmd->add_option("--seed", verify_seed, "master RNG seed");
    verify_cmd->add_option("--report", report_path, "write a JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!case_str.empty()) {
            scenario.kind = kCaseNames.at(case_str);
        }
        if (!discipline_str.empty()) {
            scenario.discipline = kDisciplineNames.at(discipline_str);
        }
        format = kFormatNames.at(format_str);
        if (*analyze_cmd) {
            return run_analyze(scenario, format, output, command_line);
        }
        if (*sweep_cmd) {
            return run_sweep(scenario, grid, lenient, format, output, command_line);
        }
        if (*simulate_cmd) {
            sim_opts.config.feed_mode = kFeedNames.at(feed);
            return run_simulate(scenario, sim_opts, format, output, command_line);
        }
        if (*verify_cmd) {
            return run_verify(trials, verify_seed, report_path, command_line);
        }
    } catch (const splitq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
