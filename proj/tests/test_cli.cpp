#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "splitq/decomposition.hpp"
#include "splitq/text.hpp"
#include "subprocess.hpp"

using namespace splitq;
using testutil::read_file;
using testutil::run_cli;
using testutil::split_csv;
using testutil::split_lines;
using testutil::temp_path;

namespace {

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("analyze prints the worst-case exponential fixture") {
    const auto r = run_cli("analyze --case worst --discipline mm1 --n 2 --lambda 1 --mu 18"
                           " --epsilon 2");
    REQUIRE(r.exit_code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "lambda,stage_1,stage_2,micro_total,monolith,improvement,speedup");
    const auto fields = split_csv(lines[1]);
    REQUIRE(fields.size() == 7);
    CHECK(parse_double(fields[0]) == 1.0);
    CHECK(close_rel(parse_double(fields[3]), 19.0 / 34.0, 1e-9));
    CHECK(close_rel(parse_double(fields[4]), 7.0 / 11.0, 1e-9));
    CHECK(close_rel(parse_double(fields[6]), 238.0 / 209.0, 1e-9));
}

TEST_CASE("analyze prints the best-case deterministic fixture") {
    const auto r = run_cli("analyze --case best --discipline md1 --n 2 --lambda 1 --mu 2.5");
    REQUIRE(r.exit_code == 0);
    const auto fields = split_csv(split_lines(r.out)[1]);
    CHECK(close_rel(parse_double(fields[3]), 0.45, 1e-9));
    CHECK(close_rel(parse_double(fields[4]), 8.0 / 15.0, 1e-9));
}

TEST_CASE("analyze emits machine-readable json") {
    const auto r = run_cli("analyze --case worst --discipline md1 --n 2 --lambda 1 --mu 18"
                           " --epsilon 2 --format json");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["case"] == "worst");
    CHECK(j["discipline"] == "md1");
    CHECK(j["n"] == 2);
    REQUIRE(j["per_stage"].size() == 2);
    CHECK(close_rel(j["per_stage"][0]["sojourn_time"].get<double>(), 5.0 / 12.0, 1e-9));
    CHECK(close_rel(j["micro_total_time"].get<double>(), 145.0 / 306.0, 1e-9));
    CHECK(close_rel(j["monolith_time"].get<double>(), 203.0 / 396.0, 1e-9));
    CHECK(j["monolith"]["rho"].get<double>() < 1.0);
}

TEST_CASE("analyze reports instability with exit code 2") {
    const auto r = run_cli("analyze --case worst --discipline mm1 --n 2 --lambda 5 --mu 6"
                           " --epsilon 0.1");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("unstable monolith") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("analyze --case worst --discipline mm1 --n 2 --lambda 1 --mu 18").exit_code ==
          2);   // missing --epsilon
    CHECK(run_cli("analyze --case best --discipline mm1 --n 2 --lambda 1 --mu 2.5 --epsilon 1")
              .exit_code == 2);   // epsilon without worst
    CHECK(run_cli("analyze --case bogus --discipline mm1 --n 2 --lambda 1 --mu 2").exit_code ==
          2);
    CHECK(run_cli("analyze --case best --discipline mm1 --n 2 --mu 2.5").exit_code == 2);
    CHECK(run_cli("sweep --case best --discipline mm1 --n 2 --mu 2.5 --lambda-min 1")
              .exit_code == 2);   // partial grid flags
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("analyze --case best --discipline mm1 --n 0 --lambda 1 --mu 2.5").exit_code ==
          2);

    const auto bad_n = run_cli("sweep --case worst --discipline mm1 --n 1 --mu 18 --epsilon 2");
    CHECK(bad_n.exit_code == 2);
    CHECK(bad_n.err.find("invalid stage count") != std::string::npos);
}

TEST_CASE("version flag identifies the tool") {
    const auto r = run_cli("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("splitq") != std::string::npos);
}

TEST_CASE("sweep over the default grid keeps the monolith above the chain") {
    const auto r = run_cli("sweep --case best --discipline mm1 --n 2 --mu 2.5");
    REQUIRE(r.exit_code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 65);   // header + 64 rows
    CHECK(lines[0] == "lambda,stage_1,stage_2,micro_total,monolith");
    double prev_lambda = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv(lines[i]);
        REQUIRE(fields.size() == 5);
        const double lambda = parse_double(fields[0]);
        CHECK(lambda > prev_lambda);
        prev_lambda = lambda;
        CHECK(parse_double(fields[3]) < parse_double(fields[4]));
    }
}

TEST_CASE("an explicit sweep row reproduces the analyze fixture") {
    const auto r = run_cli("sweep --case worst --discipline md1 --n 2 --mu 18 --epsilon 2"
                           " --lambda-min 1 --lambda-max 5 --steps 5");
    REQUIRE(r.exit_code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 6);
    const auto first = split_csv(lines[1]);
    CHECK(parse_double(first[0]) == 1.0);
    CHECK(close_rel(parse_double(first[3]), 145.0 / 306.0, 1e-9));
    CHECK(close_rel(parse_double(first[4]), 203.0 / 396.0, 1e-9));
}

TEST_CASE("infeasible sweep points abort unless --lenient downgrades them") {
    const auto strict = run_cli("sweep --case best --discipline mm1 --n 2 --mu 2.5"
                                " --lambda-min 1 --lambda-max 100 --steps 4");
    CHECK(strict.exit_code == 2);
    CHECK(strict.err.find("infeasible") != std::string::npos);

    const auto lenient = run_cli("sweep --case best --discipline mm1 --n 2 --mu 2.5"
                                 " --lambda-min 1 --lambda-max 100 --steps 4 --lenient");
    REQUIRE(lenient.exit_code == 0);
    CHECK(lenient.err.find("skipped 3") != std::string::npos);
    CHECK(split_lines(lenient.out).size() == 2);   // header + the lambda=1 row
}

TEST_CASE("emitted sweep files round-trip and ship a manifest") {
    const std::string out_path = temp_path("sweep.csv");
    const auto r = run_cli("sweep --case worst --discipline mm1 --n 2 --mu 18 --epsilon 2"
                           " --output " + out_path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());   // data went to the file

    const auto lines = split_lines(read_file(out_path));
    REQUIRE(lines.size() == 65);

    // recomputing every row from its shortest-round-trip lambda reproduces the
    // numeric fields exactly
    const SweepScenario scenario{WorstCase{Epsilon(2)}, 2, Rate(18),
                                 Discipline::ExponentialService};
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv(lines[i]);
        const double lambda = parse_double(fields[0]);
        const ComparisonResult expect = analyze(build_chain(scenario, Rate(lambda)));
        CHECK(fields[1] == format_double(expect.per_stage[0].sojourn_time));
        CHECK(fields[2] == format_double(expect.per_stage[1].sojourn_time));
        CHECK(fields[3] == format_double(expect.micro_total_time));
        CHECK(fields[4] == format_double(expect.monolith_time));
    }

    const auto manifest = nlohmann::json::parse(read_file(out_path + ".manifest.json"));
    CHECK(manifest["tool"] == "splitq");
    CHECK(manifest["parameters"]["case"] == "worst");
    CHECK(manifest["parameters"]["grid"] == "default");
    CHECK(manifest["command_line"].get<std::string>().find("sweep") != std::string::npos);
    CHECK(manifest.contains("generated_at"));
}

TEST_CASE("analyze agrees with the matching sweep row") {
    const auto sweep_run = run_cli("sweep --case best --discipline md1 --n 3 --mu 4"
                                   " --lambda-min 1 --lambda-max 3 --steps 3");
    REQUIRE(sweep_run.exit_code == 0);
    const auto rows = split_lines(sweep_run.out);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto fields = split_csv(rows[i]);
        const auto analyze_run =
            run_cli("analyze --case best --discipline md1 --n 3 --mu 4 --lambda " + fields[0]);
        REQUIRE(analyze_run.exit_code == 0);
        const auto afields = split_csv(split_lines(analyze_run.out)[1]);
        CHECK(close_rel(parse_double(afields[4]), parse_double(fields[4]), 1e-12));
        CHECK(close_rel(parse_double(afields[3]), parse_double(fields[3]), 1e-12));
    }
}

TEST_CASE("simulate matches the exact tandem prediction") {
    const auto r = run_cli("simulate --case best --discipline mm1 --n 2 --lambda 1 --mu 2.5"
                           " --feed tandem --seed 7 --jobs 200000 --reps 10");
    REQUIRE(r.exit_code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    const auto header = split_csv(lines[0]);
    const auto fields = split_csv(lines[1]);
    REQUIRE(header.size() == fields.size());
    CHECK(header[0] == "mean_sojourn");
    const double mean = parse_double(fields[0]);
    CHECK(close_rel(mean, 0.5, 0.02));
    CHECK(close_rel(parse_double(fields[4]), 0.5, 1e-9));   // analytic_total column
}

TEST_CASE("simulate matches the independent-feed deterministic prediction") {
    const auto r = run_cli("simulate --case worst --discipline md1 --n 2 --lambda 1 --mu 18"
                           " --epsilon 2 --feed independent --seed 9 --jobs 200000 --reps 10");
    REQUIRE(r.exit_code == 0);
    const auto fields = split_csv(split_lines(r.out)[1]);
    CHECK(close_rel(parse_double(fields[0]), 145.0 / 306.0, 0.02));
}

TEST_CASE("repeating a seeded simulation is byte-identical") {
    const std::string cmd = "simulate --case best --discipline md1 --n 2 --lambda 1 --mu 2.5"
                            " --feed tandem --seed 31 --jobs 20000 --reps 6 --format json";
    const auto a = run_cli(cmd);
    const auto b = run_cli(cmd);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(a.out == b.out);

    const auto c = run_cli("simulate --case best --discipline md1 --n 2 --lambda 1 --mu 2.5"
                           " --feed tandem --seed 32 --jobs 20000 --reps 6 --format json");
    CHECK(a.out != c.out);
}

TEST_CASE("the recorded manifest command line reproduces the output byte for byte") {
    const std::string out_path = temp_path("sim.csv");
    const auto first = run_cli("simulate --case best --discipline mm1 --n 2 --lambda 1"
                               " --mu 2.5 --feed independent --seed 11 --jobs 10000 --reps 4"
                               " --output " + out_path);
    REQUIRE(first.exit_code == 0);
    const std::string first_bytes = read_file(out_path);
    REQUIRE_FALSE(first_bytes.empty());

    const auto manifest = nlohmann::json::parse(read_file(out_path + ".manifest.json"));
    CHECK(manifest["seed"] == 11);
    const std::string recorded = manifest["command_line"].get<std::string>();

    const auto rerun = testutil::run_command(recorded);
    REQUIRE(rerun.exit_code == 0);
    CHECK(read_file(out_path) == first_bytes);
}

TEST_CASE("simulate writes a per-job trace when asked") {
    const std::string trace_path = temp_path("trace.csv");
    const auto r = run_cli("simulate --case best --discipline mm1 --n 2 --lambda 1 --mu 2.5"
                           " --feed tandem --seed 3 --jobs 25 --reps 2 --trace " + trace_path);
    REQUIRE(r.exit_code == 0);
    const auto lines = split_lines(read_file(trace_path));
    REQUIRE(lines.size() == 1 + 25 * 2);   // header + jobs x stages, replication 0 only
    CHECK(lines[0] == "job_id,stage,arrival,service_start,departure");
    const auto row = split_csv(lines[1]);
    REQUIRE(row.size() == 5);
    CHECK(row[0] == "0");
    CHECK(row[1] == "1");
    CHECK(parse_double(row[3]) >= parse_double(row[2]));
    CHECK(parse_double(row[4]) > parse_double(row[3]));
}

TEST_CASE("simulate accepts custom stage rates and flags non-conserving splits") {
    const auto r = run_cli("simulate --case custom --discipline mm1 --lambda 1"
                           " --stage-rates 3,18 --monolith-rate 2.5714285714285716"
                           " --feed independent --seed 5 --jobs 5000 --reps 3");
    REQUIRE(r.exit_code == 0);
    const auto fields = split_csv(split_lines(r.out)[1]);
    CHECK(close_rel(parse_double(fields[4]), 19.0 / 34.0, 1e-9));

    const auto unstable = run_cli("simulate --case custom --discipline mm1 --lambda 2"
                                  " --stage-rates 3,1.5 --monolith-rate 3 --seed 1"
                                  " --jobs 100 --reps 2");
    CHECK(unstable.exit_code == 2);
    CHECK(unstable.err.find("stage 2") != std::string::npos);
}

TEST_CASE("analyze handles custom splits and flags skewed ones") {
    const auto r = run_cli("analyze --case custom --discipline mm1 --lambda 1"
                           " --stage-rates 4,4 --monolith-rate 3");
    REQUIRE(r.exit_code == 0);
    CHECK(r.err.find("do not conserve") != std::string::npos);
    const auto fields = split_csv(split_lines(r.out)[1]);
    // two M/M/1 stages at rate 4 against a monolith at rate 3
    CHECK(close_rel(parse_double(fields[3]), 2.0 / 3.0, 1e-9));
    CHECK(close_rel(parse_double(fields[4]), 0.5, 1e-9));
}

TEST_CASE("sweep json mirrors the csv columns") {
    const auto r = run_cli("sweep --case worst --discipline md1 --n 2 --mu 18 --epsilon 2"
                           " --lambda-min 1 --lambda-max 3 --steps 3 --format json");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["case"] == "worst");
    CHECK(j["epsilon"] == 2.0);
    REQUIRE(j["rows"].size() == 3);
    CHECK(j["rows"][0]["lambda"] == 1.0);
    CHECK(j["rows"][0]["per_stage_times"].size() == 2);
    CHECK(close_rel(j["rows"][0]["micro_total"].get<double>(), 145.0 / 306.0, 1e-9));
    CHECK(j["skipped_lambdas"].empty());
}

TEST_CASE("near-saturation scenarios warn on stderr without blocking") {
    const auto r = run_cli("analyze --case best --discipline mm1 --n 2 --lambda 2.49 --mu 2.5");
    REQUIRE(r.exit_code == 0);
    CHECK(r.err.find("warning: monolith utilization") != std::string::npos);
    CHECK(split_lines(r.out).size() == 2);   // data still printed

    const auto quiet = run_cli("analyze --case best --discipline mm1 --n 2 --lambda 1 --mu 2.5");
    CHECK(quiet.err.empty());
}

TEST_CASE("verify passes on honest trials and writes its report") {
    const std::string report_path = temp_path("report.json");
    const auto r = run_cli("verify --trials 200 --seed 1 --report " + report_path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("cell worst/mm1: 200/200 passed") != std::string::npos);
    CHECK(r.out.find("all cells passed") != std::string::npos);

    const auto report = nlohmann::json::parse(read_file(report_path));
    CHECK(report["all_passed"] == true);
    REQUIRE(report["cells"].size() == 4);
    for (const auto& cell : report["cells"]) {
        CHECK(cell["passes"] == 200);
        CHECK(cell["counterexample"].is_null());
    }

    CHECK(run_cli("verify --trials 1 --seed 1").exit_code == 0);
}
