#include "splitq/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "splitq/errors.hpp"

namespace splitq {

namespace {

void check_stage_count(int n, int minimum, const char* why_minimum) {
    if (n < minimum) {
        throw InvalidN(n, why_minimum);
    }
    if (n > kMaxStages) {
        throw InvalidN(n, "exceeds the sanity cap of " + std::to_string(kMaxStages) + " stages");
    }
}

StageMetrics stage_sojourn(const ChainSpec& spec, int index) {
    try {
        return sojourn(spec.discipline, spec.lambda, spec.stage_rates[index]);
    } catch (const UnstableQueue&) {
        throw UnstableQueue(spec.lambda.value(), spec.stage_rates[index].value(),
                            "stage " + std::to_string(index + 1));
    }
}

StageMetrics monolith_sojourn(const ChainSpec& spec) {
    try {
        return sojourn(spec.discipline, spec.lambda, spec.monolith_rate);
    } catch (const UnstableQueue&) {
        throw UnstableQueue(spec.lambda.value(), spec.monolith_rate.value(), "monolith");
    }
}

}  // namespace

Rate worst_case_monolith_rate(Rate lambda, Epsilon epsilon, Rate mu) {
    const double l = lambda.value();
    const double e = epsilon.value();
    const double m = mu.value();
    const double rate = m * (l + e) / (m + l + e);
    // rate > lambda iff lambda^2 + lambda*eps - mu*eps < 0; large lambda with
    // small headroom violates it even under mu > lambda.
    if (!(rate > l)) {
        throw UnstableMonolith(l, rate);
    }
    return Rate(rate);
}

ChainSpec build_worst_case(int n, Rate lambda, Rate mu, Epsilon epsilon, Discipline d) {
    check_stage_count(n, 2, "the worst case needs a hot stage plus at least one cold stage");
    const Rate monolith = worst_case_monolith_rate(lambda, epsilon, mu);
    const Rate hot(lambda.value() + epsilon.value());
    const Rate cold(static_cast<double>(n - 1) * mu.value());
    if (lambda.value() >= cold.value()) {
        throw UnstableQueue(lambda.value(), cold.value(), "stage 2");
    }
    std::vector<Rate> stages;
    stages.reserve(static_cast<std::size_t>(n));
    stages.push_back(hot);
    for (int i = 1; i < n; ++i) {
        stages.push_back(cold);
    }
    return ChainSpec{d, lambda, std::move(stages), monolith, WorstCase{epsilon}};
}

ChainSpec build_best_case(int n, Rate lambda, Rate mu, Discipline d) {
    check_stage_count(n, 1, "the best case needs at least one stage");
    if (lambda.value() >= mu.value()) {
        throw UnstableQueue(lambda.value(), mu.value(), "monolith");
    }
    const Rate stage_rate(static_cast<double>(n) * mu.value());
    std::vector<Rate> stages(static_cast<std::size_t>(n), stage_rate);
    return ChainSpec{d, lambda, std::move(stages), mu, BestCase{}};
}

ChainSpec build_custom(Rate lambda, std::vector<Rate> stage_rates, Rate monolith_rate,
                       Discipline d) {
    check_stage_count(static_cast<int>(stage_rates.size()), 1,
                      "a custom chain needs at least one stage");
    for (std::size_t i = 0; i < stage_rates.size(); ++i) {
        if (lambda.value() >= stage_rates[i].value()) {
            throw UnstableQueue(lambda.value(), stage_rates[i].value(),
                                "stage " + std::to_string(i + 1));
        }
    }
    if (lambda.value() >= monolith_rate.value()) {
        throw UnstableQueue(lambda.value(), monolith_rate.value(), "monolith");
    }
    return ChainSpec{d, lambda, std::move(stage_rates), monolith_rate, CustomCase{}};
}

bool rate_conservation_holds(const ChainSpec& spec, double rel_tol) {
    double service_time_sum = 0.0;
    for (const Rate& r : spec.stage_rates) {
        service_time_sum += 1.0 / r.value();
    }
    const double monolith_time = 1.0 / spec.monolith_rate.value();
    return std::abs(service_time_sum - monolith_time) <= rel_tol * monolith_time;
}

ComparisonResult analyze(const ChainSpec& spec) {
    ComparisonResult result;
    result.per_stage.reserve(spec.stage_rates.size());
    double micro_total = 0.0;
    for (int i = 0; i < spec.stage_count(); ++i) {
        const StageMetrics metrics = stage_sojourn(spec, i);
        micro_total += metrics.sojourn_time;
        result.per_stage.push_back(metrics);
    }
    result.monolith = monolith_sojourn(spec);
    result.micro_total_time = micro_total;
    result.monolith_time = result.monolith.sojourn_time;
    result.absolute_improvement = result.monolith_time - result.micro_total_time;
    result.speedup = result.monolith_time / result.micro_total_time;
    return result;
}

bool verify_improvement(const ComparisonResult& result) noexcept {
    return result.micro_total_time < result.monolith_time;
}

ChainSpec build_chain(const SweepScenario& scenario, Rate lambda) {
    if (const auto* worst = std::get_if<WorstCase>(&scenario.split)) {
        return build_worst_case(scenario.n, lambda, scenario.mu, worst->epsilon,
                                scenario.discipline);
    }
    return build_best_case(scenario.n, lambda, scenario.mu, scenario.discipline);
}

bool feasible_lambda(const SweepScenario& scenario, double lambda) {
    if (!std::isfinite(lambda) || lambda <= 0.0) {
        return false;
    }
    // The standing assumption mu > lambda underlies both scenario families.
    if (lambda >= scenario.mu.value()) {
        return false;
    }
    try {
        build_chain(scenario, Rate(lambda));
        return true;
    } catch (const UnstableQueue&) {
        return false;
    } catch (const UnstableMonolith&) {
        return false;
    }
    // anything else (bad stage count, overflowing rates) is not a
    // lambda-feasibility question and propagates
}

double max_stable_lambda(const SweepScenario& scenario) {
    // mu is always an upper bound: the monolith rate is < mu in the worst case
    // and = mu in the best case.
    double hi = scenario.mu.value();
    double lo = hi * 1e-12;
    if (!feasible_lambda(scenario, lo)) {
        throw InfeasibleGridPoint({lo});
    }
    while (hi - lo > 1e-13 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (feasible_lambda(scenario, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

std::vector<double> default_lambda_grid(const SweepScenario& scenario, int points,
                                        double lo_frac, double hi_frac) {
    if (points < 2 || !(lo_frac > 0.0) || !(hi_frac > lo_frac) || !(hi_frac < 1.0)) {
        throw InvalidParameter("default grid needs points >= 2 and 0 < lo_frac < hi_frac < 1");
    }
    const double lambda_max = max_stable_lambda(scenario);
    const double lo = lo_frac * lambda_max;
    const double hi = hi_frac * lambda_max;
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

SweepTable sweep(const SweepScenario& scenario, std::span<const double> lambda_grid,
                 SweepMode mode) {
    for (std::size_t i = 1; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid[i] > lambda_grid[i - 1])) {
            throw InvalidParameter("lambda grid must be strictly increasing");
        }
    }

    std::vector<double> infeasible;
    for (double l : lambda_grid) {
        if (!feasible_lambda(scenario, l)) {
            infeasible.push_back(l);
        }
    }
    if (!infeasible.empty() && mode == SweepMode::Strict) {
        throw InfeasibleGridPoint(std::move(infeasible));
    }

    SweepTable table{scenario, {}, std::move(infeasible)};
    table.rows.reserve(lambda_grid.size());
    for (double l : lambda_grid) {
        if (std::find(table.skipped.begin(), table.skipped.end(), l) != table.skipped.end()) {
            continue;
        }
        const ComparisonResult result = analyze(build_chain(scenario, Rate(l)));
        SweepRow row;
        row.lambda = l;
        row.per_stage_times.reserve(result.per_stage.size());
        for (const StageMetrics& metrics : result.per_stage) {
            row.per_stage_times.push_back(metrics.sojourn_time);
        }
        row.micro_total = result.micro_total_time;
        row.monolith = result.monolith_time;
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace splitq
