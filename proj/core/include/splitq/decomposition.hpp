#pragma once

#include <span>
#include <variant>
#include <vector>

#include "splitq/queueing.hpp"
#include "splitq/rates.hpp"

namespace splitq {

/// Worst-case split: one hot stage at rate lambda+epsilon, the remaining n-1
/// stages evenly share the rest of the work at rate (n-1)*mu each.
struct WorstCase {
    Epsilon epsilon;
};

/// Best-case split: the monolith's work divided evenly, all n stages at rate n*mu.
struct BestCase {};

/// User-supplied stage rates; stability-checked but not required to conserve
/// total service work.
struct CustomCase {};

/// The two scenario families the analysis is proved for.
using SplitCase = std::variant<WorstCase, BestCase>;

/// What a ChainSpec was built as.
using CaseLabel = std::variant<WorstCase, BestCase, CustomCase>;

/// Stage-count sanity cap; the analysis is O(n) but unboundedly large chains
/// are almost certainly an input mistake.
inline constexpr int kMaxStages = 10'000;

inline constexpr double kRateConservationRelTol = 1e-9;

/// A decomposition scenario: one arrival stream of rate lambda traverses n
/// single-server stages, compared against the equivalent unsplit monolith.
struct ChainSpec {
    Discipline discipline;
    Rate lambda;
    std::vector<Rate> stage_rates;
    Rate monolith_rate;
    CaseLabel case_label;

    int stage_count() const noexcept { return static_cast<int>(stage_rates.size()); }
};

/// mu(lambda+eps)/(mu+lambda+eps): the rate of the monolith whose mean service
/// time is the sum 1/(lambda+eps) + 1/mu of the worst-case split's stage times.
/// Throws UnstableMonolith when the computed rate is <= lambda.
Rate worst_case_monolith_rate(Rate lambda, Epsilon epsilon, Rate mu);

/// Stage rates [lambda+eps, (n-1)mu, ..., (n-1)mu]; monolith at the worst-case
/// rate. Requires n >= 2: a hot stage plus at least one cold stage.
ChainSpec build_worst_case(int n, Rate lambda, Rate mu, Epsilon epsilon, Discipline d);

/// n stages all at rate n*mu against a monolith at rate mu. n = 1 is the
/// identity split. Throws UnstableQueue when lambda >= mu.
ChainSpec build_best_case(int n, Rate lambda, Rate mu, Discipline d);

/// Arbitrary stage rates. Stability of every stage and of the monolith is
/// enforced; rate conservation is the caller's concern (query it with
/// rate_conservation_holds).
ChainSpec build_custom(Rate lambda, std::vector<Rate> stage_rates, Rate monolith_rate,
                       Discipline d);

/// Whether sum_i 1/stage_rates[i] equals 1/monolith_rate within rel_tol.
/// Holds by construction for worst- and best-case chains.
bool rate_conservation_holds(const ChainSpec& spec, double rel_tol = kRateConservationRelTol);

/// Analytical chain-vs-monolith comparison.
struct ComparisonResult {
    std::vector<StageMetrics> per_stage;
    StageMetrics monolith;
    double micro_total_time;       ///< sum of per-stage sojourn times
    double monolith_time;          ///< monolith sojourn time
    double absolute_improvement;   ///< monolith_time - micro_total_time
    double speedup;                ///< monolith_time / micro_total_time
};

/// Evaluate every stage and the monolith under the chain's discipline.
/// Throws UnstableQueue naming the offending stage index (or "monolith").
ComparisonResult analyze(const ChainSpec& spec);

/// Strict micro_total_time < monolith_time. No tolerance: the proved
/// inequalities are strict and their gaps sit far above rounding noise; the
/// n = 1 identity split compares equal and returns false.
bool verify_improvement(const ComparisonResult& result) noexcept;

// ---------------------------------------------------------------------------
// Lambda sweeps (the Figure-2-style tables)

/// Scenario family swept over lambda. For the worst case the hot-stage rate
/// lambda+eps and the monolith rate both move with lambda.
struct SweepScenario {
    SplitCase split;
    int n;
    Rate mu;
    Discipline discipline;
};

enum class SweepMode {
    Strict,    ///< any infeasible grid point aborts the sweep
    Lenient,   ///< infeasible points are skipped and reported
};

struct SweepRow {
    double lambda;
    std::vector<double> per_stage_times;
    double micro_total;
    double monolith;
};

struct SweepTable {
    SweepScenario scenario;
    std::vector<SweepRow> rows;
    std::vector<double> skipped;   ///< lambdas dropped in lenient mode
};

/// Instantiate the scenario at one arrival rate.
ChainSpec build_chain(const SweepScenario& scenario, Rate lambda);

/// True iff every queue of the scenario (stages and monolith) is stable at
/// lambda. Errors that are not about stability (InvalidN, overflowing rates)
/// propagate.
bool feasible_lambda(const SweepScenario& scenario, double lambda);

/// Supremum of feasible lambda, found by bisection on feasible_lambda. The
/// predicate is monotone (a feasible lambda stays feasible when decreased), so
/// bisection applies to every scenario family uniformly.
double max_stable_lambda(const SweepScenario& scenario);

/// The default Figure-2 grid: `points` evenly spaced lambdas covering
/// [lo_frac, hi_frac] of max_stable_lambda.
std::vector<double> default_lambda_grid(const SweepScenario& scenario, int points = 64,
                                        double lo_frac = 0.02, double hi_frac = 0.95);

/// One row per grid lambda, in grid order. Strict mode throws
/// InfeasibleGridPoint listing every offending lambda before evaluating
/// anything; lenient mode records them in SweepTable::skipped.
SweepTable sweep(const SweepScenario& scenario, std::span<const double> lambda_grid,
                 SweepMode mode = SweepMode::Strict);

}  // namespace splitq
