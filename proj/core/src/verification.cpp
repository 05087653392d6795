#include "splitq/verification.hpp"

#include <cmath>

#include "splitq/errors.hpp"
#include "splitq/rng.hpp"

namespace splitq {

namespace {

constexpr double kRhoMin = 0.05;
constexpr double kRhoMax = 0.95;
constexpr int kNMin = 2;
constexpr int kNMax = 16;
constexpr double kMuMin = 0.1;
constexpr double kMuMax = 100.0;
constexpr double kEpsMin = 1e-3;
constexpr double kEpsMax = 1e2;

double uniform_in(SplitMix64& rng, double lo, double hi) {
    return lo + (hi - lo) * rng.next_unit();
}

double log_uniform_in(SplitMix64& rng, double lo, double hi) {
    return std::exp(uniform_in(rng, std::log(lo), std::log(hi)));
}

/// Rejection-sample one feasible tuple for the requested cell.
TrialParams draw_feasible(SplitMix64& rng, bool worst, Discipline d) {
    for (;;) {
        TrialParams p;
        p.worst = worst;
        p.discipline = d;
        p.n = kNMin + static_cast<int>(rng.next() % static_cast<std::uint64_t>(kNMax - kNMin + 1));
        p.mu = log_uniform_in(rng, kMuMin, kMuMax);
        p.lambda = uniform_in(rng, kRhoMin, kRhoMax) * p.mu;
        p.epsilon = log_uniform_in(rng, kEpsMin, kEpsMax);
        if (!worst) {
            return p;
        }
        // Worst case additionally needs the monolith stable:
        // lambda^2 + lambda*eps - mu*eps < 0.
        if (p.lambda * p.lambda + p.lambda * p.epsilon < p.mu * p.epsilon) {
            return p;
        }
    }
}

ChainSpec build_trial_chain(const TrialParams& p) {
    if (p.worst) {
        return build_worst_case(p.n, Rate(p.lambda), Rate(p.mu), Epsilon(p.epsilon),
                                p.discipline);
    }
    return build_best_case(p.n, Rate(p.lambda), Rate(p.mu), p.discipline);
}

}  // namespace

bool VerificationReport::all_passed() const noexcept {
    for (const CellReport& cell : cells) {
        if (cell.passes != cell.trials) {
            return false;
        }
    }
    return !cells.empty();
}

VerificationReport run_theorem_trials(long trials_per_cell, std::uint64_t seed,
                                      const ImprovementPredicate& holds) {
    if (trials_per_cell < 1) {
        throw InvalidParameter("trials_per_cell must be >= 1");
    }
    const ImprovementPredicate property =
        holds ? holds : ImprovementPredicate(verify_improvement);

    VerificationReport report;
    report.seed = seed;
    report.trials_per_cell = trials_per_cell;

    const Discipline disciplines[] = {Discipline::ExponentialService,
                                      Discipline::DeterministicService};
    std::uint64_t cell_index = 0;
    for (bool worst : {true, false}) {
        for (Discipline d : disciplines) {
            CellReport cell{worst, d, trials_per_cell, 0, std::nullopt};
            SplitMix64 rng = substream(seed, cell_index, 0, 0);
            for (long t = 0; t < trials_per_cell; ++t) {
                const TrialParams params = draw_feasible(rng, worst, d);
                const ComparisonResult result = analyze(build_trial_chain(params));
                if (property(result)) {
                    ++cell.passes;
                } else if (!cell.counterexample) {
                    cell.counterexample =
                        Counterexample{params, result.micro_total_time, result.monolith_time};
                }
            }
            report.cells.push_back(cell);
            ++cell_index;
        }
    }
    return report;
}

}  // namespace splitq
