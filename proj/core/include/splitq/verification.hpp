#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "splitq/decomposition.hpp"

namespace splitq {

/// One randomized parameter tuple. epsilon is meaningful for worst-case draws only.
struct TrialParams {
    bool worst;
    Discipline discipline;
    int n;
    double lambda;
    double mu;
    double epsilon;
};

/// A draw on which the checked property failed, with both compared totals.
struct Counterexample {
    TrialParams params;
    double micro_total;
    double monolith;
};

struct CellReport {
    bool worst;
    Discipline discipline;
    long trials;
    long passes;
    std::optional<Counterexample> counterexample;   ///< first failure, if any
};

struct VerificationReport {
    std::uint64_t seed;
    long trials_per_cell;
    std::vector<CellReport> cells;   ///< worst/best x mm1/md1, fixed order

    bool all_passed() const noexcept;
};

using ImprovementPredicate = std::function<bool(const ComparisonResult&)>;

/// Randomized check of the four split-improvement theorems, one cell per
/// (case x discipline). Draws are rejected until feasible: utilization
/// uniform on (0.05, 0.95), n uniform on {2..16}, mu log-uniform on
/// [0.1, 100], epsilon log-uniform on [1e-3, 1e2]; worst-case draws must
/// additionally keep the monolith stable. Deterministic per seed. `holds`
/// defaults to verify_improvement; passing a different predicate lets a test
/// confirm the harness reports counterexamples.
VerificationReport run_theorem_trials(long trials_per_cell, std::uint64_t seed,
                                      const ImprovementPredicate& holds = {});

}  // namespace splitq
