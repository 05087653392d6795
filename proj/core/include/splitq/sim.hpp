#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "splitq/decomposition.hpp"
#include "splitq/rates.hpp"

namespace splitq::sim {

/// How a multi-stage chain is fed.
enum class FeedMode {
    /// Every stage is its own queue with a fresh Poisson(lambda) arrival
    /// stream; the chain total is the sum of per-stage means. This matches the
    /// analytical model by construction.
    IndependentStages,
    /// One Poisson(lambda) stream enters stage 1 and each job's departure from
    /// stage i is its arrival at stage i+1; the total is the mean end-to-end
    /// sojourn. Exact for all-exponential chains (Burke), an independent
    /// measurement otherwise.
    Tandem,
};

struct SimConfig {
    std::uint64_t seed = 1;
    std::int64_t jobs_per_replication = 200'000;
    double warmup_fraction = 0.1;   ///< leading fraction of completed jobs discarded, in [0, 0.5]
    int replications = 10;
    FeedMode feed_mode = FeedMode::Tandem;
};

/// Replication-mean estimate with a normal-approximation confidence interval.
struct SimEstimate {
    double mean_sojourn;              ///< mean of replication means
    double std_error;                 ///< stddev of replication means / sqrt(replications)
    double ci95_half_width;           ///< kCi95Multiplier * std_error
    std::int64_t samples;             ///< replications x jobs retained after warmup
    std::vector<double> per_stage_means;   ///< chain runs only; empty for single queues
};

inline constexpr double kCi95Multiplier = 1.959963984540054;
inline constexpr double kCi99Multiplier = 2.5758293035489004;

/// One per-stage visit record; times are simulation units at full precision.
struct TraceRow {
    std::int64_t job_id;
    int stage;               ///< 1-based
    double arrival;
    double service_start;
    double departure;
};

/// Receives every TraceRow of replication 0 (other replications are not
/// traced). Called from the worker thread running that replication.
using TraceSink = std::function<void(const TraceRow&)>;

/// Simulate one FIFO queue with Poisson(lambda) arrivals. Deterministic per
/// (seed, config, parameters). Throws UnstableQueue when lambda >= mu and
/// InvalidConfig for unusable configs.
SimEstimate simulate_single_queue(Rate lambda, Rate mu, Discipline d, const SimConfig& config);

/// Simulate a decomposition chain under config.feed_mode. Per-stage means are
/// reported in stage order; the monolith is not simulated.
SimEstimate simulate_chain(const ChainSpec& spec, const SimConfig& config,
                           const TraceSink& trace = {});

}  // namespace splitq::sim
