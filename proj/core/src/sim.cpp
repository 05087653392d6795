#include "splitq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "splitq/errors.hpp"
#include "splitq/rng.hpp"

namespace splitq::sim {

namespace {

// Substream purposes under one (seed, replication) pair.
constexpr std::uint64_t kTandemArrivals = 0;      // one stream entering stage 1
constexpr std::uint64_t kStageService = 1;        // per-stage service draws
constexpr std::uint64_t kIndependentArrivals = 2; // per-stage fresh Poisson feeds

struct ChainParams {
    Discipline discipline;
    double lambda;
    std::vector<double> rates;
};

struct RepOutcome {
    std::vector<double> stage_means;
    double total_mean;
};

void validate_config(const SimConfig& config) {
    if (config.jobs_per_replication < 1) {
        throw InvalidConfig("jobs_per_replication must be >= 1");
    }
    if (config.replications < 1) {
        throw InvalidConfig("replications must be >= 1");
    }
    if (!(config.warmup_fraction >= 0.0 && config.warmup_fraction <= 0.5)) {
        throw InvalidConfig("warmup_fraction must lie in [0, 0.5]");
    }
}

std::int64_t warmup_cut(const SimConfig& config) {
    return static_cast<std::int64_t>(
        std::floor(config.warmup_fraction * static_cast<double>(config.jobs_per_replication)));
}

/// One replication in tandem mode: job k's departure from stage j is its
/// arrival at stage j+1. FIFO single-server stages admit the exact per-job
/// recursion service_start = max(arrival, previous departure); taking the max
/// means an arrival that coincides with a departure finds the server already
/// free, i.e. departures are processed before arrivals at equal timestamps.
RepOutcome run_tandem_rep(const ChainParams& chain, const SimConfig& config, int rep,
                          const TraceSink* trace) {
    const int n = static_cast<int>(chain.rates.size());
    SplitMix64 arrivals = substream(config.seed, static_cast<std::uint64_t>(rep),
                                    kTandemArrivals, 0);
    std::vector<SplitMix64> service;
    service.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        service.push_back(substream(config.seed, static_cast<std::uint64_t>(rep), kStageService,
                                    static_cast<std::uint64_t>(j) + 1));
    }

    std::vector<double> prev_departure(static_cast<std::size_t>(n), 0.0);
    std::vector<double> stage_sums(static_cast<std::size_t>(n), 0.0);
    double total_sum = 0.0;
    const std::int64_t cut = warmup_cut(config);
    std::int64_t measured = 0;
    double arrival_clock = 0.0;

    for (std::int64_t k = 0; k < config.jobs_per_replication; ++k) {
        arrival_clock += exponential_from_uniform(arrivals.next_unit(), chain.lambda);
        double t = arrival_clock;
        for (int j = 0; j < n; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const double start = std::max(t, prev_departure[ju]);
            const double svc = chain.discipline == Discipline::ExponentialService
                                   ? exponential_from_uniform(service[ju].next_unit(),
                                                              chain.rates[ju])
                                   : 1.0 / chain.rates[ju];
            const double departure = start + svc;
            if (trace) {
                (*trace)(TraceRow{k, j + 1, t, start, departure});
            }
            prev_departure[ju] = departure;
            if (k >= cut) {
                stage_sums[ju] += departure - t;
            }
            t = departure;
        }
        if (k >= cut) {
            total_sum += t - arrival_clock;
            ++measured;
        }
    }

    RepOutcome outcome;
    outcome.stage_means.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        outcome.stage_means[static_cast<std::size_t>(j)] =
            stage_sums[static_cast<std::size_t>(j)] / static_cast<double>(measured);
    }
    outcome.total_mean = total_sum / static_cast<double>(measured);
    return outcome;
}

/// One replication in independent mode: every stage is its own queue with a
/// fresh Poisson(lambda) feed, and the chain total is the sum of stage means,
/// matching the analytical model's assumption by construction.
RepOutcome run_independent_rep(const ChainParams& chain, const SimConfig& config, int rep,
                               const TraceSink* trace) {
    const int n = static_cast<int>(chain.rates.size());
    const std::int64_t cut = warmup_cut(config);

    RepOutcome outcome;
    outcome.stage_means.resize(static_cast<std::size_t>(n));
    outcome.total_mean = 0.0;

    for (int j = 0; j < n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        SplitMix64 arrivals = substream(config.seed, static_cast<std::uint64_t>(rep),
                                        kIndependentArrivals, static_cast<std::uint64_t>(j) + 1);
        SplitMix64 service = substream(config.seed, static_cast<std::uint64_t>(rep),
                                       kStageService, static_cast<std::uint64_t>(j) + 1);
        double prev_departure = 0.0;
        double arrival_clock = 0.0;
        double sum = 0.0;
        std::int64_t measured = 0;
        for (std::int64_t k = 0; k < config.jobs_per_replication; ++k) {
            arrival_clock += exponential_from_uniform(arrivals.next_unit(), chain.lambda);
            const double start = std::max(arrival_clock, prev_departure);
            const double svc = chain.discipline == Discipline::ExponentialService
                                   ? exponential_from_uniform(service.next_unit(), chain.rates[ju])
                                   : 1.0 / chain.rates[ju];
            const double departure = start + svc;
            if (trace) {
                (*trace)(TraceRow{k, j + 1, arrival_clock, start, departure});
            }
            prev_departure = departure;
            if (k >= cut) {
                sum += departure - arrival_clock;
                ++measured;
            }
        }
        outcome.stage_means[ju] = sum / static_cast<double>(measured);
        outcome.total_mean += outcome.stage_means[ju];
    }
    return outcome;
}

RepOutcome run_replication(const ChainParams& chain, const SimConfig& config, int rep,
                           const TraceSink* trace) {
    return config.feed_mode == FeedMode::Tandem ? run_tandem_rep(chain, config, rep, trace)
                                                : run_independent_rep(chain, config, rep, trace);
}

/// Replications fan out over worker threads; outcomes land in slots indexed by
/// replication and are reduced in index order, so the estimate does not depend
/// on completion order. Only replication 0 feeds the trace sink.
SimEstimate run_chain(const ChainParams& chain, const SimConfig& config, const TraceSink& trace) {
    validate_config(config);
    for (std::size_t j = 0; j < chain.rates.size(); ++j) {
        if (chain.lambda >= chain.rates[j]) {
            throw UnstableQueue(chain.lambda, chain.rates[j], "stage " + std::to_string(j + 1));
        }
    }

    const int reps = config.replications;
    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));

    const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
    const int workers = std::min<int>(reps, static_cast<int>(hw));
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int rep = w; rep < reps; rep += workers) {
                    outcomes[static_cast<std::size_t>(rep)] = run_replication(
                        chain, config, rep, rep == 0 && trace ? &trace : nullptr);
                }
            });
        }
    }

    const std::int64_t retained = config.jobs_per_replication - warmup_cut(config);
    SimEstimate estimate;
    estimate.samples = static_cast<std::int64_t>(reps) * retained;
    estimate.per_stage_means.assign(chain.rates.size(), 0.0);

    double mean = 0.0;
    for (const RepOutcome& outcome : outcomes) {
        mean += outcome.total_mean;
        for (std::size_t j = 0; j < chain.rates.size(); ++j) {
            estimate.per_stage_means[j] += outcome.stage_means[j];
        }
    }
    mean /= static_cast<double>(reps);
    for (double& m : estimate.per_stage_means) {
        m /= static_cast<double>(reps);
    }
    estimate.mean_sojourn = mean;

    if (reps >= 2) {
        double ss = 0.0;
        for (const RepOutcome& outcome : outcomes) {
            const double d = outcome.total_mean - mean;
            ss += d * d;
        }
        estimate.std_error = std::sqrt(ss / static_cast<double>(reps - 1)) /
                             std::sqrt(static_cast<double>(reps));
    } else {
        estimate.std_error = 0.0;   // a single replication carries no spread information
    }
    estimate.ci95_half_width = kCi95Multiplier * estimate.std_error;
    return estimate;
}

}  // namespace

SimEstimate simulate_single_queue(Rate lambda, Rate mu, Discipline d, const SimConfig& config) {
    if (lambda.value() >= mu.value()) {
        throw UnstableQueue(lambda.value(), mu.value(), "single queue");
    }
    ChainParams chain{d, lambda.value(), {mu.value()}};
    SimConfig single = config;
    single.feed_mode = FeedMode::Tandem;   // one stage: both modes coincide on this stream layout
    SimEstimate estimate = run_chain(chain, single, {});
    estimate.per_stage_means.clear();
    return estimate;
}

SimEstimate simulate_chain(const ChainSpec& spec, const SimConfig& config,
                           const TraceSink& trace) {
    ChainParams chain;
    chain.discipline = spec.discipline;
    chain.lambda = spec.lambda.value();
    chain.rates.reserve(spec.stage_rates.size());
    for (const Rate& r : spec.stage_rates) {
        chain.rates.push_back(r.value());
    }
    return run_chain(chain, config, trace);
}

}  // namespace splitq::sim
