#pragma once

#include "splitq/rates.hpp"

namespace splitq {

/// Utilization above which StageMetrics::near_saturation is set. Advisory only:
/// the formulas stay finite for any rho < 1 and computation is never blocked.
inline constexpr double kSaturationWarningRho = 0.99;

/// Steady-state figures for one single-server FIFO queue.
struct StageMetrics {
    double rho;              ///< lambda/mu, in (0,1) for a stable queue
    double wait_time;        ///< mean time spent waiting, >= 0
    double sojourn_time;     ///< wait_time + 1/mu
    bool near_saturation;    ///< rho > kSaturationWarningRho
};

/// lambda/mu as a plain ratio; stability is the caller's concern.
double utilization(Rate lambda, Rate mu) noexcept;

/// Mean sojourn time of an M/M/1 queue: 1/(mu - lambda).
/// Throws UnstableQueue when lambda >= mu.
StageMetrics mm1_sojourn(Rate lambda, Rate mu);

/// Mean sojourn time of an M/D/1 queue: 1/mu + (1/(2mu)) * lambda/(mu - lambda).
/// Throws UnstableQueue when lambda >= mu.
StageMetrics md1_sojourn(Rate lambda, Rate mu);

/// Dispatch over the two service disciplines.
StageMetrics sojourn(Discipline d, Rate lambda, Rate mu);

}  // namespace splitq
