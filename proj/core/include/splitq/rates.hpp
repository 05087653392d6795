#pragma once

#include <string_view>

#include "splitq/errors.hpp"

namespace splitq {

/// Service-time law of a queue. ExponentialService selects the M/M/1 formulas,
/// DeterministicService the M/D/1 (Pollaczek-Khinchine) ones.
enum class Discipline {
    ExponentialService,
    DeterministicService,
};

std::string_view to_string(Discipline d) noexcept;

/// A strictly positive rate in jobs per unit time (arrival or service).
class Rate {
public:
    explicit Rate(double jobs_per_unit_time);

    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Headroom of the worst-case hot stage's service rate above the arrival rate;
/// strictly positive.
class Epsilon {
public:
    explicit Epsilon(double value);

    double value() const noexcept { return value_; }

private:
    double value_;
};

}  // namespace splitq
