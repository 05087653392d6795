#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A constructor argument violated a type invariant (non-positive rate, NaN, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A queue was asked for a steady-state quantity with lambda >= mu.
class UnstableQueue : public Error {
public:
    UnstableQueue(double lambda, double mu, std::string where);

    double lambda() const noexcept { return lambda_; }
    double mu() const noexcept { return mu_; }
    const std::string& where() const noexcept { return where_; }

private:
    double lambda_;
    double mu_;
    std::string where_;
};

/// The worst-case monolith rate mu(lambda+eps)/(mu+lambda+eps) came out <= lambda,
/// i.e. the scenario lies outside the regime where the monolith has a steady state.
class UnstableMonolith : public Error {
public:
    UnstableMonolith(double lambda, double computed_rate);

    double lambda() const noexcept { return lambda_; }
    double computed_rate() const noexcept { return computed_rate_; }

private:
    double lambda_;
    double computed_rate_;
};

/// Stage count outside the range a builder accepts.
class InvalidN : public Error {
public:
    InvalidN(int n, const std::string& reason);

    int n() const noexcept { return n_; }

private:
    int n_;
};

/// Simulation configuration rejected (zero jobs, zero replications, bad warmup fraction).
class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// One or more grid points cannot form a stable scenario; carries every offender.
class InfeasibleGridPoint : public Error {
public:
    explicit InfeasibleGridPoint(std::vector<double> lambdas);

    const std::vector<double>& lambdas() const noexcept { return lambdas_; }

private:
    std::vector<double> lambdas_;
};

}  // namespace splitq
