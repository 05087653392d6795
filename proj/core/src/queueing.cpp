#include "splitq/queueing.hpp"

namespace splitq {

namespace {

StageMetrics make_metrics(double rho, double wait, double sojourn) noexcept {
    return StageMetrics{rho, wait, sojourn, rho > kSaturationWarningRho};
}

}  // namespace

double utilization(Rate lambda, Rate mu) noexcept {
    return lambda.value() / mu.value();
}

StageMetrics mm1_sojourn(Rate lambda, Rate mu) {
    const double l = lambda.value();
    const double m = mu.value();
    if (l >= m) {
        throw UnstableQueue(l, m, "mm1_sojourn");
    }
    const double sojourn = 1.0 / (m - l);
    return make_metrics(l / m, sojourn - 1.0 / m, sojourn);
}

StageMetrics md1_sojourn(Rate lambda, Rate mu) {
    const double l = lambda.value();
    const double m = mu.value();
    if (l >= m) {
        throw UnstableQueue(l, m, "md1_sojourn");
    }
    // Pollaczek-Khinchine with zero service variance: the wait is half the
    // exponential-service wait.
    const double wait = (1.0 / (2.0 * m)) * (l / (m - l));
    return make_metrics(l / m, wait, wait + 1.0 / m);
}

StageMetrics sojourn(Discipline d, Rate lambda, Rate mu) {
    return d == Discipline::ExponentialService ? mm1_sojourn(lambda, mu)
                                               : md1_sojourn(lambda, mu);
}

}  // namespace splitq
