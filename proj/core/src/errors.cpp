#include "splitq/errors.hpp"

#include <sstream>

#include "splitq/text.hpp"

namespace splitq {

namespace {

std::string unstable_queue_message(double lambda, double mu, const std::string& where) {
    std::ostringstream os;
    os << "unstable queue at " << where << ": lambda=" << format_double(lambda)
       << " >= mu=" << format_double(mu) << " (no steady state)";
    return os.str();
}

std::string unstable_monolith_message(double lambda, double rate) {
    std::ostringstream os;
    os << "unstable monolith: computed rate " << format_double(rate)
       << " <= lambda=" << format_double(lambda)
       << " (scenario outside the assumed regime; increase epsilon or mu)";
    return os.str();
}

std::string invalid_n_message(int n, const std::string& reason) {
    std::ostringstream os;
    os << "invalid stage count n=" << n << ": " << reason;
    return os.str();
}

std::string infeasible_grid_message(const std::vector<double>& lambdas) {
    std::ostringstream os;
    os << "infeasible grid point" << (lambdas.size() == 1 ? "" : "s") << ":";
    for (double l : lambdas) {
        os << " lambda=" << format_double(l);
    }
    return os.str();
}

}  // namespace

UnstableQueue::UnstableQueue(double lambda, double mu, std::string where)
    : Error(unstable_queue_message(lambda, mu, where)),
      lambda_(lambda),
      mu_(mu),
      where_(std::move(where)) {}

UnstableMonolith::UnstableMonolith(double lambda, double computed_rate)
    : Error(unstable_monolith_message(lambda, computed_rate)),
      lambda_(lambda),
      computed_rate_(computed_rate) {}

InvalidN::InvalidN(int n, const std::string& reason)
    : Error(invalid_n_message(n, reason)), n_(n) {}

InfeasibleGridPoint::InfeasibleGridPoint(std::vector<double> lambdas)
    : Error(infeasible_grid_message(lambdas)), lambdas_(std::move(lambdas)) {}

}  // namespace splitq
