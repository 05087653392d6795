#include "splitq/rng.hpp"

#include <cmath>

namespace splitq {

double exponential_from_uniform(double u, double rate) noexcept {
    return -std::log(u) / rate;
}

double exponential_sample(SplitMix64& rng, Rate rate) noexcept {
    return exponential_from_uniform(rng.next_unit(), rate.value());
}

}  // namespace splitq
