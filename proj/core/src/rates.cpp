#include "splitq/rates.hpp"

#include <cmath>

#include "splitq/text.hpp"

namespace splitq {

std::string_view to_string(Discipline d) noexcept {
    switch (d) {
        case Discipline::ExponentialService:
            return "mm1";
        case Discipline::DeterministicService:
            return "md1";
    }
    return "?";
}

Rate::Rate(double jobs_per_unit_time) : value_(jobs_per_unit_time) {
    if (!std::isfinite(value_) || value_ <= 0.0) {
        throw InvalidParameter("rate must be a finite positive number, got " +
                               format_double(value_));
    }
}

Epsilon::Epsilon(double value) : value_(value) {
    if (!std::isfinite(value_) || value_ <= 0.0) {
        throw InvalidParameter("epsilon must be a finite positive number, got " +
                               format_double(value_));
    }
}

}  // namespace splitq
