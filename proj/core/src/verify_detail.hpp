#pragma once

#include <cstdint>

#include "dysa/verify.hpp"

namespace dysa::detail {

SuiteReport suite_prox(std::uint64_t seed);
SuiteReport suite_oracle(std::uint64_t seed);
SuiteReport suite_schedules(std::uint64_t seed);
SuiteReport suite_accelerated(std::uint64_t seed, int jobs);
SuiteReport suite_strong(std::uint64_t seed, int jobs);
SuiteReport suite_complexity(std::uint64_t seed, int jobs);

}  // namespace dysa::detail
