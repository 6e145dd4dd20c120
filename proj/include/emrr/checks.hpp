#pragma once

// Structural runtime checks. Each failure is counted per kind instead of
// aborting, so suites can assert that none fired. Compiled out when
// EMRR_DEBUG_CHECKS is 0.

#include <cstdint>
#include <string_view>

#ifndef EMRR_DEBUG_CHECKS
#define EMRR_DEBUG_CHECKS 1
#endif

namespace emrr::checks {

enum class Kind : unsigned {
  marked_iff = 0,     // marked point reported <=> all head points reported
  recursion_guard,    // a child is entered only after all its head points
  catalog_alignment,  // node-structure queries hit child boundaries
  one_witness,        // one reduced point per reported color
  gather_bound,       // gathered slots <= 2k
  space_inequality,   // top-k index space bound
  count_
};

std::string_view name(Kind k);
void fire(Kind k);
std::uint64_t fired(Kind k);
std::uint64_t fired_total();
void reset();

}  // namespace emrr::checks

#if EMRR_DEBUG_CHECKS
#define EMRR_CHECK(kind, cond) \
  do {                         \
    if (!(cond)) ::emrr::checks::fire(::emrr::checks::Kind::kind); \
  } while (0)
#else
#define EMRR_CHECK(kind, cond) \
  do {                         \
  } while (0)
#endif
