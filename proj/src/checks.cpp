#include "emrr/checks.hpp"

#include <array>
#include <atomic>

namespace emrr::checks {

namespace {
constexpr auto kKinds = static_cast<std::size_t>(Kind::count_);
std::array<std::atomic<std::uint64_t>, kKinds> counters{};
}  // namespace

std::string_view name(Kind k) {
  static constexpr std::array<std::string_view, kKinds> names{
      "marked_iff", "recursion_guard", "catalog_alignment", "one_witness", "gather_bound", "space_inequality"};
  return names.at(static_cast<std::size_t>(k));
}

void fire(Kind k) { counters.at(static_cast<std::size_t>(k)).fetch_add(1, std::memory_order_relaxed); }

std::uint64_t fired(Kind k) { return counters.at(static_cast<std::size_t>(k)).load(std::memory_order_relaxed); }

std::uint64_t fired_total() {
  std::uint64_t t = 0;
  for (const auto& c : counters) t += c.load(std::memory_order_relaxed);
  return t;
}

void reset() {
  for (auto& c : counters) c.store(0, std::memory_order_relaxed);
}

}  // namespace emrr::checks
