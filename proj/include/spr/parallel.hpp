#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace spr {

/// Worker count: SPR_LAB_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) across worker_count() threads. Each index is
/// visited exactly once; callers write into index-addressed slots so the result
/// does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Generator for stochastic sample `index` of a run seeded with `seed`. The
/// state is a pure function of (seed, index, stream).
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0);

}  // namespace spr
