#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace cogmac {

/// Worker count: COGMAC_THREADS env var if set, else hardware concurrency.
int thread_count();

/// Run fn(i) for i in [0, n) across workers. Results must be written to
/// per-index slots; the partitioning never affects outputs.
void parallel_for(int n, const std::function<void(int)>& fn);

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic per-stream generator derived from (seed, stream).
std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t stream);

}  // namespace cogmac
