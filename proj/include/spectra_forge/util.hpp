#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spectra_forge {

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view s);

/// Per-module generator derived from a global seed, so that draws in one
/// module do not depend on what other modules consumed.
std::mt19937_64 module_rng(std::uint64_t seed, std::string_view module);

/// Worker threads: SPECTRA_FORGE_THREADS if set and positive, else
/// hardware concurrency (at least 1).
int thread_count();

}  // namespace spectra_forge
