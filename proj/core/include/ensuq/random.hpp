#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ensuq {

/// Mixes a base seed with a stream index (splitmix64 finalizer). Used to
/// give every tree and every experiment run its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Uniform integer in [0, n) by rejection sampling on the raw engine output,
/// so results do not depend on the standard library's distributions.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

}  // namespace ensuq
