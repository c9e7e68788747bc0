#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vcqa/hamiltonian.hpp"

namespace vcqa::harness {

/// splitmix64 mixing step; the canonical stream generator behind all child
/// seeds, so parallel and serial execution draw identical instances.
std::uint64_t splitmix64(std::uint64_t& state);

/// Child seed k of a master seed: the k-th output of the splitmix64 stream
/// seeded with the master.
std::uint64_t mix_seed(std::uint64_t master, int index);

enum class DrawRange {
  half_open_unit,  ///< (0, 1]
  closed_unit      ///< [0, 1]
};

DrawRange draw_range_from_string(const std::string& name);
std::string to_string(DrawRange r);

/// Uniform double in the requested range from one 64-bit word.
double draw_uniform(std::uint64_t word, DrawRange range);

/// Deterministic instance ensemble: instance k is seeded with mix_seed(seed,
/// k) and draws its omegas first, then the couplings in edge order, from an
/// mt19937_64 stream. Heisenberg instances take the fixed chain parameters
/// instead of random draws.
std::vector<ProblemInstance> generate_instances(
    Connectivity connectivity, int n_qubits, int count, std::uint64_t seed,
    DrawRange range = DrawRange::half_open_unit,
    const std::optional<HeisenbergParams>& heisenberg = std::nullopt);

}  // namespace vcqa::harness
