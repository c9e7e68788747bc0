#include "vcqa/instances.hpp"

#include <random>
#include <stdexcept>

namespace vcqa::harness {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t master, int index) {
  std::uint64_t state = master;
  std::uint64_t out = 0;
  for (int i = 0; i <= index; ++i) out = splitmix64(state);
  return out;
}

DrawRange draw_range_from_string(const std::string& name) {
  if (name == "half-open" || name == "half_open") return DrawRange::half_open_unit;
  if (name == "closed") return DrawRange::closed_unit;
  throw std::invalid_argument("unknown draw range: " + name);
}

std::string to_string(DrawRange r) {
  return r == DrawRange::half_open_unit ? "half-open" : "closed";
}

double draw_uniform(std::uint64_t word, DrawRange range) {
  const std::uint64_t mantissa = word >> 11;  // 53 bits
  if (range == DrawRange::half_open_unit)
    return static_cast<double>(mantissa + 1) * 0x1p-53;  // (0, 1]
  return static_cast<double>(mantissa) / 9007199254740991.0;  // [0, 1]
}

std::vector<ProblemInstance> generate_instances(
    Connectivity connectivity, int n_qubits, int count, std::uint64_t seed,
    DrawRange range, const std::optional<HeisenbergParams>& heisenberg) {
  if (count < 1) throw std::invalid_argument("instance count must be >= 1");
  if (n_qubits < 1) throw std::invalid_argument("need >= 1 qubit");

  std::vector<ProblemInstance> instances;
  instances.reserve(count);
  for (int k = 0; k < count; ++k) {
    ProblemInstance inst;
    inst.connectivity = connectivity;
    inst.n_qubits = n_qubits;
    inst.seed = mix_seed(seed, k);

    if (connectivity == Connectivity::heisenberg) {
      const HeisenbergParams params = heisenberg.value_or(HeisenbergParams{});
      inst.heisenberg = params;
      // The uniform field doubles as the auxiliary frequency.
      inst.omegas.assign(n_qubits, params.omega);
    } else {
      std::mt19937_64 rng(inst.seed);
      inst.omegas.resize(n_qubits);
      for (auto& w : inst.omegas) w = draw_uniform(rng(), range);
      for (const auto& [i, j] : connectivity_edges(connectivity, n_qubits))
        inst.couplings.push_back({i, j, draw_uniform(rng(), range)});
    }
    inst.validate();
    instances.push_back(std::move(inst));
  }
  return instances;
}

}  // namespace vcqa::harness
