#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mts {

// Stable 64-bit seed for one grid cell. FNV-1a over the canonical
// "base:method:scheme:resample" tag, so enabling or disabling other
// configurations never perturbs a cell's seed.
std::uint64_t seed_hash(std::uint64_t base_seed, std::string_view method_tag,
                        std::string_view scheme_tag, int resample);

// Variant for non-cell streams (e.g. the per-resample split).
std::uint64_t seed_hash(std::uint64_t base_seed, std::string_view tag, int resample);

// Deterministic random source. mt19937_64 output is fully specified by the
// standard; the real/normal/index mappings are fixed here because the
// std::*_distribution algorithms are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller, pairs consumed deterministically
    double normal();

    // uniform integer in [0, n), n >= 1
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace mts
