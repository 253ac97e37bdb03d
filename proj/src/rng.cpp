#include "mts/rng.hpp"

#include <cmath>
#include <string>

namespace mts {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

} // namespace

std::uint64_t seed_hash(std::uint64_t base_seed, std::string_view method_tag,
                        std::string_view scheme_tag, int resample) {
    std::string key = std::to_string(base_seed);
    key += ':';
    key += method_tag;
    key += ':';
    key += scheme_tag;
    key += ':';
    key += std::to_string(resample);
    return fnv1a(key);
}

std::uint64_t seed_hash(std::uint64_t base_seed, std::string_view tag, int resample) {
    std::string key = std::to_string(base_seed);
    key += ':';
    key += tag;
    key += ':';
    key += std::to_string(resample);
    return fnv1a(key);
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // u1 in (0, 1] so the log is finite
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

} // namespace mts
