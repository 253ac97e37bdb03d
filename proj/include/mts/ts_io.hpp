#pragma once

#include "mts/tensor.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace mts {

// Header directives of a classification-archive text file. Keys are stored
// lowercase without the leading '@'.
struct TsHeader {
    std::string problem_name;
    std::map<std::string, std::string> flags;
};

// Parses the archive text format: '@' directives, then '@data', then one
// sample per line with ':'-separated channels (comma-separated values) and
// the class label as the final field. Only the non-timestamped,
// equal-length flavor is accepted. Unknown directives are warned about on
// stderr and ignored.
Dataset3D parse_ts(std::istream& input, TsHeader* header_out = nullptr);
Dataset3D parse_ts_file(const std::string& path, TsHeader* header_out = nullptr);

// Emits the same format; values use the shortest round-tripping decimal
// representation, so parse(write(d)) is value-identical.
void write_ts(std::ostream& out, const Dataset3D& data,
              const std::string& problem_name);
void write_ts_file(const std::string& path, const Dataset3D& data,
                   const std::string& problem_name);

enum class SynthPreset { AmplitudeShift, OffsetNuisance, GaussianNull };

const char* preset_tag(SynthPreset preset);
SynthPreset preset_from_tag(const std::string& tag);

struct SynthSpec {
    SynthPreset preset = SynthPreset::GaussianNull;
    Eigen::Index samples = 0;
    Eigen::Index channels = 0;
    Eigen::Index timesteps = 0;
    int class_count = 2;
    std::uint64_t seed = 0;
};

// Deterministic synthetic datasets with balanced classes:
//  gaussian-null    all classes i.i.d. standard normal (no signal)
//  amplitude-shift  class k scales a shared sinusoid by (1 + k)
//  offset-nuisance  sensors with gains 1, 10, 100, ... observing a shared
//                   sinusoid carrier plus a common per-sample constant
//                   baseline drift with magnitude in [10, 100); only
//                   channel 0's amplitude carries the class (gap 0.2).
//                   The gain-scaled drift dominates raw feature
//                   magnitudes; per-channel scaling restores a common
//                   unit and with it the cross-channel class signal.
Dataset3D synth_generate(const SynthSpec& spec);

} // namespace mts
