#include "mts/ts_io.hpp"

#include "mts/numfmt.hpp"
#include "mts/rng.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace mts {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

[[noreturn]] void parse_error(int line_no, const std::string& message) {
    throw std::invalid_argument("ts parse error at line " + std::to_string(line_no) +
                                ": " + message);
}

double parse_value(const std::string& token, int line_no, std::size_t column) {
    const std::string t = trim(token);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        parse_error(line_no, "non-numeric value '" + t + "' in channel field " +
                                 std::to_string(column + 1));
    }
    if (!std::isfinite(value)) {
        parse_error(line_no, "non-finite value '" + t + "' in channel field " +
                                 std::to_string(column + 1));
    }
    return value;
}

bool flag_is_true(const std::string& value) {
    return lowercase(trim(value)).rfind("true", 0) == 0;
}

const char* const kKnownDirectives[] = {
    "problemname", "timestamps",   "missing",     "univariate",
    "dimensions",  "equallength",  "serieslength", "classlabel",
    "data",        "targetlabel",
};

} // namespace

Dataset3D parse_ts(std::istream& input, TsHeader* header_out) {
    TsHeader header;
    std::vector<std::string> class_names;
    bool saw_class_label = false;
    bool in_data = false;

    std::vector<std::vector<double>> rows; // one entry per (sample, channel)
    std::vector<int> labels;
    Eigen::Index n_channels = -1;
    Eigen::Index n_steps = -1;

    std::string line;
    int line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;

        if (!in_data) {
            if (stripped[0] != '@') {
                parse_error(line_no, "expected a directive or @data before data lines");
            }
            const auto space = stripped.find_first_of(" \t");
            const std::string name =
                lowercase(stripped.substr(1, space == std::string::npos
                                                 ? std::string::npos
                                                 : space - 1));
            const std::string value =
                space == std::string::npos ? "" : trim(stripped.substr(space + 1));
            if (name == "data") {
                in_data = true;
                continue;
            }
            if (std::find_if(std::begin(kKnownDirectives), std::end(kKnownDirectives),
                             [&](const char* d) { return name == d; }) ==
                std::end(kKnownDirectives)) {
                std::cerr << "warning: ignoring unknown directive @" << name
                          << " at line " << line_no << "\n";
                continue;
            }
            header.flags[name] = value;
            if (name == "problemname") header.problem_name = value;
            if (name == "timestamps" && flag_is_true(value)) {
                parse_error(line_no, "timestamped data is not supported");
            }
            if (name == "classlabel") {
                const auto tokens = split(value, ' ');
                if (tokens.empty() || !flag_is_true(tokens[0])) {
                    parse_error(line_no, "@classLabel must be true with class names");
                }
                for (std::size_t i = 1; i < tokens.size(); ++i) {
                    const std::string t = trim(tokens[i]);
                    if (!t.empty()) class_names.push_back(t);
                }
                if (class_names.size() < 2) {
                    parse_error(line_no, "@classLabel needs at least 2 class names");
                }
                saw_class_label = true;
            }
            continue;
        }

        // data line: channel:channel:...:label
        auto fields = split(stripped, ':');
        if (fields.size() < 2) {
            parse_error(line_no, "data line needs at least one channel and a label");
        }
        const std::string label_text = trim(fields.back());
        fields.pop_back();

        if (n_channels < 0) {
            n_channels = static_cast<Eigen::Index>(fields.size());
        } else if (static_cast<Eigen::Index>(fields.size()) != n_channels) {
            parse_error(line_no, "sample has " + std::to_string(fields.size()) +
                                     " channels, expected " +
                                     std::to_string(n_channels));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto tokens = split(fields[c], ',');
            if (n_steps < 0) {
                n_steps = static_cast<Eigen::Index>(tokens.size());
            } else if (static_cast<Eigen::Index>(tokens.size()) != n_steps) {
                parse_error(line_no, "channel " + std::to_string(c + 1) + " has " +
                                         std::to_string(tokens.size()) +
                                         " values, expected " +
                                         std::to_string(n_steps));
            }
            std::vector<double> row;
            row.reserve(tokens.size());
            for (std::size_t i = 0; i < tokens.size(); ++i) {
                row.push_back(parse_value(tokens[i], line_no, c));
            }
            rows.push_back(std::move(row));
        }

        const auto it = std::find(class_names.begin(), class_names.end(), label_text);
        if (it == class_names.end()) {
            parse_error(line_no, "label '" + label_text + "' not in @classLabel list");
        }
        labels.push_back(static_cast<int>(it - class_names.begin()));
    }

    if (!saw_class_label) {
        throw std::invalid_argument("ts parse error: missing @classLabel directive");
    }
    if (!in_data || labels.empty()) {
        throw std::invalid_argument("ts parse error: no data lines after @data");
    }

    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), n_steps);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (Eigen::Index t = 0; t < n_steps; ++t) {
            values(static_cast<Eigen::Index>(r), t) = rows[r][static_cast<std::size_t>(t)];
        }
    }
    if (header_out != nullptr) *header_out = header;
    return Dataset3D(std::move(values), n_channels, std::move(labels),
                     std::move(class_names));
}

Dataset3D parse_ts_file(const std::string& path, TsHeader* header_out) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open dataset file: " + path);
    return parse_ts(file, header_out);
}

void write_ts(std::ostream& out, const Dataset3D& data,
              const std::string& problem_name) {
    out << "@problemName " << problem_name << "\n";
    out << "@timeStamps false\n";
    out << "@missing false\n";
    out << "@univariate " << (data.channels() == 1 ? "true" : "false") << "\n";
    out << "@dimensions " << data.channels() << "\n";
    out << "@equalLength true\n";
    out << "@seriesLength " << data.timesteps() << "\n";
    out << "@classLabel true";
    for (const auto& name : data.class_names()) out << ' ' << name;
    out << "\n@data\n";
    for (Eigen::Index n = 0; n < data.samples(); ++n) {
        for (Eigen::Index c = 0; c < data.channels(); ++c) {
            if (c > 0) out << ':';
            for (Eigen::Index t = 0; t < data.timesteps(); ++t) {
                if (t > 0) out << ',';
                out << fmt_shortest(data(n, c, t));
            }
        }
        out << ':' << data.class_names()[static_cast<std::size_t>(data.label(n))]
            << "\n";
    }
}

void write_ts_file(const std::string& path, const Dataset3D& data,
                   const std::string& problem_name) {
    std::ofstream file(path);
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    write_ts(file, data, problem_name);
}

const char* preset_tag(SynthPreset preset) {
    switch (preset) {
    case SynthPreset::AmplitudeShift: return "amplitude-shift";
    case SynthPreset::OffsetNuisance: return "offset-nuisance";
    case SynthPreset::GaussianNull: return "gaussian-null";
    }
    throw std::logic_error("unreachable preset");
}

SynthPreset preset_from_tag(const std::string& tag) {
    for (SynthPreset p : {SynthPreset::AmplitudeShift, SynthPreset::OffsetNuisance,
                          SynthPreset::GaussianNull}) {
        if (tag == preset_tag(p)) return p;
    }
    throw std::invalid_argument(
        "unknown preset '" + tag +
        "' (expected amplitude-shift|offset-nuisance|gaussian-null)");
}

Dataset3D synth_generate(const SynthSpec& spec) {
    if (spec.class_count < 2) {
        throw std::invalid_argument("synth_generate: need at least 2 classes");
    }
    if (spec.samples < 2 * spec.class_count) {
        throw std::invalid_argument("synth_generate: need N >= 2 * class count");
    }
    if (spec.channels < 1 || spec.timesteps < 1) {
        throw std::invalid_argument("synth_generate: need C >= 1 and T >= 1");
    }
    if (spec.preset == SynthPreset::OffsetNuisance && spec.channels < 2) {
        throw std::invalid_argument("offset-nuisance needs C >= 2");
    }

    const Eigen::Index n = spec.samples, n_channels = spec.channels,
                       n_steps = spec.timesteps;
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        labels[static_cast<std::size_t>(i)] = static_cast<int>(i % spec.class_count);
    }
    std::vector<std::string> class_names;
    for (int k = 0; k < spec.class_count; ++k) {
        class_names.push_back("class_" + std::to_string(k));
    }

    Rng rng(spec.seed);
    Eigen::MatrixXd values(n * n_channels, n_steps);
    constexpr double kCycles = 3.0;

    const auto sinusoid = [&](Eigen::Index t, double phase) {
        return std::sin(2.0 * M_PI * kCycles * static_cast<double>(t) /
                            static_cast<double>(n_steps) +
                        phase);
    };

    switch (spec.preset) {
    case SynthPreset::GaussianNull:
        for (Eigen::Index r = 0; r < values.rows(); ++r)
            for (Eigen::Index t = 0; t < n_steps; ++t) values(r, t) = rng.normal();
        break;
    case SynthPreset::AmplitudeShift:
        for (Eigen::Index i = 0; i < n; ++i) {
            const double amp = 1.0 + static_cast<double>(labels[static_cast<std::size_t>(i)]);
            const double phase = rng.uniform(0.0, 2.0 * M_PI);
            for (Eigen::Index c = 0; c < n_channels; ++c)
                for (Eigen::Index t = 0; t < n_steps; ++t)
                    values(i * n_channels + c, t) =
                        amp * sinusoid(t, phase) + 0.1 * rng.normal();
        }
        break;
    case SynthPreset::OffsetNuisance:
        // Sensors with gains 1, 10, 100, ... observe a shared carrier whose
        // per-sample base amplitude is random, a common-mode per-sample
        // baseline drift with magnitude in [10, 100), and per-point noise.
        // Only channel 0's amplitude carries the class (gap 0.2). Raw
        // channels are unusable: single channels are blinded by the random
        // base amplitude, and cross-channel kernels drown in the gain-scaled
        // drift. Per-channel standardization maps every channel to a common
        // unit, turning the drift into a shared component that mean-centered
        // kernels cancel, which exposes the cross-channel amplitude gap.
        for (Eigen::Index i = 0; i < n; ++i) {
            const double gap =
                0.2 * static_cast<double>(labels[static_cast<std::size_t>(i)]);
            const double base_amp = rng.uniform(0.5, 3.5);
            const double phase = rng.uniform(0.0, 2.0 * M_PI);
            const double drift =
                (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(10.0, 100.0);
            double gain = 1.0;
            for (Eigen::Index c = 0; c < n_channels; ++c) {
                const double amp = c == 0 ? base_amp + gap : base_amp;
                for (Eigen::Index t = 0; t < n_steps; ++t)
                    values(i * n_channels + c, t) =
                        gain * (amp * sinusoid(t, phase) + drift + 0.2 * rng.normal());
                gain = std::min(gain * 30.0, 1000.0);
            }
        }
        break;
    }

    return Dataset3D(std::move(values), n_channels, std::move(labels),
                     std::move(class_names));
}

} // namespace mts
