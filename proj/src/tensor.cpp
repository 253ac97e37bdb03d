#include "mts/tensor.hpp"

#include <stdexcept>

namespace mts {

const char* scheme_tag(SliceScheme scheme) {
    switch (scheme) {
    case SliceScheme::Channels: return "channels";
    case SliceScheme::Timesteps: return "timesteps";
    case SliceScheme::Both: return "both";
    case SliceScheme::All: return "all";
    }
    throw std::logic_error("unreachable scheme");
}

SliceScheme scheme_from_tag(const std::string& tag) {
    for (SliceScheme s : kAllSchemes) {
        if (tag == scheme_tag(s)) return s;
    }
    throw std::invalid_argument("unknown dimension slice '" + tag +
                                "' (expected channels|timesteps|both|all)");
}

std::string to_string(const SliceId& id) {
    std::string s = scheme_tag(id.scheme);
    if (id.channel >= 0) s += " c=" + std::to_string(id.channel);
    if (id.timestep >= 0) s += " t=" + std::to_string(id.timestep);
    return s;
}

Dataset3D::Dataset3D(Eigen::MatrixXd values, Eigen::Index channels,
                     std::vector<int> labels, std::vector<std::string> class_names)
    : values_(std::move(values)),
      channels_(channels),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)) {
    if (channels_ < 1 || values_.cols() < 1) {
        throw std::invalid_argument("dataset needs at least 1 channel and 1 timestep");
    }
    if (values_.rows() % channels_ != 0) {
        throw std::invalid_argument("value rows not a multiple of the channel count");
    }
    const Eigen::Index n = values_.rows() / channels_;
    if (static_cast<Eigen::Index>(labels_.size()) != n) {
        throw std::invalid_argument("label count does not match sample count");
    }
    for (int label : labels_) {
        if (label < 0 || static_cast<std::size_t>(label) >= class_names_.size()) {
            throw std::invalid_argument("label index outside class_names");
        }
    }
    if (!values_.allFinite()) {
        throw std::invalid_argument("dataset contains NaN or infinite values");
    }
}

Dataset3D Dataset3D::zeros(Eigen::Index samples, Eigen::Index channels,
                           Eigen::Index timesteps) {
    return Dataset3D(Eigen::MatrixXd::Zero(samples * channels, timesteps), channels,
                     std::vector<int>(static_cast<std::size_t>(samples), 0), {"0"});
}

Eigen::Index set_count(SliceScheme scheme, Eigen::Index channels, Eigen::Index timesteps) {
    switch (scheme) {
    case SliceScheme::Channels: return channels;
    case SliceScheme::Timesteps: return timesteps;
    case SliceScheme::Both: return channels * timesteps;
    case SliceScheme::All: return 1;
    }
    throw std::logic_error("unreachable scheme");
}

std::vector<SliceId> slice_ids(SliceScheme scheme, Eigen::Index channels,
                               Eigen::Index timesteps) {
    if (channels < 1 || timesteps < 1) {
        throw std::invalid_argument("slice_ids requires C >= 1 and T >= 1");
    }
    std::vector<SliceId> ids;
    ids.reserve(static_cast<std::size_t>(set_count(scheme, channels, timesteps)));
    switch (scheme) {
    case SliceScheme::Channels:
        for (Eigen::Index c = 0; c < channels; ++c) ids.push_back({scheme, c, -1});
        break;
    case SliceScheme::Timesteps:
        for (Eigen::Index t = 0; t < timesteps; ++t) ids.push_back({scheme, -1, t});
        break;
    case SliceScheme::Both:
        for (Eigen::Index c = 0; c < channels; ++c)
            for (Eigen::Index t = 0; t < timesteps; ++t) ids.push_back({scheme, c, t});
        break;
    case SliceScheme::All:
        ids.push_back({scheme, -1, -1});
        break;
    }
    return ids;
}

namespace {

void check_bounds(const Dataset3D& data, const SliceId& id) {
    const bool needs_channel =
        id.scheme == SliceScheme::Channels || id.scheme == SliceScheme::Both;
    const bool needs_timestep =
        id.scheme == SliceScheme::Timesteps || id.scheme == SliceScheme::Both;
    if (needs_channel && (id.channel < 0 || id.channel >= data.channels())) {
        throw std::out_of_range("slice channel index out of range: " + to_string(id));
    }
    if (needs_timestep && (id.timestep < 0 || id.timestep >= data.timesteps())) {
        throw std::out_of_range("slice timestep index out of range: " + to_string(id));
    }
}

Eigen::Index slice_size(const Dataset3D& data, const SliceId& id) {
    switch (id.scheme) {
    case SliceScheme::Channels: return data.samples() * data.timesteps();
    case SliceScheme::Timesteps: return data.samples() * data.channels();
    case SliceScheme::Both: return data.samples();
    case SliceScheme::All:
        return data.samples() * data.channels() * data.timesteps();
    }
    throw std::logic_error("unreachable scheme");
}

} // namespace

Eigen::VectorXd gather(const Dataset3D& data, const SliceId& id) {
    check_bounds(data, id);
    const Eigen::Index n_samples = data.samples();
    const Eigen::Index n_channels = data.channels();
    const Eigen::Index n_steps = data.timesteps();
    Eigen::VectorXd out(slice_size(data, id));
    Eigen::Index k = 0;
    switch (id.scheme) {
    case SliceScheme::Channels:
        for (Eigen::Index n = 0; n < n_samples; ++n)
            for (Eigen::Index t = 0; t < n_steps; ++t) out(k++) = data(n, id.channel, t);
        break;
    case SliceScheme::Timesteps:
        for (Eigen::Index n = 0; n < n_samples; ++n)
            for (Eigen::Index c = 0; c < n_channels; ++c) out(k++) = data(n, c, id.timestep);
        break;
    case SliceScheme::Both:
        for (Eigen::Index n = 0; n < n_samples; ++n) out(k++) = data(n, id.channel, id.timestep);
        break;
    case SliceScheme::All:
        for (Eigen::Index n = 0; n < n_samples; ++n)
            for (Eigen::Index c = 0; c < n_channels; ++c)
                for (Eigen::Index t = 0; t < n_steps; ++t) out(k++) = data(n, c, t);
        break;
    }
    return out;
}

Dataset3D scatter(Dataset3D data, const SliceId& id,
                  const Eigen::Ref<const Eigen::VectorXd>& values) {
    check_bounds(data, id);
    if (values.size() != slice_size(data, id)) {
        throw std::invalid_argument("scatter length mismatch for " + to_string(id) +
                                    ": got " + std::to_string(values.size()) +
                                    ", expected " + std::to_string(slice_size(data, id)));
    }
    const Eigen::Index n_samples = data.samples();
    const Eigen::Index n_channels = data.channels();
    const Eigen::Index n_steps = data.timesteps();
    Eigen::Index k = 0;
    switch (id.scheme) {
    case SliceScheme::Channels:
        for (Eigen::Index n = 0; n < n_samples; ++n)
            for (Eigen::Index t = 0; t < n_steps; ++t) data(n, id.channel, t) = values(k++);
        break;
    case SliceScheme::Timesteps:
        for (Eigen::Index n = 0; n < n_samples; ++n)
            for (Eigen::Index c = 0; c < n_channels; ++c) data(n, c, id.timestep) = values(k++);
        break;
    case SliceScheme::Both:
        for (Eigen::Index n = 0; n < n_samples; ++n) data(n, id.channel, id.timestep) = values(k++);
        break;
    case SliceScheme::All:
        for (Eigen::Index n = 0; n < n_samples; ++n)
            for (Eigen::Index c = 0; c < n_channels; ++c)
                for (Eigen::Index t = 0; t < n_steps; ++t) data(n, c, t) = values(k++);
        break;
    }
    return data;
}

Dataset3D concat_samples(const Dataset3D& a, const Dataset3D& b) {
    if (a.channels() != b.channels() || a.timesteps() != b.timesteps()) {
        throw std::invalid_argument("concat_samples: dimension mismatch");
    }
    if (a.class_names() != b.class_names()) {
        throw std::invalid_argument("concat_samples: class name mismatch");
    }
    Eigen::MatrixXd values(a.values().rows() + b.values().rows(), a.timesteps());
    values << a.values(), b.values();
    std::vector<int> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    return Dataset3D(std::move(values), a.channels(), std::move(labels), a.class_names());
}

Dataset3D subset_samples(const Dataset3D& data, const std::vector<Eigen::Index>& indices) {
    Eigen::MatrixXd values(static_cast<Eigen::Index>(indices.size()) * data.channels(),
                           data.timesteps());
    std::vector<int> labels;
    labels.reserve(indices.size());
    Eigen::Index row = 0;
    for (Eigen::Index n : indices) {
        if (n < 0 || n >= data.samples()) {
            throw std::out_of_range("subset_samples: sample index out of range");
        }
        values.middleRows(row, data.channels()) = data.sample(n);
        labels.push_back(data.label(n));
        row += data.channels();
    }
    return Dataset3D(std::move(values), data.channels(), std::move(labels),
                     data.class_names());
}

} // namespace mts
