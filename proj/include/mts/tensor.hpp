#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace mts {

// Rule for partitioning a (samples x channels x timesteps) tensor into the
// sets a scaler is fit over.
enum class SliceScheme { Channels, Timesteps, Both, All };

inline constexpr std::array<SliceScheme, 4> kAllSchemes = {
    SliceScheme::Channels, SliceScheme::Timesteps, SliceScheme::Both,
    SliceScheme::All};

const char* scheme_tag(SliceScheme scheme);
SliceScheme scheme_from_tag(const std::string& tag);

// Identifies one set of the partition. Channels uses channel only,
// Timesteps uses timestep only, Both uses both, All uses neither.
// Unused indices are -1.
struct SliceId {
    SliceScheme scheme;
    Eigen::Index channel = -1;
    Eigen::Index timestep = -1;

    bool operator==(const SliceId&) const = default;
};

std::string to_string(const SliceId& id);

// Equal-length labeled tensor: N samples x C channels x T timesteps.
// Stored as an (N*C) x T matrix with row(n, c) = n*C + c, so one sample is
// a contiguous C x T block. Immutable after load; transforms build a new
// instance via scatter. Labels are indices into class_names.
class Dataset3D {
public:
    Dataset3D() = default;
    Dataset3D(Eigen::MatrixXd values, Eigen::Index channels,
              std::vector<int> labels, std::vector<std::string> class_names);

    static Dataset3D zeros(Eigen::Index samples, Eigen::Index channels,
                           Eigen::Index timesteps);

    Eigen::Index samples() const {
        return channels_ == 0 ? 0 : values_.rows() / channels_;
    }
    Eigen::Index channels() const { return channels_; }
    Eigen::Index timesteps() const { return values_.cols(); }

    double operator()(Eigen::Index n, Eigen::Index c, Eigen::Index t) const {
        return values_(n * channels_ + c, t);
    }
    double& operator()(Eigen::Index n, Eigen::Index c, Eigen::Index t) {
        return values_(n * channels_ + c, t);
    }

    // C x T view of one sample
    auto sample(Eigen::Index n) const {
        return values_.middleRows(n * channels_, channels_);
    }

    const Eigen::MatrixXd& values() const { return values_; }
    Eigen::MatrixXd& values() { return values_; }

    int label(Eigen::Index n) const { return labels_[static_cast<std::size_t>(n)]; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<std::string>& class_names() const { return class_names_; }
    int class_count() const { return static_cast<int>(class_names_.size()); }

private:
    Eigen::MatrixXd values_; // (N*C) x T
    Eigen::Index channels_ = 0;
    std::vector<int> labels_;
    std::vector<std::string> class_names_;
};

// Number of sets the scheme induces: C, T, C*T or 1.
Eigen::Index set_count(SliceScheme scheme, Eigen::Index channels, Eigen::Index timesteps);

// All slice identities of the scheme in deterministic order
// (channel-major, then timestep).
std::vector<SliceId> slice_ids(SliceScheme scheme, Eigen::Index channels,
                               Eigen::Index timesteps);

// Cells of one slice in sample-major order (then channel, then timestep).
Eigen::VectorXd gather(const Dataset3D& data, const SliceId& id);

// Writes values back into the slice positions in gather order; every other
// cell is untouched. Takes the dataset by value so callers can move in an
// exclusively-owned tensor.
Dataset3D scatter(Dataset3D data, const SliceId& id,
                  const Eigen::Ref<const Eigen::VectorXd>& values);

// Concatenates the samples of two dimension- and label-space-compatible
// datasets (a's samples first).
Dataset3D concat_samples(const Dataset3D& a, const Dataset3D& b);

// New dataset holding the given samples, in the given order.
Dataset3D subset_samples(const Dataset3D& data,
                         const std::vector<Eigen::Index>& indices);

} // namespace mts
