#pragma once

#include "mts/tensor.hpp"

#include <cstdint>
#include <vector>

namespace mts {

// One random convolutional kernel: dilated weights over a channel subset.
struct Kernel {
    int length = 0;
    std::vector<Eigen::Index> channels; // sorted distinct indices
    Eigen::MatrixXd weights;            // channels.size() x length, mean-centered
    double bias = 0.0;
    int dilation = 1;
    int padding = 0;
};

struct KernelBank {
    std::vector<Kernel> kernels;
    std::uint64_t seed = 0;
    Eigen::Index fit_channels = 0;
    Eigen::Index fit_timesteps = 0;
};

inline constexpr int kDefaultKernelCount = 10000;

// Reference kernel distributions: length uniform on {7,9,11} clamped to T,
// channel subset of size floor(2^U(0, log2(C+1))) without replacement,
// N(0,1) weights centered over the whole kernel, bias U(-1,1), dilation
// floor(2^U(0, log2((T-1)/(length-1)))), padding ((length-1)*dilation)/2
// with probability 1/2 else 0. Deterministic given the seed.
KernelBank generate_kernels(std::uint64_t seed, Eigen::Index channels,
                            Eigen::Index timesteps, int kernel_count);

// N x 2k feature matrix, kernel-major (PPV, MAX) pairs. PPV is the fraction
// of convolution outputs > 0, MAX the largest output; positions outside the
// series are zero-padded.
Eigen::MatrixXd featurize(const Dataset3D& data, const KernelBank& bank);

struct RidgeModel {
    double alpha = 0.0;
    int class_count = 0;
    bool standardized = true;
    Eigen::VectorXd feature_mean; // train statistics; stddev 0 zeroes the column
    Eigen::VectorXd feature_std;
    Eigen::MatrixXd weights; // F x K
    Eigen::RowVectorXd intercept;
    Eigen::VectorXd alphas;     // candidate grid, ascending
    Eigen::VectorXd loo_errors; // mean leave-one-out squared error per candidate
};

// 10 log-spaced candidates in [1e-3, 1e3]
Eigen::VectorXd default_ridge_alphas();

// Ridge regression on one-hot +/-1 targets. Features are standardized
// per-column with train statistics (disable for ablation), a constant
// column is appended for the intercept, and the regularization strength is
// chosen by exact leave-one-out error computed from the eigendecomposition
// of the Gram matrix.
RidgeModel ridge_fit(const Eigen::Ref<const Eigen::MatrixXd>& features,
                     const std::vector<int>& labels,
                     const Eigen::Ref<const Eigen::VectorXd>& alphas,
                     bool standardize_features = true);
RidgeModel ridge_fit(const Eigen::Ref<const Eigen::MatrixXd>& features,
                     const std::vector<int>& labels);

// Per-class decision scores, M x K.
Eigen::MatrixXd ridge_decision(const RidgeModel& model,
                               const Eigen::Ref<const Eigen::MatrixXd>& features);

// argmax of the decision scores; ties break toward the lowest class index
std::vector<int> ridge_predict(const RidgeModel& model,
                               const Eigen::Ref<const Eigen::MatrixXd>& features);

// fraction of exact matches
double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual);

} // namespace mts
