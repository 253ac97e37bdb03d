#include "mts/rocket.hpp"

#include "mts/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace mts {

KernelBank generate_kernels(std::uint64_t seed, Eigen::Index channels,
                            Eigen::Index timesteps, int kernel_count) {
    if (timesteps < 2) throw std::invalid_argument("generate_kernels: need T >= 2");
    if (channels < 1) throw std::invalid_argument("generate_kernels: need C >= 1");
    if (kernel_count < 1) throw std::invalid_argument("generate_kernels: need k >= 1");

    KernelBank bank;
    bank.seed = seed;
    bank.fit_channels = channels;
    bank.fit_timesteps = timesteps;
    bank.kernels.reserve(static_cast<std::size_t>(kernel_count));

    Rng rng(seed);
    constexpr int kLengths[3] = {7, 9, 11};

    for (int k = 0; k < kernel_count; ++k) {
        Kernel kernel;
        kernel.length = std::min<Eigen::Index>(
            kLengths[rng.uniform_index(3)], timesteps);

        const double max_exp = std::log2(static_cast<double>(channels) + 1.0);
        auto subset_size = static_cast<Eigen::Index>(
            std::floor(std::exp2(rng.uniform(0.0, max_exp))));
        subset_size = std::clamp<Eigen::Index>(subset_size, 1, channels);

        // partial Fisher-Yates, then sort the chosen indices
        std::vector<Eigen::Index> pool(static_cast<std::size_t>(channels));
        std::iota(pool.begin(), pool.end(), 0);
        for (Eigen::Index i = 0; i < subset_size; ++i) {
            const auto j = i + static_cast<Eigen::Index>(rng.uniform_index(
                                   static_cast<std::uint64_t>(channels - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        }
        kernel.channels.assign(pool.begin(), pool.begin() + subset_size);
        std::sort(kernel.channels.begin(), kernel.channels.end());

        kernel.weights.resize(subset_size, kernel.length);
        for (Eigen::Index c = 0; c < subset_size; ++c)
            for (int j = 0; j < kernel.length; ++j) kernel.weights(c, j) = rng.normal();
        kernel.weights.array() -= kernel.weights.mean();

        kernel.bias = rng.uniform(-1.0, 1.0);

        if (kernel.length > 1 && timesteps > kernel.length) {
            const double dil_exp = std::log2(static_cast<double>(timesteps - 1) /
                                             static_cast<double>(kernel.length - 1));
            kernel.dilation = static_cast<int>(
                std::floor(std::exp2(rng.uniform(0.0, dil_exp))));
            kernel.dilation = std::max(kernel.dilation, 1);
        } else {
            kernel.dilation = 1;
        }

        kernel.padding = rng.uniform() < 0.5
                             ? ((kernel.length - 1) * kernel.dilation) / 2
                             : 0;

        bank.kernels.push_back(std::move(kernel));
    }
    return bank;
}

Eigen::MatrixXd featurize(const Dataset3D& data, const KernelBank& bank) {
    if (data.channels() != bank.fit_channels || data.timesteps() != bank.fit_timesteps) {
        throw std::invalid_argument("featurize: dataset dimensions do not match bank");
    }
    const Eigen::Index n_samples = data.samples();
    const Eigen::Index n_steps = data.timesteps();
    const auto n_kernels = static_cast<Eigen::Index>(bank.kernels.size());

    Eigen::MatrixXd features(n_samples, 2 * n_kernels);
    for (Eigen::Index n = 0; n < n_samples; ++n) {
        const auto sample = data.sample(n);
        for (Eigen::Index k = 0; k < n_kernels; ++k) {
            const Kernel& kernel = bank.kernels[static_cast<std::size_t>(k)];
            const Eigen::Index out_len =
                n_steps + 2 * kernel.padding -
                static_cast<Eigen::Index>(kernel.length - 1) * kernel.dilation;
            Eigen::Index positive = 0;
            double max_out = -std::numeric_limits<double>::infinity();
            for (Eigen::Index pos = 0; pos < out_len; ++pos) {
                double acc = kernel.bias;
                Eigen::Index idx = pos - kernel.padding;
                for (int j = 0; j < kernel.length; ++j, idx += kernel.dilation) {
                    if (idx < 0 || idx >= n_steps) continue;
                    for (std::size_t c = 0; c < kernel.channels.size(); ++c) {
                        acc += kernel.weights(static_cast<Eigen::Index>(c), j) *
                               sample(kernel.channels[c], idx);
                    }
                }
                if (acc > 0.0) ++positive;
                if (acc > max_out) max_out = acc;
            }
            features(n, 2 * k) =
                static_cast<double>(positive) / static_cast<double>(out_len);
            features(n, 2 * k + 1) = max_out;
        }
    }
    return features;
}

Eigen::VectorXd default_ridge_alphas() {
    Eigen::VectorXd alphas(10);
    for (int i = 0; i < 10; ++i) {
        alphas(i) = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(i) / 9.0);
    }
    return alphas;
}

RidgeModel ridge_fit(const Eigen::Ref<const Eigen::MatrixXd>& features,
                     const std::vector<int>& labels,
                     const Eigen::Ref<const Eigen::VectorXd>& alphas,
                     bool standardize_features) {
    const Eigen::Index n = features.rows();
    const Eigen::Index n_features = features.cols();
    if (static_cast<Eigen::Index>(labels.size()) != n) {
        throw std::invalid_argument("ridge_fit: label count mismatch");
    }
    if (n < 2) throw std::invalid_argument("ridge_fit: need at least 2 samples");
    if (alphas.size() < 1) throw std::invalid_argument("ridge_fit: empty alpha grid");

    const int class_count = *std::max_element(labels.begin(), labels.end()) + 1;
    if (std::set<int>(labels.begin(), labels.end()).size() < 2) {
        throw std::invalid_argument("ridge_fit: need at least 2 distinct classes");
    }

    RidgeModel model;
    model.class_count = class_count;
    model.standardized = standardize_features;
    model.alphas = alphas;

    Eigen::MatrixXd x = features;
    if (standardize_features) {
        model.feature_mean = x.colwise().mean();
        Eigen::VectorXd var =
            (x.rowwise() - model.feature_mean.transpose()).array().square().colwise().mean();
        model.feature_std = var.array().sqrt();
        for (Eigen::Index f = 0; f < n_features; ++f) {
            if (model.feature_std(f) == 0.0) {
                x.col(f).setZero();
            } else {
                x.col(f) = (x.col(f).array() - model.feature_mean(f)) / model.feature_std(f);
            }
        }
    } else {
        model.feature_mean = Eigen::VectorXd::Zero(n_features);
        model.feature_std = Eigen::VectorXd::Ones(n_features);
    }

    // augmented design with a constant intercept column
    Eigen::MatrixXd design(n, n_features + 1);
    design.leftCols(n_features) = x;
    design.col(n_features).setOnes();

    Eigen::MatrixXd targets = Eigen::MatrixXd::Constant(n, class_count, -1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        targets(i, labels[static_cast<std::size_t>(i)]) = 1.0;
    }

    // Gram eigendecomposition: the hat matrix at alpha is
    // U diag(s/(s+alpha)) U^T, which gives exact leave-one-out residuals
    // e_i = (y_i - yhat_i) / (1 - h_ii).
    const Eigen::MatrixXd gram = design * design.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("ridge_fit: eigendecomposition failed");
    }
    const Eigen::MatrixXd& u = eig.eigenvectors();
    const Eigen::VectorXd s = eig.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXd ut_y = u.transpose() * targets;

    model.loo_errors.resize(alphas.size());
    int best = 0;
    for (Eigen::Index a = 0; a < alphas.size(); ++a) {
        const Eigen::VectorXd shrink = s.array() / (s.array() + alphas(a));
        const Eigen::MatrixXd fitted = u * (shrink.asDiagonal() * ut_y);
        const Eigen::VectorXd h = (u.array().square().matrix() * shrink);
        double sq_sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double denom = 1.0 - h(i);
            sq_sum += ((targets.row(i) - fitted.row(i)) / denom).squaredNorm();
        }
        model.loo_errors(a) =
            sq_sum / static_cast<double>(n * class_count);
        if (model.loo_errors(a) < model.loo_errors(best)) best = static_cast<int>(a);
    }
    model.alpha = alphas(best);

    const Eigen::VectorXd inv = (s.array() + model.alpha).inverse();
    const Eigen::MatrixXd coef = design.transpose() * (u * (inv.asDiagonal() * ut_y));
    model.weights = coef.topRows(n_features);
    model.intercept = coef.row(n_features);
    return model;
}

RidgeModel ridge_fit(const Eigen::Ref<const Eigen::MatrixXd>& features,
                     const std::vector<int>& labels) {
    return ridge_fit(features, labels, default_ridge_alphas());
}

Eigen::MatrixXd ridge_decision(const RidgeModel& model,
                               const Eigen::Ref<const Eigen::MatrixXd>& features) {
    if (features.cols() != model.weights.rows()) {
        throw std::invalid_argument("ridge_decision: feature count mismatch");
    }
    Eigen::MatrixXd x = features;
    if (model.standardized) {
        for (Eigen::Index f = 0; f < x.cols(); ++f) {
            if (model.feature_std(f) == 0.0) {
                x.col(f).setZero();
            } else {
                x.col(f) = (x.col(f).array() - model.feature_mean(f)) / model.feature_std(f);
            }
        }
    }
    return (x * model.weights).rowwise() + model.intercept;
}

std::vector<int> ridge_predict(const RidgeModel& model,
                               const Eigen::Ref<const Eigen::MatrixXd>& features) {
    const Eigen::MatrixXd scores = ridge_decision(model, features);
    std::vector<int> predicted(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        int arg = 0;
        for (int k = 1; k < model.class_count; ++k) {
            if (scores(i, k) > scores(i, arg)) arg = k;
        }
        predicted[static_cast<std::size_t>(i)] = arg;
    }
    return predicted;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual) {
    if (predicted.size() != actual.size() || predicted.empty()) {
        throw std::invalid_argument("accuracy: length mismatch or empty input");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == actual[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

} // namespace mts
