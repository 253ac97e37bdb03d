#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace oracle {

namespace {

double brute_percentile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p / 100.0;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - std::floor(h)) * (values[lo + 1] - values[lo]);
}

double brute_mean(const std::vector<double>& values) {
    double s = 0.0;
    for (double x : values) s += x;
    return s / static_cast<double>(values.size());
}

double brute_pop_std(const std::vector<double>& values) {
    const double m = brute_mean(values);
    double s = 0.0;
    for (double x : values) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(values.size()));
}

double brute_yeo_johnson(double x, double lambda) {
    if (x >= 0.0) {
        if (lambda == 0.0) return std::log(x + 1.0);
        return (std::pow(x + 1.0, lambda) - 1.0) / lambda;
    }
    if (lambda == 2.0) return -std::log(-x + 1.0);
    return -(std::pow(-x + 1.0, 2.0 - lambda) - 1.0) / (2.0 - lambda);
}

} // namespace

std::vector<double> scaler_transform(mts::ScalerMethod method,
                                     const std::vector<double>& fit_values,
                                     const std::vector<double>& apply_values,
                                     double power_lambda) {
    std::vector<double> out(apply_values);
    switch (method) {
    case mts::ScalerMethod::None:
        return out;
    case mts::ScalerMethod::L2Normalize: {
        double sq = 0.0;
        for (double x : fit_values) sq += x * x;
        const double norm = std::sqrt(sq);
        if (norm == 0.0) return out;
        for (double& x : out) x /= norm;
        return out;
    }
    case mts::ScalerMethod::Standardize: {
        const double mean = brute_mean(fit_values);
        const double sd = brute_pop_std(fit_values);
        for (double& x : out) x = sd == 0.0 ? 0.0 : (x - mean) / sd;
        return out;
    }
    case mts::ScalerMethod::MinMax: {
        const double lo = *std::min_element(fit_values.begin(), fit_values.end());
        const double hi = *std::max_element(fit_values.begin(), fit_values.end());
        for (double& x : out) x = hi == lo ? 0.0 : (x - lo) / (hi - lo);
        return out;
    }
    case mts::ScalerMethod::MaxAbs: {
        double ma = 0.0;
        for (double x : fit_values) ma = std::max(ma, std::abs(x));
        if (ma == 0.0) return out;
        for (double& x : out) x /= ma;
        return out;
    }
    case mts::ScalerMethod::Robust: {
        const double median = brute_percentile(fit_values, 50.0);
        const double iqr =
            brute_percentile(fit_values, 75.0) - brute_percentile(fit_values, 25.0);
        for (double& x : out) x = (x - median) / (iqr == 0.0 ? 1.0 : iqr);
        return out;
    }
    case mts::ScalerMethod::PowerYeoJohnson: {
        bool constant = true;
        for (double x : fit_values) constant = constant && x == fit_values.front();
        if (fit_values.size() < 2 || constant) {
            // identity contract for constant sets
            for (double& x : out) x = brute_yeo_johnson(x, 1.0);
            return out;
        }
        std::vector<double> psi_fit(fit_values);
        for (double& x : psi_fit) x = brute_yeo_johnson(x, power_lambda);
        const double mean = brute_mean(psi_fit);
        const double sd = brute_pop_std(psi_fit);
        for (double& x : out) {
            const double psi = brute_yeo_johnson(x, power_lambda);
            x = sd == 0.0 ? 0.0 : (psi - mean) / sd;
        }
        return out;
    }
    case mts::ScalerMethod::QuantileUniform: {
        std::vector<double> sorted(fit_values);
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        const std::size_t n_q = std::min<std::size_t>(1000, n);
        std::vector<double> refs(n_q), levels(n_q);
        if (n_q == 1) {
            refs[0] = sorted[0];
            levels[0] = 0.5;
        } else {
            for (std::size_t i = 0; i < n_q; ++i) {
                levels[i] = static_cast<double>(i) / static_cast<double>(n_q - 1);
                const double h = static_cast<double>(i) *
                                 (static_cast<double>(n) - 1.0) /
                                 static_cast<double>(n_q - 1);
                const auto lo = static_cast<std::size_t>(std::floor(h));
                refs[i] = lo + 1 >= n ? sorted.back()
                                      : sorted[lo] + (h - std::floor(h)) *
                                                         (sorted[lo + 1] - sorted[lo]);
            }
        }
        for (double& x : out) {
            if (refs.front() == refs.back()) {
                x = 0.5;
                continue;
            }
            if (x <= refs.front()) {
                x = 0.0;
                continue;
            }
            if (x >= refs.back()) {
                x = 1.0;
                continue;
            }
            // last reference <= x (forward tie convention)
            std::size_t lo = 0;
            for (std::size_t i = 0; i < n_q; ++i) {
                if (refs[i] <= x) lo = i;
            }
            const std::size_t hi = lo + 1;
            const double t = (x - refs[lo]) / (refs[hi] - refs[lo]);
            x = levels[lo] + t * (levels[hi] - levels[lo]);
        }
        return out;
    }
    }
    throw std::logic_error("unreachable method");
}

std::vector<double> collect_set(const mts::Dataset3D& data, mts::SliceScheme scheme,
                                Eigen::Index channel, Eigen::Index timestep) {
    std::vector<double> out;
    for (Eigen::Index n = 0; n < data.samples(); ++n) {
        for (Eigen::Index c = 0; c < data.channels(); ++c) {
            for (Eigen::Index t = 0; t < data.timesteps(); ++t) {
                const bool in_set = [&] {
                    switch (scheme) {
                    case mts::SliceScheme::Channels: return c == channel;
                    case mts::SliceScheme::Timesteps: return t == timestep;
                    case mts::SliceScheme::Both: return c == channel && t == timestep;
                    case mts::SliceScheme::All: return true;
                    }
                    return false;
                }();
                if (in_set) out.push_back(data(n, c, t));
            }
        }
    }
    return out;
}

mts::Dataset3D scaler_apply_dataset(const mts::Dataset3D& fit_data,
                                    const mts::Dataset3D& target,
                                    mts::ScalerMethod method, mts::SliceScheme scheme,
                                    const mts::FittedScaler& impl_scaler) {
    mts::Dataset3D out = target;
    const auto ids = mts::slice_ids(scheme, target.channels(), target.timesteps());
    for (std::size_t set_index = 0; set_index < ids.size(); ++set_index) {
        const auto& id = ids[set_index];
        const auto fit_set = collect_set(fit_data, scheme, id.channel, id.timestep);
        const auto apply_set = collect_set(target, scheme, id.channel, id.timestep);
        double lambda = 1.0;
        if (method == mts::ScalerMethod::PowerYeoJohnson) {
            lambda = std::get<mts::PowerParams>(impl_scaler.params[set_index]).lambda;
        }
        const auto transformed = scaler_transform(method, fit_set, apply_set, lambda);
        std::size_t k = 0;
        for (Eigen::Index n = 0; n < target.samples(); ++n) {
            for (Eigen::Index c = 0; c < target.channels(); ++c) {
                for (Eigen::Index t = 0; t < target.timesteps(); ++t) {
                    const bool in_set = [&] {
                        switch (scheme) {
                        case mts::SliceScheme::Channels: return c == id.channel;
                        case mts::SliceScheme::Timesteps: return t == id.timestep;
                        case mts::SliceScheme::Both:
                            return c == id.channel && t == id.timestep;
                        case mts::SliceScheme::All: return true;
                        }
                        return false;
                    }();
                    if (in_set) out(n, c, t) = transformed[k++];
                }
            }
        }
    }
    return out;
}

double lambda_grid_search(const std::vector<double>& values) {
    const auto n = static_cast<double>(values.size());
    double sign_log_sum = 0.0;
    for (double x : values) {
        sign_log_sum += (x < 0.0 ? -1.0 : 1.0) * std::log(std::abs(x) + 1.0);
    }
    double best_lambda = 0.0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (int i = -500; i <= 500; ++i) {
        const double lambda = static_cast<double>(i) / 100.0;
        std::vector<double> psi(values);
        for (double& x : psi) x = brute_yeo_johnson(x, lambda);
        const double var = [&] {
            const double m = brute_mean(psi);
            double s = 0.0;
            for (double x : psi) s += (x - m) * (x - m);
            return s / n;
        }();
        if (!(var > 0.0) || !std::isfinite(var)) continue;
        const double ll = -0.5 * n * std::log(var) + (lambda - 1.0) * sign_log_sum;
        if (ll > best_ll) {
            best_ll = ll;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

WilcoxonOracle wilcoxon_enumerate(const std::vector<double>& a,
                                  const std::vector<double>& b) {
    std::vector<double> abs_diffs;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d == 0.0) continue;
        abs_diffs.push_back(std::abs(d));
        positive.push_back(d > 0.0);
    }
    const std::size_t n = abs_diffs.size();
    if (n == 0) return {0.0, 1.0, 0};
    if (n > 24) throw std::invalid_argument("enumeration oracle limited to n <= 24");

    // doubled midranks by explicit counting: rank = (#smaller) + (#equal+1)/2,
    // doubled = 2*(#smaller) + (#equal) + 1
    std::vector<std::int64_t> ranks2(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t smaller = 0, equal = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (abs_diffs[j] < abs_diffs[i]) ++smaller;
            if (abs_diffs[j] == abs_diffs[i]) ++equal;
        }
        ranks2[i] = 2 * smaller + equal + 1;
    }

    std::int64_t total = 0, pos2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total += ranks2[i];
        if (positive[i]) pos2 += ranks2[i];
    }
    const std::int64_t w2 = std::min(pos2, total - pos2);

    std::uint64_t hits = 0;
    const std::uint64_t patterns = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        std::int64_t t2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << i)) t2 += ranks2[i];
        }
        if (std::min(t2, total - t2) <= w2) ++hits;
    }
    return {static_cast<double>(w2) / 2.0,
            static_cast<double>(hits) / static_cast<double>(patterns),
            static_cast<int>(n)};
}

Eigen::MatrixXd conv_features(const mts::Dataset3D& data, const mts::KernelBank& bank) {
    const Eigen::Index n_steps = data.timesteps();
    Eigen::MatrixXd features(data.samples(),
                             2 * static_cast<Eigen::Index>(bank.kernels.size()));
    for (Eigen::Index n = 0; n < data.samples(); ++n) {
        for (std::size_t k = 0; k < bank.kernels.size(); ++k) {
            const mts::Kernel& kernel = bank.kernels[k];
            const Eigen::Index padded = n_steps + 2 * kernel.padding;
            // explicit zero-padded copies of the kernel's channels
            std::vector<std::vector<double>> rows;
            for (Eigen::Index ch : kernel.channels) {
                std::vector<double> row(static_cast<std::size_t>(padded), 0.0);
                for (Eigen::Index t = 0; t < n_steps; ++t) {
                    row[static_cast<std::size_t>(t + kernel.padding)] = data(n, ch, t);
                }
                rows.push_back(std::move(row));
            }
            const Eigen::Index out_len =
                padded - static_cast<Eigen::Index>(kernel.length - 1) * kernel.dilation;
            std::int64_t positive = 0;
            double max_out = -std::numeric_limits<double>::infinity();
            for (Eigen::Index pos = 0; pos < out_len; ++pos) {
                double acc = kernel.bias;
                for (std::size_t c = 0; c < rows.size(); ++c) {
                    for (int j = 0; j < kernel.length; ++j) {
                        acc += kernel.weights(static_cast<Eigen::Index>(c), j) *
                               rows[c][static_cast<std::size_t>(
                                   pos + static_cast<Eigen::Index>(j) * kernel.dilation)];
                    }
                }
                if (acc > 0.0) ++positive;
                max_out = std::max(max_out, acc);
            }
            features(n, static_cast<Eigen::Index>(2 * k)) =
                static_cast<double>(positive) / static_cast<double>(out_len);
            features(n, static_cast<Eigen::Index>(2 * k + 1)) = max_out;
        }
    }
    return features;
}

Eigen::VectorXd loo_refit_errors(const Eigen::MatrixXd& features,
                                 const std::vector<int>& labels,
                                 const Eigen::VectorXd& alphas) {
    const Eigen::Index n = features.rows();
    const Eigen::Index n_features = features.cols();
    const int classes =
        *std::max_element(labels.begin(), labels.end()) + 1;

    // fixed standardization from the full training features, as in ridge_fit
    Eigen::MatrixXd x = features;
    for (Eigen::Index f = 0; f < n_features; ++f) {
        const double mean = x.col(f).mean();
        double var = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            var += (x(i, f) - mean) * (x(i, f) - mean);
        }
        var /= static_cast<double>(n);
        const double sd = std::sqrt(var);
        if (sd == 0.0) {
            x.col(f).setZero();
        } else {
            x.col(f) = (x.col(f).array() - mean) / sd;
        }
    }
    Eigen::MatrixXd design(n, n_features + 1);
    design.leftCols(n_features) = x;
    design.col(n_features).setOnes();

    Eigen::MatrixXd targets = Eigen::MatrixXd::Constant(n, classes, -1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        targets(i, labels[static_cast<std::size_t>(i)]) = 1.0;
    }

    Eigen::VectorXd errors(alphas.size());
    for (Eigen::Index a = 0; a < alphas.size(); ++a) {
        double sq_sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::MatrixXd x_rest(n - 1, n_features + 1);
            Eigen::MatrixXd y_rest(n - 1, classes);
            Eigen::Index r = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                x_rest.row(r) = design.row(j);
                y_rest.row(r) = targets.row(j);
                ++r;
            }
            const Eigen::MatrixXd lhs =
                x_rest.transpose() * x_rest +
                alphas(a) * Eigen::MatrixXd::Identity(n_features + 1, n_features + 1);
            const Eigen::MatrixXd coef = lhs.ldlt().solve(x_rest.transpose() * y_rest);
            const Eigen::RowVectorXd pred = design.row(i) * coef;
            sq_sum += (targets.row(i) - pred).squaredNorm();
        }
        errors(a) = sq_sum / static_cast<double>(n * classes);
    }
    return errors;
}

mts::Dataset3D random_dataset(mts::Rng& rng, Eigen::Index samples,
                              Eigen::Index channels, Eigen::Index timesteps,
                              int classes, bool with_degenerate_slices) {
    Eigen::MatrixXd values(samples * channels, timesteps);
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index t = 0; t < timesteps; ++t) {
            values(r, t) = rng.normal() * 2.0 + 0.5;
        }
    }
    if (with_degenerate_slices && rng.uniform() < 0.3) {
        // constant channel 0 exercises every degenerate-denominator rule
        for (Eigen::Index n = 0; n < samples; ++n) {
            for (Eigen::Index t = 0; t < timesteps; ++t) {
                values(n * channels, t) = 1.5;
            }
        }
    }
    std::vector<int> labels(static_cast<std::size_t>(samples));
    for (Eigen::Index i = 0; i < samples; ++i) {
        labels[static_cast<std::size_t>(i)] =
            static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(classes)));
    }
    std::vector<std::string> names;
    for (int k = 0; k < classes; ++k) names.push_back("c" + std::to_string(k));
    return mts::Dataset3D(std::move(values), channels, std::move(labels),
                          std::move(names));
}

double sample_skewness(const std::vector<double>& values) {
    const double mean = brute_mean(values);
    double m2 = 0.0, m3 = 0.0;
    for (double x : values) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    const auto n = static_cast<double>(values.size());
    m2 /= n;
    m3 /= n;
    return m3 / std::pow(m2, 1.5);
}

} // namespace oracle
