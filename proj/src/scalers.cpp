#include "mts/scalers.hpp"

#include "mts/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mts {

namespace {

using Eigen::VectorXd;
using ConstVec = Eigen::Ref<const Eigen::VectorXd>;

// interpolate the sorted sample at fractional index h in [0, n-1]
double interp_sorted(const std::vector<double>& sorted, double h) {
    const auto n = static_cast<Eigen::Index>(sorted.size());
    if (h <= 0.0) return sorted.front();
    if (h >= static_cast<double>(n - 1)) return sorted.back();
    const auto lo = static_cast<Eigen::Index>(h);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> sorted_copy(const ConstVec& values) {
    std::vector<double> sorted(values.data(), values.data() + values.size());
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

double population_variance(const ConstVec& values, double mean) {
    return (values.array() - mean).square().sum() /
           static_cast<double>(values.size());
}

bool all_equal(const ConstVec& values) {
    return values.minCoeff() == values.maxCoeff();
}

void require_non_empty(const ConstVec& values, const char* what) {
    if (values.size() == 0) {
        throw std::invalid_argument(std::string(what) + ": empty value set");
    }
}

template <class P>
const P& params_as(const SliceParams& params, ScalerMethod method) {
    const P* p = std::get_if<P>(&params);
    if (p == nullptr) {
        throw std::invalid_argument(std::string("slice params do not match method ") +
                                    method_tag(method));
    }
    return *p;
}

} // namespace

const char* method_tag(ScalerMethod method) {
    switch (method) {
    case ScalerMethod::None: return "none";
    case ScalerMethod::L2Normalize: return "l2norm";
    case ScalerMethod::Standardize: return "standard";
    case ScalerMethod::MinMax: return "minmax";
    case ScalerMethod::MaxAbs: return "maxabs";
    case ScalerMethod::Robust: return "robust";
    case ScalerMethod::PowerYeoJohnson: return "power";
    case ScalerMethod::QuantileUniform: return "quantile";
    }
    throw std::logic_error("unreachable method");
}

ScalerMethod method_from_tag(const std::string& tag) {
    for (ScalerMethod m : kAllMethods) {
        if (tag == method_tag(m)) return m;
    }
    throw std::invalid_argument(
        "unknown scaling method '" + tag +
        "' (expected none|l2norm|standard|minmax|maxabs|robust|power|quantile)");
}

double percentile(const ConstVec& values, double p) {
    require_non_empty(values, "percentile");
    if (p < 0.0 || p > 100.0) {
        throw std::invalid_argument("percentile: p must lie in [0,100]");
    }
    const auto sorted = sorted_copy(values);
    const double h = static_cast<double>(values.size() - 1) * p / 100.0;
    return interp_sorted(sorted, h);
}

double yeo_johnson_point(double x, double lambda) {
    if (x >= 0.0) {
        if (lambda == 0.0) return std::log1p(x);
        return std::expm1(lambda * std::log1p(x)) / lambda;
    }
    const double two_minus = 2.0 - lambda;
    if (two_minus == 0.0) return -std::log1p(-x);
    return -std::expm1(two_minus * std::log1p(-x)) / two_minus;
}

Eigen::VectorXd yeo_johnson(const ConstVec& values, double lambda) {
    VectorXd out(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        out(i) = yeo_johnson_point(values(i), lambda);
    }
    return out;
}

double fit_lambda(const ConstVec& values) {
    const auto n = values.size();
    if (n < 2) throw std::invalid_argument("fit_lambda: need at least 2 values");
    if (all_equal(values)) throw std::invalid_argument("fit_lambda: all values equal");

    double sign_log_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = values(i);
        sign_log_sum += (x < 0.0 ? -1.0 : 1.0) * std::log1p(std::abs(x));
    }

    constexpr double kBig = std::numeric_limits<double>::max() / 4.0;
    const auto neg_log_likelihood = [&](double lambda) {
        const VectorXd psi = yeo_johnson(values, lambda);
        if (!psi.allFinite()) return kBig;
        const double var = population_variance(psi, psi.mean());
        if (!(var > 0.0) || !std::isfinite(var)) return kBig;
        const double value =
            0.5 * static_cast<double>(n) * std::log(var) - (lambda - 1.0) * sign_log_sum;
        return std::isfinite(value) ? value : kBig;
    };

    // expand the bracket while a coarse scan puts the minimum on an edge
    double lo = -2.0, hi = 2.0;
    constexpr double kLimit = 50.0;
    constexpr int kScanPoints = 17;
    for (;;) {
        int best = 0;
        double best_value = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kScanPoints; ++i) {
            const double lambda =
                lo + (hi - lo) * static_cast<double>(i) / (kScanPoints - 1);
            const double value = neg_log_likelihood(lambda);
            if (value < best_value) {
                best_value = value;
                best = i;
            }
        }
        const bool at_lo = best == 0 && lo > -kLimit;
        const bool at_hi = best == kScanPoints - 1 && hi < kLimit;
        if (at_lo) lo = std::max(-kLimit, 2.0 * lo);
        if (at_hi) hi = std::min(kLimit, 2.0 * hi);
        if (!at_lo && !at_hi) break;
    }

    return brent_minimize(neg_log_likelihood, lo, hi, 1e-8).x;
}

SliceParams fit_slice(ScalerMethod method, const ConstVec& values) {
    require_non_empty(values, "fit_slice");
    const auto n = values.size();
    switch (method) {
    case ScalerMethod::None:
        return NoneParams{};
    case ScalerMethod::L2Normalize:
        return L2NormParams{values.norm()};
    case ScalerMethod::Standardize: {
        const double mean = values.mean();
        return StandardizeParams{mean, std::sqrt(population_variance(values, mean))};
    }
    case ScalerMethod::MinMax:
        return MinMaxParams{values.minCoeff(), values.maxCoeff()};
    case ScalerMethod::MaxAbs:
        return MaxAbsParams{values.cwiseAbs().maxCoeff()};
    case ScalerMethod::Robust: {
        const auto sorted = sorted_copy(values);
        const double scale = static_cast<double>(n - 1) / 100.0;
        return RobustParams{interp_sorted(sorted, scale * 50.0),
                            interp_sorted(sorted, scale * 25.0),
                            interp_sorted(sorted, scale * 75.0)};
    }
    case ScalerMethod::PowerYeoJohnson: {
        if (n < 2 || all_equal(values)) {
            // constant set: identity transform (lambda 1, no restandardization)
            return PowerParams{1.0, 0.0, 1.0};
        }
        const double lambda = fit_lambda(values);
        const VectorXd psi = yeo_johnson(values, lambda);
        const double mean = psi.mean();
        return PowerParams{lambda, mean, std::sqrt(population_variance(psi, mean))};
    }
    case ScalerMethod::QuantileUniform: {
        const auto sorted = sorted_copy(values);
        const Eigen::Index n_q = std::min<Eigen::Index>(1000, n);
        QuantileParams params;
        if (n_q < 2) {
            params.quantiles = VectorXd::Constant(1, sorted.front());
            params.levels = VectorXd::Constant(1, 0.5);
            return params;
        }
        params.quantiles.resize(n_q);
        params.levels.resize(n_q);
        for (Eigen::Index i = 0; i < n_q; ++i) {
            params.levels(i) = static_cast<double>(i) / static_cast<double>(n_q - 1);
            const double h = static_cast<double>(i) * static_cast<double>(n - 1) /
                             static_cast<double>(n_q - 1);
            params.quantiles(i) = interp_sorted(sorted, h);
        }
        return params;
    }
    }
    throw std::logic_error("unreachable method");
}

namespace {

double quantile_to_uniform(const QuantileParams& p, double x) {
    const auto n_q = p.quantiles.size();
    // constant reference set (includes the single-value fit)
    if (p.quantiles(0) == p.quantiles(n_q - 1)) return 0.5;
    if (x <= p.quantiles(0)) return 0.0;
    if (x >= p.quantiles(n_q - 1)) return 1.0;
    // forward interpolation: ties resolve to the last reference <= x
    const double* begin = p.quantiles.data();
    const double* end = begin + n_q;
    const auto hi = static_cast<Eigen::Index>(std::upper_bound(begin, end, x) - begin);
    const auto lo = hi - 1; // quantiles[lo] <= x < quantiles[hi]
    const double t = (x - p.quantiles(lo)) / (p.quantiles(hi) - p.quantiles(lo));
    return p.levels(lo) + t * (p.levels(hi) - p.levels(lo));
}

} // namespace

Eigen::VectorXd transform_slice(ScalerMethod method, const SliceParams& params,
                                const ConstVec& values) {
    switch (method) {
    case ScalerMethod::None: {
        params_as<NoneParams>(params, method);
        return values;
    }
    case ScalerMethod::L2Normalize: {
        const auto& p = params_as<L2NormParams>(params, method);
        if (p.norm == 0.0) return values;
        return values / p.norm;
    }
    case ScalerMethod::Standardize: {
        const auto& p = params_as<StandardizeParams>(params, method);
        if (p.stddev == 0.0) return VectorXd::Zero(values.size());
        return (values.array() - p.mean) / p.stddev;
    }
    case ScalerMethod::MinMax: {
        const auto& p = params_as<MinMaxParams>(params, method);
        const double range = p.max - p.min;
        if (range == 0.0) return VectorXd::Zero(values.size());
        return (values.array() - p.min) / range;
    }
    case ScalerMethod::MaxAbs: {
        const auto& p = params_as<MaxAbsParams>(params, method);
        if (p.max_abs == 0.0) return values;
        return values / p.max_abs;
    }
    case ScalerMethod::Robust: {
        const auto& p = params_as<RobustParams>(params, method);
        const double iqr = p.q3 - p.q1;
        return (values.array() - p.median) / (iqr == 0.0 ? 1.0 : iqr);
    }
    case ScalerMethod::PowerYeoJohnson: {
        const auto& p = params_as<PowerParams>(params, method);
        VectorXd psi = yeo_johnson(values, p.lambda);
        if (p.post_std == 0.0) return VectorXd::Zero(values.size());
        return (psi.array() - p.post_mean) / p.post_std;
    }
    case ScalerMethod::QuantileUniform: {
        const auto& p = params_as<QuantileParams>(params, method);
        VectorXd out(values.size());
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            out(i) = quantile_to_uniform(p, values(i));
        }
        return out;
    }
    }
    throw std::logic_error("unreachable method");
}

FittedScaler fit_dataset(const Dataset3D& train, ScalerMethod method,
                         SliceScheme scheme) {
    FittedScaler scaler;
    scaler.method = method;
    scaler.scheme = scheme;
    scaler.fit_channels = train.channels();
    scaler.fit_timesteps = train.timesteps();
    if (method == ScalerMethod::None) return scaler;

    const auto ids = slice_ids(scheme, train.channels(), train.timesteps());
    scaler.params.reserve(ids.size());
    for (const SliceId& id : ids) {
        try {
            scaler.params.push_back(fit_slice(method, gather(train, id)));
        } catch (const std::exception& e) {
            throw std::invalid_argument("fit failed for slice [" + to_string(id) +
                                        "]: " + e.what());
        }
    }
    return scaler;
}

Dataset3D apply_dataset(const FittedScaler& scaler, const Dataset3D& data) {
    if (data.channels() != scaler.fit_channels ||
        data.timesteps() != scaler.fit_timesteps) {
        throw std::invalid_argument(
            "apply_dataset: dataset dimensions do not match the fitted scaler");
    }
    if (scaler.method == ScalerMethod::None) return data;

    const auto ids = slice_ids(scaler.scheme, data.channels(), data.timesteps());
    if (ids.size() != scaler.params.size()) {
        throw std::invalid_argument("apply_dataset: fitted params count mismatch");
    }
    Dataset3D out = data;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out = scatter(std::move(out), ids[i],
                      transform_slice(scaler.method, scaler.params[i],
                                      gather(data, ids[i])));
    }
    return out;
}

namespace {

nlohmann::ordered_json params_to_json(ScalerMethod method, const SliceParams& params) {
    nlohmann::ordered_json j;
    switch (method) {
    case ScalerMethod::None:
        break;
    case ScalerMethod::L2Normalize:
        j["norm"] = std::get<L2NormParams>(params).norm;
        break;
    case ScalerMethod::Standardize: {
        const auto& p = std::get<StandardizeParams>(params);
        j["mean"] = p.mean;
        j["stddev"] = p.stddev;
        break;
    }
    case ScalerMethod::MinMax: {
        const auto& p = std::get<MinMaxParams>(params);
        j["min"] = p.min;
        j["max"] = p.max;
        break;
    }
    case ScalerMethod::MaxAbs:
        j["max_abs"] = std::get<MaxAbsParams>(params).max_abs;
        break;
    case ScalerMethod::Robust: {
        const auto& p = std::get<RobustParams>(params);
        j["median"] = p.median;
        j["q1"] = p.q1;
        j["q3"] = p.q3;
        break;
    }
    case ScalerMethod::PowerYeoJohnson: {
        const auto& p = std::get<PowerParams>(params);
        j["lambda"] = p.lambda;
        j["post_mean"] = p.post_mean;
        j["post_std"] = p.post_std;
        break;
    }
    case ScalerMethod::QuantileUniform: {
        const auto& p = std::get<QuantileParams>(params);
        j["quantiles"] = std::vector<double>(p.quantiles.data(),
                                             p.quantiles.data() + p.quantiles.size());
        j["levels"] =
            std::vector<double>(p.levels.data(), p.levels.data() + p.levels.size());
        break;
    }
    }
    return j;
}

SliceParams params_from_json(ScalerMethod method, const nlohmann::ordered_json& j) {
    switch (method) {
    case ScalerMethod::None:
        return NoneParams{};
    case ScalerMethod::L2Normalize:
        return L2NormParams{j.at("norm").get<double>()};
    case ScalerMethod::Standardize:
        return StandardizeParams{j.at("mean").get<double>(),
                                 j.at("stddev").get<double>()};
    case ScalerMethod::MinMax:
        return MinMaxParams{j.at("min").get<double>(), j.at("max").get<double>()};
    case ScalerMethod::MaxAbs:
        return MaxAbsParams{j.at("max_abs").get<double>()};
    case ScalerMethod::Robust:
        return RobustParams{j.at("median").get<double>(), j.at("q1").get<double>(),
                            j.at("q3").get<double>()};
    case ScalerMethod::PowerYeoJohnson:
        return PowerParams{j.at("lambda").get<double>(),
                           j.at("post_mean").get<double>(),
                           j.at("post_std").get<double>()};
    case ScalerMethod::QuantileUniform: {
        const auto q = j.at("quantiles").get<std::vector<double>>();
        const auto l = j.at("levels").get<std::vector<double>>();
        if (q.size() != l.size() || q.empty()) {
            throw std::invalid_argument("quantile params: bad quantiles/levels");
        }
        QuantileParams params;
        params.quantiles = Eigen::Map<const Eigen::VectorXd>(
            q.data(), static_cast<Eigen::Index>(q.size()));
        params.levels = Eigen::Map<const Eigen::VectorXd>(
            l.data(), static_cast<Eigen::Index>(l.size()));
        return params;
    }
    }
    throw std::logic_error("unreachable method");
}

} // namespace

nlohmann::ordered_json to_json(const FittedScaler& scaler) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["type"] = "mts_fitted_scaler";
    doc["method"] = method_tag(scaler.method);
    doc["scheme"] = scheme_tag(scaler.scheme);
    doc["fit_channels"] = scaler.fit_channels;
    doc["fit_timesteps"] = scaler.fit_timesteps;
    auto ids = slice_ids(scaler.scheme, scaler.fit_channels, scaler.fit_timesteps);
    nlohmann::ordered_json params = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < scaler.params.size(); ++i) {
        nlohmann::ordered_json entry;
        if (ids[i].channel >= 0) entry["channel"] = ids[i].channel;
        if (ids[i].timestep >= 0) entry["timestep"] = ids[i].timestep;
        entry["params"] = params_to_json(scaler.method, scaler.params[i]);
        params.push_back(std::move(entry));
    }
    doc["params"] = std::move(params);
    return doc;
}

FittedScaler fitted_scaler_from_json(const nlohmann::ordered_json& doc) {
    if (doc.at("type").get<std::string>() != "mts_fitted_scaler") {
        throw std::invalid_argument("not a fitted-scaler document");
    }
    if (doc.at("schema_version").get<int>() != 1) {
        throw std::invalid_argument("unsupported fitted-scaler schema version");
    }
    FittedScaler scaler;
    scaler.method = method_from_tag(doc.at("method").get<std::string>());
    scaler.scheme = scheme_from_tag(doc.at("scheme").get<std::string>());
    scaler.fit_channels = doc.at("fit_channels").get<Eigen::Index>();
    scaler.fit_timesteps = doc.at("fit_timesteps").get<Eigen::Index>();
    const auto& params = doc.at("params");
    const auto expected =
        scaler.method == ScalerMethod::None
            ? 0
            : set_count(scaler.scheme, scaler.fit_channels, scaler.fit_timesteps);
    if (static_cast<Eigen::Index>(params.size()) != expected) {
        throw std::invalid_argument("fitted-scaler params count mismatch");
    }
    for (const auto& entry : params) {
        scaler.params.push_back(params_from_json(scaler.method, entry.at("params")));
    }
    return scaler;
}

} // namespace mts
