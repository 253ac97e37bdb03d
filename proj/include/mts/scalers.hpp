#pragma once

#include "mts/tensor.hpp"

#include <json.hpp>

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace mts {

// The seven transformation methods plus the no-scaling baseline.
enum class ScalerMethod {
    None,
    L2Normalize,
    Standardize,
    MinMax,
    MaxAbs,
    Robust,
    PowerYeoJohnson,
    QuantileUniform,
};

inline constexpr std::array<ScalerMethod, 8> kAllMethods = {
    ScalerMethod::None,           ScalerMethod::L2Normalize,
    ScalerMethod::Standardize,    ScalerMethod::MinMax,
    ScalerMethod::MaxAbs,         ScalerMethod::Robust,
    ScalerMethod::PowerYeoJohnson, ScalerMethod::QuantileUniform};

// The seven actual transforms (everything but None).
inline constexpr std::array<ScalerMethod, 7> kTransformMethods = {
    ScalerMethod::L2Normalize,    ScalerMethod::Standardize,
    ScalerMethod::MinMax,         ScalerMethod::MaxAbs,
    ScalerMethod::Robust,         ScalerMethod::PowerYeoJohnson,
    ScalerMethod::QuantileUniform};

const char* method_tag(ScalerMethod method);
ScalerMethod method_from_tag(const std::string& tag);

// Per-set parameter records, one flavor per method.
struct NoneParams {};
struct L2NormParams { double norm = 0.0; };
struct StandardizeParams { double mean = 0.0; double stddev = 0.0; };
struct MinMaxParams { double min = 0.0; double max = 0.0; };
struct MaxAbsParams { double max_abs = 0.0; };
struct RobustParams { double median = 0.0; double q1 = 0.0; double q3 = 0.0; };
struct PowerParams { double lambda = 1.0; double post_mean = 0.0; double post_std = 1.0; };
struct QuantileParams {
    Eigen::VectorXd quantiles; // non-decreasing reference quantiles
    Eigen::VectorXd levels;    // probability levels, strictly increasing in [0,1]
};

using SliceParams =
    std::variant<NoneParams, L2NormParams, StandardizeParams, MinMaxParams,
                 MaxAbsParams, RobustParams, PowerParams, QuantileParams>;

// Linear-interpolation percentile, p in [0,100]: on the sorted sample,
// h = (n-1)*p/100 and the result interpolates v[floor(h)] .. v[floor(h)+1].
double percentile(const Eigen::Ref<const Eigen::VectorXd>& values, double p);

// Yeo-Johnson power transform, defined for all reals:
//   x >= 0: ((x+1)^l - 1)/l,        or ln(x+1)  at l = 0
//   x <  0: -((-x+1)^(2-l) - 1)/(2-l), or -ln(-x+1) at l = 2
double yeo_johnson_point(double x, double lambda);
Eigen::VectorXd yeo_johnson(const Eigen::Ref<const Eigen::VectorXd>& values,
                            double lambda);

// Maximum-likelihood lambda for the Yeo-Johnson transform:
//   LL(l) = -(n/2) ln Var(psi(x,l)) + (l-1) sum sign(x) ln(|x|+1)
// maximized by Brent search on (-2,2), expanded to at most [-50,50],
// absolute tolerance 1e-8. Throws on fewer than 2 values or all-equal input.
double fit_lambda(const Eigen::Ref<const Eigen::VectorXd>& values);

// Statistics of one slice set for the given method. Population (divide-by-n)
// standard deviation throughout.
SliceParams fit_slice(ScalerMethod method,
                      const Eigen::Ref<const Eigen::VectorXd>& values);

// Elementwise transform with previously fitted params. Degenerate
// denominators: Standardize sigma=0 -> 0, MinMax max=min -> 0, MaxAbs
// max_abs=0 -> identity, Robust q3=q1 -> offset by median only, L2 norm=0 ->
// identity, QuantileUniform single distinct value -> 0.5.
Eigen::VectorXd transform_slice(ScalerMethod method, const SliceParams& params,
                                const Eigen::Ref<const Eigen::VectorXd>& values);

// A scaling method fitted over every set of one slice scheme.
struct FittedScaler {
    ScalerMethod method = ScalerMethod::None;
    SliceScheme scheme = SliceScheme::All;
    Eigen::Index fit_channels = 0;
    Eigen::Index fit_timesteps = 0;
    // keyed by slice_ids(scheme, fit_channels, fit_timesteps) order;
    // empty for method None
    std::vector<SliceParams> params;
};

// Fits the method on every slice of the training data. None yields an
// empty-params identity scaler.
FittedScaler fit_dataset(const Dataset3D& train, ScalerMethod method,
                         SliceScheme scheme);

// Transforms every slice with its fitted params; labels unchanged. Target
// dimensions must match the fitting dimensions.
Dataset3D apply_dataset(const FittedScaler& scaler, const Dataset3D& data);

// Versioned JSON document with full-precision params, for audit and reuse.
nlohmann::ordered_json to_json(const FittedScaler& scaler);
FittedScaler fitted_scaler_from_json(const nlohmann::ordered_json& doc);

} // namespace mts
