#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mts {

// Two accuracy vectors paired by resample index.
struct PairedSample {
    Eigen::VectorXd a;
    Eigen::VectorXd b;
};

// Past this many nonzero differences the exact null distribution gives way
// to the tie-corrected normal approximation.
inline constexpr int kWilcoxonExactMax = 20;

struct TestResult {
    enum class Method { Exact, NormalApprox };

    double statistic = 0.0; // W = min(positive rank sum, negative rank sum)
    double p_value = 1.0;   // two-sided
    int n_effective = 0;    // differences that survived zero-discarding
    Method method = Method::Exact;
};

// Wilcoxon signed-rank test on paired samples. Zero differences are
// discarded, absolute differences are midranked, and the two-sided p-value
// is exact (full sign-assignment distribution) for n_effective <= exact_max,
// otherwise a continuity-corrected normal approximation. All differences
// zero yields W = 0, p = 1.
TestResult wilcoxon(const PairedSample& sample, int exact_max = kWilcoxonExactMax);
TestResult wilcoxon(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b,
                    int exact_max = kWilcoxonExactMax);

// Holm step-down adjustment, returned in the input order:
// adjusted(i) = max over j <= i of min(1, (m-j) * p_sorted(j)).
std::vector<double> holm_adjust(const std::vector<double>& p_values);

struct ConfigStat {
    std::string config;
    double mean = 0.0;
    double stddev = 0.0;
};

// Stable sort by descending mean, then ascending standard deviation;
// residual ties keep the input order.
std::vector<ConfigStat> rank_configs(std::vector<ConfigStat> results);

} // namespace mts
