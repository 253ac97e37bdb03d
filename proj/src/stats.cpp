#include "mts/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace mts {

namespace {

// midranks of |d|, doubled so ties at .5 stay integral
std::vector<std::int64_t> doubled_midranks(const std::vector<double>& abs_diffs) {
    const std::size_t n = abs_diffs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return abs_diffs[i] < abs_diffs[j]; });

    std::vector<std::int64_t> ranks2(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_diffs[order[j + 1]] == abs_diffs[order[i]]) ++j;
        // positions i..j (0-based) share the midrank ((i+1) + (j+1)) / 2
        const std::int64_t doubled =
            static_cast<std::int64_t>(i + 1) + static_cast<std::int64_t>(j + 1);
        for (std::size_t k = i; k <= j; ++k) ranks2[order[k]] = doubled;
        i = j + 1;
    }
    return ranks2;
}

// exact tail mass: #{sign assignments with min(T+, T-) <= w2} / 2^n,
// computed by convolving the rank-sum distribution
double exact_p_value(const std::vector<std::int64_t>& ranks2, std::int64_t w2) {
    const auto n = static_cast<int>(ranks2.size());
    const std::int64_t total = std::accumulate(ranks2.begin(), ranks2.end(),
                                               std::int64_t{0});
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(total) + 1, 0);
    counts[0] = 1;
    std::int64_t reached = 0;
    for (const std::int64_t r : ranks2) {
        reached += r;
        for (std::int64_t t = reached; t >= r; --t) {
            counts[static_cast<std::size_t>(t)] +=
                counts[static_cast<std::size_t>(t - r)];
        }
    }
    std::uint64_t hits = 0;
    for (std::int64_t t = 0; t <= total; ++t) {
        if (t <= w2 || t >= total - w2) {
            hits += counts[static_cast<std::size_t>(t)];
        }
    }
    const double denom = std::ldexp(1.0, n); // 2^n, exact
    return static_cast<double>(hits) / denom;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / M_SQRT2); }

} // namespace

TestResult wilcoxon(const PairedSample& sample, int exact_max) {
    return wilcoxon(sample.a, sample.b, exact_max);
}

TestResult wilcoxon(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b, int exact_max) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("wilcoxon: paired samples differ in length");
    }
    if (a.size() < 2) {
        throw std::invalid_argument("wilcoxon: need at least 2 pairs");
    }

    std::vector<double> abs_diffs;
    std::vector<bool> positive;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double d = a(i) - b(i);
        if (d == 0.0) continue;
        abs_diffs.push_back(std::abs(d));
        positive.push_back(d > 0.0);
    }

    TestResult result;
    result.n_effective = static_cast<int>(abs_diffs.size());
    if (abs_diffs.empty()) {
        result.method = TestResult::Method::Exact;
        return result; // W = 0, p = 1
    }

    const auto ranks2 = doubled_midranks(abs_diffs);
    std::int64_t pos2 = 0, neg2 = 0;
    for (std::size_t i = 0; i < ranks2.size(); ++i) {
        (positive[i] ? pos2 : neg2) += ranks2[i];
    }
    const std::int64_t w2 = std::min(pos2, neg2);
    result.statistic = static_cast<double>(w2) / 2.0;

    if (result.n_effective <= exact_max) {
        result.method = TestResult::Method::Exact;
        result.p_value = exact_p_value(ranks2, w2);
        return result;
    }

    result.method = TestResult::Method::NormalApprox;
    const double n = result.n_effective;
    const double mean = n * (n + 1.0) / 4.0;
    double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    // tie correction: subtract sum(t^3 - t)/48 over groups of tied |d|
    {
        std::vector<double> sorted(abs_diffs);
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            variance -= (t * t * t - t) / 48.0;
            i = j + 1;
        }
    }
    if (variance <= 0.0) {
        result.p_value = 1.0;
        return result;
    }
    const double z = (result.statistic - mean + 0.5) / std::sqrt(variance);
    result.p_value = std::min(1.0, 2.0 * normal_cdf(z));
    return result;
}

std::vector<double> holm_adjust(const std::vector<double>& p_values) {
    const std::size_t m = p_values.size();
    for (const double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("holm_adjust: p-values must lie in [0,1]");
        }
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return p_values[i] < p_values[j];
    });

    std::vector<double> adjusted(m);
    double running_max = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double scaled =
            std::min(1.0, static_cast<double>(m - j) * p_values[order[j]]);
        running_max = std::max(running_max, scaled);
        adjusted[order[j]] = running_max;
    }
    return adjusted;
}

std::vector<ConfigStat> rank_configs(std::vector<ConfigStat> results) {
    if (results.empty()) {
        throw std::invalid_argument("rank_configs: empty input");
    }
    std::stable_sort(results.begin(), results.end(),
                     [](const ConfigStat& x, const ConfigStat& y) {
                         if (x.mean != y.mean) return x.mean > y.mean;
                         return x.stddev < y.stddev;
                     });
    return results;
}

} // namespace mts
