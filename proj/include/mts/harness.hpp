#pragma once

#include "mts/rocket.hpp"
#include "mts/scalers.hpp"
#include "mts/stats.hpp"
#include "mts/tensor.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace mts {

enum class FitScope { Train, All };
enum class ResampleMode { SeedOnly, ShuffleSplit };

const char* fit_scope_tag(FitScope scope);
FitScope fit_scope_from_tag(const std::string& tag);
const char* resample_mode_tag(ResampleMode mode);
ResampleMode resample_mode_from_tag(const std::string& tag);

// The experiment grid: which (method, scheme) cells to run and how often.
// The no-scaling baseline is always run in addition to the listed methods.
struct ExperimentPlan {
    std::vector<ScalerMethod> methods{kTransformMethods.begin(),
                                      kTransformMethods.end()};
    std::vector<SliceScheme> schemes{kAllSchemes.begin(), kAllSchemes.end()};
    int resamples = 20;
    std::uint64_t base_seed = 0;
    int kernel_count = kDefaultKernelCount;
    FitScope fit_scope = FitScope::Train;
    ResampleMode resample_mode = ResampleMode::SeedOnly;
    int threads = 1; // execution knob only; never serialized
};

struct DatasetMeta {
    std::string name;
    Eigen::Index train_samples = 0;
    Eigen::Index test_samples = 0;
    Eigen::Index channels = 0;
    Eigen::Index timesteps = 0;
    int class_count = 0;
};

struct CellRecord {
    ScalerMethod method = ScalerMethod::None;
    SliceScheme scheme = SliceScheme::All; // meaningless when baseline
    bool baseline = false;
    int resample = 0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    double wall_time_s = 0.0; // diagnostic only; never serialized
};

struct ResultTable {
    DatasetMeta dataset;
    ExperimentPlan plan;
    std::vector<CellRecord> records;
};

// "method_scheme" (or "none") — the identity used in rankings and reports
std::string config_tag(const CellRecord& record);
std::string config_tag(ScalerMethod method, SliceScheme scheme);

// Runs the whole grid: per cell and resample, derive the seed, optionally
// re-split, fit/apply the scaler, then kernels -> features -> ridge ->
// test accuracy. Deterministic given the plan, whatever plan.threads is.
ResultTable run_grid(const Dataset3D& train, const Dataset3D& test,
                     const ExperimentPlan& plan,
                     const std::string& dataset_name = "dataset");

// Per-configuration aggregate plus its paired test against the baseline.
struct ConfigSummary {
    ScalerMethod method = ScalerMethod::None;
    SliceScheme scheme = SliceScheme::All;
    bool baseline = false;
    double mean = 0.0;
    double stddev = 0.0;
    TestResult vs_baseline;
    double diff_pp = 0.0; // mean - baseline mean, percentage points
};

struct BestConfigReport {
    DatasetMeta dataset;
    ConfigSummary baseline;
    std::vector<ConfigSummary> configs; // ranked: mean desc, stddev asc
    bool significant = false;           // top vs baseline at p < 0.05
    double diff_pp = 0.0;               // top mean - baseline mean
};

// Ranks every non-baseline cell, then tests the top one against the
// baseline accuracies resample by resample.
BestConfigReport compare_to_baseline(const ResultTable& table);

struct DimensionSweepReport {
    ScalerMethod method = ScalerMethod::None;
    struct SchemeStat {
        SliceScheme scheme;
        double mean = 0.0;
        double stddev = 0.0;
    };
    std::vector<SchemeStat> schemes; // canonical order, all 4
    struct PairTest {
        SliceScheme a;
        SliceScheme b;
        TestResult test;
        double p_adjusted = 1.0;
        bool significant = false;
    };
    std::vector<PairTest> pairs; // the 6 pairwise comparisons
    bool any_significant = false;
    SliceScheme best = SliceScheme::Channels;  // over dims in a significant pair
    SliceScheme worst = SliceScheme::Channels;
    double diff_pp = 0.0; // best mean - worst mean, percentage points
};

// Fixed-method sweep over the four dimensions: all six pairwise Wilcoxon
// tests, Holm-adjusted; reports the best-worst gap restricted to dimensions
// participating in at least one significant pair, or a dash when none is.
DimensionSweepReport dimension_sweep(const ResultTable& table, ScalerMethod method);

struct UtilityProfile {
    struct Entry {
        std::string dataset;
        std::vector<std::string> top_group; // config tags, ranked
        std::map<SliceScheme, double> dimension_scores;
        std::map<ScalerMethod, double> method_scores;
    };
    std::vector<Entry> per_dataset;
    std::map<SliceScheme, double> dimension_scores; // summed across datasets
    std::map<ScalerMethod, double> method_scores;
};

// Per dataset, the top group holds every non-baseline config within 1
// percentage point of the best mean accuracy; each facet scores
// occurrences / group size, summed across datasets.
UtilityProfile utility_scores(const std::vector<ResultTable>& tables);

enum class ReportFormat { Json, Csv, Markdown };
ReportFormat report_format_from_tag(const std::string& tag);

std::string emit_report(const BestConfigReport& report, ReportFormat format);
std::string emit_report(const DimensionSweepReport& report, ReportFormat format);
std::string emit_report(const UtilityProfile& profile, ReportFormat format);

// Canonical results document: versioned, full precision, byte-deterministic
// (wall times and thread counts are excluded by design).
nlohmann::ordered_json to_json(const ResultTable& table);
ResultTable result_table_from_json(const nlohmann::ordered_json& doc);
std::string serialize_results(const ResultTable& table);
ResultTable parse_results(std::istream& input);
ResultTable parse_results_file(const std::string& path);

} // namespace mts
