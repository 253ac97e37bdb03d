#include "mts/harness.hpp"

#include "mts/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mts {

const char* fit_scope_tag(FitScope scope) {
    return scope == FitScope::Train ? "train" : "all";
}

FitScope fit_scope_from_tag(const std::string& tag) {
    if (tag == "train") return FitScope::Train;
    if (tag == "all") return FitScope::All;
    throw std::invalid_argument("unknown fit scope '" + tag + "' (expected train|all)");
}

const char* resample_mode_tag(ResampleMode mode) {
    return mode == ResampleMode::SeedOnly ? "seed-only" : "shuffle-split";
}

ResampleMode resample_mode_from_tag(const std::string& tag) {
    if (tag == "seed-only") return ResampleMode::SeedOnly;
    if (tag == "shuffle-split") return ResampleMode::ShuffleSplit;
    throw std::invalid_argument("unknown resample mode '" + tag +
                                "' (expected seed-only|shuffle-split)");
}

std::string config_tag(ScalerMethod method, SliceScheme scheme) {
    if (method == ScalerMethod::None) return "none";
    return std::string(method_tag(method)) + "_" + scheme_tag(scheme);
}

std::string config_tag(const CellRecord& record) {
    if (record.baseline) return "none";
    return config_tag(record.method, record.scheme);
}

namespace {

struct Split {
    Dataset3D train;
    Dataset3D test;
};

// stratified re-split of the pooled samples at the original train fraction
Split shuffle_split(const Dataset3D& pooled, Eigen::Index train_size,
                    std::uint64_t split_seed) {
    Rng rng(split_seed);
    const double fraction = static_cast<double>(train_size) /
                            static_cast<double>(pooled.samples());
    std::vector<Eigen::Index> train_idx, test_idx;
    const int classes = pooled.class_count();
    for (int k = 0; k < classes; ++k) {
        std::vector<Eigen::Index> members;
        for (Eigen::Index n = 0; n < pooled.samples(); ++n) {
            if (pooled.label(n) == k) members.push_back(n);
        }
        if (members.empty()) continue;
        for (std::size_t i = 0; i + 1 < members.size(); ++i) {
            const auto j = i + static_cast<std::size_t>(
                                   rng.uniform_index(members.size() - i));
            std::swap(members[i], members[j]);
        }
        auto take = static_cast<Eigen::Index>(std::llround(
            fraction * static_cast<double>(members.size())));
        take = std::clamp<Eigen::Index>(take, 1,
                                        static_cast<Eigen::Index>(members.size()));
        if (take == static_cast<Eigen::Index>(members.size()) && members.size() > 1) {
            --take; // keep at least one sample of the class for testing
        }
        train_idx.insert(train_idx.end(), members.begin(), members.begin() + take);
        test_idx.insert(test_idx.end(), members.begin() + take, members.end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {subset_samples(pooled, train_idx), subset_samples(pooled, test_idx)};
}

struct Job {
    ScalerMethod method;
    SliceScheme scheme;
    bool baseline;
    int resample;
    std::uint64_t seed;
};

double evaluate_cell(const Dataset3D& train, const Dataset3D& test,
                     const Dataset3D* pooled, const Job& job,
                     const ExperimentPlan& plan) {
    const Dataset3D* fit_source = &train;
    if (plan.fit_scope == FitScope::All) fit_source = pooled;

    Dataset3D scaled_train = train;
    Dataset3D scaled_test = test;
    if (!job.baseline) {
        const FittedScaler scaler = fit_dataset(*fit_source, job.method, job.scheme);
        scaled_train = apply_dataset(scaler, train);
        scaled_test = apply_dataset(scaler, test);
    }

    const KernelBank bank = generate_kernels(job.seed, scaled_train.channels(),
                                             scaled_train.timesteps(),
                                             plan.kernel_count);
    const Eigen::MatrixXd train_features = featurize(scaled_train, bank);
    const Eigen::MatrixXd test_features = featurize(scaled_test, bank);
    const RidgeModel model = ridge_fit(train_features, scaled_train.labels());
    return accuracy(ridge_predict(model, test_features), scaled_test.labels());
}

std::vector<double> accuracies_by_resample(const ResultTable& table,
                                           ScalerMethod method, SliceScheme scheme,
                                           bool baseline) {
    std::vector<std::pair<int, double>> found;
    for (const CellRecord& r : table.records) {
        if (r.baseline != baseline) continue;
        if (!baseline && (r.method != method || r.scheme != scheme)) continue;
        found.emplace_back(r.resample, r.accuracy);
    }
    std::sort(found.begin(), found.end());
    std::vector<double> out;
    out.reserve(found.size());
    for (const auto& [r, acc] : found) out.push_back(acc);
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size()));
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                             static_cast<Eigen::Index>(v.size()));
}

} // namespace

ResultTable run_grid(const Dataset3D& train, const Dataset3D& test,
                     const ExperimentPlan& plan, const std::string& dataset_name) {
    if (train.channels() != test.channels() || train.timesteps() != test.timesteps()) {
        throw std::invalid_argument("run_grid: train/test dimension mismatch");
    }
    if (train.class_names() != test.class_names()) {
        throw std::invalid_argument("run_grid: train/test class names differ");
    }
    if (plan.resamples < 1) {
        throw std::invalid_argument("run_grid: need at least 1 resample");
    }
    if (plan.schemes.empty()) {
        throw std::invalid_argument("run_grid: no dimension slices selected");
    }

    ResultTable table;
    table.plan = plan;
    table.dataset = {dataset_name, train.samples(), test.samples(),
                     train.channels(), train.timesteps(),
                     static_cast<int>(train.class_names().size())};

    // baseline cells first, then the grid in plan order; None in the method
    // list adds nothing beyond the always-present baseline
    std::vector<Job> jobs;
    for (int r = 0; r < plan.resamples; ++r) {
        jobs.push_back({ScalerMethod::None, SliceScheme::All, true, r,
                        seed_hash(plan.base_seed, "none", "-", r)});
    }
    for (ScalerMethod method : plan.methods) {
        if (method == ScalerMethod::None) continue;
        for (SliceScheme scheme : plan.schemes) {
            for (int r = 0; r < plan.resamples; ++r) {
                jobs.push_back({method, scheme, false, r,
                                seed_hash(plan.base_seed, method_tag(method),
                                          scheme_tag(scheme), r)});
            }
        }
    }

    // per-resample splits are shared across cells so paired tests compare
    // like with like
    const Dataset3D pooled = concat_samples(train, test);
    std::vector<Split> splits;
    if (plan.resample_mode == ResampleMode::ShuffleSplit) {
        splits.reserve(static_cast<std::size_t>(plan.resamples));
        for (int r = 0; r < plan.resamples; ++r) {
            splits.push_back(shuffle_split(
                pooled, train.samples(), seed_hash(plan.base_seed, "split", r)));
        }
    }

    std::vector<CellRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size() || failed.load()) return;
            const Job& job = jobs[i];
            const auto started = std::chrono::steady_clock::now();
            try {
                const Dataset3D* job_train = &train;
                const Dataset3D* job_test = &test;
                if (plan.resample_mode == ResampleMode::ShuffleSplit) {
                    job_train = &splits[static_cast<std::size_t>(job.resample)].train;
                    job_test = &splits[static_cast<std::size_t>(job.resample)].test;
                }
                const double acc =
                    evaluate_cell(*job_train, *job_test, &pooled, job, plan);
                const double elapsed =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                  started)
                        .count();
                records[i] = {job.method, job.scheme, job.baseline,
                              job.resample, job.seed, acc, elapsed};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) {
                    error_message = "cell [" + config_tag(job.method, job.scheme) +
                                    " resample " + std::to_string(job.resample) +
                                    "] failed: " + e.what();
                }
                return;
            }
        }
    };

    const int thread_count = std::max(1, plan.threads);
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw std::runtime_error(error_message);

    table.records = std::move(records);
    return table;
}

BestConfigReport compare_to_baseline(const ResultTable& table) {
    BestConfigReport report;
    report.dataset = table.dataset;

    const auto baseline_accs =
        accuracies_by_resample(table, ScalerMethod::None, SliceScheme::All, true);
    if (baseline_accs.empty()) {
        throw std::invalid_argument("compare_to_baseline: table has no baseline cells");
    }
    report.baseline.baseline = true;
    report.baseline.mean = mean_of(baseline_accs);
    report.baseline.stddev = stddev_of(baseline_accs, report.baseline.mean);

    std::set<std::pair<ScalerMethod, SliceScheme>> seen;
    for (const CellRecord& r : table.records) {
        if (r.baseline) continue;
        seen.insert({r.method, r.scheme});
    }
    if (seen.empty()) {
        throw std::invalid_argument("compare_to_baseline: no non-baseline cells");
    }

    std::vector<ConfigStat> stats;
    std::map<std::string, ConfigSummary> summaries;
    for (const auto& [method, scheme] : seen) {
        const auto accs = accuracies_by_resample(table, method, scheme, false);
        ConfigSummary summary;
        summary.method = method;
        summary.scheme = scheme;
        summary.mean = mean_of(accs);
        summary.stddev = stddev_of(accs, summary.mean);
        summary.vs_baseline = wilcoxon(to_vector(accs), to_vector(baseline_accs));
        summary.diff_pp = (summary.mean - report.baseline.mean) * 100.0;
        const std::string tag = config_tag(method, scheme);
        stats.push_back({tag, summary.mean, summary.stddev});
        summaries[tag] = summary;
    }

    for (const ConfigStat& s : rank_configs(std::move(stats))) {
        report.configs.push_back(summaries.at(s.config));
    }
    const ConfigSummary& top = report.configs.front();
    report.significant = top.vs_baseline.p_value < 0.05;
    report.diff_pp = top.diff_pp;
    return report;
}

DimensionSweepReport dimension_sweep(const ResultTable& table, ScalerMethod method) {
    if (method == ScalerMethod::None) {
        throw std::invalid_argument("dimension_sweep: method must not be the baseline");
    }
    DimensionSweepReport report;
    report.method = method;

    std::map<SliceScheme, std::vector<double>> accs;
    for (SliceScheme scheme : kAllSchemes) {
        auto v = accuracies_by_resample(table, method, scheme, false);
        if (v.empty()) {
            throw std::invalid_argument(
                std::string("dimension_sweep: table lacks cells for ") +
                config_tag(method, scheme));
        }
        const double mean = mean_of(v);
        report.schemes.push_back({scheme, mean, stddev_of(v, mean)});
        accs[scheme] = std::move(v);
    }

    std::vector<double> p_values;
    for (std::size_t i = 0; i < kAllSchemes.size(); ++i) {
        for (std::size_t j = i + 1; j < kAllSchemes.size(); ++j) {
            DimensionSweepReport::PairTest pair;
            pair.a = kAllSchemes[i];
            pair.b = kAllSchemes[j];
            pair.test = wilcoxon(to_vector(accs[pair.a]), to_vector(accs[pair.b]));
            report.pairs.push_back(pair);
            p_values.push_back(pair.test.p_value);
        }
    }
    const auto adjusted = holm_adjust(p_values);
    std::set<SliceScheme> participating;
    for (std::size_t i = 0; i < report.pairs.size(); ++i) {
        report.pairs[i].p_adjusted = adjusted[i];
        report.pairs[i].significant = adjusted[i] < 0.05;
        if (report.pairs[i].significant) {
            participating.insert(report.pairs[i].a);
            participating.insert(report.pairs[i].b);
        }
    }
    report.any_significant = !participating.empty();
    if (report.any_significant) {
        double best_mean = -1.0, worst_mean = 2.0;
        for (const auto& s : report.schemes) {
            if (participating.count(s.scheme) == 0) continue;
            if (s.mean > best_mean) {
                best_mean = s.mean;
                report.best = s.scheme;
            }
            if (s.mean < worst_mean) {
                worst_mean = s.mean;
                report.worst = s.scheme;
            }
        }
        report.diff_pp = (best_mean - worst_mean) * 100.0;
    }
    return report;
}

UtilityProfile utility_scores(const std::vector<ResultTable>& tables) {
    if (tables.empty()) {
        throw std::invalid_argument("utility_scores: no result tables");
    }
    UtilityProfile profile;
    for (const ResultTable& table : tables) {
        const BestConfigReport ranked = compare_to_baseline(table);
        const double top_mean = ranked.configs.front().mean;
        UtilityProfile::Entry entry;
        entry.dataset = table.dataset.name;
        std::vector<const ConfigSummary*> group;
        for (const ConfigSummary& c : ranked.configs) {
            if (c.mean >= top_mean - 0.01) group.push_back(&c);
        }
        const double share = 1.0 / static_cast<double>(group.size());
        for (const ConfigSummary* c : group) {
            entry.top_group.push_back(config_tag(c->method, c->scheme));
            entry.dimension_scores[c->scheme] += share;
            entry.method_scores[c->method] += share;
        }
        for (const auto& [scheme, score] : entry.dimension_scores) {
            profile.dimension_scores[scheme] += score;
        }
        for (const auto& [method, score] : entry.method_scores) {
            profile.method_scores[method] += score;
        }
        profile.per_dataset.push_back(std::move(entry));
    }
    return profile;
}

nlohmann::ordered_json to_json(const ResultTable& table) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["type"] = "mtsbench_results";
    nlohmann::ordered_json dataset;
    dataset["name"] = table.dataset.name;
    dataset["train_samples"] = table.dataset.train_samples;
    dataset["test_samples"] = table.dataset.test_samples;
    dataset["channels"] = table.dataset.channels;
    dataset["timesteps"] = table.dataset.timesteps;
    dataset["classes"] = table.dataset.class_count;
    doc["dataset"] = std::move(dataset);

    nlohmann::ordered_json plan;
    std::vector<std::string> methods;
    for (ScalerMethod m : table.plan.methods) methods.emplace_back(method_tag(m));
    std::vector<std::string> schemes;
    for (SliceScheme s : table.plan.schemes) schemes.emplace_back(scheme_tag(s));
    plan["methods"] = methods;
    plan["schemes"] = schemes;
    plan["resamples"] = table.plan.resamples;
    plan["base_seed"] = table.plan.base_seed;
    plan["kernel_count"] = table.plan.kernel_count;
    plan["fit_scope"] = fit_scope_tag(table.plan.fit_scope);
    plan["resample_mode"] = resample_mode_tag(table.plan.resample_mode);
    doc["plan"] = std::move(plan);

    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const CellRecord& r : table.records) {
        nlohmann::ordered_json record;
        record["method"] = r.baseline ? "none" : method_tag(r.method);
        record["scheme"] = r.baseline ? "-" : scheme_tag(r.scheme);
        record["resample"] = r.resample;
        record["seed"] = r.seed;
        record["accuracy"] = r.accuracy;
        records.push_back(std::move(record));
    }
    doc["records"] = std::move(records);
    return doc;
}

ResultTable result_table_from_json(const nlohmann::ordered_json& doc) {
    if (doc.at("type").get<std::string>() != "mtsbench_results") {
        throw std::invalid_argument("not a results document");
    }
    if (doc.at("schema_version").get<int>() != 1) {
        throw std::invalid_argument("unsupported results schema version");
    }
    ResultTable table;
    const auto& dataset = doc.at("dataset");
    table.dataset.name = dataset.at("name").get<std::string>();
    table.dataset.train_samples = dataset.at("train_samples").get<Eigen::Index>();
    table.dataset.test_samples = dataset.at("test_samples").get<Eigen::Index>();
    table.dataset.channels = dataset.at("channels").get<Eigen::Index>();
    table.dataset.timesteps = dataset.at("timesteps").get<Eigen::Index>();
    table.dataset.class_count = dataset.at("classes").get<int>();

    const auto& plan = doc.at("plan");
    table.plan.methods.clear();
    for (const auto& m : plan.at("methods")) {
        table.plan.methods.push_back(method_from_tag(m.get<std::string>()));
    }
    table.plan.schemes.clear();
    for (const auto& s : plan.at("schemes")) {
        table.plan.schemes.push_back(scheme_from_tag(s.get<std::string>()));
    }
    table.plan.resamples = plan.at("resamples").get<int>();
    table.plan.base_seed = plan.at("base_seed").get<std::uint64_t>();
    table.plan.kernel_count = plan.at("kernel_count").get<int>();
    table.plan.fit_scope = fit_scope_from_tag(plan.at("fit_scope").get<std::string>());
    table.plan.resample_mode =
        resample_mode_from_tag(plan.at("resample_mode").get<std::string>());

    for (const auto& r : doc.at("records")) {
        CellRecord record;
        const std::string method = r.at("method").get<std::string>();
        record.baseline = method == "none";
        record.method = record.baseline ? ScalerMethod::None : method_from_tag(method);
        record.scheme = record.baseline
                            ? SliceScheme::All
                            : scheme_from_tag(r.at("scheme").get<std::string>());
        record.resample = r.at("resample").get<int>();
        record.seed = r.at("seed").get<std::uint64_t>();
        record.accuracy = r.at("accuracy").get<double>();
        table.records.push_back(record);
    }
    return table;
}

std::string serialize_results(const ResultTable& table) {
    return to_json(table).dump(2) + "\n";
}

ResultTable parse_results(std::istream& input) {
    try {
        nlohmann::ordered_json doc;
        input >> doc;
        return result_table_from_json(doc);
    } catch (const nlohmann::ordered_json::exception& e) {
        throw std::invalid_argument(std::string("malformed results file: ") + e.what());
    }
}

ResultTable parse_results_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open results file: " + path);
    return parse_results(file);
}

} // namespace mts
