// mtsbench: scaling-method x dimension benchmark grid for multivariate
// time-series classification, with a ROCKET evaluation classifier.

#include "mts/harness.hpp"
#include "mts/numfmt.hpp"
#include "mts/ts_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

namespace {

int default_threads() {
    if (const char* env = std::getenv("MTSBENCH_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<mts::ScalerMethod> parse_methods(const std::vector<std::string>& tags) {
    std::vector<mts::ScalerMethod> methods;
    for (const std::string& tag : tags) methods.push_back(mts::method_from_tag(tag));
    return methods;
}

std::vector<mts::SliceScheme> parse_schemes(const std::vector<std::string>& tags) {
    std::vector<mts::SliceScheme> schemes;
    for (const std::string& tag : tags) schemes.push_back(mts::scheme_from_tag(tag));
    return schemes;
}

int run_command(const std::string& train_path, const std::string& test_path,
                const std::vector<std::string>& methods,
                const std::vector<std::string>& dims, int resamples,
                std::uint64_t seed, int kernels, const std::string& fit_scope,
                const std::string& resample_mode, int threads,
                const std::string& out_path) {
    mts::TsHeader header;
    const mts::Dataset3D train = mts::parse_ts_file(train_path, &header);
    const mts::Dataset3D test = mts::parse_ts_file(test_path);

    mts::ExperimentPlan plan;
    if (!methods.empty()) plan.methods = parse_methods(methods);
    if (!dims.empty()) plan.schemes = parse_schemes(dims);
    plan.resamples = resamples;
    plan.base_seed = seed;
    plan.kernel_count = kernels;
    plan.fit_scope = mts::fit_scope_from_tag(fit_scope);
    plan.resample_mode = mts::resample_mode_from_tag(resample_mode);
    plan.threads = threads;

    const std::string name =
        header.problem_name.empty() ? "dataset" : header.problem_name;
    const mts::ResultTable table = mts::run_grid(train, test, plan, name);

    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    out << mts::serialize_results(table);

    double total_time = 0.0;
    for (const auto& r : table.records) total_time += r.wall_time_s;
    std::cerr << "ran " << table.records.size() << " cells on " << name << " in "
              << mts::fmt_fixed(total_time, 1) << " s cpu; results written to "
              << out_path << "\n";
    return 0;
}

int report_command(const std::vector<std::string>& inputs,
                   const std::string& analysis, const std::string& format,
                   const std::string& fixed_method) {
    const mts::ReportFormat fmt = mts::report_format_from_tag(format);
    std::vector<mts::ResultTable> tables;
    for (const std::string& path : inputs) {
        tables.push_back(mts::parse_results_file(path));
    }
    if (analysis == "best") {
        for (const auto& table : tables) {
            std::cout << mts::emit_report(mts::compare_to_baseline(table), fmt);
        }
    } else if (analysis == "dim-sweep") {
        if (fixed_method.empty()) {
            throw std::invalid_argument("dim-sweep needs --fixed-method");
        }
        const mts::ScalerMethod method = mts::method_from_tag(fixed_method);
        for (const auto& table : tables) {
            std::cout << mts::emit_report(mts::dimension_sweep(table, method), fmt);
        }
    } else if (analysis == "utility") {
        std::cout << mts::emit_report(mts::utility_scores(tables), fmt);
    } else {
        throw std::invalid_argument("unknown analysis '" + analysis +
                                    "' (expected best|dim-sweep|utility)");
    }
    return 0;
}

int synth_command(const std::string& preset, Eigen::Index n, Eigen::Index c,
                  Eigen::Index t, int classes, std::uint64_t seed,
                  const std::string& out_path) {
    mts::SynthSpec spec;
    spec.preset = mts::preset_from_tag(preset);
    spec.samples = n;
    spec.channels = c;
    spec.timesteps = t;
    spec.class_count = classes;
    spec.seed = seed;
    const mts::Dataset3D data = mts::synth_generate(spec);
    std::string name = preset;
    std::replace(name.begin(), name.end(), '-', '_');
    mts::write_ts_file(out_path, data, name);
    std::cerr << "wrote " << data.samples() << "x" << data.channels() << "x"
              << data.timesteps() << " dataset to " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Input-transformation benchmark for multivariate time-series "
                 "classification"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run the (method x dimension) grid");
    std::string train_path, test_path, out_path;
    std::vector<std::string> methods, dims;
    int resamples = 20;
    std::uint64_t seed = 0;
    int kernels = mts::kDefaultKernelCount;
    std::string fit_scope = "train", resample_mode = "seed-only";
    int threads = default_threads();
    run->add_option("--train", train_path, "training split (.ts)")->required();
    run->add_option("--test", test_path, "test split (.ts)")->required();
    run->add_option("--methods", methods,
                    "scaling methods (default: all seven)")
        ->delimiter(',');
    run->add_option("--dims", dims, "dimension slices (default: all four)")
        ->delimiter(',');
    run->add_option("--resamples", resamples, "resamples per cell");
    run->add_option("--seed", seed, "base seed");
    run->add_option("--kernels", kernels, "ROCKET kernel count");
    run->add_option("--fit-scope", fit_scope, "fit scalers on train|all");
    run->add_option("--resample-mode", resample_mode, "seed-only|shuffle-split");
    run->add_option("--threads", threads, "worker threads (env MTSBENCH_THREADS)");
    run->add_option("--out", out_path, "results JSON path")->required();

    // report
    auto* report = app.add_subcommand("report", "analyze a results file");
    std::vector<std::string> inputs;
    std::string analysis = "best", format = "markdown", fixed_method;
    report->add_option("--in", inputs, "results JSON file(s)")->required();
    report->add_option("--analysis", analysis, "best|dim-sweep|utility");
    report->add_option("--format", format, "json|csv|markdown");
    report->add_option("--fixed-method", fixed_method,
                       "method for the dimension sweep");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    std::string preset = "gaussian-null";
    Eigen::Index n = 40, c = 3, t = 50;
    int classes = 2;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    synth->add_option("--preset", preset,
                      "amplitude-shift|offset-nuisance|gaussian-null");
    synth->add_option("--n", n, "sample count");
    synth->add_option("--c", c, "channel count");
    synth->add_option("--t", t, "timestep count");
    synth->add_option("--classes", classes, "class count");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "output .ts path")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) {
            return run_command(train_path, test_path, methods, dims, resamples, seed,
                               kernels, fit_scope, resample_mode, threads, out_path);
        }
        if (report->parsed()) {
            return report_command(inputs, analysis, format, fixed_method);
        }
        return synth_command(preset, n, c, t, classes, synth_seed, synth_out);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
