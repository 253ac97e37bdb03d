#include "mts/harness.hpp"
#include "mts/numfmt.hpp"

#include <sstream>
#include <stdexcept>

namespace mts {

namespace {

// the paper's convention: the difference only when significant, else "(-)"
std::string diff_marker(bool significant, double diff_pp) {
    if (!significant) return "(-)";
    std::string s = fmt_fixed(diff_pp, 2);
    if (diff_pp >= 0.0) s.insert(0, "+");
    return "(" + s + ")";
}

const char* test_method_tag(TestResult::Method method) {
    return method == TestResult::Method::Exact ? "exact" : "normal-approximation";
}

nlohmann::ordered_json test_to_json(const TestResult& test) {
    nlohmann::ordered_json j;
    j["statistic"] = test.statistic;
    j["p_value"] = test.p_value;
    j["n_effective"] = test.n_effective;
    j["method"] = test_method_tag(test.method);
    return j;
}

nlohmann::ordered_json summary_to_json(const ConfigSummary& summary) {
    nlohmann::ordered_json j;
    j["config"] = config_tag(summary.method, summary.scheme);
    j["method"] = method_tag(summary.method);
    j["scheme"] = scheme_tag(summary.scheme);
    j["mean_accuracy"] = summary.mean;
    j["std_accuracy"] = summary.stddev;
    j["p_vs_baseline"] = summary.vs_baseline.p_value;
    j["diff_pp"] = summary.diff_pp;
    return j;
}

std::string dump(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

} // namespace

ReportFormat report_format_from_tag(const std::string& tag) {
    if (tag == "json") return ReportFormat::Json;
    if (tag == "csv") return ReportFormat::Csv;
    if (tag == "markdown") return ReportFormat::Markdown;
    throw std::invalid_argument("unknown format '" + tag +
                                "' (expected json|csv|markdown)");
}

std::string emit_report(const BestConfigReport& report, ReportFormat format) {
    const ConfigSummary& top = report.configs.front();
    switch (format) {
    case ReportFormat::Json: {
        nlohmann::ordered_json doc;
        doc["schema_version"] = 1;
        doc["analysis"] = "best";
        doc["dataset"] = report.dataset.name;
        doc["baseline_mean_accuracy"] = report.baseline.mean;
        doc["baseline_std_accuracy"] = report.baseline.stddev;
        doc["best_config"] = config_tag(top.method, top.scheme);
        doc["best_mean_accuracy"] = top.mean;
        doc["significant"] = report.significant;
        doc["diff_pp"] = report.diff_pp;
        doc["test"] = test_to_json(top.vs_baseline);
        nlohmann::ordered_json configs = nlohmann::ordered_json::array();
        for (const ConfigSummary& c : report.configs) configs.push_back(summary_to_json(c));
        doc["configs"] = std::move(configs);
        return dump(doc);
    }
    case ReportFormat::Csv: {
        std::ostringstream out;
        out << "method,scheme,mean_accuracy,std_accuracy,p_vs_baseline,diff_pp\n";
        for (const ConfigSummary& c : report.configs) {
            out << method_tag(c.method) << ',' << scheme_tag(c.scheme) << ','
                << fmt_shortest(c.mean) << ',' << fmt_shortest(c.stddev) << ','
                << fmt_shortest(c.vs_baseline.p_value) << ','
                << fmt_shortest(c.diff_pp) << "\n";
        }
        out << "none,-," << fmt_shortest(report.baseline.mean) << ','
            << fmt_shortest(report.baseline.stddev) << ",1,0\n";
        return out.str();
    }
    case ReportFormat::Markdown: {
        std::ostringstream out;
        out << "| Dataset | Best configuration | Accuracy | Baseline | Diff |\n";
        out << "|---|---|---|---|---|\n";
        out << "| " << report.dataset.name << " | " << config_tag(top.method, top.scheme)
            << " | " << fmt_fixed(top.mean * 100.0, 1) << " | "
            << fmt_fixed(report.baseline.mean * 100.0, 1) << " | "
            << diff_marker(report.significant, report.diff_pp) << " |\n";
        return out.str();
    }
    }
    throw std::logic_error("unreachable format");
}

std::string emit_report(const DimensionSweepReport& report, ReportFormat format) {
    switch (format) {
    case ReportFormat::Json: {
        nlohmann::ordered_json doc;
        doc["schema_version"] = 1;
        doc["analysis"] = "dim-sweep";
        doc["method"] = method_tag(report.method);
        nlohmann::ordered_json schemes = nlohmann::ordered_json::array();
        for (const auto& s : report.schemes) {
            nlohmann::ordered_json j;
            j["scheme"] = scheme_tag(s.scheme);
            j["mean_accuracy"] = s.mean;
            j["std_accuracy"] = s.stddev;
            schemes.push_back(std::move(j));
        }
        doc["schemes"] = std::move(schemes);
        nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
        for (const auto& p : report.pairs) {
            nlohmann::ordered_json j;
            j["a"] = scheme_tag(p.a);
            j["b"] = scheme_tag(p.b);
            j["test"] = test_to_json(p.test);
            j["p_adjusted"] = p.p_adjusted;
            j["significant"] = p.significant;
            pairs.push_back(std::move(j));
        }
        doc["pairs"] = std::move(pairs);
        doc["any_significant"] = report.any_significant;
        if (report.any_significant) {
            doc["best_scheme"] = scheme_tag(report.best);
            doc["worst_scheme"] = scheme_tag(report.worst);
            doc["diff_pp"] = report.diff_pp;
        }
        return dump(doc);
    }
    case ReportFormat::Csv: {
        std::ostringstream out;
        out << "a,b,statistic,p_value,p_adjusted,significant\n";
        for (const auto& p : report.pairs) {
            out << scheme_tag(p.a) << ',' << scheme_tag(p.b) << ','
                << fmt_shortest(p.test.statistic) << ','
                << fmt_shortest(p.test.p_value) << ',' << fmt_shortest(p.p_adjusted)
                << ',' << (p.significant ? "true" : "false") << "\n";
        }
        return out.str();
    }
    case ReportFormat::Markdown: {
        std::ostringstream out;
        out << "| Method |";
        for (const auto& s : report.schemes) out << ' ' << scheme_tag(s.scheme) << " |";
        out << " Best-worst (pp) |\n|---|";
        for (std::size_t i = 0; i < report.schemes.size(); ++i) out << "---|";
        out << "---|\n| " << method_tag(report.method) << " |";
        for (const auto& s : report.schemes) {
            out << ' ' << fmt_fixed(s.mean * 100.0, 1) << " |";
        }
        if (report.any_significant) {
            out << ' ' << fmt_fixed(report.diff_pp, 2) << " |\n";
        } else {
            out << " - |\n";
        }
        out << "\n| Pair | W | p | p (Holm) | significant |\n";
        out << "|---|---|---|---|---|\n";
        for (const auto& p : report.pairs) {
            out << "| " << scheme_tag(p.a) << " vs " << scheme_tag(p.b) << " | "
                << fmt_shortest(p.test.statistic) << " | "
                << fmt_fixed(p.test.p_value, 4) << " | " << fmt_fixed(p.p_adjusted, 4)
                << " | " << (p.significant ? "yes" : "no") << " |\n";
        }
        return out.str();
    }
    }
    throw std::logic_error("unreachable format");
}

std::string emit_report(const UtilityProfile& profile, ReportFormat format) {
    switch (format) {
    case ReportFormat::Json: {
        nlohmann::ordered_json doc;
        doc["schema_version"] = 1;
        doc["analysis"] = "utility";
        nlohmann::ordered_json datasets = nlohmann::ordered_json::array();
        for (const auto& entry : profile.per_dataset) {
            nlohmann::ordered_json j;
            j["dataset"] = entry.dataset;
            j["top_group"] = entry.top_group;
            nlohmann::ordered_json dims;
            for (SliceScheme s : kAllSchemes) {
                const auto it = entry.dimension_scores.find(s);
                dims[scheme_tag(s)] = it == entry.dimension_scores.end() ? 0.0 : it->second;
            }
            j["dimension_scores"] = std::move(dims);
            nlohmann::ordered_json methods;
            for (ScalerMethod m : kTransformMethods) {
                const auto it = entry.method_scores.find(m);
                methods[method_tag(m)] = it == entry.method_scores.end() ? 0.0 : it->second;
            }
            j["method_scores"] = std::move(methods);
            datasets.push_back(std::move(j));
        }
        doc["datasets"] = std::move(datasets);
        nlohmann::ordered_json dims;
        for (SliceScheme s : kAllSchemes) {
            const auto it = profile.dimension_scores.find(s);
            dims[scheme_tag(s)] = it == profile.dimension_scores.end() ? 0.0 : it->second;
        }
        doc["dimension_scores"] = std::move(dims);
        nlohmann::ordered_json methods;
        for (ScalerMethod m : kTransformMethods) {
            const auto it = profile.method_scores.find(m);
            methods[method_tag(m)] = it == profile.method_scores.end() ? 0.0 : it->second;
        }
        doc["method_scores"] = std::move(methods);
        return dump(doc);
    }
    case ReportFormat::Csv: {
        std::ostringstream out;
        out << "facet,name,score\n";
        for (SliceScheme s : kAllSchemes) {
            const auto it = profile.dimension_scores.find(s);
            out << "dimension," << scheme_tag(s) << ','
                << fmt_shortest(it == profile.dimension_scores.end() ? 0.0 : it->second)
                << "\n";
        }
        for (ScalerMethod m : kTransformMethods) {
            const auto it = profile.method_scores.find(m);
            out << "method," << method_tag(m) << ','
                << fmt_shortest(it == profile.method_scores.end() ? 0.0 : it->second)
                << "\n";
        }
        return out.str();
    }
    case ReportFormat::Markdown: {
        std::ostringstream out;
        out << "| Dataset |";
        for (SliceScheme s : kAllSchemes) out << ' ' << scheme_tag(s) << " |";
        out << "\n|---|---|---|---|---|\n";
        const auto dim_row = [&](const std::string& name,
                                 const std::map<SliceScheme, double>& scores) {
            out << "| " << name << " |";
            for (SliceScheme s : kAllSchemes) {
                const auto it = scores.find(s);
                out << ' ' << fmt_fixed(it == scores.end() ? 0.0 : it->second, 3)
                    << " |";
            }
            out << "\n";
        };
        for (const auto& entry : profile.per_dataset) {
            dim_row(entry.dataset, entry.dimension_scores);
        }
        dim_row("(total)", profile.dimension_scores);

        out << "\n| Dataset |";
        for (ScalerMethod m : kTransformMethods) out << ' ' << method_tag(m) << " |";
        out << "\n|---|---|---|---|---|---|---|---|\n";
        const auto method_row = [&](const std::string& name,
                                    const std::map<ScalerMethod, double>& scores) {
            out << "| " << name << " |";
            for (ScalerMethod m : kTransformMethods) {
                const auto it = scores.find(m);
                out << ' ' << fmt_fixed(it == scores.end() ? 0.0 : it->second, 3)
                    << " |";
            }
            out << "\n";
        };
        for (const auto& entry : profile.per_dataset) {
            method_row(entry.dataset, entry.method_scores);
        }
        method_row("(total)", profile.method_scores);
        return out.str();
    }
    }
    throw std::logic_error("unreachable format");
}

} // namespace mts
