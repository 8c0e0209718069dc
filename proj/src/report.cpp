#include "report.hpp"

#include "errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace motorbnn {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorKind::io, "cannot open file for writing: " + path.string());
    }
    out << text;
    if (!out) {
        fail(ErrorKind::io, "failed writing " + path.string());
    }
}

}  // namespace

std::string display_class_name(const std::string& class_tag) {
    if (class_tag == "healthy") {
        return "Healthy";
    }
    if (class_tag.rfind("fault", 0) == 0 && class_tag.size() > 5) {
        return "Fault " + class_tag.substr(5);
    }
    return class_tag;
}

std::string render_confusion(const TrialResult& result) {
    std::ostringstream out;
    out << "                  pred healthy        pred faulty\n";
    const char* row_names[2] = {"true healthy", "true faulty "};
    for (int t = 0; t < 2; ++t) {
        const auto row_total = result.confusion[t][0] + result.confusion[t][1];
        out << row_names[t];
        if (row_total == 0) {
            out << "               n/a                n/a\n";
            continue;
        }
        for (int p = 0; p < 2; ++p) {
            const auto count = result.confusion[t][p];
            const double pct =
                100.0 * static_cast<double>(count) / static_cast<double>(row_total);
            char cell[40];
            std::snprintf(cell, sizeof(cell), "  %6lld (%5.1f%%)",
                          static_cast<long long>(count), pct);
            out << cell;
        }
        out << '\n';
    }
    return out.str();
}

std::string render_table1(const ExperimentSummary& summary) {
    std::ostringstream out;
    out << "Class name  Predictor mean value  Predictor standard deviation\n";
    for (const char* tag : kClassNames) {
        const auto it = summary.table.find(tag);
        std::string mean = "  n/a";
        std::string std_dev = "  n/a";
        if (it != summary.table.end() && it->second.count > 0) {
            mean = fixed(it->second.pred_mean, 3);
            std_dev = fixed(it->second.pred_std, 3);
        }
        char row[96];
        std::snprintf(row, sizeof(row), "%-10s  %20s  %28s\n", display_class_name(tag).c_str(),
                      mean.c_str(), std_dev.c_str());
        out << row;
    }
    return out.str();
}

std::string histogram_csv(const std::vector<double>& values, const HistogramSpec& spec) {
    if (spec.bins < 2) {
        fail(ErrorKind::invalid_argument, "histogram needs at least 2 bins");
    }
    std::vector<std::size_t> counts(spec.bins, 0);
    const auto n_bins = static_cast<double>(spec.bins);
    for (double v : values) {
        const double t = std::clamp(v, 0.0, 1.0);
        const auto idx =
            std::min(spec.bins - 1, static_cast<std::size_t>(t * n_bins));
        counts[idx] += 1;
    }
    std::ostringstream out;
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < spec.bins; ++b) {
        out << fixed(static_cast<double>(b) / n_bins, 6) << ','
            << fixed(static_cast<double>(b + 1) / n_bins, 6) << ',' << counts[b] << '\n';
    }
    return out.str();
}

std::string results_csv(const ExperimentSummary& summary) {
    std::ostringstream out;
    out << "trial,seed,accuracy,tn,fp,fn,tp";
    for (const char* tag : kClassNames) {
        out << ',' << tag << "_mean," << tag << "_std";
    }
    out << '\n';
    for (std::size_t i = 0; i < summary.trials.size(); ++i) {
        const auto& trial = summary.trials[i];
        out << i << ',' << trial.seed << ',' << fixed(trial.accuracy, 6) << ','
            << trial.confusion[0][0] << ',' << trial.confusion[0][1] << ','
            << trial.confusion[1][0] << ',' << trial.confusion[1][1];
        for (const char* tag : kClassNames) {
            const auto it = trial.per_class_stats.find(tag);
            if (it == trial.per_class_stats.end() || it->second.count == 0) {
                out << ",,";
            } else {
                out << ',' << fixed(it->second.pred_mean, 6) << ','
                    << fixed(it->second.pred_std, 6);
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string summary_json(const ExperimentSummary& summary) {
    nlohmann::json j;
    j["n_trials"] = summary.n_trials;
    j["mean_accuracy"] = summary.mean_accuracy;
    j["accuracy_std"] = summary.accuracy_std;
    j["mean_confusion"] = {
        {summary.mean_confusion[0][0], summary.mean_confusion[0][1]},
        {summary.mean_confusion[1][0], summary.mean_confusion[1][1]},
    };
    nlohmann::json table = nlohmann::json::object();
    for (const auto& [tag, stats] : summary.table) {
        table[tag] = {{"pred_mean", stats.pred_mean},
                      {"pred_std", stats.pred_std},
                      {"count", stats.count}};
    }
    j["table"] = table;
    return j.dump(2) + "\n";
}

void write_experiment_outputs(const ExperimentSummary& summary,
                              const std::filesystem::path& outdir,
                              const HistogramSpec& spec) {
    std::filesystem::create_directories(outdir);
    write_text_file(outdir / "results.csv", results_csv(summary));
    write_text_file(outdir / "summary.json", summary_json(summary));
    write_text_file(outdir / "table1.txt", render_table1(summary));
    for (std::size_t i = 0; i < summary.trials.size(); ++i) {
        write_text_file(outdir / ("confusion_" + std::to_string(i) + ".txt"),
                        render_confusion(summary.trials[i]));
    }

    std::map<std::string, std::vector<double>> pooled;
    for (const auto& trial : summary.trials) {
        for (const auto& pred : trial.predictions) {
            pooled[pred.class_tag].push_back(pred.mean);
        }
    }
    for (const auto& [tag, values] : pooled) {
        write_text_file(outdir / ("hist_" + tag + ".csv"), histogram_csv(values, spec));
    }
}

}  // namespace motorbnn
