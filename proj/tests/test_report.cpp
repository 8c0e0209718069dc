#include "report.hpp"
#include "errors.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <json.hpp>

#include <sstream>

using namespace motorbnn;

namespace {

TrialResult make_trial(std::int64_t tn, std::int64_t fp, std::int64_t fn, std::int64_t tp) {
    TrialResult trial;
    trial.confusion = {{{tn, fp}, {fn, tp}}};
    const auto total = static_cast<double>(tn + fp + fn + tp);
    trial.accuracy = static_cast<double>(tn + tp) / total;
    return trial;
}

}  // namespace

TEST_CASE("render_confusion") {
    SUBCASE("percentages per row") {
        const auto text = render_confusion(make_trial(7, 3, 0, 20));
        CHECK(text.find("70.0%") != std::string::npos);
        CHECK(text.find("30.0%") != std::string::npos);
        CHECK(text.find("  0.0%") != std::string::npos);
        CHECK(text.find("100.0%") != std::string::npos);
        CHECK(text.find("true healthy") != std::string::npos);
        CHECK(text.find("true faulty") != std::string::npos);
        CHECK(text.find("pred healthy") != std::string::npos);
    }
    SUBCASE("diagonal-only matrix shows 100% twice") {
        const auto text = render_confusion(make_trial(5, 0, 0, 9));
        std::size_t hits = 0;
        for (std::size_t pos = text.find("100.0%"); pos != std::string::npos;
             pos = text.find("100.0%", pos + 1)) {
            ++hits;
        }
        CHECK(hits == 2);
    }
    SUBCASE("empty test row renders n/a") {
        const auto text = render_confusion(make_trial(0, 0, 2, 18));
        CHECK(text.find("n/a") != std::string::npos);
    }
    SUBCASE("rendering is pure") {
        const auto trial = make_trial(4, 2, 1, 13);
        CHECK(render_confusion(trial) == render_confusion(trial));
    }
}

TEST_CASE("render_table1") {
    ExperimentSummary summary;
    summary.table["healthy"] = {0.046, 0.211, 30};
    summary.table["fault1"] = {0.824, 0.367, 30};
    summary.table["fault2"] = {0.835, 0.368, 30};
    summary.table["fault3"] = {0.866, 0.324, 30};
    summary.table["fault4"] = {0.779, 0.379, 30};

    SUBCASE("labels and 3-decimal formatting") {
        const auto text = render_table1(summary);
        CHECK(text.find("Healthy") != std::string::npos);
        CHECK(text.find("Fault 1") != std::string::npos);
        CHECK(text.find("0.046") != std::string::npos);
        CHECK(text.find("0.211") != std::string::npos);
        CHECK(text.find("0.824") != std::string::npos);
        // column order fixed: class, mean, std
        CHECK(text.find("Class name") < text.find("Predictor mean value"));
        CHECK(text.find("Predictor mean value") < text.find("Predictor standard deviation"));
        const auto healthy_row = text.find("Healthy");
        CHECK(text.find("0.046", healthy_row) < text.find("0.211", healthy_row));
    }
    SUBCASE("zero std renders as 0.000") {
        summary.table["fault4"] = {0.779, 0.0, 30};
        CHECK(render_table1(summary).find("0.000") != std::string::npos);
    }
    SUBCASE("a class missing from the summary renders n/a") {
        summary.table.erase("fault2");
        const auto text = render_table1(summary);
        CHECK(text.find("n/a") != std::string::npos);
    }
}

TEST_CASE("histogram_csv") {
    HistogramSpec spec;  // 20 bins

    SUBCASE("a prediction of 0.5 lands in bin 10") {
        const auto csv = histogram_csv({0.5}, spec);
        std::size_t line_no = 0;
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        CHECK(line == "bin_lo,bin_hi,count");
        while (std::getline(in, line)) {
            const auto last_comma = line.rfind(',');
            const int count = std::stoi(line.substr(last_comma + 1));
            CHECK(count == (line_no == 10 ? 1 : 0));
            ++line_no;
        }
        CHECK(line_no == 20);
    }
    SUBCASE("bin counts sum to the number of predictions") {
        std::vector<double> values;
        for (int i = 0; i < 137; ++i) {
            values.push_back(static_cast<double>(i % 100) / 99.0);
        }
        const auto csv = histogram_csv(values, spec);
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);  // header
        int total = 0;
        while (std::getline(in, line)) {
            total += std::stoi(line.substr(line.rfind(',') + 1));
        }
        CHECK(total == 137);
    }
    SUBCASE("fewer than 2 bins is rejected") {
        CHECK_THROWS_AS(histogram_csv({0.5}, HistogramSpec{1}), Error);
    }
}

TEST_CASE("results_csv lists one row per trial with confusion cells") {
    ExperimentSummary summary;
    summary.n_trials = 2;
    auto t0 = make_trial(5, 1, 0, 24);
    t0.seed = 100;
    t0.per_class_stats["healthy"] = {0.1, 0.05, 6};
    auto t1 = make_trial(6, 0, 2, 22);
    t1.seed = 101;
    summary.trials = {t0, t1};

    const auto csv = results_csv(summary);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("trial,seed,accuracy,tn,fp,fn,tp", 0) == 0);
    CHECK(header.find("healthy_mean") != std::string::npos);
    CHECK(header.find("fault4_std") != std::string::npos);
    std::string row0;
    std::string row1;
    std::getline(in, row0);
    std::getline(in, row1);
    CHECK(row0.rfind("0,100,", 0) == 0);
    CHECK(row0.find(",5,1,0,24") != std::string::npos);
    CHECK(row1.rfind("1,101,", 0) == 0);
}

TEST_CASE("summary_json mirrors the experiment summary") {
    ExperimentSummary summary;
    summary.n_trials = 3;
    summary.mean_accuracy = 0.9;
    summary.accuracy_std = 0.05;
    summary.mean_confusion = {{{5.0, 1.0}, {0.5, 23.5}}};
    summary.table["healthy"] = {0.08, 0.02, 18};

    const auto parsed = nlohmann::json::parse(summary_json(summary));
    CHECK(parsed.at("n_trials") == 3);
    CHECK(parsed.at("mean_accuracy") == doctest::Approx(0.9));
    CHECK(parsed.at("mean_confusion")[1][1] == doctest::Approx(23.5));
    CHECK(parsed.at("table").at("healthy").at("pred_mean") == doctest::Approx(0.08));
}

TEST_CASE("write_experiment_outputs produces the documented files") {
    testutil::TempDir dir("report");
    ExperimentSummary summary;
    summary.n_trials = 2;
    auto trial = make_trial(5, 1, 0, 24);
    trial.predictions.push_back({"rec0", 0, "healthy", 0, 0, 0.1, 0.02});
    trial.predictions.push_back({"rec1", 0, "fault1", 1, 1, 0.9, 0.03});
    summary.trials = {trial, trial};
    summary.table["healthy"] = {0.1, 0.02, 2};

    write_experiment_outputs(summary, dir.path());
    CHECK(std::filesystem::exists(dir.file("results.csv")));
    CHECK(std::filesystem::exists(dir.file("summary.json")));
    CHECK(std::filesystem::exists(dir.file("table1.txt")));
    CHECK(std::filesystem::exists(dir.file("confusion_0.txt")));
    CHECK(std::filesystem::exists(dir.file("confusion_1.txt")));
    CHECK(std::filesystem::exists(dir.file("hist_healthy.csv")));
    CHECK(std::filesystem::exists(dir.file("hist_fault1.csv")));
}
