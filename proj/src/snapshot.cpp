#include "snapshot.hpp"

#include "errors.hpp"

#include <json.hpp>

#include <fstream>

namespace motorbnn {

namespace {

constexpr const char* kFormatName = "motorbnn-snapshot";
constexpr int kFormatVersion = 1;

const char* algorithm_name(Algorithm a) {
    return a == Algorithm::rwm ? "rwm" : "hmc";
}

Algorithm algorithm_from(const std::string& name) {
    if (name == "rwm") {
        return Algorithm::rwm;
    }
    if (name == "hmc") {
        return Algorithm::hmc;
    }
    fail(ErrorKind::format, "unknown sampler algorithm '" + name + "'");
}

const char* likelihood_name(Likelihood l) {
    return l == Likelihood::bernoulli ? "bernoulli" : "gaussian";
}

Likelihood likelihood_from(const std::string& name) {
    if (name == "bernoulli") {
        return Likelihood::bernoulli;
    }
    if (name == "gaussian") {
        return Likelihood::gaussian;
    }
    fail(ErrorKind::format, "unknown likelihood '" + name + "'");
}

}  // namespace

void save_snapshot(const ModelSnapshot& snapshot, const std::filesystem::path& path) {
    nlohmann::json j;
    j["format"] = kFormatName;
    j["version"] = kFormatVersion;
    j["shape"] = {{"n_inputs", snapshot.shape.n_inputs},
                  {"hidden_layers", snapshot.shape.hidden_layers}};
    j["model"] = {{"lambda", snapshot.model.lambda},
                  {"likelihood", likelihood_name(snapshot.model.likelihood)}};
    j["spectral"] = {{"window_seconds", snapshot.spectral.window_seconds},
                     {"band_lo_hz", snapshot.spectral.band_lo_hz},
                     {"band_hi_hz", snapshot.spectral.band_hi_hz},
                     {"n_features", snapshot.spectral.n_features}};
    j["normalizer"] = {{"means", snapshot.normalizer.means},
                       {"stds", snapshot.normalizer.stds}};
    j["threshold"] = snapshot.threshold;
    if (snapshot.map_w) {
        j["map"] = {{"w", *snapshot.map_w}};
    } else {
        const auto& cfg = snapshot.chain.config;
        j["chain"] = {{"config",
                       {{"algorithm", algorithm_name(cfg.algorithm)},
                        {"n_steps", cfg.n_steps},
                        {"burn_in", cfg.burn_in},
                        {"thin", cfg.thin},
                        {"seed", cfg.seed},
                        {"rwm_scale", cfg.rwm_scale},
                        {"hmc_step_size", cfg.hmc_step_size},
                        {"hmc_leapfrog_steps", cfg.hmc_leapfrog_steps}}},
                      {"seed", snapshot.chain.seed},
                      {"accepted", snapshot.chain.accepted},
                      {"proposed", snapshot.chain.proposed},
                      {"accept_rate", snapshot.chain.accept_rate},
                      {"samples", snapshot.chain.samples}};
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorKind::io, "cannot open snapshot for writing: " + path.string());
    }
    out << j.dump(2) << '\n';
    if (!out) {
        fail(ErrorKind::io, "failed writing snapshot " + path.string());
    }
}

ModelSnapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::io, "cannot open snapshot: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::format, "snapshot is not valid JSON: " + std::string(e.what()));
    }

    ModelSnapshot snapshot;
    try {
        if (j.at("format").get<std::string>() != kFormatName) {
            fail(ErrorKind::format, "not a model snapshot file: " + path.string());
        }
        if (j.at("version").get<int>() != kFormatVersion) {
            fail(ErrorKind::format, "unsupported snapshot version in " + path.string());
        }
        snapshot.shape.n_inputs = j.at("shape").at("n_inputs").get<std::size_t>();
        snapshot.shape.hidden_layers =
            j.at("shape").at("hidden_layers").get<std::vector<std::size_t>>();
        snapshot.model.lambda = j.at("model").at("lambda").get<double>();
        snapshot.model.likelihood =
            likelihood_from(j.at("model").at("likelihood").get<std::string>());
        const auto& spectral = j.at("spectral");
        snapshot.spectral.window_seconds = spectral.at("window_seconds").get<double>();
        snapshot.spectral.band_lo_hz = spectral.at("band_lo_hz").get<double>();
        snapshot.spectral.band_hi_hz = spectral.at("band_hi_hz").get<double>();
        snapshot.spectral.n_features = spectral.at("n_features").get<std::size_t>();
        snapshot.normalizer.means =
            j.at("normalizer").at("means").get<std::vector<double>>();
        snapshot.normalizer.stds =
            j.at("normalizer").at("stds").get<std::vector<double>>();
        snapshot.threshold = j.at("threshold").get<double>();

        if (j.contains("map")) {
            snapshot.map_w = j.at("map").at("w").get<std::vector<double>>();
        } else {
            const auto& chain = j.at("chain");
            const auto& cfg = chain.at("config");
            snapshot.chain.config.algorithm =
                algorithm_from(cfg.at("algorithm").get<std::string>());
            snapshot.chain.config.n_steps = cfg.at("n_steps").get<std::size_t>();
            snapshot.chain.config.burn_in = cfg.at("burn_in").get<std::size_t>();
            snapshot.chain.config.thin = cfg.at("thin").get<std::size_t>();
            snapshot.chain.config.seed = cfg.at("seed").get<std::uint64_t>();
            snapshot.chain.config.rwm_scale = cfg.at("rwm_scale").get<double>();
            snapshot.chain.config.hmc_step_size = cfg.at("hmc_step_size").get<double>();
            snapshot.chain.config.hmc_leapfrog_steps =
                cfg.at("hmc_leapfrog_steps").get<std::size_t>();
            snapshot.chain.seed = chain.at("seed").get<std::uint64_t>();
            snapshot.chain.accepted = chain.at("accepted").get<std::size_t>();
            snapshot.chain.proposed = chain.at("proposed").get<std::size_t>();
            snapshot.chain.accept_rate = chain.at("accept_rate").get<double>();
            snapshot.chain.samples =
                chain.at("samples").get<std::vector<std::vector<double>>>();
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::format, "snapshot is missing fields: " + std::string(e.what()));
    }

    // consistency checks
    const std::size_t n_params = snapshot.shape.parameter_count();
    if (snapshot.map_w) {
        if (snapshot.map_w->size() != n_params) {
            fail(ErrorKind::shape_mismatch, "snapshot MAP weights do not match the shape");
        }
    } else {
        if (snapshot.chain.samples.empty()) {
            fail(ErrorKind::format, "snapshot chain has no samples");
        }
        for (const auto& w : snapshot.chain.samples) {
            if (w.size() != n_params) {
                fail(ErrorKind::shape_mismatch, "snapshot sample does not match the shape");
            }
        }
    }
    if (snapshot.normalizer.means.size() != snapshot.spectral.n_features ||
        snapshot.normalizer.stds.size() != snapshot.spectral.n_features) {
        fail(ErrorKind::shape_mismatch, "snapshot normalizer does not match n_features");
    }
    if (snapshot.shape.n_inputs != snapshot.spectral.n_features) {
        fail(ErrorKind::shape_mismatch,
             "snapshot network input count does not match n_features");
    }
    return snapshot;
}

PredictiveSummary snapshot_predict(const ModelSnapshot& snapshot, std::span<const double> x) {
    if (snapshot.map_w) {
        return PredictiveSummary{forward(snapshot.shape, *snapshot.map_w, x), 0.0};
    }
    return posterior_predictive(snapshot.chain, snapshot.shape, x);
}

}  // namespace motorbnn
