#include "run_config.hpp"

#include "errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace motorbnn {

namespace {

using nlohmann::json;

void expect_keys(const json& obj, const std::string& section,
                 const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        fail(ErrorKind::config, "config section '" + section + "' must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            const std::string where = section.empty() ? key : section + "." + key;
            fail(ErrorKind::config, "unknown config key '" + where + "'");
        }
    }
}

template <typename T>
void read_into(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) {
        return;
    }
    try {
        obj.at(key).get_to(out);
    } catch (const json::exception&) {
        fail(ErrorKind::config, std::string("config key '") + key + "' has the wrong type");
    }
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "rwm") {
        return Algorithm::rwm;
    }
    if (name == "hmc") {
        return Algorithm::hmc;
    }
    fail(ErrorKind::config, "chain.algorithm must be 'rwm' or 'hmc', got '" + name + "'");
}

Likelihood parse_likelihood(const std::string& name) {
    if (name == "bernoulli") {
        return Likelihood::bernoulli;
    }
    if (name == "gaussian") {
        return Likelihood::gaussian;
    }
    fail(ErrorKind::config,
         "model.likelihood must be 'bernoulli' or 'gaussian', got '" + name + "'");
}

RunConfig from_json(const json& j) {
    RunConfig cfg;
    expect_keys(j, "", {"spectral", "model", "chain", "experiment", "synthetic"});

    if (j.contains("spectral")) {
        const auto& s = j.at("spectral");
        expect_keys(s, "spectral", {"window_seconds", "band_lo_hz", "band_hi_hz", "n_features"});
        read_into(s, "window_seconds", cfg.spectral.window_seconds);
        read_into(s, "band_lo_hz", cfg.spectral.band_lo_hz);
        read_into(s, "band_hi_hz", cfg.spectral.band_hi_hz);
        read_into(s, "n_features", cfg.spectral.n_features);
    }
    if (j.contains("model")) {
        const auto& m = j.at("model");
        expect_keys(m, "model", {"lambda", "likelihood", "hidden_layers"});
        read_into(m, "lambda", cfg.model.lambda);
        read_into(m, "hidden_layers", cfg.hidden_layers);
        if (m.contains("likelihood")) {
            std::string name;
            read_into(m, "likelihood", name);
            cfg.model.likelihood = parse_likelihood(name);
        }
    }
    if (j.contains("chain")) {
        const auto& c = j.at("chain");
        expect_keys(c, "chain",
                    {"algorithm", "n_steps", "burn_in", "thin", "rwm_scale", "hmc_step_size",
                     "hmc_leapfrog_steps"});
        if (c.contains("algorithm")) {
            std::string name;
            read_into(c, "algorithm", name);
            cfg.chain.algorithm = parse_algorithm(name);
        }
        read_into(c, "n_steps", cfg.chain.n_steps);
        if (c.contains("burn_in") && !c.at("burn_in").is_null()) {
            std::size_t burn = 0;
            read_into(c, "burn_in", burn);
            cfg.burn_in = burn;
        }
        read_into(c, "thin", cfg.chain.thin);
        read_into(c, "rwm_scale", cfg.chain.rwm_scale);
        read_into(c, "hmc_step_size", cfg.chain.hmc_step_size);
        read_into(c, "hmc_leapfrog_steps", cfg.chain.hmc_leapfrog_steps);
    }
    if (j.contains("experiment")) {
        const auto& e = j.at("experiment");
        expect_keys(e, "experiment",
                    {"trials", "train_ratio", "base_seed", "threshold", "jobs"});
        read_into(e, "trials", cfg.experiment.n_trials);
        read_into(e, "train_ratio", cfg.experiment.train_ratio);
        read_into(e, "base_seed", cfg.experiment.base_seed);
        read_into(e, "threshold", cfg.experiment.threshold);
        read_into(e, "jobs", cfg.experiment.jobs);
    }
    if (j.contains("synthetic")) {
        const auto& s = j.at("synthetic");
        expect_keys(s, "synthetic",
                    {"n_per_class", "sample_rate", "duration_seconds", "seed",
                     "base_frequency_hz", "n_harmonics"});
        read_into(s, "n_per_class", cfg.synthetic.n_per_class);
        read_into(s, "sample_rate", cfg.synthetic.sample_rate);
        read_into(s, "duration_seconds", cfg.synthetic.duration_seconds);
        read_into(s, "seed", cfg.synthetic.seed);
        read_into(s, "base_frequency_hz", cfg.synthetic.base_frequency_hz);
        read_into(s, "n_harmonics", cfg.synthetic.n_harmonics);
    }

    // sanity limits that every command relies on
    if (cfg.spectral.n_features == 0) {
        fail(ErrorKind::config, "spectral.n_features must be at least 1");
    }
    if (!(cfg.model.lambda > 0.0)) {
        fail(ErrorKind::config, "model.lambda must be positive");
    }
    if (cfg.chain.n_steps == 0) {
        fail(ErrorKind::config, "chain.n_steps must be at least 1");
    }
    if (cfg.burn_in && *cfg.burn_in >= cfg.chain.n_steps) {
        fail(ErrorKind::config, "chain.burn_in must be smaller than chain.n_steps");
    }
    if (cfg.experiment.n_trials == 0) {
        fail(ErrorKind::config, "experiment.trials must be at least 1");
    }
    return cfg;
}

json to_json(const RunConfig& cfg) {
    json j;
    j["spectral"] = {{"window_seconds", cfg.spectral.window_seconds},
                     {"band_lo_hz", cfg.spectral.band_lo_hz},
                     {"band_hi_hz", cfg.spectral.band_hi_hz},
                     {"n_features", cfg.spectral.n_features}};
    j["model"] = {{"lambda", cfg.model.lambda},
                  {"likelihood",
                   cfg.model.likelihood == Likelihood::bernoulli ? "bernoulli" : "gaussian"},
                  {"hidden_layers", cfg.hidden_layers}};
    j["chain"] = {{"algorithm", cfg.chain.algorithm == Algorithm::rwm ? "rwm" : "hmc"},
                  {"n_steps", cfg.chain.n_steps},
                  {"burn_in", cfg.burn_in ? json(*cfg.burn_in) : json(nullptr)},
                  {"thin", cfg.chain.thin},
                  {"rwm_scale", cfg.chain.rwm_scale},
                  {"hmc_step_size", cfg.chain.hmc_step_size},
                  {"hmc_leapfrog_steps", cfg.chain.hmc_leapfrog_steps}};
    j["experiment"] = {{"trials", cfg.experiment.n_trials},
                       {"train_ratio", cfg.experiment.train_ratio},
                       {"base_seed", cfg.experiment.base_seed},
                       {"threshold", cfg.experiment.threshold},
                       {"jobs", cfg.experiment.jobs}};
    j["synthetic"] = {{"n_per_class", cfg.synthetic.n_per_class},
                      {"sample_rate", cfg.synthetic.sample_rate},
                      {"duration_seconds", cfg.synthetic.duration_seconds},
                      {"seed", cfg.synthetic.seed},
                      {"base_frequency_hz", cfg.synthetic.base_frequency_hz},
                      {"n_harmonics", cfg.synthetic.n_harmonics}};
    return j;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded()) {
        fail(ErrorKind::config, "config is not valid JSON");
    }
    return from_json(j);
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::io, "cannot open config: " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_run_config(text.str());
    } catch (const Error& e) {
        fail(e.kind(), path.string() + ": " + e.what());
    }
}

std::string run_config_json(const RunConfig& cfg) {
    return to_json(cfg).dump(2) + "\n";
}

void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
    json j = to_json(cfg);

    json* node = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted_key.find('.', start);
        const std::string part = dotted_key.substr(start, dot - start);
        if (!node->is_object() || !node->contains(part)) {
            fail(ErrorKind::config, "unknown config key '" + dotted_key + "'");
        }
        node = &(*node)[part];
        if (dot == std::string::npos) {
            break;
        }
        start = dot + 1;
    }

    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded() || parsed.is_object() || parsed.is_array()) {
        parsed = value;  // treat as a plain string
    }
    *node = parsed;
    cfg = from_json(j);
}

}  // namespace motorbnn
