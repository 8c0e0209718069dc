#pragma once

#include "experiment.hpp"
#include "synthetic.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace motorbnn {

// One configuration file drives every command. Unknown keys are rejected;
// absent keys take the defaults below (burn_in defaults to n_steps / 2).
struct RunConfig {
    SpectralConfig spectral;
    std::vector<std::size_t> hidden_layers{5};
    ModelConfig model;
    ChainConfig chain;
    std::optional<std::size_t> burn_in;  // explicit override of n_steps / 2
    ExperimentConfig experiment;
    SynthConfig synthetic;

    ChainConfig chain_config() const {
        ChainConfig cfg = chain;
        cfg.burn_in = burn_in.value_or(cfg.n_steps / 2);
        return cfg;
    }

    BnnSetup bnn_setup() const { return BnnSetup{hidden_layers, model, chain_config()}; }
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_json(const RunConfig& cfg);

// Sets one scalar by dotted path, e.g. ("experiment.trials", "20"). The value
// is parsed as integer, number, boolean or string to match the existing key.
void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

}  // namespace motorbnn
