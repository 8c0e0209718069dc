#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace motorbnn {

// Feed-forward classifier: tanh hidden layers, one sigmoid output unit.
struct NetworkShape {
    std::size_t n_inputs = 5;
    std::vector<std::size_t> hidden_layers{5};

    // [n_inputs, hidden..., 1]
    std::vector<std::size_t> layer_sizes() const;

    // sum of (fan_in + 1) * fan_out over layers
    std::size_t parameter_count() const;

    bool operator==(const NetworkShape&) const = default;
};

// Flattened weights, layer-major. Within a layer: the weight matrix row-major
// (one row per output unit), then the biases.
struct NetworkParams {
    std::vector<double> w;
    NetworkShape shape;
};

enum class Likelihood { bernoulli, gaussian };

struct ModelConfig {
    double lambda = 1.0;  // precision of the zero-mean Gaussian weight prior
    Likelihood likelihood = Likelihood::bernoulli;
};

struct Dataset {
    std::vector<std::vector<double>> x;
    std::vector<int> y;  // 0 or 1

    std::size_t size() const { return x.size(); }
};

// Likelihood probabilities are clamped into [kProbClamp, 1 - kProbClamp] so a
// mislabeled confident prediction cannot produce -inf.
inline constexpr double kProbClamp = 1e-12;

// Prior draw w_d ~ N(0, 1/lambda), reproducible from the seed.
NetworkParams init_from_prior(const NetworkShape& shape, double lambda, std::uint64_t seed);

double forward(const NetworkShape& shape, std::span<const double> w, std::span<const double> x);
double forward(const NetworkParams& params, std::span<const double> x);

double log_prior(const NetworkParams& params, const ModelConfig& cfg);
double log_likelihood(const NetworkParams& params, const Dataset& data, const ModelConfig& cfg);

// log_likelihood + log_prior: the unnormalized log-posterior.
double log_joint(const NetworkParams& params, const Dataset& data, const ModelConfig& cfg);

// Exact reverse-mode gradient of log_joint with respect to w.
std::vector<double> grad_log_joint(const NetworkParams& params, const Dataset& data,
                                   const ModelConfig& cfg);

struct MapResult {
    NetworkParams params;
    bool improved = true;  // final log_joint >= initial log_joint
    double initial_log_joint = 0.0;
    double final_log_joint = 0.0;
};

// Fixed-step gradient ascent on log_joint.
MapResult map_estimate(const Dataset& data, const ModelConfig& cfg, const NetworkShape& shape,
                       const NetworkParams& init, std::size_t steps, double learning_rate);

}  // namespace motorbnn
