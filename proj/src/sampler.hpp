#pragma once

#include "model.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace motorbnn {

enum class Algorithm { rwm, hmc };

struct ChainConfig {
    std::size_t n_steps = 4000;
    std::size_t burn_in = 2000;
    std::size_t thin = 10;
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::hmc;
    double rwm_scale = 0.05;           // per-coordinate proposal stddev
    double hmc_step_size = 0.01;
    std::size_t hmc_leapfrog_steps = 20;
};

using LogDensityFn = std::function<double(const std::vector<double>&)>;
using GradFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct PosteriorChain {
    std::vector<std::vector<double>> samples;  // post burn-in, thinned
    std::size_t accepted = 0;
    std::size_t proposed = 0;
    double accept_rate = 0.0;
    std::uint64_t seed = 0;
    ChainConfig config;
};

// Symmetric Gaussian-step Metropolis. Deterministic given the seed.
PosteriorChain rwm_sample(const LogDensityFn& log_density, const std::vector<double>& init,
                          const ChainConfig& cfg);

// Leapfrog integration with unit mass matrix, Metropolis accept on the
// total-energy error. A non-finite trajectory rejects that proposal; if more
// than 90% of the steps diverge the chain aborts.
PosteriorChain hmc_sample(const LogDensityFn& log_density, const GradFn& grad_log_density,
                          const std::vector<double>& init, const ChainConfig& cfg);

// Dispatches on cfg.algorithm.
PosteriorChain sample_posterior(const LogDensityFn& log_density, const GradFn& grad_log_density,
                                const std::vector<double>& init, const ChainConfig& cfg);

// Integrates Hamiltonian dynamics in place; returns false if a non-finite
// gradient or state was encountered.
bool leapfrog(const GradFn& grad_log_density, std::vector<double>& position,
              std::vector<double>& momentum, double step_size, std::size_t n_steps);

struct PredictiveSummary {
    double mean = 0.0;
    double stddev = 0.0;
};

// Monte-Carlo average of `predict` over the retained samples.
PredictiveSummary posterior_predictive(
    const PosteriorChain& chain,
    const std::function<double(const std::vector<double>&)>& predict);

// Posterior-predictive probability for a network input.
PredictiveSummary posterior_predictive(const PosteriorChain& chain, const NetworkShape& shape,
                                       std::span<const double> x);

struct Classification {
    int label = 0;  // 1 = faulty
    PredictiveSummary confidence;
};

// label = 1 iff the predictive mean >= threshold (a tie counts as faulty).
Classification classify(const PosteriorChain& chain, const NetworkShape& shape,
                        std::span<const double> x, double threshold = 0.5);

}  // namespace motorbnn
