#include "sampler.hpp"

#include "errors.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace motorbnn {

namespace {

void check_config(const ChainConfig& cfg) {
    if (cfg.n_steps == 0) {
        fail(ErrorKind::invalid_argument, "chain needs at least one step");
    }
    if (cfg.burn_in >= cfg.n_steps) {
        fail(ErrorKind::invalid_argument, "burn_in must be smaller than n_steps");
    }
    if (cfg.thin == 0) {
        fail(ErrorKind::invalid_argument, "thin must be at least 1");
    }
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void maybe_retain(PosteriorChain& chain, const std::vector<double>& state, std::size_t step,
                  const ChainConfig& cfg) {
    if (step >= cfg.burn_in && (step - cfg.burn_in) % cfg.thin == 0) {
        chain.samples.push_back(state);
    }
}

}  // namespace

PosteriorChain rwm_sample(const LogDensityFn& log_density, const std::vector<double>& init,
                          const ChainConfig& cfg) {
    check_config(cfg);
    if (init.empty()) {
        fail(ErrorKind::invalid_argument, "initial state is empty");
    }

    Rng rng(cfg.seed);
    std::vector<double> current = init;
    double current_ld = log_density(current);
    if (!std::isfinite(current_ld)) {
        fail(ErrorKind::divergence, "log density is not finite at the chain start");
    }

    PosteriorChain chain;
    chain.seed = cfg.seed;
    chain.config = cfg;

    std::vector<double> proposal(current.size());
    for (std::size_t step = 0; step < cfg.n_steps; ++step) {
        for (std::size_t d = 0; d < current.size(); ++d) {
            proposal[d] = current[d] + cfg.rwm_scale * rng.normal();
        }
        const double proposal_ld = log_density(proposal);
        ++chain.proposed;
        const double u = rng.uniform();
        if (std::isfinite(proposal_ld) && u < std::exp(proposal_ld - current_ld)) {
            current = proposal;
            current_ld = proposal_ld;
            ++chain.accepted;
        }
        maybe_retain(chain, current, step, cfg);
    }
    chain.accept_rate = static_cast<double>(chain.accepted) / static_cast<double>(chain.proposed);
    return chain;
}

bool leapfrog(const GradFn& grad_log_density, std::vector<double>& position,
              std::vector<double>& momentum, double step_size, std::size_t n_steps) {
    std::vector<double> grad = grad_log_density(position);
    if (!all_finite(grad)) {
        return false;
    }
    for (std::size_t step = 0; step < n_steps; ++step) {
        for (std::size_t d = 0; d < position.size(); ++d) {
            momentum[d] += 0.5 * step_size * grad[d];
            position[d] += step_size * momentum[d];
        }
        grad = grad_log_density(position);
        if (!all_finite(grad) || !all_finite(position)) {
            return false;
        }
        for (std::size_t d = 0; d < position.size(); ++d) {
            momentum[d] += 0.5 * step_size * grad[d];
        }
    }
    return all_finite(momentum);
}

PosteriorChain hmc_sample(const LogDensityFn& log_density, const GradFn& grad_log_density,
                          const std::vector<double>& init, const ChainConfig& cfg) {
    check_config(cfg);
    if (init.empty()) {
        fail(ErrorKind::invalid_argument, "initial state is empty");
    }

    Rng rng(cfg.seed);
    std::vector<double> current = init;
    double current_ld = log_density(current);
    if (!std::isfinite(current_ld)) {
        fail(ErrorKind::divergence, "log density is not finite at the chain start");
    }

    PosteriorChain chain;
    chain.seed = cfg.seed;
    chain.config = cfg;

    const std::size_t dim = current.size();
    std::vector<double> momentum(dim);
    std::size_t divergent = 0;

    for (std::size_t step = 0; step < cfg.n_steps; ++step) {
        double kinetic0 = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            momentum[d] = rng.normal();
            kinetic0 += 0.5 * momentum[d] * momentum[d];
        }
        const double energy0 = -current_ld + kinetic0;

        std::vector<double> position = current;
        const bool ok =
            leapfrog(grad_log_density, position, momentum, cfg.hmc_step_size,
                     cfg.hmc_leapfrog_steps);
        ++chain.proposed;
        const double u = rng.uniform();

        bool accepted = false;
        if (ok) {
            const double proposal_ld = log_density(position);
            double kinetic1 = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                kinetic1 += 0.5 * momentum[d] * momentum[d];
            }
            const double energy1 = -proposal_ld + kinetic1;
            if (std::isfinite(energy1)) {
                if (u < std::exp(energy0 - energy1)) {
                    current = std::move(position);
                    current_ld = proposal_ld;
                    accepted = true;
                }
            } else {
                ++divergent;
            }
        } else {
            ++divergent;
        }
        if (accepted) {
            ++chain.accepted;
        }
        maybe_retain(chain, current, step, cfg);
    }

    if (static_cast<double>(divergent) > 0.9 * static_cast<double>(cfg.n_steps)) {
        fail(ErrorKind::divergence,
             std::to_string(divergent) + " of " + std::to_string(cfg.n_steps) +
                 " HMC proposals diverged");
    }
    chain.accept_rate = static_cast<double>(chain.accepted) / static_cast<double>(chain.proposed);
    return chain;
}

PosteriorChain sample_posterior(const LogDensityFn& log_density, const GradFn& grad_log_density,
                                const std::vector<double>& init, const ChainConfig& cfg) {
    if (cfg.algorithm == Algorithm::rwm) {
        return rwm_sample(log_density, init, cfg);
    }
    return hmc_sample(log_density, grad_log_density, init, cfg);
}

PredictiveSummary posterior_predictive(
    const PosteriorChain& chain,
    const std::function<double(const std::vector<double>&)>& predict) {
    if (chain.samples.empty()) {
        fail(ErrorKind::invalid_argument, "chain has no retained samples");
    }
    // Welford's online moments: exact zero spread for identical samples
    const std::size_t n = chain.samples.size();
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const double v = predict(chain.samples[s]);
        const double delta = v - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (v - mean);
    }
    const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    return PredictiveSummary{mean, std::sqrt(var)};
}

PredictiveSummary posterior_predictive(const PosteriorChain& chain, const NetworkShape& shape,
                                       std::span<const double> x) {
    return posterior_predictive(chain, [&](const std::vector<double>& w) {
        return forward(shape, w, x);
    });
}

Classification classify(const PosteriorChain& chain, const NetworkShape& shape,
                        std::span<const double> x, double threshold) {
    Classification result;
    result.confidence = posterior_predictive(chain, shape, x);
    result.label = result.confidence.mean >= threshold ? 1 : 0;
    return result;
}

}  // namespace motorbnn
