#include "model.hpp"

#include "errors.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace motorbnn {

std::vector<std::size_t> NetworkShape::layer_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(hidden_layers.size() + 2);
    sizes.push_back(n_inputs);
    sizes.insert(sizes.end(), hidden_layers.begin(), hidden_layers.end());
    sizes.push_back(1);
    return sizes;
}

std::size_t NetworkShape::parameter_count() const {
    const auto sizes = layer_sizes();
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        total += (sizes[l] + 1) * sizes[l + 1];
    }
    return total;
}

namespace {

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// keeps the output strictly inside (0, 1) even where sigmoid saturates
double clamp_open_unit(double p) {
    constexpr double lo = std::numeric_limits<double>::min();
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return std::clamp(p, lo, hi);
}

void check_dims(const NetworkShape& shape, std::span<const double> w, std::span<const double> x) {
    if (x.size() != shape.n_inputs) {
        fail(ErrorKind::shape_mismatch,
             "input has " + std::to_string(x.size()) + " features, network expects " +
                 std::to_string(shape.n_inputs));
    }
    if (w.size() != shape.parameter_count()) {
        fail(ErrorKind::shape_mismatch,
             "weight vector has " + std::to_string(w.size()) + " entries, shape needs " +
                 std::to_string(shape.parameter_count()));
    }
}

// Activations of every layer (input included); activations.back() is the
// single pre-sigmoid output.
struct Trace {
    std::vector<std::vector<double>> activations;
    double output_z = 0.0;
    double probability = 0.0;
};

Trace forward_trace(const NetworkShape& shape, std::span<const double> w,
                    std::span<const double> x) {
    const auto sizes = shape.layer_sizes();
    Trace trace;
    trace.activations.reserve(sizes.size());
    trace.activations.emplace_back(x.begin(), x.end());

    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const std::size_t fan_in = sizes[l];
        const std::size_t fan_out = sizes[l + 1];
        const bool last = l + 2 == sizes.size();
        const auto& prev = trace.activations.back();
        std::vector<double> next(fan_out);
        const double* weights = w.data() + offset;
        const double* biases = weights + fan_in * fan_out;
        for (std::size_t u = 0; u < fan_out; ++u) {
            double z = biases[u];
            const double* row = weights + u * fan_in;
            for (std::size_t i = 0; i < fan_in; ++i) {
                z += row[i] * prev[i];
            }
            next[u] = last ? z : std::tanh(z);
        }
        offset += (fan_in + 1) * fan_out;
        if (last) {
            trace.output_z = next[0];
        }
        trace.activations.push_back(std::move(next));
    }
    trace.probability = clamp_open_unit(sigmoid(trace.output_z));
    return trace;
}

void check_data(const Dataset& data, const NetworkShape& shape) {
    if (data.size() == 0) {
        fail(ErrorKind::invalid_argument, "dataset is empty");
    }
    if (data.y.size() != data.x.size()) {
        fail(ErrorKind::shape_mismatch, "dataset has mismatched x/y lengths");
    }
    for (const auto& xi : data.x) {
        if (xi.size() != shape.n_inputs) {
            fail(ErrorKind::shape_mismatch, "dataset feature dimension does not match network");
        }
    }
}

}  // namespace

NetworkParams init_from_prior(const NetworkShape& shape, double lambda, std::uint64_t seed) {
    if (!(lambda > 0.0)) {
        fail(ErrorKind::invalid_argument, "prior precision lambda must be positive");
    }
    Rng rng(seed);
    NetworkParams params;
    params.shape = shape;
    params.w.resize(shape.parameter_count());
    const double scale = 1.0 / std::sqrt(lambda);
    for (double& wd : params.w) {
        wd = scale * rng.normal();
    }
    return params;
}

double forward(const NetworkShape& shape, std::span<const double> w, std::span<const double> x) {
    check_dims(shape, w, x);
    return forward_trace(shape, w, x).probability;
}

double forward(const NetworkParams& params, std::span<const double> x) {
    return forward(params.shape, params.w, x);
}

double log_prior(const NetworkParams& params, const ModelConfig& cfg) {
    const double lambda = cfg.lambda;
    if (!(lambda > 0.0)) {
        fail(ErrorKind::invalid_argument, "prior precision lambda must be positive");
    }
    const double norm = -0.5 * std::log(2.0 * std::numbers::pi / lambda);
    double total = 0.0;
    for (double wd : params.w) {
        total += norm - 0.5 * lambda * wd * wd;
    }
    return total;
}

double log_likelihood(const NetworkParams& params, const Dataset& data, const ModelConfig& cfg) {
    check_data(data, params.shape);
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double p = forward(params.shape, params.w, data.x[i]);
        const double y = static_cast<double>(data.y[i]);
        if (cfg.likelihood == Likelihood::bernoulli) {
            const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
            total += y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc);
        } else {
            const double r = y - p;
            total += -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * r * r;
        }
    }
    return total;
}

double log_joint(const NetworkParams& params, const Dataset& data, const ModelConfig& cfg) {
    return log_likelihood(params, data, cfg) + log_prior(params, cfg);
}

std::vector<double> grad_log_joint(const NetworkParams& params, const Dataset& data,
                                   const ModelConfig& cfg) {
    check_data(data, params.shape);
    const auto sizes = params.shape.layer_sizes();
    std::span<const double> w(params.w);
    check_dims(params.shape, w, data.x[0]);

    std::vector<double> grad(params.w.size(), 0.0);
    std::vector<std::size_t> offsets(sizes.size() - 1);
    {
        std::size_t off = 0;
        for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
            offsets[l] = off;
            off += (sizes[l] + 1) * sizes[l + 1];
        }
    }

    for (std::size_t i = 0; i < data.size(); ++i) {
        const Trace trace = forward_trace(params.shape, w, data.x[i]);
        const double p = trace.probability;
        const double y = static_cast<double>(data.y[i]);

        // dl/dz at the output unit
        double delta_out;
        if (cfg.likelihood == Likelihood::bernoulli) {
            // the clamp freezes the likelihood outside [kProbClamp, 1-kProbClamp]
            delta_out = (p <= kProbClamp || p >= 1.0 - kProbClamp) ? 0.0 : (y - p);
        } else {
            delta_out = (y - p) * p * (1.0 - p);
        }

        std::vector<double> delta{delta_out};
        for (std::size_t l = sizes.size() - 1; l-- > 0;) {
            const std::size_t fan_in = sizes[l];
            const std::size_t fan_out = sizes[l + 1];
            const auto& prev = trace.activations[l];
            const double* weights = params.w.data() + offsets[l];
            double* gw = grad.data() + offsets[l];
            double* gb = gw + fan_in * fan_out;
            for (std::size_t u = 0; u < fan_out; ++u) {
                const double d = delta[u];
                double* grow = gw + u * fan_in;
                for (std::size_t j = 0; j < fan_in; ++j) {
                    grow[j] += d * prev[j];
                }
                gb[u] += d;
            }
            if (l == 0) {
                break;
            }
            // propagate through the tanh of layer l
            std::vector<double> next_delta(fan_in, 0.0);
            for (std::size_t j = 0; j < fan_in; ++j) {
                double acc = 0.0;
                for (std::size_t u = 0; u < fan_out; ++u) {
                    acc += delta[u] * weights[u * fan_in + j];
                }
                const double a = prev[j];
                next_delta[j] = acc * (1.0 - a * a);
            }
            delta = std::move(next_delta);
        }
    }

    for (std::size_t d = 0; d < grad.size(); ++d) {
        grad[d] -= cfg.lambda * params.w[d];
    }
    return grad;
}

MapResult map_estimate(const Dataset& data, const ModelConfig& cfg, const NetworkShape& shape,
                       const NetworkParams& init, std::size_t steps, double learning_rate) {
    if (steps == 0) {
        fail(ErrorKind::invalid_argument, "map_estimate needs at least one step");
    }
    if (init.shape != shape || init.w.size() != shape.parameter_count()) {
        fail(ErrorKind::shape_mismatch, "initial parameters do not match the requested shape");
    }
    MapResult result;
    result.params = init;
    result.initial_log_joint = log_joint(result.params, data, cfg);

    for (std::size_t step = 0; step < steps; ++step) {
        const auto grad = grad_log_joint(result.params, data, cfg);
        for (std::size_t d = 0; d < grad.size(); ++d) {
            if (!std::isfinite(grad[d])) {
                fail(ErrorKind::divergence,
                     "non-finite gradient at step " + std::to_string(step));
            }
            result.params.w[d] += learning_rate * grad[d];
        }
    }

    result.final_log_joint = log_joint(result.params, data, cfg);
    result.improved = result.final_log_joint >= result.initial_log_joint;
    return result;
}

}  // namespace motorbnn
