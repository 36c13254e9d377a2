#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sl2lab/grid.hpp"
#include "sl2lab/measure.hpp"

namespace sl2lab {

// Thrown when a log-norm increment exceeds the overflow guard; signals a
// missing renormalization.
struct NumericalAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WalkConfig {
    ModelMeasure mu;
    int n_steps = 1;
    std::int64_t n_samples = 1;
    ProjPoint start;  // defaults to [1:0]
    std::uint64_t seed = 0;
    int renorm_every = 1;
    bool elementarity_override = false;
};

struct RunOptions {
    bool store_sigma = false;      // centered values sigma(S_n,x) - n*gamma_hat
    bool store_endpoints = false;  // S_n . x
    bool store_lognorm = false;    // log||S_n|| (explicit product path)
    int threads = 0;               // 0 = hardware concurrency
};

struct TrajectoryStats {
    double gamma_hat = 0.0;
    double gamma_se = 0.0;
    double var_hat = 0.0;  // estimate of a^2
    double var_se = 0.0;
    int n_steps = 0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> samples_sigma;
    std::optional<std::vector<ProjPoint>> samples_endpoint;
    std::optional<std::vector<double>> samples_lognorm;
};

// Simulates S_n = g_n ... g_1 over n_samples independent trajectories.
// sigma is accumulated incrementally through the cocycle identity; the
// matrices are never multiplied together unless store_lognorm is set.
// Results are bitwise deterministic given the config, regardless of the
// thread count.
TrajectoryStats run_walk(const WalkConfig& cfg, const RunOptions& opts = {});

// Per-sample values of log|<S_n v, w>| - n*gamma, computed stably as
// sigma(S_n,[v]) - n*gamma + log d(S_n [v], [w*]). Samples whose distance
// collapses below 1e-300 are recorded as -inf and counted separately.
struct CoefficientStats {
    std::vector<double> values;
    std::int64_t minus_inf_count = 0;
    double gamma_used = 0.0;
    std::vector<double> log_dist;       // the log d(S_n [v], [w*]) part, aligned
    std::vector<double> sigma_centered; // sigma(S_n,[v]) - n*gamma, aligned
};
CoefficientStats sample_coefficient_stat(const WalkConfig& cfg, cplx v0, cplx v1, cplx w0,
                                         cplx w1, std::optional<double> gamma = std::nullopt,
                                         int threads = 0);

// Per-sample pairs (log||S_n|| by renormalized matrix products,
// sigma(S_n, x) by the cocycle path). Requires n_samples <= 1000.
std::vector<std::pair<double, double>> lognorm_vs_cocycle(const WalkConfig& cfg,
                                                          int threads = 0);

// Furstenberg's formula cross-check: Monte Carlo gamma against the double
// integral of the cocycle over mu x nu for a stationary-measure
// approximation nu.
struct FurstenbergCheck {
    double lhs = 0.0;  // Monte Carlo gamma_hat
    double rhs = 0.0;  // sum_i nu_i sum_atoms w sigma_g(x_i)
    double gap = 0.0;
};
FurstenbergCheck furstenberg_crosscheck(const WalkConfig& cfg, const GridMeasure& nu,
                                        int threads = 0);

}  // namespace sl2lab
