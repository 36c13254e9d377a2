#include "sl2lab/walk.hpp"

#include <cmath>
#include <limits>

#include "sl2lab/parallel.hpp"
#include "sl2lab/stats.hpp"

namespace sl2lab {

namespace {

constexpr double kIncrementGuard = 700.0;

void validate(const WalkConfig& cfg) {
    if (cfg.n_steps < 1 || cfg.n_samples < 1 || cfg.renorm_every < 1) {
        throw std::invalid_argument("WalkConfig: n_steps, n_samples, renorm_every must be >= 1");
    }
    if (!cfg.elementarity_override) {
        const ElementarityReport rep = screen_elementarity(cfg.mu, 4);
        if (!rep.likely_non_elementary) {
            throw std::invalid_argument(
                "walk: measure failed the non-elementarity screen; set the override to proceed. " +
                rep.evidence);
        }
    }
}

// One trajectory: returns sigma(S_n, x) and the endpoint. The projective
// vector is renormalized every `renorm_every` steps; the accumulated log
// norms are exactly the cocycle increments.
struct StepResult {
    double sigma;
    cplx e0, e1;
};

StepResult run_one(const ModelMeasure& mu, const ProjPoint& start, int n_steps, int renorm_every,
                   Rng& rng) {
    cplx v0 = start.v0(), v1 = start.v1();
    KahanSum sigma;
    int since_renorm = 0;
    for (int step = 0; step < n_steps; ++step) {
        const Mat2& m = mu.sample(rng).mat();
        const cplx u0 = m.a * v0 + m.b * v1;
        const cplx u1 = m.c * v0 + m.d * v1;
        v0 = u0;
        v1 = u1;
        if (++since_renorm >= renorm_every || step + 1 == n_steps) {
            const double n2 = std::norm(v0) + std::norm(v1);
            const double inc = 0.5 * std::log(n2);
            if (!(std::abs(inc) <= kIncrementGuard)) {
                throw NumericalAbort("walk: log-norm increment exceeded 700; renormalization missing");
            }
            sigma.add(inc);
            const double inv = 1.0 / std::sqrt(n2);
            v0 *= inv;
            v1 *= inv;
            since_renorm = 0;
        }
    }
    return {sigma.value(), v0, v1};
}

}  // namespace

TrajectoryStats run_walk(const WalkConfig& cfg, const RunOptions& opts) {
    validate(cfg);
    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<double> sigmas(n);
    std::vector<ProjPoint> endpoints(opts.store_endpoints ? n : 0);

    const int threads = opts.threads > 0 ? opts.threads : default_threads();
    parallel_chunks(n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Rng rng(cfg.seed, i);
            const StepResult r = run_one(cfg.mu, cfg.start, cfg.n_steps, cfg.renorm_every, rng);
            sigmas[i] = r.sigma;
            if (opts.store_endpoints) endpoints[i] = ProjPoint::of(r.e0, r.e1);
        }
    });

    TrajectoryStats stats;
    stats.n_steps = cfg.n_steps;
    stats.n_samples = cfg.n_samples;
    stats.seed = cfg.seed;

    const double inv_n = 1.0 / static_cast<double>(cfg.n_steps);
    const double mean_sigma = compensated_mean(sigmas);
    stats.gamma_hat = mean_sigma * inv_n;
    stats.var_hat = sample_variance(sigmas) * inv_n;

    // Standard errors via batch means over 100 contiguous batches.
    {
        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = sigmas[i] * inv_n;
        stats.gamma_se = batch_se(scaled);
        const int b = static_cast<int>(std::min<std::size_t>(100, n));
        if (b >= 2) {
            std::vector<double> bvars(b);
            for (int k = 0; k < b; ++k) {
                const std::size_t klo = n * k / b, khi = n * (k + 1) / b;
                bvars[k] =
                    sample_variance(std::span<const double>(sigmas).subspan(klo, khi - klo)) * inv_n;
            }
            stats.var_se = std::sqrt(sample_variance(bvars) / b);
        }
    }

    if (opts.store_sigma) {
        std::vector<double> centered(n);
        const double shift = stats.gamma_hat * static_cast<double>(cfg.n_steps);
        for (std::size_t i = 0; i < n; ++i) centered[i] = sigmas[i] - shift;
        stats.samples_sigma = std::move(centered);
    }
    if (opts.store_endpoints) stats.samples_endpoint = std::move(endpoints);

    if (opts.store_lognorm) {
        if (cfg.n_samples > 1000) {
            throw std::invalid_argument("store_lognorm requires n_samples <= 1000");
        }
        std::vector<double> lognorms(n);
        parallel_chunks(n, threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                Rng rng(cfg.seed, i);
                Mat2 prod{};
                KahanSum acc;
                for (int step = 0; step < cfg.n_steps; ++step) {
                    prod = cfg.mu.sample(rng).mat() * prod;
                    const double nrm = opnorm2x2(prod);
                    const double inc = std::log(nrm);
                    if (!(std::abs(inc) <= kIncrementGuard)) {
                        throw NumericalAbort("lognorm: increment exceeded 700");
                    }
                    acc.add(inc);
                    const cplx inv = 1.0 / nrm;
                    prod = inv * prod;
                }
                lognorms[i] = acc.value();
            }
        });
        stats.samples_lognorm = std::move(lognorms);
    }
    return stats;
}

CoefficientStats sample_coefficient_stat(const WalkConfig& cfg, cplx v0, cplx v1, cplx w0, cplx w1,
                                         std::optional<double> gamma, int threads_in) {
    validate(cfg);
    const ProjPoint xv = ProjPoint::of(v0, v1);
    const ProjPoint wstar = dual_point(w0, w1);

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<double> sigmas(n), logd(n);
    const int threads = threads_in > 0 ? threads_in : default_threads();
    parallel_chunks(n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Rng rng(cfg.seed, i);
            const StepResult r = run_one(cfg.mu, xv, cfg.n_steps, cfg.renorm_every, rng);
            sigmas[i] = r.sigma;
            const double d = std::abs(r.e0 * wstar.v1() - r.e1 * wstar.v0());
            logd[i] = std::log(d);
        }
    });

    CoefficientStats out;
    out.gamma_used = gamma ? *gamma : compensated_mean(sigmas) / static_cast<double>(cfg.n_steps);
    const double shift = out.gamma_used * static_cast<double>(cfg.n_steps);
    out.values.resize(n);
    out.sigma_centered.resize(n);
    const double floor_log = std::log(1e-300);
    for (std::size_t i = 0; i < n; ++i) {
        out.sigma_centered[i] = sigmas[i] - shift;
        if (!(logd[i] > floor_log)) {
            out.values[i] = -std::numeric_limits<double>::infinity();
            ++out.minus_inf_count;
        } else {
            out.values[i] = out.sigma_centered[i] + logd[i];
        }
    }
    out.log_dist = std::move(logd);
    return out;
}

FurstenbergCheck furstenberg_crosscheck(const WalkConfig& cfg, const GridMeasure& nu,
                                        int threads) {
    FurstenbergCheck out;
    out.lhs = run_walk(cfg, {.threads = threads}).gamma_hat;
    KahanSum rhs;
    const ProjGrid& grid = *nu.grid();
    for (std::size_t idx = 0; idx < nu.masses().size(); ++idx) {
        const double m = nu.masses()[idx];
        if (m == 0.0) continue;
        const ProjPoint& x = grid.node_point(idx);
        double s = 0.0;
        for (const Atom& a : cfg.mu.atoms()) s += a.weight * cocycle(a.g, x);
        rhs.add(m * s);
    }
    out.rhs = rhs.value();
    out.gap = std::abs(out.lhs - out.rhs);
    return out;
}

std::vector<std::pair<double, double>> lognorm_vs_cocycle(const WalkConfig& cfg, int threads) {
    if (cfg.n_samples > 1000) {
        throw std::invalid_argument("lognorm_vs_cocycle: n_samples must be <= 1000");
    }
    RunOptions opts;
    opts.store_sigma = true;
    opts.store_lognorm = true;
    opts.threads = threads;
    const TrajectoryStats stats = run_walk(cfg, opts);
    const double shift = stats.gamma_hat * static_cast<double>(cfg.n_steps);
    std::vector<std::pair<double, double>> pairs(stats.samples_sigma->size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        pairs[i] = {(*stats.samples_lognorm)[i], (*stats.samples_sigma)[i] + shift};
    }
    return pairs;
}

}  // namespace sl2lab
