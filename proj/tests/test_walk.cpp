#include <doctest.h>

#include <cmath>
#include <limits>

#include "sl2lab/stats.hpp"
#include "sl2lab/walk.hpp"

using namespace sl2lab;

namespace {

ModelMeasure reference_measure() {
    const GroupElement d = GroupElement::diagonal(2.0);
    return ModelMeasure::uniform({d, GroupElement::rotation(1.0) * d});
}

WalkConfig base_config(const ModelMeasure& mu) {
    WalkConfig cfg{mu, 100, 100, ProjPoint::of(1.0, 0.0), 12345, 1, true};
    return cfg;
}

}  // namespace

TEST_CASE("deterministic diagonal walk: gamma = log 2 exactly, variance 0") {
    WalkConfig cfg = base_config(ModelMeasure::dirac(GroupElement::diagonal(2.0)));
    cfg.n_steps = 1000;
    cfg.n_samples = 500;
    const TrajectoryStats stats = run_walk(cfg);
    CHECK(std::abs(stats.gamma_hat - std::log(2.0)) <= 1e-12);
    CHECK(stats.var_hat == 0.0);
    CHECK(stats.gamma_se == 0.0);
}

TEST_CASE("rotation walk: gamma = 0, variance 0") {
    WalkConfig cfg = base_config(ModelMeasure::dirac(GroupElement::rotation(1.0)));
    cfg.n_samples = 200;
    const TrajectoryStats stats = run_walk(cfg);
    CHECK(std::abs(stats.gamma_hat) <= 1e-12);
    CHECK(stats.var_hat <= 1e-24);
}

TEST_CASE("walk requires the screen or an override") {
    WalkConfig cfg = base_config(ModelMeasure::dirac(GroupElement::diagonal(2.0)));
    cfg.elementarity_override = false;
    CHECK_THROWS_AS(run_walk(cfg), std::invalid_argument);
    cfg.mu = reference_measure();
    CHECK_NOTHROW(run_walk(cfg));  // passes the screen without override
}

TEST_CASE("determinism: thread count does not change results") {
    WalkConfig cfg = base_config(reference_measure());
    cfg.n_steps = 200;
    cfg.n_samples = 2000;
    RunOptions one;
    one.threads = 1;
    one.store_sigma = true;
    RunOptions four;
    four.threads = 4;
    four.store_sigma = true;
    const TrajectoryStats a = run_walk(cfg, one);
    const TrajectoryStats b = run_walk(cfg, four);
    CHECK(a.gamma_hat == b.gamma_hat);
    CHECK(a.var_hat == b.var_hat);
    CHECK(*a.samples_sigma == *b.samples_sigma);
}

TEST_CASE("incremental cocycle equals the explicit product for short walks") {
    const ModelMeasure mu = reference_measure();
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        WalkConfig cfg = base_config(mu);
        cfg.seed = seed;
        cfg.n_steps = 30;
        cfg.n_samples = 16;
        RunOptions opts;
        opts.store_sigma = true;
        const TrajectoryStats stats = run_walk(cfg, opts);
        for (std::int64_t i = 0; i < cfg.n_samples; ++i) {
            Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
            Mat2 prod{};
            for (int s = 0; s < cfg.n_steps; ++s) prod = mu.sample(rng).mat() * prod;
            const cplx u0 = prod.a * cfg.start.v0() + prod.b * cfg.start.v1();
            const cplx u1 = prod.c * cfg.start.v0() + prod.d * cfg.start.v1();
            const double direct = 0.5 * std::log(std::norm(u0) + std::norm(u1));
            const double incremental =
                (*stats.samples_sigma)[i] + stats.gamma_hat * cfg.n_steps;
            CHECK(std::abs(direct - incremental) <= 1e-9);
        }
    }
}

TEST_CASE("renormalization cadence changes nothing; missing renorm aborts") {
    const ModelMeasure mu = ModelMeasure::dirac(GroupElement::diagonal(2.0));
    WalkConfig cfg = base_config(mu);
    cfg.n_steps = 2000;
    cfg.n_samples = 4;
    cfg.renorm_every = 500;  // ||v||^2 stays below overflow between flushes
    const TrajectoryStats ok = run_walk(cfg);
    CHECK(std::abs(ok.gamma_hat - std::log(2.0)) <= 1e-12);

    cfg.renorm_every = 2000;  // 2^2000 overflows before the only flush
    CHECK_THROWS_AS(run_walk(cfg), NumericalAbort);
}

TEST_CASE("reference measure gamma against a long-run ergodic oracle") {
    const ModelMeasure mu = reference_measure();
    // Oracle: single trajectory of 1e7 steps.
    double gamma_star = 0.0;
    {
        WalkConfig oracle = base_config(mu);
        oracle.seed = 999;
        oracle.n_steps = 10000000;
        oracle.n_samples = 1;
        gamma_star = run_walk(oracle).gamma_hat;
    }
    WalkConfig cfg = base_config(mu);
    cfg.seed = 7;
    cfg.n_steps = 2000;
    cfg.n_samples = 20000;
    const TrajectoryStats stats = run_walk(cfg);
    CHECK(stats.gamma_hat == doctest::Approx(gamma_star).epsilon(0.02));
    CHECK(std::abs(stats.gamma_hat - gamma_star) <=
          3.0 * stats.gamma_se + 3.0 * std::sqrt(stats.var_hat / 1e7));
    CHECK(stats.var_hat > 0.0);
}

TEST_CASE("lognorm_vs_cocycle: diagonal, rotation, and domination") {
    {
        WalkConfig cfg = base_config(ModelMeasure::dirac(GroupElement::diagonal(2.0)));
        cfg.n_steps = 50;
        cfg.n_samples = 8;
        for (const auto& [lognorm, sigma] : lognorm_vs_cocycle(cfg)) {
            CHECK(lognorm == doctest::Approx(50.0 * std::log(2.0)).epsilon(1e-12));
            CHECK(sigma == doctest::Approx(50.0 * std::log(2.0)).epsilon(1e-12));
        }
    }
    {
        WalkConfig cfg = base_config(ModelMeasure::dirac(GroupElement::rotation(1.0)));
        cfg.n_steps = 50;
        cfg.n_samples = 8;
        for (const auto& [lognorm, sigma] : lognorm_vs_cocycle(cfg)) {
            CHECK(std::abs(lognorm) <= 1e-10);
            CHECK(std::abs(sigma) <= 1e-10);
        }
    }
    {
        WalkConfig cfg = base_config(reference_measure());
        cfg.n_steps = 500;
        cfg.n_samples = 200;
        for (const auto& [lognorm, sigma] : lognorm_vs_cocycle(cfg)) {
            CHECK(lognorm >= sigma - 1e-9);
            CHECK((lognorm - sigma) / cfg.n_steps <= 0.05);
        }
    }
    WalkConfig big = base_config(reference_measure());
    big.n_samples = 2000;
    CHECK_THROWS_AS(lognorm_vs_cocycle(big), std::invalid_argument);
}

TEST_CASE("sample_coefficient_stat: one deterministic rotation step") {
    WalkConfig cfg = base_config(ModelMeasure::dirac(GroupElement::rotation(1.0)));
    cfg.n_steps = 1;
    cfg.n_samples = 32;
    const cplx v0 = 1.0, v1 = 0.0;
    const cplx w0 = std::polar(1.0, 0.3) * 0.6, w1 = std::polar(1.0, -1.1) * 0.8;
    const CoefficientStats cs = sample_coefficient_stat(cfg, v0, v1, w0, w1, 0.0);
    const Mat2 r = GroupElement::rotation(1.0).mat();
    const cplx rv0 = r.a * v0 + r.b * v1;
    const cplx rv1 = r.c * v0 + r.d * v1;
    const double expected =
        std::log(std::abs(rv0 * std::conj(w0) + rv1 * std::conj(w1)) /
                 std::sqrt(std::norm(w0) + std::norm(w1)));
    for (double value : cs.values) CHECK(value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(cs.minus_inf_count == 0);
}

TEST_CASE("sample_coefficient_stat records -inf when the coefficient vanishes") {
    // Identity walk keeps [1:0] fixed; w = [0:1] has w* = [1:0], so the
    // coefficient <S_n v, w> vanishes exactly.
    WalkConfig cfg = base_config(ModelMeasure::dirac(GroupElement::identity()));
    cfg.n_steps = 1;
    cfg.n_samples = 4;
    const CoefficientStats cs = sample_coefficient_stat(cfg, 1.0, 0.0, 0.0, 1.0, 0.0);
    CHECK(cs.minus_inf_count == 4);
    for (double v : cs.values) CHECK(v == -std::numeric_limits<double>::infinity());
}

TEST_CASE("batch standard errors shrink with sample size") {
    const ModelMeasure mu = reference_measure();
    WalkConfig small = base_config(mu);
    small.n_steps = 100;
    small.n_samples = 1000;
    WalkConfig large = small;
    large.n_samples = 16000;
    const double se_small = run_walk(small).gamma_se;
    const double se_large = run_walk(large).gamma_se;
    CHECK(se_large < se_small);
    CHECK(se_large > 0.0);
}
