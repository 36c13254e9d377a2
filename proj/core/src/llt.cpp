#include "sl2lab/llt.hpp"

#include <cmath>

#include "sl2lab/stats.hpp"

namespace sl2lab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double gaussian_reference(double t, double a, int n) {
    if (!(a > 0.0) || n < 1) throw std::invalid_argument("gaussian_reference: need a > 0, n >= 1");
    return std::exp(-t * t / (2.0 * a * a * static_cast<double>(n)));
}

CltResult verify_clt(const TrajectoryStats& stats) {
    if (!stats.samples_sigma) throw std::invalid_argument("verify_clt: samples_sigma missing");
    CltResult res;
    const double sigma = std::sqrt(std::max(stats.var_hat, 0.0));
    if (sigma < 1e-12) {
        res.degenerate = true;
        res.pass = true;
        return res;
    }
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(stats.n_steps));
    std::vector<double> scaled(stats.samples_sigma->size());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = (*stats.samples_sigma)[i] * inv_sqrt_n;
    res.ks_statistic =
        ks_statistic(std::move(scaled), [sigma](double x) { return normal_cdf(x, sigma); });
    res.pass = res.ks_statistic <= 0.01;
    return res;
}

double ProductTestFunction::phi_at(double u) const {
    const double du = 2.0 * phi_half_width / static_cast<double>(phi.size() - 1);
    const double s = (u + phi_half_width) / du;
    if (s <= 0.0 || s >= static_cast<double>(phi.size() - 1)) return 0.0;
    const std::size_t j = static_cast<std::size_t>(s);
    const double t = s - static_cast<double>(j);
    return (1.0 - t) * phi[j] + t * phi[j + 1];
}

ProductTestFunction ProductTestFunction::make(std::vector<double> phi_samples, double half_width,
                                              GridFunction psi, const GridMeasure& nu) {
    ProductTestFunction f;
    f.phi = std::move(phi_samples);
    f.phi_half_width = half_width;
    f.integral_phi = trapezoid(f.phi, 2.0 * half_width / static_cast<double>(f.phi.size() - 1));
    f.integral_psi_nu = nu.integrate(psi).real();
    f.psi = std::move(psi);
    return f;
}

LltReport verify_norm_llt(const WalkConfig& cfg, const ProductTestFunction& f,
                          const std::vector<double>& t_values, double a, double gamma,
                          const std::vector<int>& n_values, int threads) {
    if (!(a > 0.0)) throw std::invalid_argument("verify_norm_llt: need a > 0");
    if (t_values.empty() || n_values.empty()) {
        throw std::invalid_argument("verify_norm_llt: empty t or n grid");
    }
    LltReport rep;
    rep.kind = "norm";
    rep.a_used = a;
    rep.gamma_used = gamma;

    for (int n : n_values) {
        WalkConfig run_cfg = cfg;
        run_cfg.n_steps = n;
        RunOptions opts;
        opts.store_sigma = true;
        opts.store_endpoints = true;
        opts.threads = threads;
        const TrajectoryStats stats = run_walk(run_cfg, opts);
        const std::size_t nsamp = stats.samples_sigma->size();
        const double recenter = (stats.gamma_hat - gamma) * static_cast<double>(n);

        std::vector<double> psi_vals(nsamp);
        for (std::size_t i = 0; i < nsamp; ++i) {
            psi_vals[i] = f.psi.eval((*stats.samples_endpoint)[i]).real();
        }

        const double scale = std::sqrt(kTwoPi * static_cast<double>(n)) * a;
        double worst_err = -1.0;
        LltReport::Row worst{};
        std::vector<double> products(nsamp);
        for (double t : t_values) {
            for (std::size_t i = 0; i < nsamp; ++i) {
                const double u = t + (*stats.samples_sigma)[i] + recenter;
                products[i] = f.phi_at(u) * psi_vals[i];
            }
            LltReport::Row row;
            row.n = n;
            row.t = t;
            row.statistic = scale * compensated_mean(products);
            row.reference = gaussian_reference(t, a, n) * f.integral_phi * f.integral_psi_nu;
            row.abs_error = std::abs(row.statistic - row.reference);
            row.mc_se = scale * batch_se(products);
            rep.rows.push_back(row);
            if (row.abs_error > worst_err) {
                worst_err = row.abs_error;
                worst = row;
            }
        }
        rep.n_values.push_back(n);
        rep.statistic.push_back(worst.statistic);
        rep.reference.push_back(worst.reference);
        rep.abs_error.push_back(worst.abs_error);
        rep.mc_se.push_back(worst.mc_se);
    }
    return rep;
}

namespace {

LltReport window_report(const char* kind, const WalkConfig& cfg, cplx v0, cplx v1, cplx w0,
                        cplx w1, double b1, double b2, double a, std::optional<double> gamma,
                        const std::vector<int>& n_values, int threads,
                        std::optional<double> offset_A) {
    if (!(b1 < b2)) throw std::invalid_argument("coefficient llt: need b1 < b2");
    if (!(a > 0.0)) throw std::invalid_argument("coefficient llt: need a > 0");
    LltReport rep;
    rep.kind = kind;
    rep.a_used = a;
    if (offset_A) rep.cross_path_mismatch = 0;

    for (int n : n_values) {
        WalkConfig run_cfg = cfg;
        run_cfg.n_steps = n;
        const CoefficientStats cs =
            sample_coefficient_stat(run_cfg, v0, v1, w0, w1, gamma, threads);
        rep.gamma_used = cs.gamma_used;
        rep.minus_inf_count += cs.minus_inf_count;

        const double nsamp = static_cast<double>(cs.values.size());
        std::int64_t hits = 0;
        if (!offset_A) {
            for (double v : cs.values) {
                if (v >= b1 && v <= b2) ++hits;
            }
        } else {
            // Admissible-pair route: u = sigma - n gamma, Phi = A + log d,
            // f(u, v) = 1_{u + v in [b1 + A, b2 + A]}. Must agree with the
            // direct indicator sample by sample.
            const double A = *offset_A;
            const double lo = b1 + A, hi = b2 + A;
            for (std::size_t i = 0; i < cs.values.size(); ++i) {
                const bool direct_hit = cs.values[i] >= b1 && cs.values[i] <= b2;
                const double phi_val = A + cs.log_dist[i];
                const double su = cs.sigma_centered[i] + phi_val;
                const bool admissible_hit = std::isfinite(phi_val) && su >= lo && su <= hi;
                if (admissible_hit != direct_hit) ++rep.cross_path_mismatch;
                if (admissible_hit) ++hits;
            }
        }
        const double p_hat = static_cast<double>(hits) / nsamp;
        const double scale = std::sqrt(kTwoPi * static_cast<double>(n)) * a;
        LltReport::Row row;
        row.n = n;
        row.t = 0.0;
        row.statistic = scale * p_hat;
        row.reference = b2 - b1;
        row.abs_error = std::abs(row.statistic - row.reference);
        row.mc_se = scale * std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / nsamp);
        rep.rows.push_back(row);
        rep.n_values.push_back(n);
        rep.statistic.push_back(row.statistic);
        rep.reference.push_back(row.reference);
        rep.abs_error.push_back(row.abs_error);
        rep.mc_se.push_back(row.mc_se);
    }
    return rep;
}

}  // namespace

LltReport verify_coeff_llt(const WalkConfig& cfg, cplx v0, cplx v1, cplx w0, cplx w1, double b1,
                           double b2, double a, std::optional<double> gamma,
                           const std::vector<int>& n_values, int threads) {
    return window_report("coeff", cfg, v0, v1, w0, w1, b1, b2, a, gamma, n_values, threads,
                         std::nullopt);
}

LltReport verify_admissible_llt(const WalkConfig& cfg, const ProjPoint& y, double b1, double b2,
                                double a, std::optional<double> gamma,
                                const std::vector<int>& n_values, double offset_A, int threads) {
    // w with w* = y: the dual map is an involution up to sign.
    const ProjPoint w = dual_point(y.v0(), y.v1());
    return window_report("admissible", cfg, cfg.start.v0(), cfg.start.v1(), w.v0(), w.v1(), b1, b2,
                         a, gamma, n_values, threads, offset_A);
}

}  // namespace sl2lab
