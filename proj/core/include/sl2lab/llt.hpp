#pragma once

#include <optional>
#include <string>

#include "sl2lab/fourier.hpp"
#include "sl2lab/grid.hpp"
#include "sl2lab/walk.hpp"

namespace sl2lab {

// Gaussian factor e^{-t^2 / (2 a^2 n)} of the local limit.
double gaussian_reference(double t, double a, int n);

struct CltResult {
    double ks_statistic = 0.0;
    bool pass = false;
    bool degenerate = false;  // all samples (numerically) constant; test skipped
};

// Kolmogorov-Smirnov comparison of samples_sigma / sqrt(n) against
// Normal(0, var_hat); passes at statistic <= 0.01.
CltResult verify_clt(const TrajectoryStats& stats);

// Separable test function phi(u) psi(x) for the norm-cocycle LLT.
struct ProductTestFunction {
    std::vector<double> phi;  // sampled on [-half_width, half_width]
    double phi_half_width = 0.0;
    GridFunction psi;
    double integral_phi = 0.0;
    double integral_psi_nu = 0.0;  // against the stationary measure

    double phi_at(double u) const;  // linear interpolation, 0 outside
    static ProductTestFunction make(std::vector<double> phi_samples, double half_width,
                                    GridFunction psi, const GridMeasure& nu);
};

struct LltReport {
    std::string kind;  // "norm" | "coeff" | "admissible"
    std::vector<int> n_values;
    // Per-n summary; for the norm LLT these are taken at the t of maximal
    // absolute error.
    std::vector<double> statistic, reference, abs_error, mc_se;
    struct Row {
        int n;
        double t;
        double statistic, reference, abs_error, mc_se;
    };
    std::vector<Row> rows;  // all (n, t) evaluations
    double a_used = 0.0, gamma_used = 0.0;
    std::int64_t minus_inf_count = 0;   // coefficient paths only
    std::int64_t cross_path_mismatch = -1;  // admissible path only
};

// sqrt(2 pi n) a E[phi(t + sigma - n gamma) psi(S_n x)] against
// e^{-t^2/(2 a^2 n)} int phi int psi dnu, over the given n and t grids.
LltReport verify_norm_llt(const WalkConfig& cfg, const ProductTestFunction& f,
                          const std::vector<double>& t_values, double a, double gamma,
                          const std::vector<int>& n_values, int threads = 0);

// sqrt(2 pi n) a P(log|<S_n v, w>| - n gamma in [b1, b2]) against b2 - b1.
LltReport verify_coeff_llt(const WalkConfig& cfg, cplx v0, cplx v1, cplx w0, cplx w1, double b1,
                           double b2, double a, std::optional<double> gamma,
                           const std::vector<int>& n_values, int threads = 0);

// Same statistic through the admissible-pair formulation with
// Phi_y = A + log d(., y) and f(u,v) = 1_{u + v in [b1+A, b2+A]}; the
// report carries the per-sample indicator mismatch count against the
// direct path (expected 0).
LltReport verify_admissible_llt(const WalkConfig& cfg, const ProjPoint& y, double b1, double b2,
                                double a, std::optional<double> gamma,
                                const std::vector<int>& n_values, double offset_A = 2.0,
                                int threads = 0);

}  // namespace sl2lab
