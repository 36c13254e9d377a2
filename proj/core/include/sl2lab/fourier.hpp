#pragma once

#include <vector>

#include "sl2lab/mobius.hpp"  // cplx

namespace sl2lab {

// Band-limited positive mollifier sampled on a symmetric uniform grid
// [-W, W]. The base kernel (delta = 1) has Fourier transform supported in
// [-1, 1]; dilation by delta rescales the support bound to delta^-2.
struct BandLimitedKernel {
    double delta = 1.0;
    double half_width = 0.0;            // W
    std::vector<double> values;         // samples at u_i = -W + i*du
    double fourier_support_bound = 1.0; // delta^-2

    double du() const { return 2.0 * half_width / static_cast<double>(values.size() - 1); }
    double u(std::size_t i) const { return -half_width + static_cast<double>(i) * du(); }
};

// Kernel from the explicit recipe: chi_hat(s) = exp(-1/(1/4 - s^2)) on
// |s| < 1/2, chi its inverse Fourier transform by quadrature, and the
// kernel the normalized convolution chi^2 * exp(-u^2/2). Requires
// half_width >= 20 and an odd point count >= 4096 so the grid contains 0.
BandLimitedKernel build_theta(double half_width = 40.0, int points = 16385);

// theta_delta(u) = delta^-2 theta(u/delta^2) resampled on the same grid.
BandLimitedKernel dilate(const BandLimitedKernel& theta, double delta);

// Kernel value at an arbitrary point by cubic interpolation (0 outside).
double kernel_value(const BandLimitedKernel& k, double v);

// Windowed running maximum with radius delta, grid-snapped outward.
std::vector<double> sup_mollify(const std::vector<double>& phi, double delta, double du);

// Trapezoid transform int f(u) e^{-i u xi} du over the sample grid.
cplx fourier_eval(const std::vector<double>& values, double half_width, double xi);

double trapezoid(const std::vector<double>& values, double du);

struct SandwichPair {
    std::vector<double> phi_minus, phi_plus;
    double delta = 0.0;
    double l1_gap = 0.0;
    // Constants found by grid search, recorded per sign part:
    // c: smallest c with c*theta >= part (then doubled);
    // c_delta_up: inflation for the upper envelope of the part;
    // c_delta_dn: inflation for the upper envelope of c*theta - part.
    double c_pos = 0.0, c_delta_up_pos = 0.0, c_delta_dn_pos = 0.0;
    double c_neg = 0.0, c_delta_up_neg = 0.0, c_delta_dn_neg = 0.0;
};

// Band-limited envelopes phi_minus <= phi <= phi_plus built from the
// sup-mollified convolutions with the dilated kernel. phi must be sampled
// on the kernel grid, supported in [-K, K] with ||phi||_inf <= 1.
SandwichPair make_sandwich(const std::vector<double>& phi, double support_K, double delta,
                           const BandLimitedKernel& theta);

// Triangle max(0, 1 - |u|/K) sampled on the kernel grid.
std::vector<double> sample_triangle(const BandLimitedKernel& theta, double K = 1.0);

}  // namespace sl2lab
