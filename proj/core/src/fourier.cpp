#include "sl2lab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sl2lab/stats.hpp"

namespace sl2lab {

namespace {

double chi_hat(double s) {
    const double q = 0.25 - s * s;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

}  // namespace

double trapezoid(const std::vector<double>& values, double du) {
    KahanSum s;
    for (double v : values) s.add(v);
    s.add(-0.5 * (values.front() + values.back()));
    return s.value() * du;
}

cplx fourier_eval(const std::vector<double>& values, double half_width, double xi) {
    const double du = 2.0 * half_width / static_cast<double>(values.size() - 1);
    KahanSum re, im;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double u = -half_width + static_cast<double>(i) * du;
        const double scale = (i == 0 || i + 1 == values.size()) ? 0.5 : 1.0;
        re.add(scale * values[i] * std::cos(u * xi));
        im.add(-scale * values[i] * std::sin(u * xi));
    }
    return cplx(re.value() * du, im.value() * du);
}

BandLimitedKernel build_theta(double half_width, int points) {
    if (half_width < 20.0 || points < 4096 || points % 2 == 0) {
        throw std::invalid_argument("build_theta: need half_width >= 20 and odd points >= 4096");
    }
    BandLimitedKernel k;
    k.delta = 1.0;
    k.half_width = half_width;
    k.fourier_support_bound = 1.0;
    k.values.resize(points);
    const double du = k.du();

    // chi(u) = (1/pi) int_0^{1/2} chi_hat(s) cos(us) ds; the integrand and
    // all its derivatives vanish at s = 1/2, so the trapezoid rule is
    // spectrally accurate.
    const int ns = 2048;
    const double ds = 0.5 / ns;
    std::vector<double> chihat(ns + 1);
    for (int j = 0; j <= ns; ++j) chihat[j] = chi_hat(j * ds);
    std::vector<double> chi2(points);
    for (int i = 0; i < points; ++i) {
        const double u = k.u(i);
        KahanSum acc;
        for (int j = 0; j <= ns; ++j) {
            const double scale = (j == 0 || j == ns) ? 0.5 : 1.0;
            acc.add(scale * chihat[j] * std::cos(u * j * ds));
        }
        const double chi = acc.value() * ds / 3.14159265358979323846;
        chi2[i] = chi * chi;
    }

    // theta = chi^2 * exp(-u^2/2), truncated where the Gaussian is < 1e-32.
    const int window = static_cast<int>(std::ceil(12.0 / du));
    std::vector<double> gauss(window + 1);
    for (int j = 0; j <= window; ++j) {
        const double t = j * du;
        gauss[j] = std::exp(-0.5 * t * t);
    }
    for (int i = 0; i < points; ++i) {
        KahanSum acc;
        const int jlo = std::max(0, i - window), jhi = std::min(points - 1, i + window);
        for (int j = jlo; j <= jhi; ++j) {
            acc.add(chi2[j] * gauss[std::abs(i - j)]);
        }
        k.values[i] = acc.value() * du;
    }
    const double mass = trapezoid(k.values, du);
    for (double& v : k.values) v /= mass;
    return k;
}

double kernel_value(const BandLimitedKernel& k, double v) {
    const double du = k.du();
    const double s = (v + k.half_width) / du;
    if (s < 1.0 || s > static_cast<double>(k.values.size() - 3)) {
        // Linear near the edges, zero outside; values there are negligible.
        if (s < 0.0 || s > static_cast<double>(k.values.size() - 1)) return 0.0;
        const int j = std::min<int>(static_cast<int>(s), k.values.size() - 2);
        const double t = s - j;
        return (1.0 - t) * k.values[j] + t * k.values[j + 1];
    }
    const int j = static_cast<int>(s);
    const double t = s - j;
    // Catmull-Rom through the four surrounding samples.
    const double p0 = k.values[j - 1], p1 = k.values[j], p2 = k.values[j + 1], p3 = k.values[j + 2];
    return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                          t * (3.0 * (p1 - p2) + p3 - p0)));
}

BandLimitedKernel dilate(const BandLimitedKernel& theta, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("dilate: need 0 < delta <= 1");
    BandLimitedKernel k;
    k.delta = delta;
    k.half_width = theta.half_width;
    k.fourier_support_bound = 1.0 / (delta * delta);
    k.values.resize(theta.values.size());
    const double inv_d2 = 1.0 / (delta * delta);
    for (std::size_t i = 0; i < k.values.size(); ++i) {
        // The kernel is positive; clamp away interpolation overshoot.
        k.values[i] = std::max(0.0, inv_d2 * kernel_value(theta, theta.u(i) * inv_d2));
    }
    return k;
}

std::vector<double> sup_mollify(const std::vector<double>& phi, double delta, double du) {
    const int r = static_cast<int>(std::ceil(delta / du - 1e-12));
    const int n = static_cast<int>(phi.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double m = phi[i];
        const int lo = std::max(0, i - r), hi = std::min(n - 1, i + r);
        for (int j = lo; j <= hi; ++j) m = std::max(m, phi[j]);
        out[i] = m;
    }
    return out;
}

namespace {

// Discrete convolution (f * theta_delta)(u_i), windowed to the dilated
// kernel's support |v| <= W delta^2. theta is the master (delta = 1)
// kernel. Near the grid edges the kernel mass falling outside the grid is
// compensated by renormalizing to the full kernel mass, so the quadrature
// approximates the whole-line convolution at every node.
std::vector<double> convolve(const std::vector<double>& f, const BandLimitedKernel& theta,
                             double delta) {
    const int n = static_cast<int>(f.size());
    const double du = theta.du();
    const double d2 = delta * delta;
    const int window = std::min(n - 1, static_cast<int>(std::ceil(theta.half_width * d2 / du)) + 1);
    std::vector<double> kern(window + 1);
    for (int j = 0; j <= window; ++j) {
        kern[j] = std::max(0.0, kernel_value(theta, j * du / d2) / d2);
    }
    std::vector<double> prefix(window + 1);
    prefix[0] = kern[0];
    for (int j = 1; j <= window; ++j) prefix[j] = prefix[j - 1] + kern[j];
    const double full_mass = 2.0 * prefix[window] - kern[0];
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        KahanSum acc;
        const int jlo = std::max(0, i - window), jhi = std::min(n - 1, i + window);
        for (int j = jlo; j <= jhi; ++j) acc.add(f[j] * kern[std::abs(i - j)]);
        const double in_mass = prefix[i - jlo] + prefix[jhi - i] - kern[0];
        out[i] = acc.value() * du * (in_mass > 0.0 ? full_mass / in_mass : 1.0);
    }
    return out;
}

struct Envelopes {
    std::vector<double> upper;  // (1+c_delta)(part+_[delta] * theta_delta) >= part
    std::vector<double> lower;  // c*theta - upper(c*theta - part) <= part
    double c = 0.0, c_delta_up = 0.0, c_delta_dn = 0.0;
};

// Smallest inflation making f <= (1+c) conv node-wise, with a one-ulp-scale
// margin so the ordering survives rounding.
double inflation_constant(const std::vector<double>& f, const std::vector<double>& conv) {
    double c = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] > 0.0) {
            if (!(conv[i] > 0.0)) {
                throw std::runtime_error("make_sandwich: mollified convolution vanished on supp(phi)");
            }
            c = std::max(c, f[i] / conv[i] - 1.0);
        }
    }
    return std::max(c, 0.0) + 1e-12;
}

Envelopes build_envelopes(const std::vector<double>& part, double delta,
                          const BandLimitedKernel& theta) {
    Envelopes e;
    const double du = theta.du();

    const std::vector<double> up_moll = sup_mollify(part, delta, du);
    std::vector<double> up = convolve(up_moll, theta, delta);
    e.c_delta_up = inflation_constant(part, up);
    for (double& v : up) v *= 1.0 + e.c_delta_up;
    e.upper = std::move(up);

    // c theta dominates the part; doubled for margin.
    double c = 0.0;
    for (std::size_t i = 0; i < part.size(); ++i) {
        if (part[i] > 0.0) c = std::max(c, part[i] / theta.values[i]);
    }
    e.c = 2.0 * c;
    std::vector<double> psi(part.size());
    for (std::size_t i = 0; i < part.size(); ++i) psi[i] = e.c * theta.values[i] - part[i];
    const std::vector<double> psi_moll = sup_mollify(psi, delta, du);
    std::vector<double> dn = convolve(psi_moll, theta, delta);
    e.c_delta_dn = inflation_constant(psi, dn);
    std::vector<double> lower(part.size());
    for (std::size_t i = 0; i < part.size(); ++i) {
        lower[i] = e.c * theta.values[i] - (1.0 + e.c_delta_dn) * dn[i];
    }
    e.lower = std::move(lower);
    return e;
}

}  // namespace

SandwichPair make_sandwich(const std::vector<double>& phi, double support_K, double delta,
                           const BandLimitedKernel& theta) {
    if (phi.size() != theta.values.size()) {
        throw std::invalid_argument("make_sandwich: phi must be sampled on the kernel grid");
    }
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("make_sandwich: need 0 < delta <= 1");
    if (!(support_K > 0.0) || support_K > 0.25 * theta.half_width) {
        throw std::invalid_argument("make_sandwich: support exceeds the kernel grid");
    }
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (std::abs(phi[i]) > 1.0 + 1e-12) {
            throw std::invalid_argument("make_sandwich: ||phi||_inf must be <= 1");
        }
        if (std::abs(theta.u(i)) > support_K && phi[i] != 0.0) {
            throw std::invalid_argument("make_sandwich: phi not supported in [-K, K]");
        }
    }

    std::vector<double> pos(phi.size()), neg(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        pos[i] = std::max(phi[i], 0.0);
        neg[i] = std::max(-phi[i], 0.0);
    }
    const Envelopes ep = build_envelopes(pos, delta, theta);
    const Envelopes en = build_envelopes(neg, delta, theta);

    SandwichPair out;
    out.delta = delta;
    out.c_pos = ep.c;
    out.c_delta_up_pos = ep.c_delta_up;
    out.c_delta_dn_pos = ep.c_delta_dn;
    out.c_neg = en.c;
    out.c_delta_up_neg = en.c_delta_up;
    out.c_delta_dn_neg = en.c_delta_dn;
    out.phi_plus.resize(phi.size());
    out.phi_minus.resize(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        out.phi_plus[i] = ep.upper[i] - en.lower[i];
        out.phi_minus[i] = ep.lower[i] - en.upper[i];
    }
    std::vector<double> gap(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) gap[i] = out.phi_plus[i] - out.phi_minus[i];
    out.l1_gap = trapezoid(gap, theta.du());
    return out;
}

std::vector<double> sample_triangle(const BandLimitedKernel& theta, double K) {
    std::vector<double> phi(theta.values.size(), 0.0);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        phi[i] = std::max(0.0, 1.0 - std::abs(theta.u(i)) / K);
    }
    return phi;
}

}  // namespace sl2lab
