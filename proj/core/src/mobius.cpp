#include "sl2lab/mobius.hpp"

#include <algorithm>
#include <cmath>

namespace sl2lab {

double opnorm2x2(const Mat2& m) {
    // Largest eigenvalue of the Hermitian m^H m by the half-trace +
    // half-gap form, which stays accurate near repeated singular values.
    const double h11 = std::norm(m.a) + std::norm(m.c);
    const double h22 = std::norm(m.b) + std::norm(m.d);
    const cplx h12 = std::conj(m.a) * m.b + std::conj(m.c) * m.d;
    const double mid = 0.5 * (h11 + h22);
    const double q = 0.5 * (h11 - h22);
    const double r = std::sqrt(q * q + std::norm(h12));
    return std::sqrt(std::max(0.0, mid + r));
}

double entrywise_dist(const Mat2& x, const Mat2& y) {
    return std::max(std::max(std::abs(x.a - y.a), std::abs(x.b - y.b)),
                    std::max(std::abs(x.c - y.c), std::abs(x.d - y.d)));
}

ProjPoint ProjPoint::of(cplx a, cplx b) {
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("ProjPoint: zero or non-finite vector");
    ProjPoint p;
    p.v0_ = a / n;
    p.v1_ = b / n;
    // Canonical phase: first coordinate of modulus > 1e-8 made real positive.
    cplx lead = (std::abs(p.v0_) > 1e-8) ? p.v0_ : p.v1_;
    const cplx phase = std::conj(lead) / std::abs(lead);
    p.v0_ *= phase;
    p.v1_ *= phase;
    return p;
}

ProjPoint ProjPoint::from_affine(cplx coord, int chart) {
    return chart == 0 ? of(coord, 1.0) : of(1.0, coord);
}

ProjPoint dual_point(cplx w0, cplx w1) {
    return ProjPoint::of(-std::conj(w1), std::conj(w0));
}

GroupElement GroupElement::rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return GroupElement(Mat2{c, -s, s, c});
}

GroupElement GroupElement::rotation_about(const ProjPoint& axis, double angle) {
    // V = [axis, axis_perp] is special unitary; conjugate the diagonal
    // rotation exp(-i*angle/2), exp(i*angle/2) by it.
    const cplx a = axis.v0(), b = axis.v1();
    const Mat2 v{a, -std::conj(b), b, std::conj(a)};
    const cplx e = std::polar(1.0, -0.5 * angle);
    const Mat2 diag{e, 0.0, 0.0, std::conj(e)};
    return GroupElement(v * diag * v.adjoint());
}

namespace {

// Closed-form SVD of g in SL2(C): g = k diag(lambda, 1/lambda) l with
// k, l special unitary. Eigenvector of H = g^H g for the top eigenvalue,
// completed to an SU(2) matrix V; then k = g V diag(1/lambda, lambda).
CartanFactors cartan_decompose(const Mat2& g, double lambda) {
    CartanFactors f;
    f.lambda = lambda;
    if (lambda - 1.0 <= 1e-12) {
        // g is unitary up to rounding; the decomposition is non-unique.
        f.k = g;
        f.lambda = 1.0;
        f.l = Mat2{};
        return f;
    }
    const double h11 = std::norm(g.a) + std::norm(g.c);
    const double h22 = std::norm(g.b) + std::norm(g.d);
    const cplx h12 = std::conj(g.a) * g.b + std::conj(g.c) * g.d;
    // Top eigenvector of g^H g via the stable shifted components
    // lam^2 - h11 = r - q and lam^2 - h22 = r + q.
    const double q = 0.5 * (h11 - h22);
    const double r = std::sqrt(q * q + std::norm(h12));
    cplx e0, e1;
    if (q >= 0.0) {
        e0 = r + q;
        e1 = std::conj(h12);
    } else {
        e0 = h12;
        e1 = r - q;
    }
    const double en = std::sqrt(std::norm(e0) + std::norm(e1));
    e0 /= en;
    e1 /= en;
    const Mat2 v{e0, -std::conj(e1), e1, std::conj(e0)};  // det = 1
    // u = g v diag(1/lambda, lambda), then one Gram-Schmidt polish pass.
    cplx u00 = (g.a * e0 + g.b * e1) / lambda;
    cplx u10 = (g.c * e0 + g.d * e1) / lambda;
    cplx u01 = (g.a * (-std::conj(e1)) + g.b * std::conj(e0)) * lambda;
    cplx u11 = (g.c * (-std::conj(e1)) + g.d * std::conj(e0)) * lambda;
    const double un = std::sqrt(std::norm(u00) + std::norm(u10));
    u00 /= un;
    u10 /= un;
    const cplx proj = std::conj(u00) * u01 + std::conj(u10) * u11;
    u01 -= proj * u00;
    u11 -= proj * u10;
    const double un2 = std::sqrt(std::norm(u01) + std::norm(u11));
    u01 /= un2;
    u11 /= un2;
    f.k = Mat2{u00, u01, u10, u11};
    f.l = v.adjoint();
    return f;
}

}  // namespace

void GroupElement::finish() {
    const cplx det = m_.det();
    const double drift = std::abs(det - 1.0);
    if (drift > 1e-6 || !std::isfinite(drift)) {
        throw std::invalid_argument("GroupElement: determinant too far from 1");
    }
    if (drift > 1e-12) {
        const cplx s = 1.0 / std::sqrt(det);  // principal branch
        m_ = s * m_;
    }
    opnorm_ = opnorm2x2(m_);
    cartan_ = cartan_decompose(m_, opnorm_);
}

ProjPoint act(const GroupElement& g, const ProjPoint& x) {
    const Mat2& m = g.mat();
    return ProjPoint::of(m.a * x.v0() + m.b * x.v1(), m.c * x.v0() + m.d * x.v1());
}

double cocycle(const GroupElement& g, const ProjPoint& x) {
    const Mat2& m = g.mat();
    const cplx u0 = m.a * x.v0() + m.b * x.v1();
    const cplx u1 = m.c * x.v0() + m.d * x.v1();
    return 0.5 * std::log(std::norm(u0) + std::norm(u1));
}

double sigma_density(const GroupElement& g, const ProjPoint& x) {
    // sigma_g = l_g^* sigma_{a_g} and SU(2) preserves omega_FS, so
    // rho_g(x) = rho_{a_lambda}(l_g x) with lambda = ||g||.
    const CartanFactors& f = g.cartan();
    const Mat2& l = f.l;
    const cplx q0 = l.a * x.v0() + l.b * x.v1();
    const cplx q1 = l.c * x.v0() + l.d * x.v1();
    const double p0 = std::norm(q0), p1 = std::norm(q1);  // p0 + p1 = 1
    const double l4 = f.lambda * f.lambda * f.lambda * f.lambda;
    const double denom = l4 * p0 + p1;
    return (l4 - 1.0) * (l4 - 1.0) * p0 * p1 / (denom * denom);
}

double sigma_density(const GroupElement& g, cplx z) {
    return sigma_density(g, ProjPoint::of(z, 1.0));
}

}  // namespace sl2lab
