#pragma once

#include <complex>
#include <stdexcept>

namespace sl2lab {

using cplx = std::complex<double>;

// Row-major 2x2 complex matrix (a b; c d). No determinant constraint.
struct Mat2 {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }
    double frob2() const { return std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d); }
    Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend Mat2 operator*(cplx s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
    friend Mat2 operator-(const Mat2& x, const Mat2& y) {
        return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
    }
};

// Largest singular value of an arbitrary 2x2 complex matrix.
double opnorm2x2(const Mat2& m);

// Max entrywise |x - y|.
double entrywise_dist(const Mat2& x, const Mat2& y);

// Point of P^1 stored as a unit-norm homogeneous 2-vector with canonical
// phase: the first coordinate of modulus > 1e-8 is real positive.
class ProjPoint {
  public:
    ProjPoint() : v0_(1.0), v1_(0.0) {}

    // [a : b], normalized. Throws if the vector is numerically zero.
    static ProjPoint of(cplx a, cplx b);

    // chart 0: [z : 1], chart 1: [1 : w].
    static ProjPoint from_affine(cplx coord, int chart);

    cplx v0() const { return v0_; }
    cplx v1() const { return v1_; }

    // Affine coordinate in the chart where it has modulus <= 1.
    // Returns the chart index and writes the coordinate.
    int bounded_chart(cplx& coord) const {
        if (std::norm(v0_) <= std::norm(v1_)) {
            coord = v0_ / v1_;
            return 0;
        }
        coord = v1_ / v0_;
        return 1;
    }

  private:
    cplx v0_, v1_;
};

// d(x,y) = |det(v,w)| for unit-norm representatives; values in [0,1].
inline double dist(const ProjPoint& x, const ProjPoint& y) {
    return std::abs(x.v0() * y.v1() - x.v1() * y.v0());
}

inline bool approx_equal(const ProjPoint& x, const ProjPoint& y, double tol = 1e-10) {
    return dist(x, y) <= tol;
}

// [w*] for w = (w1,w2): the point dual to the hyperplane <.,w> = 0,
// so that |<v,w>| = d([v],[w*]) for unit vectors.
ProjPoint dual_point(cplx w0, cplx w1);

struct CartanFactors {
    Mat2 k;         // special unitary
    double lambda;  // >= 1, equals the operator norm
    Mat2 l;         // special unitary
};

// Element of SL2(C). The constructor renormalizes small determinant drift
// (|det-1| in (1e-12, 1e-6]) by det^{-1/2} and rejects anything worse.
// Operator norm and Cartan factors are computed eagerly, so values are
// immutable and safe to share across threads.
class GroupElement {
  public:
    GroupElement() { finish(); }
    explicit GroupElement(const Mat2& m) : m_(m) { finish(); }
    GroupElement(cplx a, cplx b, cplx c, cplx d) : m_{a, b, c, d} { finish(); }

    static GroupElement identity() { return GroupElement(); }
    static GroupElement diagonal(double lam) { return GroupElement(Mat2{lam, 0.0, 0.0, 1.0 / lam}); }
    // Real rotation matrix (cos t, -sin t; sin t, cos t) in SU(2).
    static GroupElement rotation(double theta);
    // SU(2) element fixing the given axis point and its antipode, rotating
    // the sphere by the given angle about that axis.
    static GroupElement rotation_about(const ProjPoint& axis, double angle);

    const Mat2& mat() const { return m_; }
    double opnorm() const { return opnorm_; }
    const CartanFactors& cartan() const { return cartan_; }
    cplx trace() const { return m_.trace(); }

    GroupElement inverse() const { return GroupElement(Mat2{m_.d, -m_.b, -m_.c, m_.a}); }

    friend GroupElement operator*(const GroupElement& x, const GroupElement& y) {
        return GroupElement(x.m_ * y.m_);
    }

  private:
    void finish();

    Mat2 m_;
    double opnorm_ = 1.0;
    CartanFactors cartan_{};
};

// g acting on P^1: [v] -> [gv], renormalized.
ProjPoint act(const GroupElement& g, const ProjPoint& x);

// Norm cocycle sigma(g,x) = log ||gv|| for the unit representative v.
double cocycle(const GroupElement& g, const ProjPoint& x);

// Density rho_g of i d(sigma_g) ^ conj(d(sigma_g)) against the Fubini-Study
// form, evaluated at [z : 1].
double sigma_density(const GroupElement& g, cplx z);
double sigma_density(const GroupElement& g, const ProjPoint& x);

}  // namespace sl2lab
