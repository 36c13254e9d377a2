#pragma once

#include <optional>

#include "sl2lab/grid.hpp"
#include "sl2lab/measure.hpp"

namespace sl2lab {

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), last_change(residual) {}
    double last_change;
};

struct SpectralReport {
    double xi = 0.0;
    cplx leading_eigenvalue{0.0};
    GridFunction eigenfunction;
    std::vector<double> decay_profile;  // ||P_xi^n u0|| for n = 1..N
    double radius_estimate = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct EigenExpansion {
    double gamma_spec = 0.0;
    double A_spec = 0.0;
    double a2_spec = 0.0;
    bool converged = false;
};

// Discretized Markov operator P and its purely imaginary perturbations
// P_xi u = sum_atoms w e^{i xi sigma_g} u(g .), with derivative weights
// (i sigma_g)^k. Destination stencils and cocycle values are cached per
// atom/node at construction.
class MarkovOperator {
  public:
    MarkovOperator(GridPtr grid, ModelMeasure mu);

    const GridPtr& grid() const { return grid_; }
    const ModelMeasure& measure() const { return mu_; }

    // Node-wise sum_a w_a (i sigma_a(x))^k e^{i xi sigma_a(x)} u(g_a x).
    GridFunction apply(const GridFunction& u, double xi = 0.0, int k = 0) const;

    // One adjoint (mass transport) step.
    GridMeasure push_measure(const GridMeasure& nu) const;

    // Fixed point of push_measure from FS mass, iterated until the TV
    // change is <= tol. Throws NonConvergence after max_iter.
    GridMeasure stationary_measure(double tol, int max_iter, bool elementarity_override = false) const;

    // Power iteration with the L^2(FS) Rayleigh quotient.
    SpectralReport leading_eigen(double xi, double tol = 1e-12, int max_iter = 5000) const;

    // Finite-difference expansion of the leading eigenvalue at 0:
    // gamma = Im(l_h - l_{-h})/2h, A = -Re(l_h - 2 l_0 + l_{-h})/h^2,
    // a^2 = A - gamma^2.
    EigenExpansion eigen_expansion(double h, double tol = 1e-12, int max_iter = 5000) const;

    // Norm-decay probe of the spectral radius: per-step W^{1,2} norms of
    // P_xi^n u0 for a fixed smooth seed, radius from the tail slope.
    SpectralReport contraction_probe(double xi, int n_powers, bool allow_zero_xi = false) const;

    // Sup norms of P^n(u - <nu,u>) for n = 1..N.
    std::vector<double> equidistribution_probe(const GridFunction& u, int n_powers,
                                               const GridMeasure& nu) const;
    std::vector<double> equidistribution_probe(const GridFunction& u, int n_powers) const;

  private:
    struct Link {
        ProjGrid::Stencil s;
        double sigma;
    };
    void apply_prepared(const std::vector<std::vector<cplx>>& phases, const GridFunction& in,
                        GridFunction& out) const;
    std::vector<std::vector<cplx>> prepare_phases(double xi, int k) const;

    GridPtr grid_;
    ModelMeasure mu_;
    std::vector<std::vector<Link>> links_;  // [atom][owner index in owners()]
};

}  // namespace sl2lab
