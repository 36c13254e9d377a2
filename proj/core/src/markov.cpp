#include "sl2lab/markov.hpp"

#include <cmath>

#include "sl2lab/stats.hpp"

namespace sl2lab {

MarkovOperator::MarkovOperator(GridPtr grid, ModelMeasure mu)
    : grid_(std::move(grid)), mu_(std::move(mu)) {
    const std::vector<std::uint32_t>& own = grid_->owners();
    links_.resize(mu_.size());
    for (std::size_t a = 0; a < mu_.size(); ++a) {
        const GroupElement& g = mu_.atoms()[a].g;
        links_[a].resize(own.size());
        for (std::size_t i = 0; i < own.size(); ++i) {
            const ProjPoint& x = grid_->node_point(own[i]);
            links_[a][i].s = grid_->stencil(act(g, x));
            links_[a][i].sigma = cocycle(g, x);
        }
    }
}

std::vector<std::vector<cplx>> MarkovOperator::prepare_phases(double xi, int k) const {
    std::vector<std::vector<cplx>> phases(mu_.size());
    for (std::size_t a = 0; a < mu_.size(); ++a) {
        const double w = mu_.atoms()[a].weight;
        phases[a].resize(links_[a].size());
        for (std::size_t i = 0; i < links_[a].size(); ++i) {
            const double sg = links_[a][i].sigma;
            cplx f = w * std::polar(1.0, xi * sg);
            if (k > 0) {
                const cplx is(0.0, sg);
                for (int q = 0; q < k; ++q) f *= is;
            }
            phases[a][i] = f;
        }
    }
    return phases;
}

void MarkovOperator::apply_prepared(const std::vector<std::vector<cplx>>& phases,
                                    const GridFunction& in, GridFunction& out) const {
    const std::vector<std::uint32_t>& own = grid_->owners();
    const std::vector<cplx>& v = in.values();
    std::vector<cplx>& o = out.values();
    std::fill(o.begin(), o.end(), cplx(0.0));
    for (std::size_t i = 0; i < own.size(); ++i) {
        cplx acc(0.0);
        for (std::size_t a = 0; a < phases.size(); ++a) {
            const ProjGrid::Stencil& s = links_[a][i].s;
            const cplx interp = s.w[0] * v[s.idx[0]] + s.w[1] * v[s.idx[1]] +
                                s.w[2] * v[s.idx[2]] + s.w[3] * v[s.idx[3]];
            acc += phases[a][i] * interp;
        }
        o[own[i]] = acc;
    }
    out.sync();
}

GridFunction MarkovOperator::apply(const GridFunction& u, double xi, int k) const {
    if (k < 0) throw std::invalid_argument("apply: k must be >= 0");
    GridFunction out(grid_);
    apply_prepared(prepare_phases(xi, k), u, out);
    return out;
}

GridMeasure MarkovOperator::push_measure(const GridMeasure& nu) const {
    const std::vector<std::uint32_t>& own = grid_->owners();
    std::vector<double> out(grid_->node_count(), 0.0);
    const std::vector<double>& m = nu.masses();
    for (std::size_t a = 0; a < mu_.size(); ++a) {
        const double w = mu_.atoms()[a].weight;
        for (std::size_t i = 0; i < own.size(); ++i) {
            const double amount = w * m[own[i]];
            if (amount == 0.0) continue;
            const ProjGrid::Stencil& s = links_[a][i].s;
            for (int q = 0; q < 4; ++q) out[s.idx[q]] += s.w[q] * amount;
        }
    }
    return GridMeasure(grid_, std::move(out));
}

GridMeasure MarkovOperator::stationary_measure(double tol, int max_iter,
                                               bool elementarity_override) const {
    if (!elementarity_override) {
        const ElementarityReport rep = screen_elementarity(mu_, 4);
        if (!rep.likely_non_elementary) {
            throw std::invalid_argument(
                "stationary_measure: measure failed the non-elementarity screen; "
                "set the override to proceed. " +
                rep.evidence);
        }
    }
    GridMeasure nu = GridMeasure::fubini_study(grid_);
    double change = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        GridMeasure next = push_measure(nu);
        change = tv_distance(next, nu);
        nu = std::move(next);
        if (change <= tol) return nu;
    }
    throw NonConvergence("stationary_measure: TV change still above tolerance after max_iter",
                         change);
}

SpectralReport MarkovOperator::leading_eigen(double xi, double tol, int max_iter) const {
    const std::vector<double>& fsw = grid_->fs_weights();
    auto dot = [&fsw](const GridFunction& f, const GridFunction& g) {
        KahanSum re, im;
        for (std::size_t i = 0; i < fsw.size(); ++i) {
            if (fsw[i] != 0.0) {
                const cplx t = f.values()[i] * std::conj(g.values()[i]) * fsw[i];
                re.add(t.real());
                im.add(t.imag());
            }
        }
        return cplx(re.value(), im.value());
    };

    const auto phases = prepare_phases(xi, 0);
    SpectralReport rep;
    rep.xi = xi;
    GridFunction u = GridFunction::constant(grid_, 1.0);
    GridFunction pu(grid_);
    cplx lambda_prev(0.0);
    for (int it = 1; it <= max_iter; ++it) {
        apply_prepared(phases, u, pu);
        const cplx lambda = dot(pu, u) / dot(u, u);
        const double nrm = std::sqrt(std::abs(dot(pu, pu)));
        if (!(nrm > 0.0)) throw NonConvergence("leading_eigen: iterate collapsed to zero");
        for (cplx& v : pu.values()) v /= nrm;
        std::swap(u, pu);
        rep.iterations = it;
        rep.leading_eigenvalue = lambda;
        if (it > 1 && std::abs(lambda - lambda_prev) <= tol * std::abs(lambda)) {
            rep.converged = true;
            break;
        }
        lambda_prev = lambda;
    }
    rep.eigenfunction = std::move(u);
    rep.radius_estimate = std::abs(rep.leading_eigenvalue);
    return rep;
}

EigenExpansion MarkovOperator::eigen_expansion(double h, double tol, int max_iter) const {
    if (h < 1e-3 || h > 1e-1) throw std::invalid_argument("eigen_expansion: h must be in [1e-3, 1e-1]");
    const SpectralReport r0 = leading_eigen(0.0, tol, max_iter);
    const SpectralReport rp = leading_eigen(h, tol, max_iter);
    const SpectralReport rm = leading_eigen(-h, tol, max_iter);
    EigenExpansion e;
    e.converged = r0.converged && rp.converged && rm.converged;
    e.gamma_spec = (rp.leading_eigenvalue - rm.leading_eigenvalue).imag() / (2.0 * h);
    e.A_spec = -(rp.leading_eigenvalue - 2.0 * r0.leading_eigenvalue + rm.leading_eigenvalue).real() /
               (h * h);
    e.a2_spec = e.A_spec - e.gamma_spec * e.gamma_spec;
    return e;
}

SpectralReport MarkovOperator::contraction_probe(double xi, int n_powers,
                                                 bool allow_zero_xi) const {
    if (xi == 0.0 && !allow_zero_xi) {
        throw std::invalid_argument("contraction_probe: xi = 0 has radius exactly 1; probe rejected");
    }
    if (n_powers < 20) throw std::invalid_argument("contraction_probe: need N >= 20");

    // Fixed smooth non-constant seed, normalized in W^{1,2}.
    const ProjPoint y0 = ProjPoint::of(1.0, 1.0);
    GridFunction u = GridFunction::sample(grid_, [&y0](const ProjPoint& p) {
        const double d = dist(p, y0);
        return cplx(d * d);
    });
    {
        const double n0 = norm_w12(u);
        for (cplx& v : u.values()) v /= n0;
    }

    const auto phases = prepare_phases(xi, 0);
    SpectralReport rep;
    rep.xi = xi;
    rep.decay_profile.reserve(n_powers);
    GridFunction pu(grid_);
    std::vector<double> cumlog;
    cumlog.reserve(n_powers);
    double acc = 0.0;
    for (int n = 1; n <= n_powers; ++n) {
        apply_prepared(phases, u, pu);
        const double r = norm_w12(pu);
        if (!(r > 0.0)) throw NonConvergence("contraction_probe: norm collapsed to zero");
        acc += std::log(r);
        cumlog.push_back(acc);
        rep.decay_profile.push_back(std::exp(acc));
        for (cplx& v : pu.values()) v /= r;
        std::swap(u, pu);
    }
    const std::size_t tail = cumlog.size() / 2;
    rep.radius_estimate =
        std::exp(ls_slope(std::span<const double>(cumlog).subspan(cumlog.size() - tail)));
    rep.converged = true;
    rep.iterations = n_powers;
    rep.eigenfunction = std::move(u);
    return rep;
}

std::vector<double> MarkovOperator::equidistribution_probe(const GridFunction& u, int n_powers,
                                                           const GridMeasure& nu) const {
    const cplx mean = nu.integrate(u);
    GridFunction centered = u;
    for (std::uint32_t idx : grid_->owners()) centered.values()[idx] -= mean;
    centered.sync();

    const auto phases = prepare_phases(0.0, 0);
    std::vector<double> profile;
    profile.reserve(n_powers);
    GridFunction pu(grid_);
    for (int n = 1; n <= n_powers; ++n) {
        apply_prepared(phases, centered, pu);
        std::swap(centered, pu);
        profile.push_back(sup_norm(centered));
    }
    return profile;
}

std::vector<double> MarkovOperator::equidistribution_probe(const GridFunction& u,
                                                           int n_powers) const {
    return equidistribution_probe(u, n_powers, stationary_measure(1e-10, 5000));
}

}  // namespace sl2lab
