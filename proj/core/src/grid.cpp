#include "sl2lab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "sl2lab/rng.hpp"
#include "sl2lab/stats.hpp"

namespace sl2lab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Exact y-antiderivative of the FS density 1/(pi (1+x^2+y^2)^2) at fixed x.
double fs_anti(double y, double q) {
    return (y / (2.0 * q * (q + y * y)) + std::atan(y / std::sqrt(q)) / (2.0 * q * std::sqrt(q))) /
           kPi;
}

// FS mass and Lebesgue area of the column {x} x ([c,d] cap disc).
void column_integrals(double x, double c, double d, double& fs, double& area) {
    fs = 0.0;
    area = 0.0;
    const double r2 = 1.0 - x * x;
    if (r2 <= 0.0) return;
    const double s = std::sqrt(r2);
    const double lo = std::max(c, -s), hi = std::min(d, s);
    if (hi <= lo) return;
    const double q = 1.0 + x * x;
    fs = fs_anti(hi, q) - fs_anti(lo, q);
    area = hi - lo;
}

// Integrals of the FS density and of 1 over cell [a,b]x[c,d] intersected
// with the unit disc; midpoint columns with exact y-limits.
void cell_integrals(double a, double b, double c, double d, int columns, double& fs,
                    double& area) {
    const double dx = (b - a) / columns;
    KahanSum sfs, sarea;
    for (int k = 0; k < columns; ++k) {
        const double x = a + (k + 0.5) * dx;
        double cfs, carea;
        column_integrals(x, c, d, cfs, carea);
        sfs.add(cfs);
        sarea.add(carea);
    }
    fs = sfs.value() * dx;
    area = sarea.value() * dx;
}

}  // namespace

ProjGrid::ProjGrid(int resolution) : m_(resolution), side_(resolution + 2), h_(2.0 / resolution) {
    if (resolution < 8) throw std::invalid_argument("ProjGrid: resolution must be >= 8");
    const std::size_t n = 2u * side_ * side_;
    node_points_.reserve(n);
    owner_.assign(n, 0);
    fs_w_.assign(n, 0.0);
    leb_w_.assign(n, 0.0);

    for (int chart = 0; chart < 2; ++chart) {
        for (int j = 0; j < side_; ++j) {
            for (int i = 0; i < side_; ++i) {
                const cplx u(coord(i), coord(j));
                node_points_.push_back(ProjPoint::from_affine(u, chart));
                if (std::norm(u) <= 1.0) {
                    owner_[index(chart, i, j)] = 1;
                }
            }
        }
    }
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (owner_[idx]) owner_list_.push_back(static_cast<std::uint32_t>(idx));
    }
    build_weights(0);
    build_weights(1);
    build_ghost_links();
}

void ProjGrid::build_weights(int chart) {
    for (int j = 1; j <= m_; ++j) {
        const double c = coord(j) - 0.5 * h_, d = coord(j) + 0.5 * h_;
        for (int i = 1; i <= m_; ++i) {
            const double a = coord(i) - 0.5 * h_, b = coord(i) + 0.5 * h_;
            // Classify against the unit circle to pick the column count.
            const double nx = std::min(std::abs(a), std::abs(b)), ny = std::min(std::abs(c), std::abs(d));
            const double px = (a <= 0.0 && b >= 0.0) ? 0.0 : nx;
            const double py = (c <= 0.0 && d >= 0.0) ? 0.0 : ny;
            const double min2 = px * px + py * py;
            if (min2 >= 1.0) continue;  // cell fully outside the disc
            const double fx = std::max(std::abs(a), std::abs(b));
            const double fy = std::max(std::abs(c), std::abs(d));
            const bool inside = fx * fx + fy * fy <= 1.0;
            double fs, area;
            cell_integrals(a, b, c, d, inside ? 16 : 512, fs, area);
            const std::size_t idx = index(chart, i, j);
            fs_w_[idx] = fs;
            leb_w_[idx] = area;
        }
    }
}

void ProjGrid::build_ghost_links() {
    for (std::size_t idx = 0; idx < node_points_.size(); ++idx) {
        if (!owner_[idx]) {
            ghost_links_.push_back({static_cast<std::uint32_t>(idx), stencil(node_points_[idx])});
        }
    }
}

ProjGrid::Stencil ProjGrid::stencil(const ProjPoint& p) const {
    cplx c;
    const int chart = p.bounded_chart(c);
    const double x0 = -1.0 - 0.5 * h_;
    double sx = (c.real() - x0) / h_;
    double sy = (c.imag() - x0) / h_;
    int i0 = static_cast<int>(std::floor(sx));
    int j0 = static_cast<int>(std::floor(sy));
    i0 = std::clamp(i0, 0, side_ - 2);
    j0 = std::clamp(j0, 0, side_ - 2);
    const double fx = std::clamp(sx - i0, 0.0, 1.0);
    const double fy = std::clamp(sy - j0, 0.0, 1.0);
    Stencil s;
    s.idx[0] = static_cast<std::uint32_t>(index(chart, i0, j0));
    s.idx[1] = static_cast<std::uint32_t>(index(chart, i0 + 1, j0));
    s.idx[2] = static_cast<std::uint32_t>(index(chart, i0, j0 + 1));
    s.idx[3] = static_cast<std::uint32_t>(index(chart, i0 + 1, j0 + 1));
    s.w[0] = (1.0 - fx) * (1.0 - fy);
    s.w[1] = fx * (1.0 - fy);
    s.w[2] = (1.0 - fx) * fy;
    s.w[3] = fx * fy;
    return s;
}

void ProjGrid::sync_ghosts(std::vector<cplx>& values) const {
    double scale = 1e-300;
    for (std::uint32_t idx : owner_list_) scale = std::max(scale, std::abs(values[idx]));
    const double tol = 1e-15 * scale;
    for (int sweep = 0; sweep < 200; ++sweep) {
        double change = 0.0;
        for (const GhostLink& g : ghost_links_) {
            const cplx v = g.s.w[0] * values[g.s.idx[0]] + g.s.w[1] * values[g.s.idx[1]] +
                           g.s.w[2] * values[g.s.idx[2]] + g.s.w[3] * values[g.s.idx[3]];
            change = std::max(change, std::abs(v - values[g.node]));
            values[g.node] = v;
        }
        if (change <= tol) break;
    }
}

void ProjGrid::fold_ghosts(std::vector<double>& masses) const {
    double total = 1e-300;
    for (double m : masses) total += std::abs(m);
    const double tol = 1e-16 * total;
    for (int sweep = 0; sweep < 200; ++sweep) {
        for (const GhostLink& g : ghost_links_) {
            const double a = masses[g.node];
            if (a == 0.0) continue;
            masses[g.node] = 0.0;
            for (int k = 0; k < 4; ++k) masses[g.s.idx[k]] += g.s.w[k] * a;
        }
        double remaining = 0.0;
        for (const GhostLink& g : ghost_links_) remaining += std::abs(masses[g.node]);
        if (remaining <= tol) break;
    }
    // Drop the negligible residue so downstream mass lives on owners only.
    for (const GhostLink& g : ghost_links_) masses[g.node] = 0.0;
}

GridFunction GridFunction::sample(GridPtr grid, const std::function<cplx(const ProjPoint&)>& fn) {
    GridFunction u(grid);
    for (std::uint32_t idx : grid->owners()) u.values_[idx] = fn(grid->node_point(idx));
    u.sync();
    return u;
}

GridMeasure::GridMeasure(GridPtr grid, std::vector<double> masses)
    : grid_(std::move(grid)), masses_(std::move(masses)) {
    if (masses_.size() != grid_->node_count()) {
        throw std::invalid_argument("GridMeasure: mass vector size mismatch");
    }
    for (double m : masses_) {
        if (m < 0.0 || !std::isfinite(m)) throw std::invalid_argument("GridMeasure: negative mass");
    }
    grid_->fold_ghosts(masses_);
    const double t = total();
    if (!(t > 0.0)) throw std::invalid_argument("GridMeasure: zero total mass");
    if (std::abs(t - 1.0) > 1e-9) {
        for (double& m : masses_) m /= t;
    }
}

GridMeasure GridMeasure::fubini_study(GridPtr grid) {
    std::vector<double> masses = grid->fs_weights();
    return GridMeasure(std::move(grid), std::move(masses));
}

GridMeasure GridMeasure::from_points(GridPtr grid, const std::vector<ProjPoint>& points) {
    std::vector<double> masses(grid->node_count(), 0.0);
    const double w = 1.0 / static_cast<double>(points.size());
    for (const ProjPoint& p : points) {
        const ProjGrid::Stencil s = grid->stencil(p);
        for (int k = 0; k < 4; ++k) masses[s.idx[k]] += w * s.w[k];
    }
    return GridMeasure(std::move(grid), std::move(masses));
}

double GridMeasure::total() const {
    KahanSum s;
    for (double m : masses_) s.add(m);
    return s.value();
}

cplx GridMeasure::integrate(const GridFunction& u) const {
    KahanSum re, im;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        if (masses_[i] != 0.0) {
            re.add(masses_[i] * u.values()[i].real());
            im.add(masses_[i] * u.values()[i].imag());
        }
    }
    return {re.value(), im.value()};
}

double tv_distance(const GridMeasure& x, const GridMeasure& y) {
    KahanSum s;
    for (std::size_t i = 0; i < x.masses_.size(); ++i) {
        s.add(std::abs(x.masses_[i] - y.masses_[i]));
    }
    return 0.5 * s.value();
}

double sup_norm(const GridFunction& u) {
    double m = 0.0;
    for (std::uint32_t idx : u.grid()->owners()) m = std::max(m, std::abs(u.values()[idx]));
    return m;
}

cplx integral_fs(const GridFunction& u) {
    const std::vector<double>& w = u.grid()->fs_weights();
    KahanSum re, im;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != 0.0) {
            re.add(w[i] * u.values()[i].real());
            im.add(w[i] * u.values()[i].imag());
        }
    }
    return {re.value(), im.value()};
}

double norm_w12(const GridFunction& u) {
    const ProjGrid& g = *u.grid();
    const std::vector<cplx>& v = u.values();
    const std::vector<double>& leb = g.leb_weights();
    const int side = g.side();
    const double inv2h = 1.0 / (2.0 * g.h());
    KahanSum grad2;
    for (int chart = 0; chart < 2; ++chart) {
        for (int j = 1; j <= g.resolution(); ++j) {
            for (int i = 1; i <= g.resolution(); ++i) {
                const std::size_t idx = g.index(chart, i, j);
                const double w = leb[idx];
                if (w == 0.0) continue;
                const cplx ux = (v[idx + 1] - v[idx - 1]) * inv2h;
                const cplx uy = (v[idx + side] - v[idx - side]) * inv2h;
                const cplx uz = 0.5 * (ux - cplx(0.0, 1.0) * uy);
                grad2.add(2.0 * std::norm(uz) * w);
            }
        }
    }
    return std::abs(integral_fs(u)) + std::sqrt(grad2.value());
}

double seminorm_logp(const GridFunction& u, double p, std::uint64_t pair_seed) {
    if (!(p > 0.0)) throw std::invalid_argument("seminorm_logp: p must be positive");
    const ProjGrid& g = *u.grid();
    const std::vector<std::uint32_t>& own = g.owners();
    const std::vector<cplx>& v = u.values();
    double best = 0.0;
    auto visit = [&](std::uint32_t ia, std::uint32_t ib) {
        const double d = dist(g.node_point(ia), g.node_point(ib));
        if (d <= 0.0) return;
        const double val = std::abs(v[ia] - v[ib]) * std::pow(1.0 + std::abs(std::log(d)), p);
        best = std::max(best, val);
    };
    if (g.resolution() <= 64) {
        for (std::size_t a = 0; a < own.size(); ++a) {
            for (std::size_t b = a + 1; b < own.size(); ++b) visit(own[a], own[b]);
        }
        return best;
    }
    // Random pairs plus all grid-adjacent owner pairs; a lower bound of the sup.
    Rng rng(pair_seed, 0);
    for (int k = 0; k < 1000000; ++k) {
        const std::uint32_t a = own[rng.next() % own.size()];
        const std::uint32_t b = own[rng.next() % own.size()];
        if (a != b) visit(a, b);
    }
    const int side = g.side();
    for (std::uint32_t idx : own) {
        if (g.is_owner(idx + 1)) visit(idx, idx + 1);
        if (idx + side < g.node_count() && g.is_owner(idx + side)) visit(idx, idx + side);
    }
    return best;
}

double wspace_upper_norm(const GridFunction& u, double p) {
    if (!(p > 1.5)) throw std::invalid_argument("wspace_upper_norm: requires p > 3/2");
    return std::max(norm_w12(u), sup_norm(u) + seminorm_logp(u, p - 1.0));
}

}  // namespace sl2lab
