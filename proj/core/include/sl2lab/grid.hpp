#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "sl2lab/mobius.hpp"

namespace sl2lab {

// Discretization of P^1 by two affine charts {|z| <= 1} (chart 0: z,
// chart 1: w = 1/z), each sampled on an m x m grid of cell centers plus a
// one-cell ghost ring. Cells of the inner lattice tile [-1,1]^2; their
// intersections with the unit disc carry the Fubini-Study quadrature mass,
// so the total mass over both charts is 1 up to the cell quadrature error.
//
// Nodes with |coord| <= 1 in their own chart are "owners". Values at the
// remaining nodes are kept equal to the cross-chart bilinear interpolation
// (sync_ghosts); measure mass deposited on them is pushed back to owners by
// the transposed operation (fold_ghosts). This makes grid interpolation and
// mass splatting exactly adjoint.
class ProjGrid : public std::enable_shared_from_this<ProjGrid> {
  public:
    explicit ProjGrid(int resolution);

    static std::shared_ptr<const ProjGrid> make(int resolution) {
        return std::make_shared<const ProjGrid>(resolution);
    }

    int resolution() const { return m_; }
    int side() const { return side_; }
    double h() const { return h_; }
    std::size_t node_count() const { return node_points_.size(); }

    std::size_t index(int chart, int i, int j) const {
        return static_cast<std::size_t>(chart) * side_ * side_ +
               static_cast<std::size_t>(j) * side_ + static_cast<std::size_t>(i);
    }
    const ProjPoint& node_point(std::size_t idx) const { return node_points_[idx]; }
    bool is_owner(std::size_t idx) const { return owner_[idx] != 0; }
    const std::vector<std::uint32_t>& owners() const { return owner_list_; }
    const std::vector<double>& fs_weights() const { return fs_w_; }
    const std::vector<double>& leb_weights() const { return leb_w_; }

    struct Stencil {
        std::uint32_t idx[4];
        double w[4];
    };
    Stencil stencil(const ProjPoint& p) const;

    cplx interp(const std::vector<cplx>& values, const ProjPoint& p) const {
        const Stencil s = stencil(p);
        return s.w[0] * values[s.idx[0]] + s.w[1] * values[s.idx[1]] +
               s.w[2] * values[s.idx[2]] + s.w[3] * values[s.idx[3]];
    }

    // Restores the ghost-value invariant after owner values changed.
    void sync_ghosts(std::vector<cplx>& values) const;
    // Adjoint of sync_ghosts on mass vectors: moves non-owner mass back to
    // owners along the transposed interpolation stencils.
    void fold_ghosts(std::vector<double>& masses) const;

  private:
    double coord(int k) const { return -1.0 + (static_cast<double>(k) - 0.5) * h_; }
    void build_weights(int chart);
    void build_ghost_links();

    int m_, side_;
    double h_;
    std::vector<ProjPoint> node_points_;
    std::vector<std::uint8_t> owner_;
    std::vector<std::uint32_t> owner_list_;
    std::vector<double> fs_w_, leb_w_;

    struct GhostLink {
        std::uint32_t node;
        Stencil s;
    };
    std::vector<GhostLink> ghost_links_;
};

using GridPtr = std::shared_ptr<const ProjGrid>;

class GridFunction {
  public:
    GridFunction() = default;
    explicit GridFunction(GridPtr grid, cplx constant = 0.0)
        : grid_(std::move(grid)), values_(grid_->node_count(), constant) {}

    static GridFunction sample(GridPtr grid, const std::function<cplx(const ProjPoint&)>& fn);
    static GridFunction constant(GridPtr grid, cplx c) { return GridFunction(std::move(grid), c); }

    const GridPtr& grid() const { return grid_; }
    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }

    cplx eval(const ProjPoint& p) const { return grid_->interp(values_, p); }
    void sync() { grid_->sync_ghosts(values_); }

  private:
    GridPtr grid_;
    std::vector<cplx> values_;
};

class GridMeasure {
  public:
    GridMeasure() = default;
    // Takes raw nonnegative masses, folds ghosts and normalizes to total 1.
    GridMeasure(GridPtr grid, std::vector<double> masses);

    static GridMeasure fubini_study(GridPtr grid);
    static GridMeasure from_points(GridPtr grid, const std::vector<ProjPoint>& points);

    const GridPtr& grid() const { return grid_; }
    const std::vector<double>& masses() const { return masses_; }
    std::vector<double>& masses() { return masses_; }

    double total() const;
    cplx integrate(const GridFunction& u) const;

    friend double tv_distance(const GridMeasure& x, const GridMeasure& y);

  private:
    GridPtr grid_;
    std::vector<double> masses_;
};

// --- norms over grid functions ---

// sup over owner nodes.
double sup_norm(const GridFunction& u);

// FS quadrature of u.
cplx integral_fs(const GridFunction& u);

// ||u||_{W^{1,2}} = |int u w_FS| + ||du||_{L^2}, gradients by chart central
// differences, the seam counted once through the cell-in-disc weights.
double norm_w12(const GridFunction& u);

// [u]_{log^p} = sup |u(x)-u(y)| (1+|log d(x,y)|)^p over a pair sample: all
// owner pairs for m <= 64, otherwise 1e6 seeded random pairs plus all
// grid-adjacent pairs. A certified lower bound of the true sup.
double seminorm_logp(const GridFunction& u, double p, std::uint64_t pair_seed = 0x5eed);

// max(||u||_{W^{1,2}}, ||u||_inf + [u]_{log^{p-1}}), an upper-bound
// surrogate for the mixed-space norm; requires p > 3/2.
double wspace_upper_norm(const GridFunction& u, double p);

}  // namespace sl2lab
