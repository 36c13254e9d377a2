#include <doctest.h>

#include <cmath>

#include "sl2lab/grid.hpp"
#include "sl2lab/rng.hpp"

using namespace sl2lab;

namespace {

cplx smooth_bump(const ProjPoint& p) {
    // exp(-4 d(p, [1:1])^2), smooth on all of P^1.
    const ProjPoint c = ProjPoint::of(1.0, 1.0);
    const double d = dist(p, c);
    return std::exp(-4.0 * d * d);
}

}  // namespace

TEST_CASE("quadrature weights sum to 1") {
    for (int m : {64, 256}) {
        const auto grid = ProjGrid::make(m);
        double total = 0.0;
        for (double w : grid->fs_weights()) total += w;
        CHECK(std::abs(total - 1.0) <= 1e-6);
        double area = 0.0;
        for (double w : grid->leb_weights()) area += w;
        // Two unit discs in coordinate area.
        CHECK(area == doctest::Approx(2.0 * 3.14159265358979323846).epsilon(1e-7));
    }
}

TEST_CASE("node chart representations agree") {
    const auto grid = ProjGrid::make(32);
    Rng rng(11, 0);
    for (int k = 0; k < 200; ++k) {
        const std::size_t idx = rng.next() % grid->node_count();
        const ProjPoint& p = grid->node_point(idx);
        cplx coord;
        const int chart = p.bounded_chart(coord);
        CHECK(dist(ProjPoint::from_affine(coord, chart), p) <= 1e-12);
    }
}

TEST_CASE("interpolation: constants exact, smooth functions to O(h^2)") {
    const auto grid = ProjGrid::make(64);
    const GridFunction ones = GridFunction::constant(grid, 1.0);
    Rng rng(12, 0);
    for (int k = 0; k < 100; ++k) {
        const ProjPoint p = ProjPoint::of(cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5),
                                          cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5));
        CHECK(std::abs(ones.eval(p) - 1.0) <= 1e-12);
    }
    const GridFunction u = GridFunction::sample(grid, smooth_bump);
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const ProjPoint p = ProjPoint::of(cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5),
                                          cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5));
        worst = std::max(worst, std::abs(u.eval(p) - smooth_bump(p)));
    }
    CHECK(worst <= 5e-3);  // h^2-scale at m = 64
}

TEST_CASE("ghost sync reproduces smooth samples across the seam") {
    const auto grid = ProjGrid::make(64);
    GridFunction u = GridFunction::sample(grid, smooth_bump);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < grid->node_count(); ++idx) {
        if (!grid->is_owner(idx)) {
            worst = std::max(worst, std::abs(u.values()[idx] - smooth_bump(grid->node_point(idx))));
        }
    }
    CHECK(worst <= 5e-3);
}

TEST_CASE("GridMeasure: FS mass, point splats, folding") {
    const auto grid = ProjGrid::make(64);
    const GridMeasure fs = GridMeasure::fubini_study(grid);
    CHECK(fs.total() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t idx = 0; idx < grid->node_count(); ++idx) {
        CHECK(fs.masses()[idx] >= 0.0);
        if (!grid->is_owner(idx)) CHECK(fs.masses()[idx] == 0.0);
    }
    Rng rng(13, 0);
    std::vector<ProjPoint> pts;
    for (int k = 0; k < 1000; ++k) {
        pts.push_back(ProjPoint::of(cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5),
                                    cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5)));
    }
    const GridMeasure emp = GridMeasure::from_points(grid, pts);
    CHECK(emp.total() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t idx = 0; idx < grid->node_count(); ++idx) {
        if (!grid->is_owner(idx)) CHECK(emp.masses()[idx] == 0.0);
    }
    CHECK(tv_distance(fs, fs) == 0.0);
    const double tv = tv_distance(fs, emp);
    CHECK(tv > 0.0);
    CHECK(tv <= 1.0);
}

TEST_CASE("measure integration matches quadrature for smooth functions") {
    const auto grid = ProjGrid::make(96);
    const GridFunction u = GridFunction::sample(grid, smooth_bump);
    const GridMeasure fs = GridMeasure::fubini_study(grid);
    CHECK(fs.integrate(u).real() == doctest::Approx(integral_fs(u).real()).epsilon(1e-3));
}

TEST_CASE("norm_w12: constants and refinement oracle") {
    const auto grid = ProjGrid::make(64);
    CHECK(norm_w12(GridFunction::constant(grid, 1.0)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(norm_w12(GridFunction::constant(grid, cplx(-2.5, 1.0))) ==
          doctest::Approx(std::abs(cplx(-2.5, 1.0))).epsilon(1e-6));
    // Smooth bump: value at m = 64 within 1% of the 4x-finer evaluation.
    const double coarse = norm_w12(GridFunction::sample(grid, smooth_bump));
    const double fine = norm_w12(GridFunction::sample(ProjGrid::make(256), smooth_bump));
    CHECK(coarse == doctest::Approx(fine).epsilon(0.01));
}

TEST_CASE("seminorm_logp: constants, homogeneity, steepness growth") {
    const auto grid = ProjGrid::make(48);
    CHECK(seminorm_logp(GridFunction::constant(grid, 3.0), 2.0) == 0.0);
    const GridFunction u = GridFunction::sample(grid, smooth_bump);
    const double base = seminorm_logp(u, 2.0);
    CHECK(base > 0.0);
    GridFunction scaled = u;
    for (cplx& v : scaled.values()) v *= cplx(-3.0);
    CHECK(seminorm_logp(scaled, 2.0) == doctest::Approx(3.0 * base).epsilon(1e-12));
    // Steeper bump has a larger seminorm.
    const GridFunction steep = GridFunction::sample(grid, [](const ProjPoint& p) {
        const double d = dist(p, ProjPoint::of(1.0, 1.0));
        return cplx(std::exp(-64.0 * d * d));
    });
    CHECK(seminorm_logp(steep, 2.0) > base);
}

TEST_CASE("seminorm_logp product bound on random smooth pairs") {
    const auto grid = ProjGrid::make(32);
    Rng rng(14, 0);
    for (int trial = 0; trial < 5; ++trial) {
        const ProjPoint c1 = ProjPoint::of(cplx(rng.uniform01(), rng.uniform01() - 0.5),
                                           cplx(rng.uniform01() - 0.5, rng.uniform01()));
        const ProjPoint c2 = ProjPoint::of(cplx(rng.uniform01() - 0.2, rng.uniform01()),
                                           cplx(rng.uniform01(), rng.uniform01() - 0.8));
        const double k1 = 2.0 + 6.0 * rng.uniform01();
        const double k2 = 2.0 + 6.0 * rng.uniform01();
        const GridFunction u = GridFunction::sample(grid, [&](const ProjPoint& p) {
            const double d = dist(p, c1);
            return cplx(std::exp(-k1 * d * d));
        });
        const GridFunction v = GridFunction::sample(grid, [&](const ProjPoint& p) {
            const double d = dist(p, c2);
            return cplx(std::exp(-k2 * d * d));
        });
        GridFunction uv = u;
        for (std::size_t i = 0; i < uv.values().size(); ++i) uv.values()[i] *= v.values()[i];
        const double p = 1.5;
        const double lhs = seminorm_logp(uv, p);
        const double rhs =
            sup_norm(u) * seminorm_logp(v, p) + seminorm_logp(u, p) * sup_norm(v);
        CHECK(lhs <= rhs + 1e-10);
    }
}

TEST_CASE("wspace_upper_norm: constants, homogeneity, sup domination") {
    const auto grid = ProjGrid::make(48);
    CHECK(wspace_upper_norm(GridFunction::constant(grid, 1.0), 2.0) ==
          doctest::Approx(1.0).epsilon(1e-6));
    const GridFunction u = GridFunction::sample(grid, smooth_bump);
    const double base = wspace_upper_norm(u, 2.0);
    GridFunction scaled = u;
    for (cplx& v : scaled.values()) v *= cplx(0.0, 2.0);
    CHECK(wspace_upper_norm(scaled, 2.0) == doctest::Approx(2.0 * base).epsilon(1e-9));
    CHECK(sup_norm(u) <= base + 1e-12);
    CHECK_THROWS_AS(wspace_upper_norm(u, 1.2), std::invalid_argument);
}
