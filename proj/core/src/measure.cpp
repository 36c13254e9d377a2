#include "sl2lab/measure.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace sl2lab {

ModelMeasure::ModelMeasure(std::vector<Atom> atoms)
    : atoms_(std::move(atoms)), cache_(std::make_shared<MomentCache>()) {
    if (atoms_.empty()) throw std::invalid_argument("ModelMeasure: needs at least one atom");
    double total = 0.0;
    for (const Atom& a : atoms_) {
        if (!(a.weight > 0.0)) throw std::invalid_argument("ModelMeasure: weights must be positive");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("ModelMeasure: weights must sum to 1 within 1e-9");
    }
    cum_.reserve(atoms_.size());
    double acc = 0.0;
    for (Atom& a : atoms_) {
        a.weight /= total;
        acc += a.weight;
        cum_.push_back(acc);
    }
    cum_.back() = 1.0;
}

ModelMeasure ModelMeasure::uniform(const std::vector<GroupElement>& gs) {
    std::vector<Atom> atoms;
    atoms.reserve(gs.size());
    const double w = 1.0 / static_cast<double>(gs.size());
    for (const GroupElement& g : gs) atoms.push_back({g, w});
    return ModelMeasure(std::move(atoms));
}

double ModelMeasure::moment(double p) const {
    if (!(p > 0.0)) throw std::invalid_argument("moment: p must be positive");
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->values.find(p);
        if (it != cache_->values.end()) return it->second;
    }
    double m = 0.0;
    for (const Atom& a : atoms_) m += a.weight * std::pow(std::log(a.g.opnorm()), p);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->values.emplace(p, m);
    return m;
}

double ModelMeasure::convolution_moment_bound(int n, double p) const {
    if (n < 1 || p < 1.0) throw std::invalid_argument("convolution_moment_bound: need n >= 1, p >= 1");
    return std::pow(static_cast<double>(n), p) * moment(p);
}

const GroupElement& ModelMeasure::sample(Rng& rng) const {
    const double u = rng.uniform01();
    std::size_t i = 0;
    while (i + 1 < cum_.size() && u >= cum_[i]) ++i;
    return atoms_[i].g;
}

ModelMeasure ModelMeasure::convolve(const ModelMeasure& other) const {
    std::vector<Atom> atoms;
    atoms.reserve(size() * other.size());
    for (const Atom& x : atoms_) {
        for (const Atom& y : other.atoms_) {
            atoms.push_back({x.g * y.g, x.weight * y.weight});
        }
    }
    return ModelMeasure(std::move(atoms));
}

namespace {

constexpr std::size_t kEnumCap = 10000;

// Fixed points of a proximal g: the two eigendirections, attracting first.
std::pair<ProjPoint, ProjPoint> fixed_points(const Mat2& m) {
    const cplx tr = m.trace();
    const cplx disc = std::sqrt(tr * tr - 4.0);
    cplx lp = 0.5 * (tr + disc), lm = 0.5 * (tr - disc);
    if (std::abs(lp) < std::abs(lm)) std::swap(lp, lm);
    auto eigvec = [&m](cplx lam) {
        const cplx e0a = m.b, e1a = lam - m.a;
        const cplx e0b = lam - m.d, e1b = m.c;
        if (std::norm(e0a) + std::norm(e1a) >= std::norm(e0b) + std::norm(e1b)) {
            return ProjPoint::of(e0a, e1a);
        }
        return ProjPoint::of(e0b, e1b);
    };
    return {eigvec(lp), eigvec(lm)};
}

bool is_plus_minus_identity(const Mat2& m, double tol) {
    const Mat2 id{};
    const Mat2 nid{-1.0, 0.0, 0.0, -1.0};
    return entrywise_dist(m, id) < tol || entrywise_dist(m, nid) < tol;
}

}  // namespace

ElementarityReport screen_elementarity(const ModelMeasure& mu, int depth) {
    if (depth < 1) throw std::invalid_argument("screen_elementarity: depth must be >= 1");
    ElementarityReport rep;
    std::ostringstream notes;

    // Enumerate products of atoms up to word length `depth`.
    std::vector<GroupElement> words;
    words.reserve(std::min<std::size_t>(kEnumCap, 1024));
    std::size_t level_begin = 0;
    for (const Atom& a : mu.atoms()) words.push_back(a.g);
    for (int len = 2; len <= depth && words.size() < kEnumCap; ++len) {
        const std::size_t level_end = words.size();
        for (std::size_t i = level_begin; i < level_end && words.size() < kEnumCap; ++i) {
            for (const Atom& a : mu.atoms()) {
                if (words.size() >= kEnumCap) break;
                words.push_back(a.g * words[i]);
            }
        }
        level_begin = level_end;
    }

    // Proximal witness: |tr| > 2 guarantees eigenvalues of distinct modulus.
    std::size_t proximal_idx = words.size();
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (std::abs(words[i].trace()) > 2.0 + 1e-9) {
            rep.has_proximal = true;
            proximal_idx = i;
            break;
        }
    }
    if (rep.has_proximal) {
        notes << "proximal product found (|tr| = " << std::abs(words[proximal_idx].trace()) << "); ";
    } else {
        notes << "no proximal product up to depth " << depth << "; ";
    }

    // Non-commuting pair: commutator g h g^-1 h^-1 away from +-I.
    // Scans at most 1e5 pairs.
    std::size_t pair_budget = 100000;
    for (std::size_t i = 0; i < words.size() && !rep.has_noncommuting_pair && pair_budget > 0; ++i) {
        for (std::size_t j = i + 1; j < words.size() && pair_budget > 0; ++j, --pair_budget) {
            const Mat2 comm = words[i].mat() * words[j].mat() * words[i].inverse().mat() *
                              words[j].inverse().mat();
            if (!is_plus_minus_identity(comm, 1e-9)) {
                rep.has_noncommuting_pair = true;
                break;
            }
        }
    }
    notes << (rep.has_noncommuting_pair ? "non-commuting pair found; " : "all sampled pairs commute; ");

    // Finite-orbit suspicion: orbit of the fixed points of the proximal
    // element under all atoms, up to the cap.
    if (rep.has_proximal) {
        auto [xp, xm] = fixed_points(words[proximal_idx].mat());
        std::vector<ProjPoint> orbit{xp, xm};
        std::deque<ProjPoint> frontier{xp, xm};
        bool closed = true;
        while (!frontier.empty()) {
            if (orbit.size() > kEnumCap) {
                closed = false;
                break;
            }
            const ProjPoint x = frontier.front();
            frontier.pop_front();
            for (const Atom& a : mu.atoms()) {
                const ProjPoint y = act(a.g, x);
                bool known = false;
                for (const ProjPoint& z : orbit) {
                    if (dist(y, z) <= 1e-8) {
                        known = true;
                        break;
                    }
                }
                if (!known) {
                    orbit.push_back(y);
                    frontier.push_back(y);
                }
            }
        }
        rep.finite_orbit_suspected = closed;
        if (closed) {
            notes << "orbit of proximal fixed points closes on " << orbit.size() << " points; ";
        } else {
            notes << "orbit of proximal fixed points exceeds the cap; ";
        }
    }

    rep.likely_non_elementary =
        rep.has_proximal && rep.has_noncommuting_pair && !rep.finite_orbit_suspected;
    notes << (rep.likely_non_elementary ? "verdict: likely-non-elementary (heuristic)"
                                        : "verdict: elementary-or-unknown (heuristic)");
    rep.evidence = notes.str();
    return rep;
}

}  // namespace sl2lab
