#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "sl2lab/mobius.hpp"
#include "sl2lab/rng.hpp"

namespace sl2lab {

struct Atom {
    GroupElement g;
    double weight;
};

struct ElementarityReport {
    bool has_proximal = false;
    bool has_noncommuting_pair = false;
    bool finite_orbit_suspected = false;
    bool likely_non_elementary = false;  // verdict
    std::string evidence;
};

// Finitely supported probability measure on SL2(C). Immutable after
// construction; copies share the moment cache.
class ModelMeasure {
  public:
    // Weights must be positive and sum to 1 within 1e-9 (then normalized
    // exactly); anything else is rejected.
    explicit ModelMeasure(std::vector<Atom> atoms);

    static ModelMeasure dirac(const GroupElement& g) { return ModelMeasure({{g, 1.0}}); }
    static ModelMeasure uniform(const std::vector<GroupElement>& gs);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

    // M_p(mu) = sum w_i log^p ||g_i||, cached per p.
    double moment(double p) const;

    // n^p * M_p(mu), an upper bound for M_p(mu^{*n}).
    double convolution_moment_bound(int n, double p) const;

    // Atom i with probability w_i; deterministic given the RNG stream.
    const GroupElement& sample(Rng& rng) const;

    // Convolution mu * other as a finitely supported measure (all products).
    ModelMeasure convolve(const ModelMeasure& other) const;

  private:
    std::vector<Atom> atoms_;
    std::vector<double> cum_;

    struct MomentCache {
        std::mutex mutex;
        std::map<double, double> values;
    };
    std::shared_ptr<MomentCache> cache_;
};

// Heuristic non-elementarity screen: enumerates products up to the given
// word length (capped at 1e4 matrices) and checks for a proximal element,
// a non-commuting pair, and a finite orbit of the fixed points of the
// first proximal element found. Deterministic.
ElementarityReport screen_elementarity(const ModelMeasure& mu, int depth);

}  // namespace sl2lab
