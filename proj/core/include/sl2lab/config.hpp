#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sl2lab/measure.hpp"

namespace sl2lab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WalkBlock {
    int n_steps = 1000;
    std::int64_t n_samples = 10000;
    cplx start0{1.0, 0.0}, start1{0.0, 0.0};
    int renorm_every = 1;
    bool store_samples = false;
};

struct GridBlock {
    int resolution = 256;
    std::vector<double> xi{0.5, 1.0, 2.0};
    double expansion_step = 0.02;
    double power_tol = 1e-12;
    int power_max_iter = 5000;
    double stationary_tol = 1e-8;
    int stationary_max_iter = 5000;
    int decay_steps = 40;
    int equi_steps = 40;
};

struct LltBlock {
    std::string mode = "coeff";  // clt | norm | coeff | admissible
    std::vector<int> n_values{1000};
    std::int64_t n_samples = 100000;
    double b1 = -0.5, b2 = 0.5;
    std::vector<double> t_values{0.0};
    cplx v0{1.0}, v1{0.0};
    cplx w0{0.0}, w1{1.0};
    cplx y0{1.0}, y1{1.0};
    std::optional<double> a;      // pinned scale; default: walk estimate
    std::optional<double> gamma;  // pinned centering; default: walk estimate
    double offset_A = 2.0;
    int grid_resolution = 256;
    double phi_support = 1.0;
};

struct FourierBlock {
    double half_width = 40.0;
    int points = 16385;
    std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
    double support = 1.0;
};

struct ExperimentConfig {
    int schema_version = 1;
    std::optional<ModelMeasure> measure;
    bool elementarity_override = false;
    std::optional<std::uint64_t> seed;
    std::optional<WalkBlock> walk;
    std::optional<GridBlock> grid;
    std::optional<LltBlock> llt;
    std::optional<FourierBlock> fourier;
};

// Parses and validates the JSON config. Unknown keys anywhere are rejected
// with a ConfigError naming the offender.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace sl2lab
