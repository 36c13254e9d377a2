// Command-line front end: lyapunov | spectrum | llt | fourier.
// Exit codes: 0 success, 2 config/schema error, 3 numerical abort,
// 4 non-convergence.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sl2lab/config.hpp"
#include "sl2lab/io.hpp"
#include "sl2lab/llt.hpp"
#include "sl2lab/markov.hpp"
#include "sl2lab/parallel.hpp"
#include "sl2lab/walk.hpp"

namespace {

using namespace sl2lab;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string output;
    std::string format = "json";
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool* seed_given) {
    cmd->add_option("--config", args.config_path, "Path to the experiment config (JSON)")
        ->required();
    auto* seed_opt = cmd->add_option_function<std::uint64_t>(
        "--seed", [&args](std::uint64_t s) { args.seed = s; }, "RNG seed (overrides config)");
    cmd->add_option("--output", args.output, "Output path (csv outputs use it as a prefix)");
    cmd->add_option("--format", args.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--threads", args.threads, "Worker threads (default: hardware)");
    if (seed_given) {
        seed_opt->each([seed_given](const std::string&) { *seed_given = true; });
    }
}

void emit(const CommonArgs& args, const std::string& content, const std::string& suffix = "") {
    if (args.output.empty()) {
        std::cout << content;
    } else {
        write_text_file(args.output + suffix, content);
    }
}

std::uint64_t require_seed(const CommonArgs& args, const ExperimentConfig& cfg) {
    if (args.seed) return *args.seed;
    if (cfg.seed) return *cfg.seed;
    throw ConfigError("this command is randomized: pass --seed or set \"seed\" in the config");
}

const ModelMeasure& require_measure(const ExperimentConfig& cfg) {
    if (!cfg.measure) throw ConfigError("config: a measure block is required for this command");
    return *cfg.measure;
}

WalkConfig make_walk_config(const ExperimentConfig& cfg, const CommonArgs& args) {
    const WalkBlock wb = cfg.walk.value_or(WalkBlock{});
    WalkConfig wc{require_measure(cfg),
                  wb.n_steps,
                  wb.n_samples,
                  ProjPoint::of(wb.start0, wb.start1),
                  require_seed(args, cfg),
                  wb.renorm_every,
                  cfg.elementarity_override};
    return wc;
}

int cmd_lyapunov(const CommonArgs& args) {
    const ExperimentConfig cfg = parse_config_file(args.config_path);
    const WalkConfig wc = make_walk_config(cfg, args);
    RunOptions opts;
    opts.threads = args.threads;
    const bool want_samples = cfg.walk && cfg.walk->store_samples;
    opts.store_sigma = want_samples || args.format == "csv";
    opts.store_endpoints = opts.store_sigma;
    const TrajectoryStats stats = run_walk(wc, opts);
    if (args.format == "csv") {
        emit(args, samples_csv(stats));
    } else {
        emit(args, trajectory_stats_json(stats).dump());
    }
    return 0;
}

int cmd_spectrum(const CommonArgs& args) {
    const ExperimentConfig cfg = parse_config_file(args.config_path);
    const GridBlock gb = cfg.grid.value_or(GridBlock{});
    const MarkovOperator op(ProjGrid::make(gb.resolution), require_measure(cfg));

    bool all_converged = true;
    const GridMeasure nu =
        op.stationary_measure(gb.stationary_tol, gb.stationary_max_iter, cfg.elementarity_override);

    JsonValue out = JsonValue::object();
    out.set("resolution", JsonValue::integer(gb.resolution));

    JsonValue eigs = JsonValue::array();
    std::vector<SpectralReport> probes;
    for (double xi : gb.xi) {
        const SpectralReport eig = op.leading_eigen(xi, gb.power_tol, gb.power_max_iter);
        all_converged = all_converged && eig.converged;
        eigs.push(spectral_report_json(eig));
        probes.push_back(op.contraction_probe(xi, gb.decay_steps, /*allow_zero_xi=*/xi == 0.0));
    }
    out.set("leading", std::move(eigs));

    const EigenExpansion ex = op.eigen_expansion(gb.expansion_step, gb.power_tol, gb.power_max_iter);
    all_converged = all_converged && ex.converged;
    JsonValue exj = JsonValue::object();
    exj.set("h", JsonValue::num(gb.expansion_step));
    exj.set("gamma_spec", JsonValue::num(ex.gamma_spec));
    exj.set("A_spec", JsonValue::num(ex.A_spec));
    exj.set("a2_spec", JsonValue::num(ex.a2_spec));
    exj.set("converged", JsonValue::boolean(ex.converged));
    out.set("expansion", std::move(exj));

    JsonValue probesj = JsonValue::array();
    for (const SpectralReport& p : probes) probesj.push(spectral_report_json(p));
    out.set("contraction", std::move(probesj));

    if (args.format == "csv") {
        emit(args, grid_measure_csv(nu), ".nu.csv");
        for (const SpectralReport& p : probes) {
            std::string rows = "n,norm\n";
            for (std::size_t n = 0; n < p.decay_profile.size(); ++n) {
                rows += std::to_string(n + 1) + "," + format_double(p.decay_profile[n]) + "\n";
            }
            emit(args, rows, ".decay_" + std::to_string(p.xi) + ".csv");
        }
    } else {
        emit(args, out.dump());
    }
    return all_converged ? 0 : 4;
}

int cmd_llt(const CommonArgs& args) {
    const ExperimentConfig cfg = parse_config_file(args.config_path);
    const LltBlock lb = cfg.llt.value_or(LltBlock{});
    WalkConfig wc = make_walk_config(cfg, args);
    wc.n_samples = lb.n_samples;

    // Default gamma and a come from a walk at the largest requested n.
    double gamma = 0.0, a = 0.0;
    {
        WalkConfig est = wc;
        est.n_steps = *std::max_element(lb.n_values.begin(), lb.n_values.end());
        if (!lb.a || !lb.gamma) {
            const TrajectoryStats stats = run_walk(est, {.threads = args.threads});
            gamma = lb.gamma.value_or(stats.gamma_hat);
            a = lb.a.value_or(std::sqrt(std::max(stats.var_hat, 0.0)));
        } else {
            gamma = *lb.gamma;
            a = *lb.a;
        }
    }

    LltReport rep;
    if (lb.mode == "clt") {
        WalkConfig run = wc;
        run.n_steps = lb.n_values.front();
        RunOptions opts;
        opts.store_sigma = true;
        opts.threads = args.threads;
        const TrajectoryStats stats = run_walk(run, opts);
        const CltResult clt = verify_clt(stats);
        JsonValue j = JsonValue::object();
        j.set("ks_statistic", JsonValue::num(clt.ks_statistic));
        j.set("pass", JsonValue::boolean(clt.pass));
        j.set("degenerate", JsonValue::boolean(clt.degenerate));
        j.set("var_hat", JsonValue::num(stats.var_hat));
        j.set("gamma_hat", JsonValue::num(stats.gamma_hat));
        emit(args, j.dump());
        return 0;
    }
    if (lb.mode == "norm") {
        const MarkovOperator op(ProjGrid::make(lb.grid_resolution), wc.mu);
        const GridMeasure nu = op.stationary_measure(1e-8, 5000, wc.elementarity_override);
        const BandLimitedKernel theta = build_theta();
        const ProjPoint bump_center = ProjPoint::of(1.0, 1.0);
        GridFunction psi =
            GridFunction::sample(op.grid(), [&bump_center](const ProjPoint& p) {
                const double d = dist(p, bump_center);
                return cplx(std::exp(-4.0 * d * d));
            });
        const ProductTestFunction f = ProductTestFunction::make(
            sample_triangle(theta, lb.phi_support), theta.half_width, std::move(psi), nu);
        rep = verify_norm_llt(wc, f, lb.t_values, a, gamma, lb.n_values, args.threads);
    } else if (lb.mode == "coeff") {
        rep = verify_coeff_llt(wc, lb.v0, lb.v1, lb.w0, lb.w1, lb.b1, lb.b2, a, lb.gamma,
                               lb.n_values, args.threads);
    } else {
        rep = verify_admissible_llt(wc, ProjPoint::of(lb.y0, lb.y1), lb.b1, lb.b2, a, lb.gamma,
                                    lb.n_values, lb.offset_A, args.threads);
    }
    if (args.format == "csv") {
        emit(args, llt_csv(rep));
    } else {
        emit(args, llt_report_json(rep).dump());
    }
    return 0;
}

int cmd_fourier(const CommonArgs& args) {
    const ExperimentConfig cfg = parse_config_file(args.config_path);
    const FourierBlock fb = cfg.fourier.value_or(FourierBlock{});
    const BandLimitedKernel theta = build_theta(fb.half_width, fb.points);
    const std::vector<double> phi = sample_triangle(theta, fb.support);

    JsonValue out = JsonValue::object();
    out.set("half_width", JsonValue::num(theta.half_width));
    out.set("points", JsonValue::integer(static_cast<std::int64_t>(theta.values.size())));
    JsonValue sweeps = JsonValue::array();
    std::vector<std::pair<double, double>> diag;
    for (double delta : fb.deltas) {
        const SandwichPair sw = make_sandwich(phi, fb.support, delta, theta);
        JsonValue j = JsonValue::object();
        j.set("delta", JsonValue::num(delta));
        j.set("l1_gap", JsonValue::num(sw.l1_gap));
        j.set("c_pos", JsonValue::num(sw.c_pos));
        j.set("c_delta_up_pos", JsonValue::num(sw.c_delta_up_pos));
        j.set("c_delta_dn_pos", JsonValue::num(sw.c_delta_dn_pos));
        sweeps.push(std::move(j));
        if (args.format == "csv") {
            emit(args, kernel_csv(sw.phi_plus, theta.half_width),
                 ".sandwich_plus_" + std::to_string(delta) + ".csv");
            emit(args, kernel_csv(sw.phi_minus, theta.half_width),
                 ".sandwich_minus_" + std::to_string(delta) + ".csv");
        }
        const double bound = 1.05 / (delta * delta);
        for (double xi : {bound, 1.5 * bound, 2.0 * bound}) {
            diag.emplace_back(xi, std::abs(fourier_eval(sw.phi_plus, theta.half_width, xi)));
        }
    }
    out.set("sandwich", std::move(sweeps));
    if (args.format == "csv") {
        emit(args, kernel_csv(theta.values, theta.half_width), ".kernel.csv");
        emit(args, fourier_diag_csv(diag), ".fourier.csv");
    } else {
        emit(args, out.dump());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sl2lab: numerical laboratory for random SL2(C) matrix products"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* lyapunov = app.add_subcommand("lyapunov", "Monte Carlo Lyapunov exponent and CLT variance");
    auto* spectrum = app.add_subcommand("spectrum", "Stationary measure and perturbed-operator spectra");
    auto* llt = app.add_subcommand("llt", "Local limit theorem verification tables");
    auto* fourier = app.add_subcommand("fourier", "Band-limited mollifiers and sandwich sweeps");
    for (CLI::App* cmd : {lyapunov, spectrum, llt, fourier}) add_common(cmd, args, nullptr);

    CLI11_PARSE(app, argc, argv);

    try {
        if (lyapunov->parsed()) return cmd_lyapunov(args);
        if (spectrum->parsed()) return cmd_spectrum(args);
        if (llt->parsed()) return cmd_llt(args);
        if (fourier->parsed()) return cmd_fourier(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalAbort& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << " (last change " << e.last_change << ")\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
