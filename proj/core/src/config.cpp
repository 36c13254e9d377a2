#include "sl2lab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sl2lab {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
        }
    }
}

double get_num(const json& obj, const std::string& where, const std::string& key, double dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

std::int64_t get_int(const json& obj, const std::string& where, const std::string& key,
                     std::int64_t dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
    return obj[key].get<std::int64_t>();
}

bool get_bool(const json& obj, const std::string& where, const std::string& key, bool dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_boolean()) throw ConfigError(where + "." + key + ": expected a boolean");
    return obj[key].get<bool>();
}

cplx parse_complex(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(where + ": expected [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

// Vectors in C^2 as [[re,im],[re,im]].
void parse_vec2(const json& j, const std::string& where, cplx& a, cplx& b) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(where + ": expected a 2-vector");
    a = parse_complex(j[0], where + "[0]");
    b = parse_complex(j[1], where + "[1]");
}

GroupElement parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2) {
        throw ConfigError(where + ": expected a 2x2 matrix of [re,im] pairs");
    }
    const cplx a = parse_complex(j[0][0], where + "[0][0]");
    const cplx b = parse_complex(j[0][1], where + "[0][1]");
    const cplx c = parse_complex(j[1][0], where + "[1][0]");
    const cplx d = parse_complex(j[1][1], where + "[1][1]");
    try {
        return GroupElement(a, b, c, d);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

ModelMeasure parse_measure(const json& j) {
    require_keys(j, "measure", {"atoms"});
    if (!j.contains("atoms") || !j["atoms"].is_array() || j["atoms"].empty()) {
        throw ConfigError("measure.atoms: expected a non-empty array");
    }
    std::vector<Atom> atoms;
    int k = 0;
    for (const json& aj : j["atoms"]) {
        const std::string where = "measure.atoms[" + std::to_string(k++) + "]";
        require_keys(aj, where, {"weight", "matrix"});
        if (!aj.contains("weight") || !aj.contains("matrix")) {
            throw ConfigError(where + ": needs weight and matrix");
        }
        const double w = aj["weight"].get<double>();
        atoms.push_back({parse_matrix(aj["matrix"], where + ".matrix"), w});
    }
    try {
        return ModelMeasure(std::move(atoms));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("measure: ") + e.what());
    }
}

std::vector<double> parse_num_array(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array");
    std::vector<double> out;
    for (const json& v : j) {
        if (!v.is_number()) throw ConfigError(where + ": expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    require_keys(root, "config",
                 {"schema_version", "measure", "non_elementary_override", "seed", "walk", "grid",
                  "llt", "fourier"});
    ExperimentConfig cfg;
    if (!root.contains("schema_version")) throw ConfigError("config: schema_version is required");
    cfg.schema_version = static_cast<int>(get_int(root, "config", "schema_version", 0));
    if (cfg.schema_version != 1) throw ConfigError("config: unsupported schema_version");

    if (root.contains("measure")) cfg.measure = parse_measure(root["measure"]);
    cfg.elementarity_override = get_bool(root, "config", "non_elementary_override", false);
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer()) {
            throw ConfigError("config.seed: expected an unsigned integer");
        }
        cfg.seed = root["seed"].get<std::uint64_t>();
    }

    if (root.contains("walk")) {
        const json& j = root["walk"];
        require_keys(j, "walk", {"n_steps", "n_samples", "start", "renorm_every", "store_samples"});
        WalkBlock b;
        b.n_steps = static_cast<int>(get_int(j, "walk", "n_steps", b.n_steps));
        b.n_samples = get_int(j, "walk", "n_samples", b.n_samples);
        b.renorm_every = static_cast<int>(get_int(j, "walk", "renorm_every", b.renorm_every));
        b.store_samples = get_bool(j, "walk", "store_samples", false);
        if (j.contains("start")) parse_vec2(j["start"], "walk.start", b.start0, b.start1);
        if (b.n_steps < 1 || b.n_samples < 1 || b.renorm_every < 1) {
            throw ConfigError("walk: n_steps, n_samples, renorm_every must be >= 1");
        }
        cfg.walk = b;
    }

    if (root.contains("grid")) {
        const json& j = root["grid"];
        require_keys(j, "grid",
                     {"resolution", "xi", "expansion_step", "power_tol", "power_max_iter",
                      "stationary_tol", "stationary_max_iter", "decay_steps", "equi_steps"});
        GridBlock b;
        b.resolution = static_cast<int>(get_int(j, "grid", "resolution", b.resolution));
        if (j.contains("xi")) b.xi = parse_num_array(j["xi"], "grid.xi");
        b.expansion_step = get_num(j, "grid", "expansion_step", b.expansion_step);
        b.power_tol = get_num(j, "grid", "power_tol", b.power_tol);
        b.power_max_iter = static_cast<int>(get_int(j, "grid", "power_max_iter", b.power_max_iter));
        b.stationary_tol = get_num(j, "grid", "stationary_tol", b.stationary_tol);
        b.stationary_max_iter =
            static_cast<int>(get_int(j, "grid", "stationary_max_iter", b.stationary_max_iter));
        b.decay_steps = static_cast<int>(get_int(j, "grid", "decay_steps", b.decay_steps));
        b.equi_steps = static_cast<int>(get_int(j, "grid", "equi_steps", b.equi_steps));
        if (b.resolution < 8) throw ConfigError("grid.resolution: must be >= 8");
        cfg.grid = b;
    }

    if (root.contains("llt")) {
        const json& j = root["llt"];
        require_keys(j, "llt",
                     {"mode", "n_values", "n_samples", "window", "t_values", "v", "w", "y", "a",
                      "gamma", "offset_a", "grid_resolution", "phi_support"});
        LltBlock b;
        if (j.contains("mode")) {
            if (!j["mode"].is_string()) throw ConfigError("llt.mode: expected a string");
            b.mode = j["mode"].get<std::string>();
            if (b.mode != "clt" && b.mode != "norm" && b.mode != "coeff" && b.mode != "admissible") {
                throw ConfigError("llt.mode: expected clt|norm|coeff|admissible");
            }
        }
        if (j.contains("n_values")) {
            b.n_values.clear();
            for (double v : parse_num_array(j["n_values"], "llt.n_values")) {
                b.n_values.push_back(static_cast<int>(v));
            }
        }
        b.n_samples = get_int(j, "llt", "n_samples", b.n_samples);
        if (j.contains("window")) {
            const auto w = parse_num_array(j["window"], "llt.window");
            if (w.size() != 2) throw ConfigError("llt.window: expected [b1, b2]");
            b.b1 = w[0];
            b.b2 = w[1];
            if (!(b.b1 < b.b2)) throw ConfigError("llt.window: need b1 < b2");
        }
        if (j.contains("t_values")) b.t_values = parse_num_array(j["t_values"], "llt.t_values");
        if (j.contains("v")) parse_vec2(j["v"], "llt.v", b.v0, b.v1);
        if (j.contains("w")) parse_vec2(j["w"], "llt.w", b.w0, b.w1);
        if (j.contains("y")) parse_vec2(j["y"], "llt.y", b.y0, b.y1);
        if (j.contains("a")) b.a = get_num(j, "llt", "a", 0.0);
        if (j.contains("gamma")) b.gamma = get_num(j, "llt", "gamma", 0.0);
        b.offset_A = get_num(j, "llt", "offset_a", b.offset_A);
        b.grid_resolution = static_cast<int>(get_int(j, "llt", "grid_resolution", b.grid_resolution));
        b.phi_support = get_num(j, "llt", "phi_support", b.phi_support);
        cfg.llt = b;
    }

    if (root.contains("fourier")) {
        const json& j = root["fourier"];
        require_keys(j, "fourier", {"half_width", "points", "deltas", "support"});
        FourierBlock b;
        b.half_width = get_num(j, "fourier", "half_width", b.half_width);
        b.points = static_cast<int>(get_int(j, "fourier", "points", b.points));
        if (j.contains("deltas")) b.deltas = parse_num_array(j["deltas"], "fourier.deltas");
        b.support = get_num(j, "fourier", "support", b.support);
        cfg.fourier = b;
    }

    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace sl2lab
