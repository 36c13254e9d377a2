#include "sl2lab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sl2lab {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {
// CSV cells keep inf/nan spelled out.
std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

JsonValue JsonValue::object() { JsonValue v; v.kind_ = Kind::Object; return v; }
JsonValue JsonValue::array() { JsonValue v; v.kind_ = Kind::Array; return v; }
JsonValue JsonValue::str(std::string s) { JsonValue v; v.kind_ = Kind::String; v.s_ = std::move(s); return v; }
JsonValue JsonValue::num(double x) { JsonValue v; v.kind_ = Kind::Number; v.num_ = x; return v; }
JsonValue JsonValue::integer(std::int64_t x) { JsonValue v; v.kind_ = Kind::Integer; v.int_ = x; return v; }
JsonValue JsonValue::boolean(bool x) { JsonValue v; v.kind_ = Kind::Bool; v.bool_ = x; return v; }

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    fields_.emplace_back(key, std::move(v));
    return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
    items_.push_back(std::move(v));
    return *this;
}

namespace {
void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
}
}  // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string pad_close(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
        case Kind::String: write_escaped(out, s_); break;
        case Kind::Number: out += format_double(num_); break;
        case Kind::Integer: out += std::to_string(int_); break;
        case Kind::Bool: out += bool_ ? "true" : "false"; break;
        case Kind::Object: {
            if (fields_.empty()) { out += "{}"; break; }
            out += "{\n";
            for (std::size_t i = 0; i < fields_.size(); ++i) {
                out += pad;
                write_escaped(out, fields_[i].first);
                out += ": ";
                fields_[i].second.write(out, indent, depth + 1);
                if (i + 1 < fields_.size()) out += ',';
                out += '\n';
            }
            out += pad_close + "}";
            break;
        }
        case Kind::Array: {
            if (items_.empty()) { out += "[]"; break; }
            out += "[\n";
            for (std::size_t i = 0; i < items_.size(); ++i) {
                out += pad;
                items_[i].write(out, indent, depth + 1);
                if (i + 1 < items_.size()) out += ',';
                out += '\n';
            }
            out += pad_close + "]";
            break;
        }
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

JsonValue trajectory_stats_json(const TrajectoryStats& stats) {
    JsonValue j = JsonValue::object();
    j.set("n_steps", JsonValue::integer(stats.n_steps));
    j.set("n_samples", JsonValue::integer(stats.n_samples));
    j.set("seed", JsonValue::integer(static_cast<std::int64_t>(stats.seed)));
    j.set("gamma_hat", JsonValue::num(stats.gamma_hat));
    j.set("gamma_se", JsonValue::num(stats.gamma_se));
    j.set("var_hat", JsonValue::num(stats.var_hat));
    j.set("var_se", JsonValue::num(stats.var_se));
    // Centering convention: samples_sigma in the CSV are centered by this
    // report's own gamma_hat.
    j.set("centering", JsonValue::str("own-gamma_hat"));
    return j;
}

JsonValue spectral_report_json(const SpectralReport& rep) {
    JsonValue j = JsonValue::object();
    j.set("xi", JsonValue::num(rep.xi));
    j.set("leading_eigenvalue_re", JsonValue::num(rep.leading_eigenvalue.real()));
    j.set("leading_eigenvalue_im", JsonValue::num(rep.leading_eigenvalue.imag()));
    j.set("radius_estimate", JsonValue::num(rep.radius_estimate));
    j.set("converged", JsonValue::boolean(rep.converged));
    j.set("iterations", JsonValue::integer(rep.iterations));
    JsonValue profile = JsonValue::array();
    for (double v : rep.decay_profile) profile.push(JsonValue::num(v));
    j.set("decay_profile", std::move(profile));
    return j;
}

JsonValue llt_report_json(const LltReport& rep) {
    JsonValue j = JsonValue::object();
    j.set("kind", JsonValue::str(rep.kind));
    j.set("a_used", JsonValue::num(rep.a_used));
    j.set("gamma_used", JsonValue::num(rep.gamma_used));
    if (rep.minus_inf_count >= 0) j.set("minus_inf_count", JsonValue::integer(rep.minus_inf_count));
    if (rep.cross_path_mismatch >= 0) {
        j.set("cross_path_mismatch", JsonValue::integer(rep.cross_path_mismatch));
    }
    JsonValue rows = JsonValue::array();
    for (const LltReport::Row& r : rep.rows) {
        JsonValue row = JsonValue::object();
        row.set("n", JsonValue::integer(r.n));
        row.set("t", JsonValue::num(r.t));
        row.set("statistic", JsonValue::num(r.statistic));
        row.set("reference", JsonValue::num(r.reference));
        row.set("abs_error", JsonValue::num(r.abs_error));
        row.set("mc_se", JsonValue::num(r.mc_se));
        rows.push(std::move(row));
    }
    j.set("rows", std::move(rows));
    return j;
}

std::string samples_csv(const TrajectoryStats& stats) {
    std::string out = "sample_index,sigma_centered,endpoint_re,endpoint_im,lognorm\n";
    const std::size_t n = stats.samples_sigma ? stats.samples_sigma->size() : 0;
    for (std::size_t i = 0; i < n; ++i) {
        out += std::to_string(i);
        out += ',';
        out += csv_double((*stats.samples_sigma)[i]);
        out += ',';
        if (stats.samples_endpoint) {
            const ProjPoint& p = (*stats.samples_endpoint)[i];
            const cplx z = p.v0() / p.v1();  // affine coordinate [z : 1]
            out += csv_double(z.real());
            out += ',';
            out += csv_double(z.imag());
        } else {
            out += "nan,nan";
        }
        out += ',';
        out += stats.samples_lognorm ? csv_double((*stats.samples_lognorm)[i]) : "nan";
        out += '\n';
    }
    return out;
}

namespace {

template <typename Fn>
std::string grid_csv(const ProjGrid& g, const std::string& header, Fn&& cell) {
    std::string out = header;
    for (int chart = 0; chart < 2; ++chart) {
        for (int j = 0; j < g.side(); ++j) {
            for (int i = 0; i < g.side(); ++i) {
                out += std::to_string(chart);
                out += ',';
                out += std::to_string(i);
                out += ',';
                out += std::to_string(j);
                out += ',';
                out += cell(g.index(chart, i, j));
                out += '\n';
            }
        }
    }
    return out;
}

}  // namespace

std::string grid_function_csv(const GridFunction& u) {
    return grid_csv(*u.grid(), "chart,ix,iy,re,im\n", [&u](std::size_t idx) {
        return csv_double(u.values()[idx].real()) + "," + csv_double(u.values()[idx].imag());
    });
}

std::string grid_measure_csv(const GridMeasure& nu) {
    return grid_csv(*nu.grid(), "chart,ix,iy,mass\n",
                    [&nu](std::size_t idx) { return csv_double(nu.masses()[idx]); });
}

std::string llt_csv(const LltReport& rep) {
    std::string out = "n,t,statistic,reference,abs_error,mc_se\n";
    for (const LltReport::Row& r : rep.rows) {
        out += std::to_string(r.n);
        out += ',';
        out += csv_double(r.t);
        out += ',';
        out += csv_double(r.statistic);
        out += ',';
        out += csv_double(r.reference);
        out += ',';
        out += csv_double(r.abs_error);
        out += ',';
        out += csv_double(r.mc_se);
        out += '\n';
    }
    return out;
}

std::string kernel_csv(const std::vector<double>& values, double W) {
    std::string out = "u,value\n";
    const double du = 2.0 * W / static_cast<double>(values.size() - 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += csv_double(-W + static_cast<double>(i) * du);
        out += ',';
        out += csv_double(values[i]);
        out += '\n';
    }
    return out;
}

std::string fourier_diag_csv(const std::vector<std::pair<double, double>>& rows) {
    std::string out = "xi,abs_fhat\n";
    for (const auto& [xi, v] : rows) {
        out += csv_double(xi);
        out += ',';
        out += csv_double(v);
        out += '\n';
    }
    return out;
}

}  // namespace sl2lab
