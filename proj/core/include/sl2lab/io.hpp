#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sl2lab/grid.hpp"
#include "sl2lab/llt.hpp"
#include "sl2lab/markov.hpp"
#include "sl2lab/walk.hpp"

namespace sl2lab {

// Order-preserving JSON document with floating-point values rendered at a
// fixed 17 significant digits, so identical runs serialize byte-identically.
class JsonValue {
  public:
    static JsonValue object();
    static JsonValue array();
    static JsonValue str(std::string s);
    static JsonValue num(double v);
    static JsonValue integer(std::int64_t v);
    static JsonValue boolean(bool v);

    JsonValue& set(const std::string& key, JsonValue v);  // object field, insertion order
    JsonValue& push(JsonValue v);                         // array element

    std::string dump(int indent = 2) const;

  private:
    enum class Kind { Object, Array, String, Number, Integer, Bool } kind_ = Kind::Object;
    std::string s_;
    double num_ = 0.0;
    std::int64_t int_ = 0;
    bool bool_ = false;
    std::vector<std::pair<std::string, JsonValue>> fields_;
    std::vector<JsonValue> items_;

    void write(std::string& out, int indent, int depth) const;
};

std::string format_double(double v);  // %.17g, non-finite -> "null"

void write_text_file(const std::string& path, const std::string& content);

JsonValue trajectory_stats_json(const TrajectoryStats& stats);
JsonValue spectral_report_json(const SpectralReport& rep);
JsonValue llt_report_json(const LltReport& rep);

// CSV schemas declared per module.
std::string samples_csv(const TrajectoryStats& stats);                 // sample_index,sigma_centered,endpoint_re,endpoint_im,lognorm
std::string grid_function_csv(const GridFunction& u);                  // chart,ix,iy,re,im
std::string grid_measure_csv(const GridMeasure& nu);                   // chart,ix,iy,mass
std::string llt_csv(const LltReport& rep);                             // n,t,statistic,reference,abs_error,mc_se
std::string kernel_csv(const std::vector<double>& values, double W);   // u,value
std::string fourier_diag_csv(const std::vector<std::pair<double, double>>& rows);  // xi,abs_fhat

}  // namespace sl2lab
