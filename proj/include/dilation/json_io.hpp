#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilation/basis.hpp"
#include "dilation/bohr.hpp"
#include "dilation/criteria.hpp"
#include "dilation/moment.hpp"
#include "dilation/series.hpp"

namespace dilation {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

// ---------------------------------------------------------------------------
// scalar <-> json

inline json rational_to_json(const Rational& q) {
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) return json::array({q.get_num().get_si(), q.get_den().get_si()});
    return json::array({q.get_num().get_str(), q.get_den().get_str()});
}

inline Rational rational_from_json(const json& num, const json& den) {
    auto part = [](const json& v) -> Rational {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long>());
        throw std::invalid_argument("coefficient parts must be integers or integer strings");
    };
    Rational q = part(num) / part(den);
    q.canonicalize();
    return q;
}

template <class S>
json scalar_to_json(const S& v) {
    if constexpr (is_exact_v<S>)
        return json{{"re", v.re.get_str()}, {"im", v.im.get_str()}};
    else
        return json{{"re", v.real()}, {"im", v.imag()}};
}

// coefficient-file entry: [num,den,num,den] in exact mode, [re,im] in float
template <class S>
json coeff_to_json(const S& v) {
    if constexpr (is_exact_v<S>) {
        json quad = json::array();
        for (const json& half : {rational_to_json(v.re), rational_to_json(v.im)}) {
            quad.push_back(half[0]);
            quad.push_back(half[1]);
        }
        return quad;
    } else {
        return json::array({v.real(), v.imag()});
    }
}

template <class S>
S coeff_from_json(const json& entry) {
    if (!entry.is_array()) throw std::invalid_argument("coefficient entries must be arrays");
    if constexpr (is_exact_v<S>) {
        if (entry.size() != 4) throw std::invalid_argument("exact coefficients need [num,den,num,den]");
        return GaussianRational(rational_from_json(entry[0], entry[1]), rational_from_json(entry[2], entry[3]));
    } else {
        if (entry.size() != 2) throw std::invalid_argument("float coefficients need [re,im]");
        return ComplexF64(entry[0].get<double>(), entry[1].get<double>());
    }
}

// ---------------------------------------------------------------------------
// coefficient files: { "mode": ..., "t": ..., "coeffs": [...] }, 1-based

template <class S>
json series_to_json(const TruncatedSeries<S>& f, double t) {
    json coeffs = json::array();
    for (std::uint64_t n = 1; n <= f.degree_cap(); ++n) coeffs.push_back(coeff_to_json(f.coeff(n)));
    return json{{"mode", scalar_mode_name<S>()}, {"t", t}, {"coeffs", std::move(coeffs)}};
}

inline std::string mode_of(const json& file) {
    if (!file.contains("mode") || !file["mode"].is_string())
        throw std::invalid_argument("coefficient file lacks a mode field");
    const std::string mode = file["mode"].get<std::string>();
    if (mode != "exact" && mode != "float") throw std::invalid_argument("unknown mode: " + mode);
    return mode;
}

template <class S>
TruncatedSeries<S> series_from_json(const json& file) {
    if (mode_of(file) != scalar_mode_name<S>())
        throw std::invalid_argument("mode mismatch: file is " + mode_of(file) + ", expected " +
                                    scalar_mode_name<S>());
    if (!file.contains("coeffs") || !file["coeffs"].is_array())
        throw std::invalid_argument("coefficient file lacks a coeffs array");
    std::vector<S> coeffs;
    coeffs.reserve(file["coeffs"].size());
    for (const json& entry : file["coeffs"]) coeffs.push_back(coeff_from_json<S>(entry));
    return TruncatedSeries<S>(std::move(coeffs));
}

inline double file_t(const json& file) {
    return file.contains("t") && file["t"].is_number() ? file["t"].get<double>() : 0.0;
}

// ---------------------------------------------------------------------------
// run manifests: every report embeds one for reproducibility

struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    json caps = json::object();
    std::uint64_t seed = 0;
    std::string mode;
    double t = 0.0;
    json tolerances = json::object();
    std::string out_dir;
    std::string timestamp;
};

inline json manifest_to_json(const RunManifest& m) {
    return json{{"command", m.command}, {"inputs", m.inputs},   {"caps", m.caps},
                {"seed", m.seed},       {"mode", m.mode},       {"t", m.t},
                {"tolerances", m.tolerances}, {"out_dir", m.out_dir}, {"timestamp", m.timestamp}};
}

inline json report_envelope(const std::string& kind, const RunManifest& manifest) {
    return json{{"schema_version", kSchemaVersion}, {"kind", kind}, {"manifest", manifest_to_json(manifest)}};
}

// ---------------------------------------------------------------------------
// report bodies

template <class S>
json gram_report_to_json(const GramReport<S>& rep, const RunManifest& manifest) {
    json out = report_envelope("gram", manifest);
    out["t"] = rep.t;
    out["k_cap"] = rep.k_cap;
    out["tail_threshold"] = rep.tail_threshold;
    json entries = json::array();
    for (std::size_t k = 1; k <= rep.k_cap; ++k)
        for (std::size_t l = 1; l <= rep.k_cap; ++l) {
            json e = scalar_to_json(rep.entry(k, l));
            e["row"] = k;
            e["col"] = l;
            e["tail_bound"] = rep.tail(k, l);
            entries.push_back(std::move(e));
        }
    out["entries"] = std::move(entries);
    return out;
}

template <class S>
std::string gram_report_to_csv(const GramReport<S>& rep) {
    std::ostringstream os;
    os << "row,col,re,im,tail_bound\n";
    os.precision(17);
    for (std::size_t k = 1; k <= rep.k_cap; ++k)
        for (std::size_t l = 1; l <= rep.k_cap; ++l) {
            const ComplexF64 v = to_complex(rep.entry(k, l));
            os << k << ',' << l << ',' << v.real() << ',' << v.imag() << ',' << rep.tail(k, l) << '\n';
        }
    return os.str();
}

template <class S>
json residual_report_to_json(const ResidualReport<S>& rep) {
    json pairs = json::array();
    for (const auto& p : rep.pairs) {
        json e = json{{"i", p.i}, {"j", p.j}, {"g", p.g}, {"residual", scalar_to_json(p.residual)},
                      {"tail_bound", p.tail_bound}};
        pairs.push_back(std::move(e));
    }
    json out{{"weight_law", rep.weight_law},
             {"verdict", verdict_name(rep.verdict)},
             {"pairs", std::move(pairs)},
             {"tail_threshold", rep.tail_threshold}};
    if (rep.violation)
        out["violation"] = json::array({rep.violation->first, rep.violation->second});
    else
        out["violation"] = nullptr;
    if (std::isfinite(rep.resolution)) out["resolution"] = rep.resolution;
    return out;
}

inline json modulus_summary_to_json(const ModulusSummary& s) {
    return json{{"min", s.min},           {"max", s.max},   {"mean", s.mean}, {"variance", s.variance},
                {"n_samples", s.n_samples}, {"seed", s.seed}, {"tail_l1", s.tail_l1},
                {"histogram", s.histogram}};
}

inline std::string modulus_histogram_to_csv(const ModulusSummary& s) {
    std::ostringstream os;
    os << "bin_lo,bin_hi,count\n";
    os.precision(17);
    const std::size_t bins = s.histogram.size();
    const double width = bins > 0 ? (s.max - s.min) / static_cast<double>(bins) : 0.0;
    for (std::size_t b = 0; b < bins; ++b)
        os << (s.min + width * static_cast<double>(b)) << ',' << (s.min + width * static_cast<double>(b + 1))
           << ',' << s.histogram[b] << '\n';
    return os.str();
}

template <class S>
json bohr_series_to_json(const BohrSeries<S>& f) {
    json out = json::array();
    for (const auto& [beta, c] : f.terms) {
        json exps = json::array();
        std::size_t upto = beta.is_zero() ? 0 : beta.max_prime_index() + 1;
        for (std::size_t m = 0; m < upto; ++m) exps.push_back(beta.exponent(m));
        const ComplexF64 v = to_complex(c);
        out.push_back(json{{"exps", std::move(exps)}, {"re", v.real()}, {"im", v.imag()}});
    }
    return out;
}

inline json basis_verdict_to_json(const BasisVerdict& v) {
    return json{{"verdict", basis_kind_name(v.kind)},
                {"evidence", modulus_summary_to_json(v.evidence)},
                {"decision_floor", v.decision_floor},
                {"note", v.note}};
}

template <class S>
json frame_report_to_json(const FrameReport<S>& rep) {
    auto real_to_json = [](const typename FrameReport<S>::Real& r) -> json {
        if constexpr (is_exact_v<S>)
            return json{{"value", r.get_d()}, {"exact", r.get_str()}};
        else
            return json{{"value", r}};
    };
    json ratios = json::array();
    for (const auto& [n, r] : rep.ratios) {
        json e = real_to_json(r);
        e["probe"] = n;
        ratios.push_back(std::move(e));
    }
    json trend = json::array();
    for (const auto& [n, r] : rep.trend) {
        json e = real_to_json(r);
        e["probe"] = n;
        trend.push_back(std::move(e));
    }
    return json{{"a_est", rep.a_est},     {"b_est", rep.b_est},         {"a_probe", rep.a_probe},
                {"b_probe", rep.b_probe}, {"k_cap", rep.k_cap},         {"degree_cap", rep.degree_cap},
                {"probe_cap", rep.probe_cap}, {"ladder_prime", rep.ladder_prime},
                {"probe_family", rep.probe_family}, {"ratios", std::move(ratios)}, {"trend", std::move(trend)}};
}

template <class S>
std::string frame_trend_to_csv(const FrameReport<S>& rep) {
    std::ostringstream os;
    os << "probe,ratio\n";
    os.precision(17);
    for (const auto& [n, r] : rep.ratios) {
        double v;
        if constexpr (is_exact_v<S>)
            v = r.get_d();
        else
            v = r;
        os << n << ',' << v << '\n';
    }
    return os.str();
}

inline json norm_profile_to_json(const NormProfile& p) {
    return json{{"norms", p.norms}, {"trend", trend_name(p.trend)}};
}

inline std::string norm_profile_to_csv(const NormProfile& p) {
    std::ostringstream os;
    os << "k,norm\n";
    os.precision(17);
    for (std::size_t k = 0; k < p.norms.size(); ++k) os << (k + 1) << ',' << p.norms[k] << '\n';
    return os.str();
}

template <class S>
json omega_result_to_json(const OmegaSolveResult<S>& r) {
    json coeffs = json::array();
    for (const auto& c : r.coeffs) coeffs.push_back(scalar_to_json(c));
    return json{{"coeffs", std::move(coeffs)},
                {"consistent", r.consistent},
                {"first_inconsistent_n", r.first_inconsistent_n},
                {"max_residual", r.max_residual}};
}

inline json isometry_report_to_json(const IsometryReport& r) {
    return json{{"column_defects", r.column_defects},
                {"max_column_defect", r.max_column_defect},
                {"max_offdiag_defect", r.max_offdiag_defect},
                {"worst_pair", json::array({r.worst_pair.first, r.worst_pair.second})},
                {"isometric", r.isometric}};
}

inline json boundedness_report_to_json(const BoundednessReport& r) {
    return json{{"symbol", modulus_summary_to_json(r.symbol)},
                {"lambda_min", r.lambda_min},
                {"lambda_max", r.lambda_max},
                {"lambda_trend", trend_name(r.lambda_trend)},
                {"bounded_evidence", r.bounded_evidence},
                {"invertible_evidence", r.invertible_evidence},
                {"decision_floor", r.decision_floor}};
}

inline json norm_estimate_to_json(const NormEstimate& e) {
    return json{{"value", e.value}, {"residual", e.residual}, {"iterations", e.iterations}};
}

inline json parseval_report_to_json(const ParsevalReport& r) {
    json defects = json::array();
    for (const auto& [n, d] : r.probe_defects) defects.push_back(json::array({n, d}));
    return json{{"verdict", basis_kind_name(r.kind)},
                {"probe_cap_used", r.probe_cap_used},
                {"probe_defects", std::move(defects)},
                {"max_probe_defect", r.max_probe_defect},
                {"unit_norm_defect", r.unit_norm_defect},
                {"orthogonality_verdict", verdict_name(r.ortho_verdict)},
                {"note", r.note}};
}

// ---------------------------------------------------------------------------
// schema validation: envelope plus per-kind required report keys

inline const std::map<std::string, std::vector<std::string>>& report_required_keys() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"coefficients", {"file"}},
        {"gram", {"t", "k_cap", "tail_threshold", "entries"}},
        {"ortho", {"residuals"}},
        {"inner", {"residuals", "constant_sq", "lift"}},
        {"tau-sym", {"entries", "identity_holds", "tau_modulus_verdict", "product_verdict", "verdicts_agree"}},
        {"riesz-probe", {"basis"}},
        {"frame-bounds", {"frame"}},
        {"omega-solve", {"solution"}},
        {"moment", {"isometry", "boundedness", "operator_norm"}},
        {"norm-profile", {"profile"}},
    };
    return keys;
}

inline void validate_report(const json& rep) {
    for (const char* key : {"schema_version", "kind", "manifest"})
        if (!rep.contains(key)) throw std::invalid_argument(std::string("report lacks ") + key);
    if (rep["schema_version"].get<std::string>() != kSchemaVersion)
        throw std::invalid_argument("unsupported schema version");
    const auto& table = report_required_keys();
    const auto it = table.find(rep["kind"].get<std::string>());
    if (it == table.end()) throw std::invalid_argument("unknown report kind: " + rep["kind"].get<std::string>());
    for (const std::string& key : it->second)
        if (!rep.contains(key)) throw std::invalid_argument("report of kind " + it->first + " lacks " + key);
    const json& m = rep["manifest"];
    for (const char* key : {"command", "inputs", "caps", "seed", "mode", "t", "tolerances", "out_dir", "timestamp"})
        if (!m.contains(key)) throw std::invalid_argument(std::string("manifest lacks ") + key);
}

// ---------------------------------------------------------------------------
// file helpers

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
}

inline void save_json(const std::string& path, const json& j) { save_text(path, j.dump(2) + "\n"); }

}  // namespace dilation
