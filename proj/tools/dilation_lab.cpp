// Batch driver for the dilation-system diagnostics: fixture generation,
// criterion runs, report persistence, and plot-data emission.
//
// Exit codes: 0 verdict computed, 1 input error, 2 inconclusive
// (tail-dominated). DILATION_LAB_THREADS caps internal parallelism.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dilation/fixtures.hpp"
#include "dilation/json_io.hpp"

namespace fs = std::filesystem;
using namespace dilation;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInconclusive = 2;

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return buf;
}

struct Options {
    std::string input;
    std::string target;   // omega-solve right-hand side
    std::string problem;  // moment problem file
    std::string out = ".";
    std::string mode;  // empty: derive from input file
    std::optional<double> t;
    std::size_t k_cap = 8;
    std::uint64_t pairs_cap = 8;
    std::uint64_t degree_cap = 0;
    std::uint64_t probes = 64;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    std::uint64_t tail_threshold = 0;
    std::uint64_t ladder_prime = 2;
    double resolution = std::numeric_limits<double>::infinity();
    double floor = 1e-3;
    std::string timestamp;

    // gen-specific
    std::string kind = "blaschke";
    std::string a_value = "1/2";
    std::string coeff_value = "1";
    std::size_t levels = 8;
    std::uint64_t degree = 1;
    std::size_t support_count = 4;
    std::uint64_t max_index = 16;

    std::string tau_spec = "star";
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out, "output directory for reports");
    cmd->add_option("--t", o.t, "space parameter t (default: the input file's t)");
    cmd->add_option("--mode", o.mode, "exact|float; must match the input file when given");
    cmd->add_option("--k-cap", o.k_cap, "dilation index cap K");
    cmd->add_option("--pairs-cap", o.pairs_cap, "coprime pair cap");
    cmd->add_option("--degree-cap", o.degree_cap, "degree cap override");
    cmd->add_option("--samples", o.samples, "Monte Carlo sample count");
    cmd->add_option("--seed", o.seed, "sampler seed");
    cmd->add_option("--tail-threshold", o.tail_threshold,
                    "base index beyond which coefficients count as truncation-affected (0: none)");
    cmd->add_option("--resolution", o.resolution,
                    "tail bounds above this degrade all_zero to inconclusive");
    cmd->add_option("--timestamp", o.timestamp, "manifest timestamp override (reproducible reports)");
}

RunManifest make_manifest(const std::string& command, const Options& o, const std::string& mode, double t) {
    RunManifest m;
    m.command = command;
    if (!o.input.empty()) m.inputs.push_back(o.input);
    if (!o.target.empty()) m.inputs.push_back(o.target);
    if (!o.problem.empty()) m.inputs.push_back(o.problem);
    m.caps = json{{"k_cap", o.k_cap},   {"pairs_cap", o.pairs_cap}, {"degree_cap", o.degree_cap},
                  {"probes", o.probes}, {"samples", o.samples},     {"tail_threshold", o.tail_threshold},
                  {"levels", o.levels}};
    m.seed = o.seed;
    m.mode = mode;
    m.t = t;
    m.tolerances = json::object();
    if (std::isfinite(o.resolution)) m.tolerances["resolution"] = o.resolution;
    m.tolerances["decision_floor"] = o.floor;
    m.out_dir = o.out;
    m.timestamp = o.timestamp.empty() ? utc_now() : o.timestamp;
    return m;
}

void write_report(const Options& o, const std::string& name, const json& report) {
    fs::create_directories(o.out);
    validate_report(report);
    save_json((fs::path(o.out) / name).string(), report);
}

template <class S>
S parse_scalar(const std::string& text) {
    const auto comma = text.find(',');
    const std::string re = text.substr(0, comma);
    const std::string im = comma == std::string::npos ? "" : text.substr(comma + 1);
    if constexpr (is_exact_v<S>) {
        return GaussianRational(parse_rational(re), im.empty() ? Rational(0) : parse_rational(im));
    } else {
        return ComplexF64(std::stod(re), im.empty() ? 0.0 : std::stod(im));
    }
}

// lambda entries: bare number or "p/q" = modulus with phase 1; pairs/quads = full scalar
template <class S>
S parse_lambda(const json& entry) {
    if (entry.is_number()) {
        if constexpr (is_exact_v<S>)
            throw std::invalid_argument("exact lambdas must be rational strings or [num,den,num,den]");
        else
            return ComplexF64(entry.get<double>(), 0.0);
    }
    if (entry.is_string()) {
        if constexpr (is_exact_v<S>)
            return GaussianRational(parse_rational(entry.get<std::string>()));
        else
            return ComplexF64(std::stod(entry.get<std::string>()), 0.0);
    }
    return coeff_from_json<S>(entry);
}

ResidualOptions residual_options(const Options& o) {
    ResidualOptions r;
    r.tail_threshold = o.tail_threshold;
    r.resolution = o.resolution;
    return r;
}

int verdict_exit(Verdict v) { return v == Verdict::inconclusive ? kExitInconclusive : kExitOk; }

template <class S>
TruncatedSeries<S> recap(TruncatedSeries<S> f, std::uint64_t cap) {
    if (cap == 0 || cap == f.degree_cap()) return f;
    std::vector<S> coeffs = f.coeffs();
    coeffs.resize(cap);
    return TruncatedSeries<S>(std::move(coeffs));
}

// loads the input file, checks the declared mode, and dispatches
template <class Fn>
int with_series(const Options& o, Fn&& fn) {
    const json file = load_json(o.input);
    const std::string mode = mode_of(file);
    if (!o.mode.empty() && o.mode != mode)
        throw std::invalid_argument("mode mismatch: file is " + mode + ", --mode asked for " + o.mode);
    const double t = o.t.value_or(file_t(file));
    if (mode == "exact") {
        auto f = recap(series_from_json<GaussianRational>(file), o.degree_cap);
        return fn(std::move(f), t, mode);
    }
    auto f = recap(series_from_json<ComplexF64>(file), o.degree_cap);
    return fn(std::move(f), t, mode);
}

// --------------------------------------------------------------------------
// subcommands

int run_gen(const Options& o) {
    const std::string mode = o.mode.empty() ? "float" : o.mode;
    const double t = o.t.value_or(0.0);

    auto emit = [&](auto series) {
        fs::create_directories(o.out);
        const std::string path = (fs::path(o.out) / "coefficients.json").string();
        save_json(path, series_to_json(series, t));
        json report = report_envelope("coefficients", make_manifest("gen", o, mode, t));
        report["file"] = path;
        report["kind_generated"] = o.kind;
        write_report(o, "gen.json", report);
        return kExitOk;
    };

    auto build = [&](auto scalar_tag) {
        using S = decltype(scalar_tag);
        if (o.kind == "blaschke") return emit(blaschke_series<S>(parse_scalar<S>(o.a_value), o.levels));
        if (o.kind == "monomial") return emit(monomial_series<S>(o.degree, parse_scalar<S>(o.coeff_value)));
        if (o.kind == "random")
            return emit(random_series<S>(o.seed, o.support_count, o.max_index, /*force_a1=*/true));
        throw std::invalid_argument("unknown generator kind: " + o.kind);
    };
    return mode == "exact" ? build(GaussianRational{}) : build(ComplexF64{});
}

int run_gram(const Options& o) {
    return with_series(o, [&](auto f, double t, const std::string& mode) {
        const auto rep = gram(f, t, o.k_cap, o.tail_threshold);
        json report = gram_report_to_json(rep, make_manifest("gram", o, mode, t));
        write_report(o, "gram.json", report);
        save_text((fs::path(o.out) / "gram.csv").string(), gram_report_to_csv(rep));
        return kExitOk;
    });
}

int run_ortho(const Options& o) {
    return with_series(o, [&](auto f, double t, const std::string& mode) {
        const auto rep = orthogonality_test(f, t, o.k_cap, residual_options(o));
        json report = report_envelope("ortho", make_manifest("ortho", o, mode, t));
        report["residuals"] = residual_report_to_json(rep);
        write_report(o, "ortho.json", report);
        return verdict_exit(rep.verdict);
    });
}

int run_inner(const Options& o) {
    return with_series(o, [&](auto f, double t, const std::string& mode) {
        const auto lift = bohr_lift_t(f, t);
        const auto rep = inner_test(lift, o.pairs_cap, residual_options(o));
        json report = report_envelope("inner", make_manifest("inner", o, mode, t));
        report["residuals"] = residual_report_to_json(rep.residuals);
        report["constant_sq"] = scalar_to_json(rep.constant_sq);
        report["lift"] = bohr_series_to_json(lift);
        write_report(o, "inner.json", report);
        return verdict_exit(rep.residuals.verdict);
    });
}

Tau parse_tau(const std::string& spec) {
    if (spec == "star") return Tau::star();
    if (spec == "star2" || spec == "star-squared") return Tau::star_squared();
    if (spec == "ones") return Tau::all_ones();
    std::vector<Rational> radii;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const auto comma = spec.find(',', pos);
        radii.push_back(parse_rational(spec.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return Tau::from_rationals(std::move(radii));
}

int run_tau_sym(const Options& o) {
    return with_series(o, [&](auto f, double t, const std::string& mode) {
        const auto rep = tau_symmetry_test(bohr_lift(f), parse_tau(o.tau_spec), o.pairs_cap,
                                           residual_options(o));
        json entries = json::array();
        for (const auto& e : rep.entries)
            entries.push_back(json{{"i", e.i},
                                   {"j", e.j},
                                   {"lhs", scalar_to_json(e.lhs)},
                                   {"rhs", scalar_to_json(e.rhs)},
                                   {"diff", e.diff}});
        json report = report_envelope("tau-sym", make_manifest("tau-sym", o, mode, t));
        report["entries"] = std::move(entries);
        report["identity_holds"] = rep.identity_holds;
        report["tau_modulus_verdict"] = verdict_name(rep.tau_modulus_verdict);
        report["product_verdict"] = verdict_name(rep.product_verdict);
        report["verdicts_agree"] = rep.verdicts_agree;
        write_report(o, "tausym.json", report);
        const bool inconclusive = rep.tau_modulus_verdict == Verdict::inconclusive ||
                                  rep.product_verdict == Verdict::inconclusive;
        return inconclusive ? kExitInconclusive : kExitOk;
    });
}

int run_riesz_probe(const Options& o) {
    return with_series(o, [&](auto f, double t, const std::string& mode) {
        const auto verdict = riesz_probe(f, t, o.samples, o.seed, o.tail_threshold, o.floor);
        json report = report_envelope("riesz-probe", make_manifest("riesz-probe", o, mode, t));
        report["basis"] = basis_verdict_to_json(verdict);
        write_report(o, "riesz.json", report);
        save_text((fs::path(o.out) / "modulus.csv").string(), modulus_histogram_to_csv(verdict.evidence));
        // tail-dominated: the tail alone pushed the evidence below the floor
        const bool tail_flip = verdict.kind == BasisKind::none && verdict.evidence.min > o.floor &&
                               verdict.evidence.min - verdict.evidence.tail_l1 <= o.floor;
        return tail_flip ? kExitInconclusive : kExitOk;
    });
}

int run_frame_bounds(const Options& o) {
    return with_series(o, [&](auto f, double t, const std::string& mode) {
        const auto rep = frame_bounds(f, t, o.k_cap, o.probes, o.ladder_prime);
        json report = report_envelope("frame-bounds", make_manifest("frame-bounds", o, mode, t));
        report["frame"] = frame_report_to_json(rep);
        write_report(o, "frame.json", report);
        save_text((fs::path(o.out) / "trend.csv").string(), frame_trend_to_csv(rep));
        return kExitOk;
    });
}

int run_omega_solve(const Options& o) {
    const json f_file = load_json(o.input);
    const json g_file = load_json(o.target);
    const std::string mode = mode_of(f_file);
    if (mode_of(g_file) != mode)
        throw std::invalid_argument("mode mismatch between input and target files");
    if (!o.mode.empty() && o.mode != mode)
        throw std::invalid_argument("mode mismatch: files are " + mode + ", --mode asked for " + o.mode);
    const double t = o.t ? *o.t : file_t(f_file);

    auto run = [&](auto scalar_tag) {
        using S = decltype(scalar_tag);
        const auto f = recap(series_from_json<S>(f_file), o.degree_cap);
        const auto g = series_from_json<S>(g_file);
        const auto sol = omega_solve(f, g, t, o.k_cap);
        json report = report_envelope("omega-solve", make_manifest("omega-solve", o, mode, t));
        report["solution"] = omega_result_to_json(sol);
        write_report(o, "omega.json", report);
        return kExitOk;
    };
    return mode == "exact" ? run(GaussianRational{}) : run(ComplexF64{});
}

int run_moment(const Options& o) {
    const json spec = load_json(o.problem);
    if (!spec.contains("f") || !spec["f"].is_string())
        throw std::invalid_argument("moment problem file needs an \"f\" coefficient file reference");
    const fs::path base = fs::path(o.problem).parent_path();
    fs::path f_path = spec["f"].get<std::string>();
    if (f_path.is_relative()) f_path = base / f_path;
    const json f_file = load_json(f_path.string());
    const std::string mode = mode_of(f_file);
    const double t = spec.contains("t") ? spec["t"].get<double>() : file_t(f_file);

    auto run = [&](auto scalar_tag) {
        using S = decltype(scalar_tag);
        MomentProblem<S> p;
        p.f = series_from_json<S>(f_file);
        p.t = t;
        if (spec.contains("degree_cap")) {
            const std::uint64_t cap = spec["degree_cap"].get<std::uint64_t>();
            std::vector<S> coeffs(p.f.coeffs());
            coeffs.resize(cap);
            p.f = TruncatedSeries<S>(std::move(coeffs));
        }
        for (const json& entry : spec.at("lambdas")) p.lambdas.push_back(parse_lambda<S>(entry));
        p.k_cap = spec.contains("k_cap") ? spec["k_cap"].get<std::size_t>() : p.lambdas.size();
        if (p.k_cap != p.lambdas.size())
            throw std::invalid_argument("moment problem: k_cap must match the lambda count");

        const auto op = build_operator(p);
        json report = report_envelope("moment", make_manifest("moment", o, mode, t));
        report["isometry"] = isometry_report_to_json(isometry_check(op));
        report["boundedness"] =
            boundedness_report_to_json(boundedness_probe(p, o.samples, o.seed, o.tail_threshold, o.floor));
        report["operator_norm"] = norm_estimate_to_json(operator_norm_estimate(op));
        write_report(o, "moment.json", report);
        return kExitOk;
    };
    return mode == "exact" ? run(GaussianRational{}) : run(ComplexF64{});
}

int run_norm_profile(const Options& o) {
    return with_series(o, [&](auto f, double t, const std::string& mode) {
        const auto prof = norm_profile(f, t, o.k_cap);
        json report = report_envelope("norm-profile", make_manifest("norm-profile", o, mode, t));
        report["profile"] = norm_profile_to_json(prof);
        write_report(o, "profile.json", report);
        save_text((fs::path(o.out) / "profile.csv").string(), norm_profile_to_csv(prof));
        return kExitOk;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"power dilation system diagnostics in Dirichlet-type spaces"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("gen", "generate a coefficient fixture file");
    gen->add_option("--kind", o.kind, "blaschke|monomial|random");
    gen->add_option("--a", o.a_value, "Blaschke parameter, e.g. 1/2 or 0.5,0.25 (re,im)");
    gen->add_option("--levels", o.levels, "Blaschke truncation level M (cap 2^M)");
    gen->add_option("--degree", o.degree, "monomial degree N");
    gen->add_option("--coeff", o.coeff_value, "monomial coefficient");
    gen->add_option("--support-count", o.support_count, "random fixture support size");
    gen->add_option("--max-index", o.max_index, "random fixture largest index");
    add_common(gen, o);

    auto* gram_cmd = app.add_subcommand("gram", "Gram matrix of the dilation system");
    gram_cmd->add_option("--input,-i", o.input, "coefficient file")->required();
    add_common(gram_cmd, o);

    auto* ortho = app.add_subcommand("ortho", "orthogonality criterion");
    ortho->add_option("--input,-i", o.input, "coefficient file")->required();
    add_common(ortho, o);

    auto* inner = app.add_subcommand("inner", "constant-modulus criterion of the Bohr lift");
    inner->add_option("--input,-i", o.input, "coefficient file")->required();
    add_common(inner, o);

    auto* tau_sym = app.add_subcommand("tau-sym", "diagonal-operator symmetry identity");
    tau_sym->add_option("--input,-i", o.input, "coefficient file")->required();
    tau_sym->add_option("--tau", o.tau_spec, "star|star2|ones or comma-separated rational radii");
    add_common(tau_sym, o);

    auto* riesz = app.add_subcommand("riesz-probe", "sampled symbol modulus and basis verdict");
    riesz->add_option("--input,-i", o.input, "coefficient file")->required();
    riesz->add_option("--floor", o.floor, "decision floor for the two-sided verdict");
    add_common(riesz, o);

    auto* frame = app.add_subcommand("frame-bounds", "Bessel-ratio frame bound estimates");
    frame->add_option("--input,-i", o.input, "coefficient file")->required();
    frame->add_option("--probes", o.probes, "monomial probe cap P");
    frame->add_option("--ladder-prime", o.ladder_prime, "prime for the probe ladder");
    add_common(frame, o);

    auto* omega = app.add_subcommand("omega-solve", "divisor-triangular coefficient solve");
    omega->add_option("--input,-i", o.input, "coefficient file for f")->required();
    omega->add_option("--target", o.target, "coefficient file for g")->required();
    add_common(omega, o);

    auto* moment = app.add_subcommand("moment", "operator moment problem diagnostics");
    moment->add_option("--problem", o.problem, "moment problem JSON")->required();
    moment->add_option("--floor", o.floor, "decision floor for invertibility evidence");
    add_common(moment, o);

    auto* profile = app.add_subcommand("norm-profile", "norms of the dilation family");
    profile->add_option("--input,-i", o.input, "coefficient file")->required();
    add_common(profile, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(o);
        if (gram_cmd->parsed()) return run_gram(o);
        if (ortho->parsed()) return run_ortho(o);
        if (inner->parsed()) return run_inner(o);
        if (tau_sym->parsed()) return run_tau_sym(o);
        if (riesz->parsed()) return run_riesz_probe(o);
        if (frame->parsed()) return run_frame_bounds(o);
        if (omega->parsed()) return run_omega_solve(o);
        if (moment->parsed()) return run_moment(o);
        if (profile->parsed()) return run_norm_profile(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
