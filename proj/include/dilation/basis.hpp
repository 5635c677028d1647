#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dilation/bohr.hpp"
#include "dilation/criteria.hpp"
#include "dilation/series.hpp"

namespace dilation {

// sum_{k <= K} c_k f(z^k), truncated at cap N*K
template <class S>
TruncatedSeries<S> synthesize(const TruncatedSeries<S>& f, const std::vector<S>& c) {
    const std::uint64_t k_cap = c.size();
    if (k_cap == 0) return TruncatedSeries<S>(0);
    std::vector<S> out(f.degree_cap() * k_cap);
    for (std::uint64_t k = 1; k <= k_cap; ++k) {
        if (is_zero(c[k - 1])) continue;
        for (std::uint64_t n : f.support()) out[n * k - 1] += f.coeff(n) * c[k - 1];
    }
    return TruncatedSeries<S>(std::move(out));
}

enum class Trend { constant, increasing, decreasing, mixed };

inline const char* trend_name(Trend t) {
    switch (t) {
        case Trend::constant: return "constant";
        case Trend::increasing: return "increasing";
        case Trend::decreasing: return "decreasing";
        case Trend::mixed: return "mixed";
    }
    return "?";
}

struct NormProfile {
    std::vector<double> norms;  // ||f(z^k)||_t for k = 1..K
    Trend trend = Trend::constant;
};

// ||f(z^k)||_t^2 = sum_n |a_n|^2 (nk+1)^t, evaluated without expanding the dilation
template <class S>
NormProfile norm_profile(const TruncatedSeries<S>& f, double t, std::size_t k_cap) {
    if (k_cap < 1) throw std::invalid_argument("norm_profile: k_cap must be >= 1");
    NormProfile out;
    bool up = false, down = false;
    double prev = 0.0;
    for (std::uint64_t k = 1; k <= k_cap; ++k) {
        double acc = 0.0;
        for (std::uint64_t n : f.support())
            acc += std::norm(to_complex(f.coeff(n))) * std::pow(static_cast<double>(n * k) + 1.0, t);
        const double v = std::sqrt(acc);
        if (k > 1) {
            if (v > prev) up = true;
            if (v < prev) down = true;
        }
        prev = v;
        out.norms.push_back(v);
    }
    out.trend = up && down ? Trend::mixed : up ? Trend::increasing : down ? Trend::decreasing : Trend::constant;
    return out;
}

enum class BasisKind { riesz, unconditional, frame, parseval, none };

inline const char* basis_kind_name(BasisKind k) {
    switch (k) {
        case BasisKind::riesz: return "riesz";
        case BasisKind::unconditional: return "unconditional";
        case BasisKind::frame: return "frame";
        case BasisKind::parseval: return "parseval";
        case BasisKind::none: return "none";
    }
    return "?";
}

/**
 * Verdict channel for the symbol-based basis tests. Evidence is the sampled
 * modulus of the weighted lift with its tail bound; a positive lower bound
 * certifies invertibility of the truncated symbol only, never of a full
 * symbol the input may have been cut from.
 */
struct BasisVerdict {
    BasisKind kind = BasisKind::none;
    ModulusSummary evidence;
    double decision_floor = 1e-3;  // min evidence must clear tail + floor
    std::string note;
};

// samples |B_t f| and issues the basis verdict the truncation supports:
// riesz at t = 0, the unconditional channel otherwise
template <class S>
BasisVerdict riesz_probe(const TruncatedSeries<S>& f, double t, std::uint64_t n_samples, std::uint64_t seed,
                         std::uint64_t tail_threshold = 0, double decision_floor = 1e-3) {
    BasisVerdict out;
    out.decision_floor = decision_floor;
    // sampling is float-domain analysis; exact inputs are rounded once here
    out.evidence = sample_modulus(bohr_lift_t(to_float(f), t), n_samples, seed, tail_threshold);
    const bool two_sided = out.evidence.min - out.evidence.tail_l1 > decision_floor;
    if (two_sided)
        out.kind = (t == 0.0) ? BasisKind::riesz : BasisKind::unconditional;
    else
        out.kind = BasisKind::none;
    out.note = two_sided ? "sampled torus modulus of the truncated symbol stays above the floor; "
                           "this is evidence, not a certificate for the untruncated symbol"
                         : "sampled symbol modulus approaches zero; no two-sided bound";
    return out;
}

/**
 * Bessel-ratio estimates over the monomial probe family {z^n : n <= P},
 * with the ratio along a prime-power ladder reported as the trend. Ratios
 * are exact rationals in exact mode (integer t).
 */
template <class S>
struct FrameReport {
    using Real = std::conditional_t<is_exact_v<S>, Rational, double>;

    double a_est = 0.0;
    double b_est = 0.0;
    std::uint64_t a_probe = 0;  // certificates: probes achieving the estimates
    std::uint64_t b_probe = 0;
    std::size_t k_cap = 0;
    std::size_t degree_cap = 0;
    std::uint64_t probe_cap = 0;
    std::uint64_t ladder_prime = 2;
    std::string probe_family;
    std::vector<std::pair<std::uint64_t, Real>> ratios;  // all probes
    std::vector<std::pair<std::uint64_t, Real>> trend;   // ladder subsequence
};

// Bessel ratio at h = z^n: sum_{k <= K} |<h, f(z^k)>_t|^2 / ||h||_t^2
//                        = (n+1)^t sum_{k | n, k <= K} |a_{n/k}|^2
template <class S>
typename FrameReport<S>::Real bessel_ratio(const TruncatedSeries<S>& f, double t, std::size_t k_cap,
                                           std::uint64_t n) {
    if constexpr (is_exact_v<S>) {
        Rational acc(0);
        for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(k_cap, n); ++k) {
            if (n % k != 0) continue;
            const S a = f.coeff(n / k);
            if (!is_zero(a)) acc += a.norm_sq();
        }
        return acc * rational_pow_uint(n + 1, require_integer_exponent(t));
    } else {
        double acc = 0.0;
        for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(k_cap, n); ++k) {
            if (n % k != 0) continue;
            acc += std::norm(to_complex(f.coeff(n / k)));
        }
        return acc * std::pow(static_cast<double>(n) + 1.0, t);
    }
}

template <class S>
FrameReport<S> frame_bounds(const TruncatedSeries<S>& f, double t, std::size_t k_cap,
                            std::uint64_t probe_cap, std::uint64_t ladder_prime = 2) {
    if (k_cap < 1 || probe_cap < 1) throw std::invalid_argument("frame_bounds: caps must be >= 1");
    FrameReport<S> rep;
    rep.k_cap = k_cap;
    rep.degree_cap = f.degree_cap();
    rep.probe_cap = probe_cap;
    rep.ladder_prime = ladder_prime;
    rep.probe_family = "monomials z^n, n <= " + std::to_string(probe_cap) + "; ladder p = " +
                       std::to_string(ladder_prime);

    using Real = typename FrameReport<S>::Real;
    std::optional<Real> lo, hi;
    for (std::uint64_t n = 1; n <= probe_cap; ++n) {
        Real r = bessel_ratio(f, t, k_cap, n);
        if (!lo || r < *lo) {
            lo = r;
            rep.a_probe = n;
        }
        if (!hi || r > *hi) {
            hi = r;
            rep.b_probe = n;
        }
        rep.ratios.emplace_back(n, std::move(r));
    }
    for (std::uint64_t q = ladder_prime; q <= probe_cap; q *= ladder_prime) {
        rep.trend.emplace_back(q, bessel_ratio(f, t, k_cap, q));
        if (q > probe_cap / ladder_prime) break;
    }
    if constexpr (is_exact_v<S>) {
        rep.a_est = lo->get_d();
        rep.b_est = hi->get_d();
    } else {
        rep.a_est = *lo;
        rep.b_est = *hi;
    }
    return rep;
}

// the proof's probe prime: smallest prime p with p > (A / 2B)^{1/t}
inline std::uint64_t frame_ladder_prime(double a_bound, double b_bound, double t) {
    if (t == 0.0 || a_bound <= 0.0 || b_bound <= 0.0)
        throw std::domain_error("frame_ladder_prime: needs t != 0 and positive bounds");
    const double threshold = std::pow(a_bound / (2.0 * b_bound), 1.0 / t);
    std::uint64_t p = 2;
    for (std::size_t m = 0;; ++m) {
        p = prime_sieve().nth(m);
        if (static_cast<double>(p) > threshold) return p;
    }
}

/**
 * Forward substitution through the divisor-triangular system
 * sum_{k | n} c_k a_{n/k} = g_n, n = 1..K. Exact in exact mode. Equations
 * beyond the solved range are replayed as a consistency check.
 */
template <class S>
struct OmegaSolveResult {
    std::vector<S> coeffs;  // c_1..c_K
    bool consistent = true;
    std::uint64_t first_inconsistent_n = 0;
    double max_residual = 0.0;
};

template <class S>
OmegaSolveResult<S> omega_solve(const TruncatedSeries<S>& f, const TruncatedSeries<S>& g, double t,
                                std::size_t k_cap, double float_tol = 1e-10) {
    (void)t;  // the divisor system is weight-free; t only frames the ambient space
    if (k_cap < 1) throw std::invalid_argument("omega_solve: k_cap must be >= 1");
    const S a1 = f.coeff(1);
    if (is_zero(a1)) throw std::domain_error("omega_solve: a_1 = 0, triangular solve unavailable");

    OmegaSolveResult<S> out;
    out.coeffs.resize(k_cap, scalar_zero<S>());
    for (std::uint64_t n = 1; n <= k_cap; ++n) {
        S rhs = g.coeff(n);
        for (std::uint64_t k = 1; k * k <= n; ++k) {
            if (n % k != 0) continue;
            const std::uint64_t k2 = n / k;
            if (k < n) rhs -= out.coeffs[k - 1] * f.coeff(n / k);
            if (k2 != k && k2 < n) rhs -= out.coeffs[k2 - 1] * f.coeff(n / k2);
        }
        out.coeffs[n - 1] = rhs / a1;
    }

    // replay the remaining equations
    const std::uint64_t scan_cap = std::max<std::uint64_t>(g.degree_cap(), f.degree_cap() * k_cap);
    for (std::uint64_t n = k_cap + 1; n <= scan_cap; ++n) {
        S lhs = scalar_zero<S>();
        for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(k_cap, n); ++k) {
            if (n % k != 0) continue;
            lhs += out.coeffs[k - 1] * f.coeff(n / k);
        }
        const S res = lhs - g.coeff(n);
        const double mag = abs_of(res);
        out.max_residual = std::max(out.max_residual, mag);
        bool bad;
        if constexpr (is_exact_v<S>)
            bad = !is_zero(res);
        else
            bad = mag > float_tol * (1.0 + abs_of(g.coeff(n)));
        if (bad && out.consistent) {
            out.consistent = false;
            out.first_inconsistent_n = n;
        }
    }
    return out;
}

/**
 * Kronecker-delta pattern of <f(z^k), y_l>_t against a candidate dual
 * family.
 */
struct BiorthogonalReport {
    std::size_t k_cap = 0;
    std::size_t dual_count = 0;
    std::vector<std::uint8_t> ok;       // row-major K x L
    std::vector<double> defects;        // |<f(z^k), y_l> - delta_{kl}|
    bool identity_pattern = true;

    bool entry_ok(std::size_t k, std::size_t l) const { return ok[(k - 1) * dual_count + (l - 1)] != 0; }
    double defect(std::size_t k, std::size_t l) const { return defects[(k - 1) * dual_count + (l - 1)]; }
};

template <class S>
BiorthogonalReport biorthogonal_check(const TruncatedSeries<S>& f,
                                      const std::vector<TruncatedSeries<S>>& duals, double t,
                                      std::size_t k_cap, double float_tol = 1e-10) {
    BiorthogonalReport rep;
    rep.k_cap = k_cap;
    rep.dual_count = duals.size();
    if (duals.empty() || k_cap == 0) return rep;
    rep.ok.assign(k_cap * duals.size(), 0);
    rep.defects.assign(k_cap * duals.size(), 0.0);
    for (std::size_t k = 1; k <= k_cap; ++k) {
        const auto fk = dilate(f, k);
        for (std::size_t l = 1; l <= duals.size(); ++l) {
            S v = inner_product(fk, duals[l - 1], t);
            if (k == l) v -= scalar_one<S>();
            const double mag = abs_of(v);
            bool good;
            if constexpr (is_exact_v<S>)
                good = is_zero(v);
            else
                good = mag <= float_tol;
            rep.ok[(k - 1) * duals.size() + (l - 1)] = good ? 1 : 0;
            rep.defects[(k - 1) * duals.size() + (l - 1)] = mag;
            if (!good) rep.identity_pattern = false;
        }
    }
    return rep;
}

/**
 * Parseval identity on the monomial probe family, cross-checked with the
 * orthogonality criterion and the unit-norm requirement. Probes are limited
 * to n <= min(P, K) so every divisor term of the Bessel sum is inside the
 * dilation range; completeness is out of reach at truncation and is
 * reported as not assessed.
 */
struct ParsevalReport {
    BasisKind kind = BasisKind::none;  // parseval or none
    std::uint64_t probe_cap_used = 0;
    std::vector<std::pair<std::uint64_t, double>> probe_defects;  // | sum - ||h||^2 | / ||h||^2
    double max_probe_defect = 0.0;
    double unit_norm_defect = 0.0;
    Verdict ortho_verdict = Verdict::all_zero;
    std::string note = "completeness not assessed";
};

template <class S>
ParsevalReport parseval_check(const TruncatedSeries<S>& f, std::size_t k_cap, std::uint64_t probe_cap,
                              const ResidualOptions& opts = {}, double float_tol = 1e-10) {
    ParsevalReport rep;
    rep.probe_cap_used = std::min<std::uint64_t>(probe_cap, k_cap);
    for (std::uint64_t n = 1; n <= rep.probe_cap_used; ++n) {
        double ratio;
        if constexpr (is_exact_v<S>)
            ratio = bessel_ratio(f, 0.0, k_cap, n).get_d();
        else
            ratio = bessel_ratio(f, 0.0, k_cap, n);
        const double defect = std::abs(ratio - 1.0);
        rep.probe_defects.emplace_back(n, defect);
        rep.max_probe_defect = std::max(rep.max_probe_defect, defect);
    }
    rep.unit_norm_defect = std::abs(norm(f, 0.0) - 1.0);
    rep.ortho_verdict = k_cap >= 2 ? orthogonality_test(f, 0.0, k_cap, opts).verdict : Verdict::all_zero;

    const bool probes_ok = rep.max_probe_defect <= float_tol;
    const bool norm_ok = rep.unit_norm_defect <= float_tol;
    const bool ortho_ok = rep.ortho_verdict == Verdict::all_zero;
    rep.kind = (probes_ok && norm_ok && ortho_ok) ? BasisKind::parseval : BasisKind::none;
    return rep;
}

}  // namespace dilation
