#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dilation/basis.hpp"
#include "dilation/bohr.hpp"
#include "dilation/series.hpp"

namespace dilation {

/**
 * Data of the moment problem T z^k = lambda_k f(z^k), k = 1..K, posed on the
 * span of monomials up to degree N*K. The symbol f must have unit norm.
 */
template <class S>
struct MomentProblem {
    TruncatedSeries<S> f;
    double t = 0.0;
    std::vector<S> lambdas;  // lambda_1..lambda_K
    std::size_t k_cap = 0;
    double norm_tol = 1e-9;  // float-mode allowance on ||f||_t = 1
};

/**
 * Matrix of the truncated solution in the monomial basis: column k holds
 * lambda_k f(z^k), i.e. entry(n, k) = lambda_k a_{n/k} when k | n.
 */
template <class S>
struct OperatorMatrix {
    std::size_t k_cap = 0;
    std::size_t row_cap = 0;  // N * K
    double t = 0.0;
    std::vector<S> lambdas;
    TruncatedSeries<S> f;
    std::vector<std::vector<std::pair<std::uint64_t, S>>> cols;  // (row index, value)

    S entry(std::uint64_t n, std::uint64_t k) const {
        if (k == 0 || k > k_cap || n == 0) throw std::out_of_range("OperatorMatrix::entry");
        if (n % k != 0) return scalar_zero<S>();
        return f.coeff(n / k) * lambdas[k - 1];
    }
};

template <class S>
void validate_unit_norm(const TruncatedSeries<S>& f, double t, double norm_tol) {
    if constexpr (is_exact_v<S>) {
        if (norm_squared(f, t) != scalar_one<S>())
            throw std::invalid_argument("moment problem: ||f||_t != 1 in exact mode");
    } else {
        const double d = std::abs(norm(f, t) - 1.0);
        if (d > norm_tol)
            throw std::invalid_argument("moment problem: ||f||_t deviates from 1 by " + std::to_string(d));
    }
}

template <class S>
OperatorMatrix<S> build_operator(const MomentProblem<S>& p) {
    if (p.k_cap == 0 || p.lambdas.size() != p.k_cap)
        throw std::invalid_argument("build_operator: lambda count must equal k_cap");
    validate_unit_norm(p.f, p.t, p.norm_tol);
    OperatorMatrix<S> m;
    m.k_cap = p.k_cap;
    m.row_cap = p.f.degree_cap() * p.k_cap;
    m.t = p.t;
    m.lambdas = p.lambdas;
    m.f = p.f;
    m.cols.resize(p.k_cap);
    for (std::uint64_t k = 1; k <= p.k_cap; ++k)
        for (std::uint64_t n : p.f.support()) m.cols[k - 1].emplace_back(n * k, p.f.coeff(n) * p.lambdas[k - 1]);
    return m;
}

/**
 * Isometry diagnostics on the truncated span: column norms against the
 * source norms ||z^k||_t and pairwise D_t-orthogonality of the columns.
 * Exact mode decides by exact comparison.
 */
struct IsometryReport {
    std::vector<double> column_defects;  // | ||T z^k||_t - ||z^k||_t |
    double max_column_defect = 0.0;
    double max_offdiag_defect = 0.0;
    std::pair<std::uint64_t, std::uint64_t> worst_pair{0, 0};
    bool isometric = false;
};

template <class S>
IsometryReport isometry_check(const OperatorMatrix<S>& m, double float_tol = 1e-10) {
    IsometryReport rep;
    bool exact_ok = true;

    for (std::uint64_t k = 1; k <= m.k_cap; ++k) {
        // ||column k||^2 = |lambda_k|^2 sum_n |a_n|^2 (nk+1)^t
        if constexpr (is_exact_v<S>) {
            Rational col_sq(0);
            for (std::uint64_t n : m.f.support())
                col_sq += m.f.coeff(n).norm_sq() * rational_pow_uint(n * k + 1, require_integer_exponent(m.t));
            col_sq *= m.lambdas[k - 1].norm_sq();
            const Rational target = rational_pow_uint(k + 1, require_integer_exponent(m.t));
            if (col_sq != target) exact_ok = false;
            const double defect = std::abs(std::sqrt(col_sq.get_d()) - std::sqrt(target.get_d()));
            rep.column_defects.push_back(defect);
            rep.max_column_defect = std::max(rep.max_column_defect, defect);
        } else {
            double col_sq = 0.0;
            for (std::uint64_t n : m.f.support())
                col_sq += std::norm(to_complex(m.f.coeff(n))) * std::pow(static_cast<double>(n * k) + 1.0, m.t);
            col_sq *= std::norm(to_complex(m.lambdas[k - 1]));
            const double target = std::pow(static_cast<double>(k) + 1.0, m.t);
            const double defect = std::abs(std::sqrt(col_sq) - std::sqrt(target));
            rep.column_defects.push_back(defect);
            rep.max_column_defect = std::max(rep.max_column_defect, defect);
        }
    }

    for (std::uint64_t k = 1; k <= m.k_cap; ++k)
        for (std::uint64_t l = k + 1; l <= m.k_cap; ++l) {
            // <col_k, col_l>_t = lambda_k conj(lambda_l) <f(z^k), f(z^l)>_t, target 0
            const S ip = gram_entry(m.f, m.t, k, l) * m.lambdas[k - 1] * conj_of(m.lambdas[l - 1]);
            const double mag = abs_of(ip);
            if (!is_zero(ip)) {
                if constexpr (is_exact_v<S>) exact_ok = false;
            }
            if (mag > rep.max_offdiag_defect) {
                rep.max_offdiag_defect = mag;
                rep.worst_pair = {k, l};
            }
        }

    if constexpr (is_exact_v<S>)
        rep.isometric = exact_ok;
    else
        rep.isometric = rep.max_column_defect <= float_tol && rep.max_offdiag_defect <= float_tol;
    return rep;
}

/**
 * Evidence report for the bounded/invertible solution dichotomy: sampled
 * modulus of the weighted lift B_t f plus the two-sided behavior of the
 * lambda moduli along the truncation.
 */
struct BoundednessReport {
    ModulusSummary symbol;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    Trend lambda_trend = Trend::constant;
    bool bounded_evidence = false;
    bool invertible_evidence = false;
    double decision_floor = 1e-3;
};

template <class S>
BoundednessReport boundedness_probe(const MomentProblem<S>& p, std::uint64_t n_samples, std::uint64_t seed,
                                    std::uint64_t tail_threshold = 0, double decision_floor = 1e-3) {
    BoundednessReport rep;
    rep.decision_floor = decision_floor;
    rep.symbol = sample_modulus(bohr_lift_t(to_float(p.f), p.t), n_samples, seed, tail_threshold);

    bool up = false, down = false;
    for (std::size_t k = 0; k < p.lambdas.size(); ++k) {
        const double mag = abs_of(p.lambdas[k]);
        if (k == 0) {
            rep.lambda_min = rep.lambda_max = mag;
        } else {
            const double prev = abs_of(p.lambdas[k - 1]);
            if (mag > prev) up = true;
            if (mag < prev) down = true;
            rep.lambda_min = std::min(rep.lambda_min, mag);
            rep.lambda_max = std::max(rep.lambda_max, mag);
        }
    }
    rep.lambda_trend = up && down ? Trend::mixed : up ? Trend::increasing : down ? Trend::decreasing : Trend::constant;

    const bool lambda_two_sided = rep.lambda_min > 0.0 && rep.lambda_trend != Trend::increasing;
    rep.bounded_evidence = lambda_two_sided;  // symbol max is always finite at truncation
    rep.invertible_evidence =
        lambda_two_sided && (rep.symbol.min - rep.symbol.tail_l1 > decision_floor);
    return rep;
}

/**
 * Largest singular value of the truncated operator as a map D_t -> D_t,
 * via power iteration on the weight-conjugated matrix. Deterministic
 * all-ones start with one perturbed restart; residual is reported.
 */
struct NormEstimate {
    double value = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
};

template <class S>
NormEstimate operator_norm_estimate(const OperatorMatrix<S>& m, std::size_t max_iters = 1000,
                                    double tol = 1e-13) {
    // B(n, k) = entry(n, k) sqrt((n+1)^t) / sqrt((k+1)^t)
    struct Entry {
        std::size_t row;
        std::size_t col;
        ComplexF64 v;
    };
    std::vector<Entry> entries;
    for (std::size_t k = 1; k <= m.k_cap; ++k) {
        const double wk = std::pow(static_cast<double>(k) + 1.0, -m.t / 2.0);
        for (const auto& [n, val] : m.cols[k - 1]) {
            const double wn = std::pow(static_cast<double>(n) + 1.0, m.t / 2.0);
            entries.push_back({static_cast<std::size_t>(n - 1), k - 1, to_complex(val) * wn * wk});
        }
    }

    const std::size_t rows = m.row_cap, cols = m.k_cap;
    std::vector<ComplexF64> x(cols), bx(rows), btbx(cols);
    auto iterate = [&](std::vector<ComplexF64>& v) {
        std::fill(bx.begin(), bx.end(), ComplexF64(0.0, 0.0));
        for (const auto& e : entries) bx[e.row] += e.v * v[e.col];
        std::fill(btbx.begin(), btbx.end(), ComplexF64(0.0, 0.0));
        for (const auto& e : entries) btbx[e.col] += std::conj(e.v) * bx[e.row];
    };
    auto norm2 = [](const std::vector<ComplexF64>& v) {
        double acc = 0.0;
        for (const auto& c : v) acc += std::norm(c);
        return std::sqrt(acc);
    };

    NormEstimate out;
    for (int attempt = 0; attempt < 2; ++attempt) {
        for (std::size_t i = 0; i < cols; ++i)
            x[i] = attempt == 0 ? ComplexF64(1.0, 0.0) : ComplexF64(1.0 + static_cast<double>(i), 0.5);
        double nx = norm2(x);
        for (auto& c : x) c /= nx;
        double sigma_sq = 0.0;
        for (out.iterations = 1; out.iterations <= max_iters; ++out.iterations) {
            iterate(x);
            const double next = norm2(btbx);
            if (next == 0.0) break;  // kernel vector; restart
            out.residual = std::abs(next - sigma_sq);
            sigma_sq = next;
            for (std::size_t i = 0; i < cols; ++i) x[i] = btbx[i] / next;
            if (out.residual <= tol * std::max(1.0, sigma_sq)) break;
        }
        if (sigma_sq > 0.0) {
            out.value = std::sqrt(sigma_sq);
            return out;
        }
    }
    out.value = 0.0;
    return out;
}

}  // namespace dilation
