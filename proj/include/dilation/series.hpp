#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dilation/parallel.hpp"
#include "dilation/scalar.hpp"

namespace dilation {

/**
 * The space parameter t and the two weight laws it induces: (n+1)^t for the
 * norm and n^{t/2} for the coefficient rescaling S_t.
 */
struct DirichletWeight {
    double t = 0.0;

    double norm_weight(std::uint64_t n) const { return std::pow(static_cast<double>(n) + 1.0, t); }
    double scale_weight(std::uint64_t n) const { return std::pow(static_cast<double>(n), t / 2.0); }

    Rational norm_weight_exact(std::uint64_t n) const {
        return rational_pow_uint(n + 1, require_integer_exponent(t));
    }
    Rational scale_weight_exact(std::uint64_t n) const {
        return rational_pow_uint(n, require_even_integer_half(t));
    }
};

/**
 * Finitely supported coefficient sequence a_1..a_N of a function with no
 * constant term. Index 0 does not exist; trailing zeros are permitted.
 * Values are immutable once constructed.
 */
template <class S>
class TruncatedSeries {
public:
    explicit TruncatedSeries(std::size_t degree_cap = 0) : coeffs_(degree_cap) {}

    explicit TruncatedSeries(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) {}

    static TruncatedSeries monomial(std::uint64_t degree, S value) {
        if (degree == 0) throw std::invalid_argument("TruncatedSeries: no constant term exists");
        std::vector<S> c(degree);
        c[degree - 1] = std::move(value);
        return TruncatedSeries(std::move(c));
    }

    std::size_t degree_cap() const { return coeffs_.size(); }

    // coefficient a_n; zero beyond the cap, index 0 rejected
    S coeff(std::uint64_t n) const {
        if (n == 0) throw std::out_of_range("TruncatedSeries: index 0 does not exist");
        if (n > coeffs_.size()) return scalar_zero<S>();
        return coeffs_[n - 1];
    }

    const std::vector<S>& coeffs() const { return coeffs_; }

    std::vector<std::uint64_t> support() const {
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (!is_zero(coeffs_[i])) out.push_back(i + 1);
        return out;
    }

    bool is_zero_series() const {
        for (const auto& c : coeffs_)
            if (!is_zero(c)) return false;
        return true;
    }

private:
    std::vector<S> coeffs_;
};

// <f, g>_t = sum conj(g_n) f_n (n+1)^t: linear in f, conjugate-linear in g
template <class S>
S inner_product(const TruncatedSeries<S>& f, const TruncatedSeries<S>& g, double t) {
    const std::size_t n_max = std::min(f.degree_cap(), g.degree_cap());
    S acc = scalar_zero<S>();
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const S fn = f.coeff(n);
        const S gn = g.coeff(n);
        if (is_zero(fn) || is_zero(gn)) continue;
        acc += mul_int_pow(fn * conj_of(gn), n + 1, t);
    }
    return acc;
}

// ||f||_t^2 as a scalar (real part carries the value; exact in exact mode)
template <class S>
S norm_squared(const TruncatedSeries<S>& f, double t) {
    S acc = scalar_zero<S>();
    for (std::uint64_t n = 1; n <= f.degree_cap(); ++n) {
        const S fn = f.coeff(n);
        if (is_zero(fn)) continue;
        if constexpr (is_exact_v<S>)
            acc += GaussianRational(fn.norm_sq()) * rational_pow_uint(n + 1, require_integer_exponent(t));
        else
            acc += std::norm(fn) * std::pow(static_cast<double>(n) + 1.0, t);
    }
    return acc;
}

template <class S>
double norm(const TruncatedSeries<S>& f, double t) {
    if constexpr (is_exact_v<S>)
        return std::sqrt(norm_squared(f, t).re.get_d());
    else {
        double acc = 0.0;
        for (std::uint64_t n = 1; n <= f.degree_cap(); ++n)
            acc += std::norm(f.coeff(n)) * std::pow(static_cast<double>(n) + 1.0, t);
        return std::sqrt(acc);
    }
}

// C_k f(z) = f(z^k): coefficient a_n moves to index nk; cap becomes N*k
template <class S>
TruncatedSeries<S> dilate(const TruncatedSeries<S>& f, std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("dilate: k must be positive");
    const std::uint64_t cap = f.degree_cap();
    constexpr std::uint64_t kMaxCap = std::uint64_t{1} << 26;
    if (k != 1 && (cap > kMaxCap / k))
        throw std::overflow_error("dilate: index range overflow");
    std::vector<S> out(static_cast<std::size_t>(cap * k));
    for (std::uint64_t n = 1; n <= cap; ++n) {
        const S c = f.coeff(n);
        if (!is_zero(c)) out[n * k - 1] = c;
    }
    return TruncatedSeries<S>(std::move(out));
}

// S_t: a_n -> a_n n^{t/2}; exact mode requires an even integer t
template <class S>
TruncatedSeries<S> scale_st(const TruncatedSeries<S>& f, double t) {
    std::vector<S> out(f.degree_cap());
    for (std::uint64_t n = 1; n <= f.degree_cap(); ++n) {
        const S c = f.coeff(n);
        if (!is_zero(c)) out[n - 1] = mul_half_pow(c, n, t);
    }
    return TruncatedSeries<S>(std::move(out));
}

template <class S>
S inner_product(const TruncatedSeries<S>& f, const TruncatedSeries<S>& g, const DirichletWeight& w) {
    return inner_product(f, g, w.t);
}

template <class S>
double norm(const TruncatedSeries<S>& f, const DirichletWeight& w) {
    return norm(f, w.t);
}

template <class S>
TruncatedSeries<S> scale_st(const TruncatedSeries<S>& f, const DirichletWeight& w) {
    return scale_st(f, w.t);
}

// float view of a series; exact coefficients are rounded once
template <class S>
TruncatedSeries<ComplexF64> to_float(const TruncatedSeries<S>& f) {
    std::vector<ComplexF64> out(f.degree_cap());
    for (std::uint64_t n = 1; n <= f.degree_cap(); ++n) out[n - 1] = to_complex(f.coeff(n));
    return TruncatedSeries<ComplexF64>(std::move(out));
}

template <class S>
TruncatedSeries<S> add(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
    std::vector<S> out(std::max(a.degree_cap(), b.degree_cap()));
    for (std::uint64_t n = 1; n <= out.size(); ++n) out[n - 1] = a.coeff(n) + b.coeff(n);
    return TruncatedSeries<S>(std::move(out));
}

template <class S>
TruncatedSeries<S> scale(const TruncatedSeries<S>& a, const S& c) {
    std::vector<S> out(a.degree_cap());
    for (std::uint64_t n = 1; n <= out.size(); ++n) out[n - 1] = a.coeff(n) * c;
    return TruncatedSeries<S>(std::move(out));
}

// head/tail split of f at a base-index threshold
template <class S>
TruncatedSeries<S> tail_beyond(const TruncatedSeries<S>& f, std::uint64_t threshold) {
    std::vector<S> out(f.degree_cap());
    for (std::uint64_t n = threshold + 1; n <= f.degree_cap(); ++n) out[n - 1] = f.coeff(n);
    return TruncatedSeries<S>(std::move(out));
}

/**
 * Hermitian K x K matrix of dilation inner products <f(z^k), f(z^l)>_t plus
 * per-entry truncation tail bounds. Tail bounds are identically zero in
 * exact mode; in float mode they are Cauchy-Schwarz bounds on what
 * coefficients beyond `tail_threshold` could contribute.
 */
template <class S>
struct GramReport {
    std::size_t k_cap = 0;
    double t = 0.0;
    std::uint64_t tail_threshold = 0;  // 0: input treated as complete
    std::vector<S> entries;            // row-major, 1-based accessors below
    std::vector<double> tail_bounds;

    const S& entry(std::size_t k, std::size_t l) const { return entries[(k - 1) * k_cap + (l - 1)]; }
    double tail(std::size_t k, std::size_t l) const { return tail_bounds[(k - 1) * k_cap + (l - 1)]; }
};

namespace detail {

// weighted norm of the k-dilation of f restricted to base indices in (lo, hi]
template <class S>
double dilated_norm_slice(const TruncatedSeries<S>& f, double t, std::uint64_t k, std::uint64_t lo,
                          std::uint64_t hi) {
    double acc = 0.0;
    for (std::uint64_t n = lo + 1; n <= hi; ++n) {
        const S c = f.coeff(n);
        if (is_zero(c)) continue;
        acc += std::norm(to_complex(c)) * std::pow(static_cast<double>(n * k) + 1.0, t);
    }
    return std::sqrt(acc);
}

}  // namespace detail

/**
 * Gram entry via the gcd parametrization: with g = gcd(k, l), i = k/g,
 * j = l/g, the entry is sum_r a_{jr} conj(a_{ir}) (g i j r + 1)^t over r with
 * both base indices inside the support range.
 */
template <class S>
S gram_entry(const TruncatedSeries<S>& f, double t, std::uint64_t k, std::uint64_t l) {
    const std::uint64_t g = std::gcd(k, l);
    const std::uint64_t i = k / g;
    const std::uint64_t j = l / g;
    const std::uint64_t cap = f.degree_cap();
    const std::uint64_t r_max = cap / std::max(i, j);
    S acc = scalar_zero<S>();
    for (std::uint64_t r = 1; r <= r_max; ++r) {
        const S a_jr = f.coeff(j * r);
        if (is_zero(a_jr)) continue;
        const S a_ir = f.coeff(i * r);
        if (is_zero(a_ir)) continue;
        acc += mul_int_pow(a_jr * conj_of(a_ir), g * i * j * r + 1, t);
    }
    return acc;
}

template <class S>
GramReport<S> gram(const TruncatedSeries<S>& f, double t, std::size_t k_cap,
                   std::uint64_t tail_threshold = 0) {
    if (k_cap < 1) throw std::invalid_argument("gram: k_cap must be >= 1");
    GramReport<S> rep;
    rep.k_cap = k_cap;
    rep.t = t;
    rep.tail_threshold = tail_threshold;
    rep.entries.assign(k_cap * k_cap, scalar_zero<S>());
    rep.tail_bounds.assign(k_cap * k_cap, 0.0);

    // tail bounds only apply in float mode with a declared threshold
    std::vector<double> full(k_cap + 1, 0.0), head(k_cap + 1, 0.0), tail(k_cap + 1, 0.0);
    const bool with_tails = !is_exact_v<S> && tail_threshold > 0 && tail_threshold < f.degree_cap();
    if (with_tails) {
        for (std::size_t k = 1; k <= k_cap; ++k) {
            head[k] = detail::dilated_norm_slice(f, t, k, 0, tail_threshold);
            tail[k] = detail::dilated_norm_slice(f, t, k, tail_threshold, f.degree_cap());
            full[k] = std::sqrt(head[k] * head[k] + tail[k] * tail[k]);
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 1; k <= k_cap; ++k)
        for (std::size_t l = k; l <= k_cap; ++l) pairs.emplace_back(k, l);

    parallel_for(pairs.size(), [&](std::size_t idx) {
        const auto [k, l] = pairs[idx];
        S e = gram_entry(f, t, k, l);
        if (k == l) {
            // diagonal entries are real by construction; pin the imaginary part
            if constexpr (is_exact_v<S>)
                e.im = 0;
            else
                e.imag(0.0);
        }
        rep.entries[(k - 1) * k_cap + (l - 1)] = e;
        if (k != l) rep.entries[(l - 1) * k_cap + (k - 1)] = conj_of(e);
        if (with_tails) {
            const double b = tail[k] * full[l] + head[k] * tail[l];
            rep.tail_bounds[(k - 1) * k_cap + (l - 1)] = b;
            if (k != l) rep.tail_bounds[(l - 1) * k_cap + (k - 1)] = b;
        }
    });
    return rep;
}

}  // namespace dilation
