#pragma once

// Independent reference computations for the test suite. Everything here
// expands definitions directly (full dilation expansion, naive weighted
// sums) and must stay decoupled from the gcd-parametrized and sparse code
// paths it is used to check.

#include <cstdint>
#include <map>
#include <vector>

#include "dilation/scalar.hpp"
#include "dilation/series.hpp"

namespace oracle {

using dilation::GaussianRational;
using dilation::Rational;

// coefficients of f(z^k) as a dense map degree -> value
template <class S>
std::map<std::uint64_t, S> expand_dilation(const dilation::TruncatedSeries<S>& f, std::uint64_t k) {
    std::map<std::uint64_t, S> out;
    for (std::uint64_t n = 1; n <= f.degree_cap(); ++n) {
        const S c = f.coeff(n);
        if (!dilation::is_zero(c)) out[n * k] = c;
    }
    return out;
}

// <f(z^k), f(z^l)>_t by full expansion and termwise weighted sum
inline GaussianRational gram_entry_brute(const dilation::TruncatedSeries<GaussianRational>& f, long t,
                                         std::uint64_t k, std::uint64_t l) {
    const auto fk = expand_dilation(f, k);
    const auto fl = expand_dilation(f, l);
    GaussianRational acc;
    for (const auto& [m, a] : fk) {
        const auto it = fl.find(m);
        if (it == fl.end()) continue;
        acc += a * it->second.conj() * dilation::rational_pow_uint(m + 1, t);
    }
    return acc;
}

inline dilation::ComplexF64 gram_entry_brute(const dilation::TruncatedSeries<dilation::ComplexF64>& f,
                                             double t, std::uint64_t k, std::uint64_t l) {
    const auto fk = expand_dilation(f, k);
    const auto fl = expand_dilation(f, l);
    dilation::ComplexF64 acc(0.0, 0.0);
    for (const auto& [m, a] : fk) {
        const auto it = fl.find(m);
        if (it == fl.end()) continue;
        acc += a * std::conj(it->second) * std::pow(static_cast<double>(m) + 1.0, t);
    }
    return acc;
}

// ||f||_t^2 by direct weighted sum
inline Rational norm_sq_brute(const dilation::TruncatedSeries<GaussianRational>& f, long t) {
    Rational acc(0);
    for (std::uint64_t n = 1; n <= f.degree_cap(); ++n)
        acc += f.coeff(n).norm_sq() * dilation::rational_pow_uint(n + 1, t);
    return acc;
}

// all principal minors of a Hermitian Gaussian-rational matrix are >= 0
// (positive semidefiniteness test for small dimensions)
inline Rational hermitian_det(const std::vector<GaussianRational>& a, const std::vector<std::size_t>& rows,
                              std::size_t dim) {
    const std::size_t n = rows.size();
    std::vector<GaussianRational> m;
    m.reserve(n * n);
    for (std::size_t r : rows)
        for (std::size_t c : rows) m.push_back(a[r * dim + c]);

    // fraction-full Gaussian elimination over Q(i)
    GaussianRational det(Rational(1));
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t pivot = p;
        while (pivot < n && m[pivot * n + p].is_zero()) ++pivot;
        if (pivot == n) return Rational(0);
        if (pivot != p) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m[p * n + c], m[pivot * n + c]);
            det = -det;
        }
        det = det * m[p * n + p];
        for (std::size_t r = p + 1; r < n; ++r) {
            const GaussianRational factor = m[r * n + p] / m[p * n + p];
            for (std::size_t c = p; c < n; ++c) m[r * n + c] -= factor * m[p * n + c];
        }
    }
    return det.re;  // Hermitian determinant is real
}

inline bool psd_by_principal_minors(const std::vector<GaussianRational>& a, std::size_t dim) {
    // enumerate nonempty row subsets
    for (std::uint32_t mask = 1; mask < (1u << dim); ++mask) {
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < dim; ++r)
            if (mask & (1u << r)) rows.push_back(r);
        if (hermitian_det(a, rows, dim) < 0) return false;
    }
    return true;
}

// Cholesky-with-shift PSD test for float Gram matrices
inline bool psd_by_cholesky(const std::vector<dilation::ComplexF64>& a, std::size_t dim, double tol) {
    std::vector<dilation::ComplexF64> m = a;
    double scale = 0.0;
    for (std::size_t i = 0; i < dim; ++i) scale = std::max(scale, std::abs(m[i * dim + i]));
    const double shift = tol * std::max(1.0, scale);
    std::vector<dilation::ComplexF64> l(dim * dim, {0.0, 0.0});
    for (std::size_t j = 0; j < dim; ++j) {
        double d = m[j * dim + j].real() + shift;
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l[j * dim + k]);
        if (d < 0.0) return false;
        const double root = std::sqrt(d);
        l[j * dim + j] = root;
        if (root == 0.0) continue;
        for (std::size_t i = j + 1; i < dim; ++i) {
            dilation::ComplexF64 acc = m[i * dim + j];
            for (std::size_t k = 0; k < j; ++k) acc -= l[i * dim + k] * std::conj(l[j * dim + k]);
            l[i * dim + j] = acc / root;
        }
    }
    return true;
}

}  // namespace oracle
