#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dilation/bohr.hpp"
#include "dilation/series.hpp"

namespace dilation {

/**
 * Preimage under the Bohr transform of the one-variable Blaschke factor
 * (a - zeta_1)/(1 - conj(a) zeta_1): coefficients a at z, and
 * -(1 - |a|^2) conj(a)^{m-1} at z^{2^m} for m = 1..levels. Its dilation
 * system is orthogonal in the t = 0 space.
 */
template <class S>
TruncatedSeries<S> blaschke_series(const S& a, std::size_t levels) {
    if (levels < 1 || levels > 24) throw std::invalid_argument("blaschke_series: levels must be in [1, 24]");

    S one_minus = scalar_one<S>();
    if constexpr (is_exact_v<S>) {
        if (!(a.norm_sq() < 1)) throw std::domain_error("blaschke_series: |a| must be < 1");
        one_minus = GaussianRational(Rational(1) - a.norm_sq());
    } else {
        if (!(std::norm(a) < 1.0)) throw std::domain_error("blaschke_series: |a| must be < 1");
        one_minus = ComplexF64(1.0 - std::norm(a), 0.0);
    }

    std::vector<S> coeffs(std::size_t{1} << levels);
    coeffs[0] = a;
    S pow_conj = scalar_one<S>();  // conj(a)^{m-1}
    for (std::size_t m = 1; m <= levels; ++m) {
        coeffs[(std::size_t{1} << m) - 1] = -(one_minus * pow_conj);
        pow_conj = pow_conj * conj_of(a);
    }
    return TruncatedSeries<S>(std::move(coeffs));
}

template <class S>
TruncatedSeries<S> monomial_series(std::uint64_t degree, const S& c) {
    return TruncatedSeries<S>::monomial(degree, c);
}

/**
 * Seeded random fixture: `support_count` distinct indices in [1, max_index]
 * with small coefficients. Exact mode draws Gaussian rationals with
 * numerators in [-9, 9] and denominators in [1, 9]; float mode draws from
 * the unit square. a_1 is always populated when force_a1 is set.
 */
template <class S>
TruncatedSeries<S> random_series(std::uint64_t seed, std::size_t support_count, std::uint64_t max_index,
                                 bool force_a1 = false) {
    if (max_index < 1 || support_count < 1 || support_count > max_index)
        throw std::invalid_argument("random_series: need 1 <= support_count <= max_index");
    std::vector<S> coeffs(max_index);
    std::uint64_t state = detail::splitmix64(seed ^ 0xD1A7A710ull);

    auto draw_int = [&](long lo, long hi) {
        state = detail::splitmix64(state);
        return lo + static_cast<long>(state % static_cast<std::uint64_t>(hi - lo + 1));
    };
    auto draw_scalar = [&]() -> S {
        if constexpr (is_exact_v<S>) {
            Rational re = make_rational(draw_int(-9, 9), draw_int(1, 9));
            Rational im = make_rational(draw_int(-9, 9), draw_int(1, 9));
            return GaussianRational(re, im);
        } else {
            state = detail::splitmix64(state);
            const double re = 2.0 * detail::unit_uniform(state) - 1.0;
            state = detail::splitmix64(state);
            const double im = 2.0 * detail::unit_uniform(state) - 1.0;
            return ComplexF64(re, im);
        }
    };

    std::size_t placed = 0;
    if (force_a1) {
        S v = draw_scalar();
        while (is_zero(v)) v = draw_scalar();
        coeffs[0] = v;
        ++placed;
    }
    while (placed < support_count) {
        const std::uint64_t n = 1 + static_cast<std::uint64_t>(draw_int(0, static_cast<long>(max_index - 1)));
        if (!is_zero(coeffs[n - 1])) continue;
        S v = draw_scalar();
        while (is_zero(v)) v = draw_scalar();
        coeffs[n - 1] = v;
        ++placed;
    }
    return TruncatedSeries<S>(std::move(coeffs));
}

}  // namespace dilation
