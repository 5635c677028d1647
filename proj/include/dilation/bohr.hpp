#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "dilation/multiindex.hpp"
#include "dilation/parallel.hpp"
#include "dilation/series.hpp"

namespace dilation {

/**
 * Sparse element of H^2(T^infty): finitely many monomial terms
 * zeta^beta -> coefficient. No zero-valued terms are stored.
 */
template <class S>
struct BohrSeries {
    std::map<MultiIndex, S> terms;

    void add_term(const MultiIndex& beta, const S& value) {
        if (is_zero(value)) return;
        auto [it, inserted] = terms.emplace(beta, value);
        if (!inserted) {
            it->second += value;
            if (is_zero(it->second)) terms.erase(it);
        }
    }

    S term(const MultiIndex& beta) const {
        const auto it = terms.find(beta);
        return it == terms.end() ? scalar_zero<S>() : it->second;
    }

    // squared coefficient l2 norm
    S coeff_norm_sq() const {
        S acc = scalar_zero<S>();
        for (const auto& [beta, c] : terms) {
            if constexpr (is_exact_v<S>)
                acc += GaussianRational(c.norm_sq());
            else
                acc += std::norm(c);
        }
        return acc;
    }

    // prime coordinates that actually appear, in increasing order
    std::vector<std::size_t> used_coordinates() const {
        std::set<std::size_t> coords;
        for (const auto& [beta, c] : terms)
            beta.for_each([&](std::size_t m, std::uint32_t) { coords.insert(m); });
        return {coords.begin(), coords.end()};
    }
};

// Bohr transform: z^n -> zeta^{alpha(n)}
template <class S>
BohrSeries<S> bohr_lift(const TruncatedSeries<S>& f) {
    BohrSeries<S> out;
    for (std::uint64_t n : f.support()) out.add_term(factorize(n), f.coeff(n));
    return out;
}

// weighted lift B_t = B  after S_t
template <class S>
BohrSeries<S> bohr_lift_t(const TruncatedSeries<S>& f, double t) {
    return bohr_lift(scale_st(f, t));
}

/**
 * Radii tau in [0,1]^infty for the diagonal operator T_tau. The preset
 * tau_star has radii 1/sqrt(p_m); its square multiplies the alpha(n) term by
 * exactly 1/n. Squaring is closed: star powers track an exponent e with
 * radius p_m^{-e/2}, so exact (rational) application is possible whenever e
 * is even or the radii were given as rationals.
 */
class Tau {
public:
    static Tau all_ones() { return Tau(std::vector<Rational>{}); }
    static Tau star() { return Tau(1); }
    static Tau star_squared() { return Tau(2); }
    static Tau from_rationals(std::vector<Rational> radii) {
        for (const auto& r : radii)
            if (r < 0 || r > 1) throw std::domain_error("Tau: radii must lie in [0,1]");
        return Tau(std::move(radii));
    }

    Tau squared() const {
        if (star_exp_ > 0) return Tau(star_exp_ * 2);
        std::vector<Rational> sq(radii_);
        for (auto& r : sq) r = r * r;
        return Tau(std::move(sq));
    }

    double radius(std::size_t m) const {
        if (star_exp_ > 0)
            return std::pow(static_cast<double>(prime_sieve().nth(m)), -0.5 * static_cast<double>(star_exp_));
        return m < radii_.size() ? radii_[m].get_d() : 1.0;
    }

    bool radius_is_rational(std::size_t m) const {
        (void)m;
        return star_exp_ == 0 || star_exp_ % 2 == 0;
    }

    Rational radius_rational(std::size_t m) const {
        if (star_exp_ > 0) {
            if (star_exp_ % 2 != 0)
                throw std::domain_error("Tau: 1/sqrt(p) radii are irrational; use the squared preset");
            return rational_pow_uint(prime_sieve().nth(m), -(star_exp_ / 2));
        }
        return m < radii_.size() ? radii_[m] : Rational(1);
    }

private:
    explicit Tau(long star_exp) : star_exp_(star_exp) {}
    explicit Tau(std::vector<Rational> radii) : radii_(std::move(radii)) {}

    long star_exp_ = 0;  // 0: explicit radii; e > 0: radius p_m^{-e/2}
    std::vector<Rational> radii_;
};

// tau^beta = prod radii[m]^{beta_m}
inline double tau_power(const Tau& tau, const MultiIndex& beta) {
    double acc = 1.0;
    beta.for_each([&](std::size_t m, std::uint32_t e) { acc *= std::pow(tau.radius(m), static_cast<double>(e)); });
    return acc;
}

inline Rational tau_power_rational(const Tau& tau, const MultiIndex& beta) {
    Rational acc(1);
    beta.for_each([&](std::size_t m, std::uint32_t e) {
        acc *= rational_pow(tau.radius_rational(m), static_cast<long>(e));
    });
    return acc;
}

// T_tau: multiply the term at beta by tau^beta
template <class S>
BohrSeries<S> apply_tau(const BohrSeries<S>& f, const Tau& tau) {
    BohrSeries<S> out;
    for (const auto& [beta, c] : f.terms) {
        if constexpr (is_exact_v<S>)
            out.add_term(beta, c * tau_power_rational(tau, beta));
        else
            out.add_term(beta, c * tau_power(tau, beta));
    }
    return out;
}

/**
 * Point of the infinite torus restricted to finitely many coordinates:
 * unit-modulus phases for prime coordinates 0..size-1.
 */
struct TorusPoint {
    std::vector<ComplexF64> phases;
    std::uint64_t rng_seed = 0;  // provenance tag; 0 when hand-built
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// uniform in [0, 1), reproducible across platforms
inline double unit_uniform(std::uint64_t state) { return static_cast<double>(state >> 11) * 0x1.0p-53; }

inline ComplexF64 int_pow(ComplexF64 base, std::uint32_t e) {
    ComplexF64 acc(1.0, 0.0);
    while (e > 0) {
        if (e & 1u) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

}  // namespace detail

// Haar-uniform point on the first n_coords coordinates, derived from seed
inline TorusPoint haar_point(std::size_t n_coords, std::uint64_t seed) {
    TorusPoint pt;
    pt.rng_seed = seed;
    pt.phases.reserve(n_coords);
    std::uint64_t state = detail::splitmix64(seed);
    for (std::size_t m = 0; m < n_coords; ++m) {
        state = detail::splitmix64(state);
        const double angle = 2.0 * M_PI * detail::unit_uniform(state);
        pt.phases.emplace_back(std::cos(angle), std::sin(angle));
    }
    return pt;
}

template <class S>
ComplexF64 evaluate(const BohrSeries<S>& f, const TorusPoint& zeta) {
    ComplexF64 acc(0.0, 0.0);
    for (const auto& [beta, c] : f.terms) {
        ComplexF64 mono(1.0, 0.0);
        beta.for_each([&](std::size_t m, std::uint32_t e) {
            if (m >= zeta.phases.size())
                throw std::out_of_range("evaluate: torus point lacks coordinate " + std::to_string(m));
            mono *= detail::int_pow(zeta.phases[m], e);
        });
        acc += to_complex(c) * mono;
    }
    return acc;
}

/**
 * Statistics of |F| over iid Haar-uniform torus points. Only coordinates the
 * series actually touches are drawn. tail_l1 is the l1 mass of terms whose
 * base index exceeds tail_threshold: a sup-norm bound on what a discarded
 * tail of that size could shift every sample by.
 */
struct ModulusSummary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    double tail_l1 = 0.0;
    std::vector<std::uint64_t> histogram;  // counts over [min, max], equal-width bins
};

template <class S>
ModulusSummary sample_modulus(const BohrSeries<S>& f, std::uint64_t n_samples, std::uint64_t seed,
                              std::uint64_t tail_threshold = 0) {
    if (n_samples < 1) throw std::invalid_argument("sample_modulus: n_samples must be >= 1");
    ModulusSummary out;
    out.n_samples = n_samples;
    out.seed = seed;

    if (tail_threshold > 0) {
        for (const auto& [beta, c] : f.terms) {
            std::uint64_t n = UINT64_MAX;
            try {
                n = index_to_int(beta);
            } catch (const std::overflow_error&) {
            }
            if (n > tail_threshold) out.tail_l1 += abs_of(c);
        }
    }

    const auto coords = f.used_coordinates();
    // flat term list: (coefficient, [(slot in coords, exponent)])
    struct Term {
        ComplexF64 c;
        std::vector<std::pair<std::size_t, std::uint32_t>> pows;
    };
    std::vector<Term> flat;
    flat.reserve(f.terms.size());
    for (const auto& [beta, c] : f.terms) {
        Term term;
        term.c = to_complex(c);
        beta.for_each([&](std::size_t m, std::uint32_t e) {
            const auto slot = std::lower_bound(coords.begin(), coords.end(), m) - coords.begin();
            term.pows.emplace_back(static_cast<std::size_t>(slot), e);
        });
        flat.push_back(std::move(term));
    }

    std::vector<double> values(n_samples);
    parallel_for(n_samples, [&](std::size_t i) {
        std::uint64_t state = detail::splitmix64(seed ^ detail::splitmix64(static_cast<std::uint64_t>(i) + 1));
        std::vector<ComplexF64> phases(coords.size());
        for (std::size_t s = 0; s < coords.size(); ++s) {
            state = detail::splitmix64(state);
            const double angle = 2.0 * M_PI * detail::unit_uniform(state);
            phases[s] = ComplexF64(std::cos(angle), std::sin(angle));
        }
        ComplexF64 acc(0.0, 0.0);
        for (const Term& term : flat) {
            ComplexF64 mono = term.c;
            for (const auto& [slot, e] : term.pows) mono *= detail::int_pow(phases[slot], e);
            acc += mono;
        }
        values[i] = std::abs(acc);
    });

    // sequential reduction keeps the summary deterministic
    out.min = values[0];
    out.max = values[0];
    double mean = 0.0, m2 = 0.0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const double v = values[i];
        out.min = std::min(out.min, v);
        out.max = std::max(out.max, v);
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    out.mean = mean;
    out.variance = m2 / static_cast<double>(n_samples);

    constexpr std::size_t kBins = 32;
    out.histogram.assign(kBins, 0);
    const double width = out.max - out.min;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        std::size_t bin = width > 0.0 ? static_cast<std::size_t>((values[i] - out.min) / width * kBins) : 0;
        out.histogram[std::min(bin, kBins - 1)] += 1;
    }
    return out;
}

}  // namespace dilation
