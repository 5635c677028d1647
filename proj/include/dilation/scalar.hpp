#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace dilation {

using Rational = mpq_class;
using ComplexF64 = std::complex<double>;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("make_rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational parse_rational(const std::string& text) {
    Rational q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("parse_rational: bad literal '" + text + "'");
    q.canonicalize();
    return q;
}

// base^exp for integer exp of either sign; base must be nonzero when exp < 0
inline Rational rational_pow(const Rational& base, long exp) {
    if (exp == 0) return Rational(1);
    if (base == 0 && exp < 0) throw std::domain_error("rational_pow: 0 to negative power");
    const unsigned long mag = static_cast<unsigned long>(exp < 0 ? -exp : exp);
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num().get_mpz_t(), mag);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den().get_mpz_t(), mag);
    out.canonicalize();
    if (exp < 0) out = Rational(1) / out;
    return out;
}

inline Rational rational_pow_uint(std::uint64_t base, long exp) {
    Rational b;
    mpz_import(b.get_num_mpz_t(), 1, -1, sizeof(base), 0, 0, &base);
    return rational_pow(b, exp);
}

// t must be an integer for exact weight laws (n+1)^t
inline long require_integer_exponent(double t) {
    const double r = std::nearbyint(t);
    if (r != t || std::abs(r) > 1e9)
        throw std::domain_error("exact mode requires an integer exponent, got t=" + std::to_string(t));
    return static_cast<long>(r);
}

// t must be an even integer so that n^{t/2} stays rational
inline long require_even_integer_half(double t) {
    const long ti = require_integer_exponent(t);
    if (ti % 2 != 0)
        throw std::domain_error("exact mode requires an even integer t for the n^{t/2} law");
    return ti / 2;
}

/**
 * Element of Q(i): exact complex number with rational real and imaginary parts.
 * Arithmetic is closed; no rounding ever occurs.
 */
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(Rational r) : re(std::move(r)), im(0) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r, long i = 0) : re(r), im(i) {}

    static GaussianRational from_parts(long rn, long rd, long in, long id) {
        return GaussianRational(make_rational(rn, rd), make_rational(in, id));
    }

    bool is_zero() const { return re == 0 && im == 0; }

    GaussianRational conj() const { return GaussianRational(re, -im); }

    Rational norm_sq() const { return re * re + im * im; }

    ComplexF64 to_complex() const { return ComplexF64(re.get_d(), im.get_d()); }

    GaussianRational operator-() const { return GaussianRational(-re, -im); }

    GaussianRational operator+(const GaussianRational& o) const {
        return GaussianRational(re + o.re, im + o.im);
    }
    GaussianRational operator-(const GaussianRational& o) const {
        return GaussianRational(re - o.re, im - o.im);
    }
    GaussianRational operator*(const GaussianRational& o) const {
        return GaussianRational(re * o.re - im * o.im, re * o.im + im * o.re);
    }
    GaussianRational operator*(const Rational& w) const {
        return GaussianRational(re * w, im * w);
    }
    GaussianRational operator/(const GaussianRational& o) const {
        const Rational n = o.norm_sq();
        if (n == 0) throw std::domain_error("GaussianRational: division by zero");
        const GaussianRational p = *this * o.conj();
        return GaussianRational(p.re / n, p.im / n);
    }
    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }

    bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GaussianRational& o) const { return !(*this == o); }

    std::string str() const { return re.get_str() + (sgn(im) >= 0 ? "+" : "") + im.get_str() + "i"; }
};

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, GaussianRational>;

template <class S>
inline const char* scalar_mode_name() {
    return is_exact_v<S> ? "exact" : "float";
}

inline GaussianRational conj_of(const GaussianRational& s) { return s.conj(); }
inline ComplexF64 conj_of(const ComplexF64& s) { return std::conj(s); }

inline bool is_zero(const GaussianRational& s) { return s.is_zero(); }
inline bool is_zero(const ComplexF64& s) { return s.real() == 0.0 && s.imag() == 0.0; }

inline ComplexF64 to_complex(const GaussianRational& s) { return s.to_complex(); }
inline ComplexF64 to_complex(const ComplexF64& s) { return s; }

inline double abs_of(const GaussianRational& s) { return std::abs(s.to_complex()); }
inline double abs_of(const ComplexF64& s) { return std::abs(s); }

template <class S>
inline S scalar_zero() {
    return S{};
}

template <class S>
inline S scalar_one() {
    if constexpr (is_exact_v<S>)
        return GaussianRational(1);
    else
        return ComplexF64(1.0, 0.0);
}

// v * base^t with base a positive integer; exact mode needs integer t
template <class S>
inline S mul_int_pow(const S& v, std::uint64_t base, double t) {
    if constexpr (is_exact_v<S>) {
        return v * rational_pow_uint(base, require_integer_exponent(t));
    } else {
        return v * std::pow(static_cast<double>(base), t);
    }
}

// v * n^{t/2}; exact mode needs even integer t
template <class S>
inline S mul_half_pow(const S& v, std::uint64_t n, double t) {
    if constexpr (is_exact_v<S>) {
        return v * rational_pow_uint(n, require_even_integer_half(t));
    } else {
        return v * std::pow(static_cast<double>(n), t / 2.0);
    }
}

}  // namespace dilation
