#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dilation/primes.hpp"

namespace dilation {

/**
 * Finitely supported exponent vector over the primes: entry m is the exponent
 * of the m-th prime. The image alpha(n) of a positive integer under prime
 * factorization lives here. Exponents of the first 64 primes are stored in a
 * dense prefix; rarer large prime factors go to a sorted overflow list.
 */
class MultiIndex {
public:
    static constexpr std::size_t kDensePrimes = 64;

    MultiIndex() = default;

    MultiIndex(std::initializer_list<std::uint32_t> exps) {
        std::size_t m = 0;
        for (std::uint32_t e : exps) set_exponent(m++, e);
    }

    std::uint32_t exponent(std::size_t m) const {
        if (m < dense_.size()) return dense_[m];
        if (m < kDensePrimes) return 0;
        for (const auto& [idx, e] : overflow_)
            if (idx == m) return e;
        return 0;
    }

    void set_exponent(std::size_t m, std::uint32_t e) {
        if (m < kDensePrimes) {
            if (e == 0 && m >= dense_.size()) return;
            if (m >= dense_.size()) dense_.resize(m + 1, 0);
            dense_[m] = e;
            while (!dense_.empty() && dense_.back() == 0) dense_.pop_back();
            return;
        }
        auto it = std::lower_bound(overflow_.begin(), overflow_.end(), m,
                                   [](const auto& kv, std::size_t key) { return kv.first < key; });
        if (it != overflow_.end() && it->first == m) {
            if (e == 0)
                overflow_.erase(it);
            else
                it->second = e;
        } else if (e != 0) {
            overflow_.insert(it, {static_cast<std::uint32_t>(m), e});
        }
    }

    void bump(std::size_t m) { set_exponent(m, exponent(m) + 1); }

    bool is_zero() const { return dense_.empty() && overflow_.empty(); }

    // visits nonzero entries in increasing prime-index order
    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t m = 0; m < dense_.size(); ++m)
            if (dense_[m] != 0) fn(m, dense_[m]);
        for (const auto& [idx, e] : overflow_) fn(static_cast<std::size_t>(idx), e);
    }

    std::size_t max_prime_index() const {  // meaningful only when !is_zero()
        if (!overflow_.empty()) return overflow_.back().first;
        return dense_.empty() ? 0 : dense_.size() - 1;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        MultiIndex out = *this;
        o.for_each([&](std::size_t m, std::uint32_t e) { out.set_exponent(m, out.exponent(m) + e); });
        return out;
    }

    bool operator==(const MultiIndex& o) const {
        return dense_ == o.dense_ && overflow_ == o.overflow_;
    }

    bool operator<(const MultiIndex& o) const {
        if (dense_ != o.dense_) return dense_ < o.dense_;
        return overflow_ < o.overflow_;
    }

private:
    std::vector<std::uint32_t> dense_;  // trailing zeros trimmed
    std::vector<std::pair<std::uint32_t, std::uint32_t>> overflow_;  // sorted, exps > 0
};

inline MultiIndex factorize(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    MultiIndex out;
    auto& sieve = prime_sieve();
    for (std::size_t m = 0; n > 1; ++m) {
        const std::uint64_t p = sieve.nth(m);
        if (p * p > n) break;
        while (n % p == 0) {
            out.bump(m);
            n /= p;
        }
    }
    if (n > 1) out.bump(sieve.index_of(n));
    return out;
}

inline std::uint64_t index_to_int(const MultiIndex& idx) {
    unsigned __int128 acc = 1;
    bool overflow = false;
    idx.for_each([&](std::size_t m, std::uint32_t e) {
        if (overflow) return;
        const std::uint64_t p = prime_sieve().nth(m);
        for (std::uint32_t r = 0; r < e; ++r) {
            acc *= p;
            if (acc > static_cast<unsigned __int128>(UINT64_MAX)) {
                overflow = true;
                return;
            }
        }
    });
    if (overflow) throw std::overflow_error("index_to_int: product exceeds 64-bit range");
    return static_cast<std::uint64_t>(acc);
}

}  // namespace dilation
