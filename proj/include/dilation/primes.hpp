#pragma once

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace dilation {

/**
 * Incremental prime sieve. Grows on demand by trial division against the
 * primes found so far; all lookups are serialized by a mutex so shared use
 * from parallel sections is safe.
 */
class PrimeSieve {
public:
    PrimeSieve() : primes_{2, 3, 5, 7, 11, 13} {}

    // m-th prime, 0-based: nth(0) == 2
    std::uint64_t nth(std::size_t m) {
        std::lock_guard<std::mutex> lock(mu_);
        while (primes_.size() <= m) grow();
        return primes_[m];
    }

    // index of a known prime p; extends the sieve until p is reached
    std::size_t index_of(std::uint64_t p) {
        std::lock_guard<std::mutex> lock(mu_);
        if (p > kMaxReach)
            throw std::domain_error("PrimeSieve: prime factor too large to index: " + std::to_string(p));
        while (primes_.back() < p) grow();
        const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
        if (it == primes_.end() || *it != p)
            throw std::invalid_argument("PrimeSieve: not a prime: " + std::to_string(p));
        return static_cast<std::size_t>(it - primes_.begin());
    }

    // snapshot of primes up to and including at least `limit`
    std::vector<std::uint64_t> up_to(std::uint64_t limit) {
        std::lock_guard<std::mutex> lock(mu_);
        while (primes_.back() < limit) grow();
        std::vector<std::uint64_t> out;
        for (std::uint64_t p : primes_) {
            if (p > limit) break;
            out.push_back(p);
        }
        return out;
    }

private:
    // indexable range; factorization of n <= 2^63 may produce one larger
    // prime cofactor, but we refuse to *index* primes beyond this bound
    static constexpr std::uint64_t kMaxReach = 100'000'000;

    void grow() {
        for (std::uint64_t c = primes_.back() + 2;; c += 2) {
            bool composite = false;
            for (std::uint64_t p : primes_) {
                if (p * p > c) break;
                if (c % p == 0) {
                    composite = true;
                    break;
                }
            }
            if (!composite) {
                primes_.push_back(c);
                return;
            }
        }
    }

    std::mutex mu_;
    std::vector<std::uint64_t> primes_;
};

inline PrimeSieve& prime_sieve() {
    static PrimeSieve sieve;
    return sieve;
}

}  // namespace dilation
