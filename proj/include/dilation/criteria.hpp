#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dilation/bohr.hpp"
#include "dilation/series.hpp"

namespace dilation {

/**
 * Sparse 1-indexed coefficient sequence, either straight from a series or
 * pulled back from a holomorphic Bohr lift through alpha.
 */
template <class S>
struct CoeffSeq {
    std::map<std::uint64_t, S> a;  // support index -> value, no zeros
    std::uint64_t cap = 0;

    static CoeffSeq from_series(const TruncatedSeries<S>& f) {
        CoeffSeq out;
        out.cap = f.degree_cap();
        for (std::uint64_t n : f.support()) out.a.emplace(n, f.coeff(n));
        return out;
    }

    static CoeffSeq from_lift(const BohrSeries<S>& f) {
        CoeffSeq out;
        for (const auto& [beta, c] : f.terms) {
            const std::uint64_t n = index_to_int(beta);
            out.a.emplace(n, c);
            out.cap = std::max(out.cap, n);
        }
        return out;
    }

    S at(std::uint64_t n) const {
        const auto it = a.find(n);
        return it == a.end() ? scalar_zero<S>() : it->second;
    }
};

// weight w(n, i, j) attached to a coprime-pair residual term
struct WeightLaw {
    enum class Kind { unweighted, nij_t, nij_tm1, proof_chain } kind = Kind::unweighted;
    double t = 0.0;
    std::uint64_t k = 1;  // the k of (nkij+1)^t

    static WeightLaw unweighted() { return {}; }
    static WeightLaw nij(double t) { return {Kind::nij_t, t, 1}; }
    static WeightLaw nij_minus_one(double t) { return {Kind::nij_tm1, t, 1}; }
    static WeightLaw proof_chain(double t, std::uint64_t k) { return {Kind::proof_chain, t, k}; }

    std::string tag() const {
        switch (kind) {
            case Kind::unweighted: return "unweighted";
            case Kind::nij_t: return "(nij)^t";
            case Kind::nij_tm1: return "(nij)^(t-1)";
            case Kind::proof_chain: return "(nkij+1)^t";
        }
        return "?";
    }

    template <class S>
    S apply(const S& term, std::uint64_t n, std::uint64_t i, std::uint64_t j) const {
        switch (kind) {
            case Kind::unweighted: return term;
            case Kind::nij_t: return mul_int_pow(term, n * i * j, t);
            case Kind::nij_tm1: return mul_int_pow(term, n * i * j, t - 1.0);
            case Kind::proof_chain: return mul_int_pow(term, n * k * i * j + 1, t);
        }
        return term;
    }

    double apply_abs(double mag, std::uint64_t n, std::uint64_t i, std::uint64_t j) const {
        switch (kind) {
            case Kind::unweighted: return mag;
            case Kind::nij_t: return mag * std::pow(static_cast<double>(n * i * j), t);
            case Kind::nij_tm1: return mag * std::pow(static_cast<double>(n * i * j), t - 1.0);
            case Kind::proof_chain: return mag * std::pow(static_cast<double>(n * k * i * j + 1), t);
        }
        return mag;
    }
};

namespace detail {

template <class S>
struct ResidualAccum {
    S value = scalar_zero<S>();
    std::size_t n_terms = 0;
    double linf = 0.0;
};

// sum conj(b_{ni}) c_{nj} w(n, i, j) over the common truncated range
template <class S>
ResidualAccum<S> coprime_residual_accum(const CoeffSeq<S>& b, const CoeffSeq<S>& c, std::uint64_t i,
                                        std::uint64_t j, const WeightLaw& w) {
    if (std::gcd(i, j) != 1)
        throw std::invalid_argument("coprime_residual: pair (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") is not coprime");
    ResidualAccum<S> acc;
    for (const auto& [s, bv] : b.a) {
        if (s % i != 0) continue;
        const std::uint64_t n = s / i;
        const S cv = c.at(n * j);
        if (is_zero(cv)) continue;
        const S term = w.apply(conj_of(bv) * cv, n, i, j);
        acc.value += term;
        acc.n_terms += 1;
        acc.linf = std::max(acc.linf, abs_of(term));
    }
    return acc;
}

// Cauchy-Schwarz bound on what terms touching indices beyond `threshold`
// could contribute; zero when no threshold is declared
template <class S>
double coprime_residual_tail(const CoeffSeq<S>& b, const CoeffSeq<S>& c, std::uint64_t i, std::uint64_t j,
                             const WeightLaw& w, std::uint64_t threshold) {
    if (threshold == 0 || is_exact_v<S>) return 0.0;
    double b_head = 0.0, b_tail = 0.0, c_head = 0.0, c_tail = 0.0;
    for (const auto& [s, bv] : b.a) {
        if (s % i != 0) continue;
        const double m = w.apply_abs(std::norm(to_complex(bv)), s / i, i, j);
        (s > threshold ? b_tail : b_head) += m;
    }
    for (const auto& [s, cv] : c.a) {
        if (s % j != 0) continue;
        const double m = w.apply_abs(std::norm(to_complex(cv)), s / j, i, j);
        (s > threshold ? c_tail : c_head) += m;
    }
    const double bt = std::sqrt(b_tail), bh = std::sqrt(b_head);
    const double ct = std::sqrt(c_tail), cf = std::sqrt(c_head + c_tail);
    return bt * cf + bh * ct;
}

}  // namespace detail

template <class S>
S coprime_residual(const CoeffSeq<S>& b, const CoeffSeq<S>& c, std::uint64_t i, std::uint64_t j,
                   const WeightLaw& w = WeightLaw::unweighted()) {
    return detail::coprime_residual_accum(b, c, i, j, w).value;
}

// rearranged eq-(241) form: sum conj(b_{ni}) c_{nj} (nij + 1/k)^t
template <class S>
S proof_chain_residual(const CoeffSeq<S>& b, const CoeffSeq<S>& c, std::uint64_t i, std::uint64_t j,
                       double t, std::uint64_t k) {
    if (std::gcd(i, j) != 1) throw std::invalid_argument("proof_chain_residual: pair is not coprime");
    S acc = scalar_zero<S>();
    for (const auto& [s, bv] : b.a) {
        if (s % i != 0) continue;
        const std::uint64_t n = s / i;
        const S cv = c.at(n * j);
        if (is_zero(cv)) continue;
        const S prod = conj_of(bv) * cv;
        if constexpr (is_exact_v<S>) {
            const long ti = require_integer_exponent(t);
            acc += prod * rational_pow(make_rational(static_cast<long>(n * i * j * k + 1),
                                                     static_cast<long>(k)),
                                       ti);
        } else {
            acc += prod * std::pow(static_cast<double>(n * i * j) + 1.0 / static_cast<double>(k), t);
        }
    }
    return acc;
}

enum class Verdict { all_zero, violated, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::all_zero: return "all_zero";
        case Verdict::violated: return "violated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

template <class S>
struct ResidualPair {
    std::uint64_t i = 1;
    std::uint64_t j = 1;
    std::uint64_t g = 1;  // gcd parameter; dilation pair is (g*i, g*j)
    S residual{};
    double tail_bound = 0.0;
    double slack = 0.0;  // float-summation roundoff allowance
};

/**
 * Outcome of a vanishing criterion over a family of coprime pairs. In float
 * mode a violation must clear the tail bound plus roundoff slack; residuals
 * inside the gray zone, or tails larger than `resolution`, yield the
 * inconclusive verdict instead of all_zero.
 */
template <class S>
struct ResidualReport {
    std::vector<ResidualPair<S>> pairs;
    std::string weight_law;
    Verdict verdict = Verdict::all_zero;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> violation;  // dilation-level pair
    std::uint64_t tail_threshold = 0;
    double resolution = std::numeric_limits<double>::infinity();
};

struct ResidualOptions {
    std::uint64_t tail_threshold = 0;  // 0: input is treated as complete
    double resolution = std::numeric_limits<double>::infinity();
};

namespace detail {

template <class S>
void finalize_verdict(ResidualReport<S>& rep) {
    rep.verdict = Verdict::all_zero;
    rep.violation.reset();
    double max_tail = 0.0;
    bool gray = false;
    for (const auto& p : rep.pairs) {
        max_tail = std::max(max_tail, p.tail_bound);
        if constexpr (is_exact_v<S>) {
            if (!is_zero(p.residual)) {
                rep.verdict = Verdict::violated;
                rep.violation = {p.g * p.i, p.g * p.j};
                return;
            }
        } else {
            const double r = abs_of(p.residual);
            if (r > p.tail_bound + p.slack) {
                rep.verdict = Verdict::violated;
                rep.violation = {p.g * p.i, p.g * p.j};
                return;
            }
            if (r > p.tail_bound) gray = true;
        }
    }
    if constexpr (!is_exact_v<S>) {
        if (gray || max_tail > rep.resolution) rep.verdict = Verdict::inconclusive;
    }
}

inline double roundoff_slack(std::size_t n_terms, double linf) {
    constexpr double unit_roundoff = std::numeric_limits<double>::epsilon() / 2.0;
    return 10.0 * unit_roundoff * static_cast<double>(n_terms) * std::max(1.0, linf);
}

// coprime pairs with ij > 1 up to cap, sorted by (ij, i); optionally both orders
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> coprime_pairs(std::uint64_t cap,
                                                                          bool both_orders) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t i = 1; i <= cap; ++i)
        for (std::uint64_t j = both_orders ? 1 : i + 1; j <= cap; ++j) {
            if (i == j || i * j <= 1) continue;
            if (std::gcd(i, j) != 1) continue;
            out.emplace_back(i, j);
        }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::make_pair(a.first * a.second, a.first) < std::make_pair(b.first * b.second, b.first);
    });
    return out;
}

}  // namespace detail

/**
 * Orthogonality of the dilation system {f(z^k)}. At t = 0 this is the
 * coprime-pair criterion with unit weights; at t != 0 the Gram off-diagonal
 * entries (gcd-parametrized) are authoritative.
 */
template <class S>
ResidualReport<S> orthogonality_test(const TruncatedSeries<S>& f, double t, std::size_t k_cap,
                                     const ResidualOptions& opts = {}) {
    if (k_cap < 2) throw std::invalid_argument("orthogonality_test: k_cap must be >= 2");
    ResidualReport<S> rep;
    rep.tail_threshold = opts.tail_threshold;
    rep.resolution = opts.resolution;
    const CoeffSeq<S> seq = CoeffSeq<S>::from_series(f);

    if (t == 0.0) {
        rep.weight_law = "unweighted";
        const WeightLaw w = WeightLaw::unweighted();
        for (const auto& [i, j] : detail::coprime_pairs(k_cap, /*both_orders=*/false)) {
            const auto acc = detail::coprime_residual_accum(seq, seq, i, j, w);
            ResidualPair<S> pair;
            pair.i = i;
            pair.j = j;
            pair.g = 1;
            pair.residual = acc.value;
            pair.tail_bound = detail::coprime_residual_tail(seq, seq, i, j, w, opts.tail_threshold);
            pair.slack = detail::roundoff_slack(acc.n_terms, acc.linf);
            rep.pairs.push_back(std::move(pair));
        }
    } else {
        rep.weight_law = "(nkij+1)^t";
        std::vector<std::pair<std::uint64_t, std::uint64_t>> dil;
        for (std::uint64_t k = 1; k <= k_cap; ++k)
            for (std::uint64_t l = k + 1; l <= k_cap; ++l) dil.emplace_back(k, l);
        std::sort(dil.begin(), dil.end(), [](const auto& a, const auto& b) {
            return std::make_pair(a.first * a.second, a.first) < std::make_pair(b.first * b.second, b.first);
        });
        for (const auto& [k, l] : dil) {
            const std::uint64_t g = std::gcd(k, l);
            const std::uint64_t i = k / g;
            const std::uint64_t j = l / g;
            // entry <f(z^k), f(z^l)>_t as the (i, j) residual with weight (ngij+1)^t
            const WeightLaw w = WeightLaw::proof_chain(t, g);
            const auto acc = detail::coprime_residual_accum(seq, seq, i, j, w);
            ResidualPair<S> pair;
            pair.i = i;
            pair.j = j;
            pair.g = g;
            pair.residual = acc.value;  // equals <f(z^k), f(z^l)>_t
            pair.tail_bound = detail::coprime_residual_tail(seq, seq, i, j, w, opts.tail_threshold);
            pair.slack = detail::roundoff_slack(acc.n_terms, acc.linf);
            rep.pairs.push_back(std::move(pair));
        }
    }
    detail::finalize_verdict(rep);
    return rep;
}

template <class S>
struct InnerReport {
    ResidualReport<S> residuals;
    S constant_sq{};  // c^2 = sum |a_n|^2
};

// |F| = c a.e. criterion for a holomorphic lift F, truncated to pairs <= i_cap
template <class S>
InnerReport<S> inner_test(const BohrSeries<S>& f, std::uint64_t i_cap, const ResidualOptions& opts = {}) {
    InnerReport<S> out;
    out.constant_sq = f.coeff_norm_sq();
    out.residuals.weight_law = "unweighted";
    out.residuals.tail_threshold = opts.tail_threshold;
    out.residuals.resolution = opts.resolution;
    const CoeffSeq<S> seq = CoeffSeq<S>::from_lift(f);
    const WeightLaw w = WeightLaw::unweighted();
    for (const auto& [i, j] : detail::coprime_pairs(i_cap, /*both_orders=*/false)) {
        const auto acc = detail::coprime_residual_accum(seq, seq, i, j, w);
        ResidualPair<S> pair;
        pair.i = i;
        pair.j = j;
        pair.residual = acc.value;
        pair.tail_bound = detail::coprime_residual_tail(seq, seq, i, j, w, opts.tail_threshold);
        pair.slack = detail::roundoff_slack(acc.n_terms, acc.linf);
        out.residuals.pairs.push_back(std::move(pair));
    }
    detail::finalize_verdict(out.residuals);
    return out;
}

template <class S>
struct ProductConstantReport {
    ResidualReport<S> residuals;
    S constant{};  // candidate value of F conj(G)
};

// F conj(G) = c a.e. criterion for two holomorphic lifts
template <class S>
ProductConstantReport<S> product_constant_test(const BohrSeries<S>& f, const BohrSeries<S>& g,
                                               std::uint64_t i_cap, const ResidualOptions& opts = {}) {
    ProductConstantReport<S> out;
    out.residuals.weight_law = "unweighted";
    out.residuals.tail_threshold = opts.tail_threshold;
    out.residuals.resolution = opts.resolution;
    const CoeffSeq<S> fs = CoeffSeq<S>::from_lift(f);
    const CoeffSeq<S> gs = CoeffSeq<S>::from_lift(g);

    S c = scalar_zero<S>();
    for (const auto& [n, v] : fs.a) c += v * conj_of(gs.at(n));
    out.constant = c;

    const WeightLaw w = WeightLaw::unweighted();
    for (const auto& [i, j] : detail::coprime_pairs(i_cap, /*both_orders=*/true)) {
        // <zeta^{alpha(i)} F, zeta^{alpha(j)} G> = sum_n conj(g_{ni}) f_{nj}
        const auto acc = detail::coprime_residual_accum(gs, fs, i, j, w);
        ResidualPair<S> pair;
        pair.i = i;
        pair.j = j;
        pair.residual = acc.value;
        pair.tail_bound = detail::coprime_residual_tail(gs, fs, i, j, w, opts.tail_threshold);
        pair.slack = detail::roundoff_slack(acc.n_terms, acc.linf);
        out.residuals.pairs.push_back(std::move(pair));
    }
    detail::finalize_verdict(out.residuals);
    return out;
}

/**
 * Both sides of the diagonal-operator identity behind the F_{tau^2} conj(F)
 * criterion: tau^{alpha(ij)} <zeta^{alpha(i)} F_tau, zeta^{alpha(j)} F_tau>
 * against tau^{alpha(i^2)} <zeta^{alpha(i)} F_{tau^2}, zeta^{alpha(j)} F>,
 * plus the equivalence of the two derived verdicts.
 */
template <class S>
struct TauSymmetryReport {
    struct Entry {
        std::uint64_t i = 1;
        std::uint64_t j = 1;
        S lhs{};
        S rhs{};
        double diff = 0.0;
    };
    std::vector<Entry> entries;
    bool identity_holds = true;
    Verdict tau_modulus_verdict = Verdict::all_zero;  // |F_tau| = c criterion
    Verdict product_verdict = Verdict::all_zero;      // F_{tau^2} conj(F) = c^2 criterion
    bool verdicts_agree = true;
};

template <class S>
TauSymmetryReport<S> tau_symmetry_test(const BohrSeries<S>& f, const Tau& tau, std::uint64_t i_cap,
                                       const ResidualOptions& opts = {}, double float_tol = 1e-12) {
    TauSymmetryReport<S> out;
    const BohrSeries<S> f_tau = apply_tau(f, tau);
    const BohrSeries<S> f_tau2 = apply_tau(f, tau.squared());
    const CoeffSeq<S> s0 = CoeffSeq<S>::from_lift(f);
    const CoeffSeq<S> s1 = CoeffSeq<S>::from_lift(f_tau);
    const CoeffSeq<S> s2 = CoeffSeq<S>::from_lift(f_tau2);
    const WeightLaw w = WeightLaw::unweighted();

    for (const auto& [i, j] : detail::coprime_pairs(i_cap, /*both_orders=*/true)) {
        const MultiIndex a_ij = factorize(i) + factorize(j);
        const MultiIndex a_ii = factorize(i) + factorize(i);
        // <zeta^{alpha(i)} X, zeta^{alpha(j)} Y> = sum_n conj(y_{ni}) x_{nj}
        const S ip_tau = detail::coprime_residual_accum(s1, s1, i, j, w).value;
        const S ip_mix = detail::coprime_residual_accum(s0, s2, i, j, w).value;
        typename TauSymmetryReport<S>::Entry e;
        e.i = i;
        e.j = j;
        if constexpr (is_exact_v<S>) {
            e.lhs = ip_tau * tau_power_rational(tau, a_ij);
            e.rhs = ip_mix * tau_power_rational(tau, a_ii);
            e.diff = abs_of(e.lhs - e.rhs);
            if (e.lhs != e.rhs) out.identity_holds = false;
        } else {
            e.lhs = ip_tau * tau_power(tau, a_ij);
            e.rhs = ip_mix * tau_power(tau, a_ii);
            e.diff = std::abs(e.lhs - e.rhs);
            if (e.diff > float_tol * (1.0 + std::abs(e.lhs) + std::abs(e.rhs))) out.identity_holds = false;
        }
        out.entries.push_back(std::move(e));
    }

    out.tau_modulus_verdict = inner_test(f_tau, i_cap, opts).residuals.verdict;
    out.product_verdict = product_constant_test(f_tau2, f, i_cap, opts).residuals.verdict;
    out.verdicts_agree =
        (out.tau_modulus_verdict == Verdict::all_zero) == (out.product_verdict == Verdict::all_zero);
    return out;
}

/**
 * Diagnostic reproducing the proof residuals behind the t != 0 rigidity
 * statement: the (nij)^t and (nij)^{t-1} residual families, and the spread
 * of the eigenvalue ratios {1/n : a_n != 0} that forces a monomial.
 */
template <class S>
struct MonomialReport {
    double ratio_spread = 0.0;
    bool monomial = false;
    ResidualReport<S> eq242;  // weight (nij)^t
    ResidualReport<S> eq244;  // weight (nij)^{t-1}
    std::vector<std::pair<std::uint64_t, ComplexF64>> scaled;      // a_n n^{t/2}
    std::vector<std::pair<std::uint64_t, ComplexF64>> scaled_tau;  // a_n n^{t/2 - 1}
};

template <class S>
MonomialReport<S> monomial_diagnostic(const TruncatedSeries<S>& f, double t) {
    if (t == 0.0) throw std::invalid_argument("monomial_diagnostic: t must be nonzero");
    MonomialReport<S> out;
    const auto supp = f.support();
    if (!supp.empty()) {
        const double lo = static_cast<double>(supp.front());
        const double hi = static_cast<double>(supp.back());
        out.ratio_spread = hi / lo - 1.0;  // max/min of {1/n} minus 1
    }
    out.monomial = supp.size() == 1;

    for (std::uint64_t n : supp) {
        const ComplexF64 a = to_complex(f.coeff(n));
        const double nd = static_cast<double>(n);
        out.scaled.emplace_back(n, a * std::pow(nd, t / 2.0));
        out.scaled_tau.emplace_back(n, a * std::pow(nd, t / 2.0 - 1.0));
    }

    // coprime pairs that can carry a nonzero term: each support pair
    // (s1, s2) feeds (i, j) = (s1/g, s2/g) at n = g = gcd(s1, s2)
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    for (std::uint64_t s1 : supp)
        for (std::uint64_t s2 : supp) {
            if (s1 == s2) continue;
            const std::uint64_t g = std::gcd(s1, s2);
            const std::uint64_t i = s1 / g;
            const std::uint64_t j = s2 / g;
            if (i < j) pairs.emplace_back(i, j);
        }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        return std::make_pair(a.first * a.second, a.first) < std::make_pair(b.first * b.second, b.first);
    });
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    const CoeffSeq<S> seq = CoeffSeq<S>::from_series(f);
    for (const WeightLaw& w : {WeightLaw::nij(t), WeightLaw::nij_minus_one(t)}) {
        ResidualReport<S>& rep = (w.kind == WeightLaw::Kind::nij_t) ? out.eq242 : out.eq244;
        rep.weight_law = w.tag();
        for (const auto& [i, j] : pairs) {
            const auto acc = detail::coprime_residual_accum(seq, seq, i, j, w);
            ResidualPair<S> pair;
            pair.i = i;
            pair.j = j;
            pair.residual = acc.value;
            pair.slack = detail::roundoff_slack(acc.n_terms, acc.linf);
            rep.pairs.push_back(std::move(pair));
        }
        detail::finalize_verdict(rep);
    }
    return out;
}

}  // namespace dilation
