#include <catch2/catch_amalgamated.hpp>

#include "dilation/criteria.hpp"
#include "dilation/fixtures.hpp"

using namespace dilation;

namespace {

using ExactSeries = TruncatedSeries<GaussianRational>;
const GaussianRational kOne{Rational(1)};

ExactSeries exact_series(std::initializer_list<std::pair<std::uint64_t, GaussianRational>> items) {
    std::size_t n_max = 0;
    for (const auto& [n, v] : items) n_max = std::max<std::size_t>(n_max, n);
    std::vector<GaussianRational> coeffs(n_max);
    for (const auto& [n, v] : items) coeffs[n - 1] = v;
    return ExactSeries(std::move(coeffs));
}

}  // namespace

TEST_CASE("coprime residual basics") {
    const auto z2 = CoeffSeq<GaussianRational>::from_series(ExactSeries::monomial(2, kOne));
    CHECK(coprime_residual(z2, z2, 2, 3).is_zero());

    const auto f = CoeffSeq<GaussianRational>::from_series(exact_series({{1, kOne}, {2, kOne}}));
    CHECK(coprime_residual(f, f, 1, 2) == kOne);
    CHECK_THROWS_AS(coprime_residual(f, f, 2, 4), std::invalid_argument);
}

TEST_CASE("blaschke truncation residual has the predicted scale") {
    // residual(1,2) of the level-M fixture is -(1-|a|^2) conj(a) |a|^{2(M-1)}
    const GaussianRational a(make_rational(1, 2));
    for (std::size_t levels : {3ul, 5ul, 8ul}) {
        const auto f = blaschke_series<GaussianRational>(a, levels);
        const auto seq = CoeffSeq<GaussianRational>::from_series(f);
        const GaussianRational res = coprime_residual(seq, seq, 1, 2);
        const Rational scale = rational_pow(make_rational(1, 4), static_cast<long>(levels - 1));
        const GaussianRational expect = -(a.conj() * (make_rational(3, 4) * scale));
        CHECK(res == expect);
    }
}

TEST_CASE("orthogonality of monomial dilations") {
    for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        const auto rep = orthogonality_test(ExactSeries::monomial(3, kOne), t, 6);
        CHECK(rep.verdict == Verdict::all_zero);
    }
}

TEST_CASE("orthogonality violation for z + z^2 at t = -1") {
    const auto rep = orthogonality_test(exact_series({{1, kOne}, {2, kOne}}), -1.0, 4);
    REQUIRE(rep.verdict == Verdict::violated);
    REQUIRE(rep.violation.has_value());
    CHECK(rep.violation->first == 1);
    CHECK(rep.violation->second == 2);
    for (const auto& p : rep.pairs)
        if (p.i == 1 && p.j == 2 && p.g == 1) CHECK(p.residual == GaussianRational(make_rational(1, 3)));
}

TEST_CASE("exact truncation of the blaschke fixture is honestly non-orthogonal") {
    const auto f = blaschke_series<GaussianRational>(GaussianRational(make_rational(1, 2)), 5);
    const auto rep = orthogonality_test(f, 0.0, 4);
    CHECK(rep.verdict == Verdict::violated);  // the residual is tiny but exactly nonzero
}

TEST_CASE("float blaschke with a declared threshold is consistent with orthogonality") {
    const auto fe = blaschke_series<GaussianRational>(GaussianRational(make_rational(1, 2)), 8);
    std::vector<ComplexF64> cf;
    for (const auto& c : fe.coeffs()) cf.push_back(c.to_complex());
    const TruncatedSeries<ComplexF64> f(std::move(cf));

    ResidualOptions opts;
    opts.tail_threshold = f.degree_cap() / 2;
    const auto rep = orthogonality_test(f, 0.0, 6, opts);
    CHECK(rep.verdict == Verdict::all_zero);

    // a tail-dominated report degrades to inconclusive under a finite resolution
    ResidualOptions strict = opts;
    strict.resolution = 1e-9;
    CHECK(orthogonality_test(f, 0.0, 6, strict).verdict == Verdict::inconclusive);
}

TEST_CASE("t = 0 orthogonality agrees with the inner test of the lift") {
    for (std::uint64_t seed : {4ull, 5ull, 6ull, 7ull}) {
        const auto f = random_series<GaussianRational>(seed, 4, 10);
        const auto ortho = orthogonality_test(f, 0.0, 8);
        const auto inner = inner_test(bohr_lift(f), 8);
        CHECK((ortho.verdict == Verdict::all_zero) == (inner.residuals.verdict == Verdict::all_zero));
        REQUIRE(ortho.pairs.size() == inner.residuals.pairs.size());
        for (std::size_t idx = 0; idx < ortho.pairs.size(); ++idx) {
            CHECK(ortho.pairs[idx].i == inner.residuals.pairs[idx].i);
            CHECK(ortho.pairs[idx].residual == inner.residuals.pairs[idx].residual);
        }
    }
}

TEST_CASE("inner test examples") {
    BohrSeries<ComplexF64> mono;
    mono.add_term(MultiIndex{1}, ComplexF64(1.0, 0.0));
    const auto rep1 = inner_test(mono, 6);
    CHECK(rep1.residuals.verdict == Verdict::all_zero);
    CHECK(rep1.constant_sq.real() == Catch::Approx(1.0));

    BohrSeries<ComplexF64> off;
    off.add_term(MultiIndex{}, ComplexF64(1.0, 0.0));
    off.add_term(MultiIndex{1}, ComplexF64(0.5, 0.0));
    const auto rep2 = inner_test(off, 6);
    REQUIRE(rep2.residuals.verdict == Verdict::violated);
    CHECK(rep2.residuals.violation->first == 1);
    CHECK(rep2.residuals.violation->second == 2);
    for (const auto& p : rep2.residuals.pairs)
        if (p.i == 1 && p.j == 2) CHECK(std::abs(p.residual - ComplexF64(0.5, 0.0)) < 1e-15);
}

TEST_CASE("inner constant equals the exact t = 0 norm") {
    const auto f = random_series<GaussianRational>(31, 6, 24);
    const auto rep = inner_test(bohr_lift(f), 4);
    CHECK(rep.constant_sq == norm_squared(f, 0.0));

    // blaschke at level M: c^2 = 1 - (3/4) 4^{-M}
    const auto b = blaschke_series<GaussianRational>(GaussianRational(make_rational(1, 2)), 6);
    const auto repb = inner_test(bohr_lift(b), 4);
    CHECK(repb.constant_sq ==
          GaussianRational(Rational(1) - make_rational(3, 4) * rational_pow(make_rational(1, 4), 6)));
}

TEST_CASE("product constant test examples") {
    BohrSeries<ComplexF64> zeta1, one_term, one_plus;
    zeta1.add_term(MultiIndex{1}, ComplexF64(1.0, 0.0));
    one_term.add_term(MultiIndex{}, ComplexF64(1.0, 0.0));
    one_plus.add_term(MultiIndex{}, ComplexF64(1.0, 0.0));
    one_plus.add_term(MultiIndex{1}, ComplexF64(1.0, 0.0));

    const auto r1 = product_constant_test(zeta1, zeta1, 6);
    CHECK(r1.residuals.verdict == Verdict::all_zero);
    CHECK(r1.constant.real() == Catch::Approx(1.0));

    const auto r2 = product_constant_test(one_term, one_term, 6);
    CHECK(r2.residuals.verdict == Verdict::all_zero);
    CHECK(r2.constant.real() == Catch::Approx(1.0));

    const auto r3 = product_constant_test(one_plus, one_term, 6);
    REQUIRE(r3.residuals.verdict == Verdict::violated);
    CHECK(r3.residuals.violation->first == 1);
    CHECK(r3.residuals.violation->second == 2);

    // ordered pairs matter for distinct lifts
    BohrSeries<ComplexF64> f2, g3;
    f2.add_term(MultiIndex{1}, ComplexF64(1.0, 0.0));       // index 2
    g3.add_term(MultiIndex{0, 1}, ComplexF64(1.0, 0.0));    // index 3
    const auto r4 = product_constant_test(f2, g3, 6);
    CHECK(r4.residuals.verdict == Verdict::violated);
}

TEST_CASE("tau symmetry identity") {
    // monomial: both sides agree for every tau
    BohrSeries<ComplexF64> mono;
    mono.add_term(MultiIndex{0, 1}, ComplexF64(0.5, 0.5));
    CHECK(tau_symmetry_test(mono, Tau::star(), 5).identity_holds);

    // tau = all ones reduces to inner-test consistency
    BohrSeries<ComplexF64> any;
    any.add_term(MultiIndex{}, ComplexF64(1.0, 0.0));
    any.add_term(MultiIndex{1}, ComplexF64(0.25, -0.5));
    const auto rep = tau_symmetry_test(any, Tau::all_ones(), 6);
    CHECK(rep.identity_holds);
    CHECK(rep.verdicts_agree);

    // lift of z + z^2 under tau_star, pairs up to 6
    TruncatedSeries<ComplexF64> f(std::vector<ComplexF64>{{1.0, 0.0}, {1.0, 0.0}});
    const auto rep2 = tau_symmetry_test(bohr_lift(f), Tau::star(), 6);
    CHECK(rep2.identity_holds);
}

TEST_CASE("tau symmetry is exact for rational radii") {
    for (std::uint64_t seed : {1ull, 9ull, 17ull}) {
        const auto f = random_series<GaussianRational>(seed, 5, 18);
        const Tau tau = Tau::from_rationals({make_rational(1, 2), make_rational(1, 3), kOne.re});
        const auto rep = tau_symmetry_test(bohr_lift(f), tau, 6);
        CHECK(rep.identity_holds);  // exact equality of both bilinear forms
        CHECK(rep.verdicts_agree);
    }
    // the tau_star preset itself has irrational radii in exact mode
    const auto f = random_series<GaussianRational>(3, 3, 6);
    CHECK_THROWS_AS(tau_symmetry_test(bohr_lift(f), Tau::star(), 4), std::domain_error);
}

TEST_CASE("monomial diagnostic") {
    const auto mono = monomial_diagnostic(ExactSeries::monomial(5, GaussianRational(Rational(3))), -1.0);
    CHECK(mono.monomial);
    CHECK(mono.ratio_spread == 0.0);
    CHECK(mono.eq242.verdict == Verdict::all_zero);
    CHECK(mono.eq244.verdict == Verdict::all_zero);

    const auto f = exact_series({{1, kOne}, {2, kOne}});
    const auto neg = monomial_diagnostic(f, -1.0);
    CHECK_FALSE(neg.monomial);
    CHECK(neg.ratio_spread == Catch::Approx(1.0));
    REQUIRE(neg.eq242.pairs.size() == 1);
    CHECK(neg.eq242.pairs[0].residual == GaussianRational(make_rational(1, 2)));
    CHECK(neg.eq242.verdict == Verdict::violated);

    const auto pos = monomial_diagnostic(f, 1.0);
    CHECK(pos.eq242.pairs[0].residual == GaussianRational(Rational(2)));

    CHECK_THROWS_AS(monomial_diagnostic(f, 0.0), std::invalid_argument);
}

TEST_CASE("rigidity: every two-point support violates orthogonality for t != 0") {
    const std::vector<GaussianRational> palette = {kOne, -kOne, GaussianRational(Rational(1), Rational(1))};
    for (std::uint64_t m = 1; m <= 6; ++m)
        for (std::uint64_t n = m + 1; n <= 6; ++n)
            for (const auto& cm : palette)
                for (const auto& cn : palette)
                    for (double t : {-1.0, 1.0}) {
                        const auto f = exact_series({{m, cm}, {n, cn}});
                        const auto rep = orthogonality_test(f, t, 2 * n);
                        CHECK(rep.verdict == Verdict::violated);
                    }
}

TEST_CASE("proof chain: rearranged residual converges at rate 1/k") {
    const auto f = exact_series({{1, kOne}, {2, kOne}});
    const auto seq = CoeffSeq<GaussianRational>::from_series(f);

    const GaussianRational limit = coprime_residual(seq, seq, 1, 2, WeightLaw::nij(-1.0));
    CHECK(limit == GaussianRational(make_rational(1, 2)));

    const GaussianRational deriv = coprime_residual(seq, seq, 1, 2, WeightLaw::nij_minus_one(-1.0));
    CHECK(deriv == GaussianRational(make_rational(1, 4)));

    GaussianRational prev_err;
    for (std::uint64_t k : {1ull, 2ull, 4ull, 8ull, 16ull, 32ull}) {
        const GaussianRational rk = proof_chain_residual(seq, seq, 1, 2, -1.0, k);
        CHECK(rk == GaussianRational(make_rational(static_cast<long>(k), static_cast<long>(2 * k + 1))));
        const GaussianRational err = rk - limit;
        if (k > 1) CHECK(abs_of(err) < abs_of(prev_err));
        prev_err = err;
        // k (r_k - limit) approaches t * deriv = -1/4
        if (k == 32) {
            const GaussianRational scaled = err * Rational(static_cast<long>(k));
            const GaussianRational target = deriv * Rational(-1);
            CHECK(abs_of(scaled - target) <= 0.05 * abs_of(target));
        }
    }
}

TEST_CASE("float violation must clear tail plus roundoff slack") {
    TruncatedSeries<ComplexF64> f(std::vector<ComplexF64>{{1.0, 0.0}, {1.0, 0.0}});
    const auto rep = orthogonality_test(f, -1.0, 4);
    CHECK(rep.verdict == Verdict::violated);  // residual 1/3, zero tails at default threshold
}
