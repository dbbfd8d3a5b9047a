#include <catch2/catch_amalgamated.hpp>

#include <asymp/series.hpp>
#include <asymp/transfer.hpp>

#include <random>

using namespace asymp;

namespace {

bool near(const Real& a, const Real& b, int digits) {
    PrecisionScope ps{Precision(digits + 15)};
    Real s = abs(b);
    if (s.is_zero()) return abs(a) <= Real(1L).scaled_by_pow10(-digits);
    return abs(a - b) / s <= Real(1L).scaled_by_pow10(-digits);
}

Rat mkrat(long n, long d) {
    Rat q(n, d);
    q.canonicalize();
    return q;
}

}  // namespace

TEST_CASE("binom ratio row matches closed forms", "[transfer]") {
    // e_1(a) = a(a+1)/2, e_2(a) = a(a+1)(a+2)(3a+1)/24 for several rationals
    for (Rat a : {mkrat(1, 2), mkrat(-3, 2), mkrat(-1, 3), mkrat(5, 4)}) {
        auto row = binom_ratio_row(Value(a), 3);
        CHECK(row[0].rat() == 1);
        CHECK(row[1].rat() == a * (a + 1) / 2);
        CHECK(row[2].rat() == a * (a + 1) * (a + 2) * (3 * a + 1) / 24);
    }
}

TEST_CASE("binomial_asym spec values", "[transfer]") {
    Precision p(50);
    // alpha = -3/2: n^{1/2}/Gamma(3/2) (1 + 3/(8n))
    auto b = binomial_asym(Rat(-3, 2), 2, p);
    REQUIRE(b.terms.size() == 2);
    CHECK(b.terms[0].npow == Rat(1, 2));
    PrecisionScope ps{p};
    Real ig = Real(1L) / gamma(Rat(3, 2), p);
    CHECK(near(b.terms[0].coeff.real(), ig, 45));
    CHECK(near(b.terms[1].coeff.real() / b.terms[0].coeff.real(), Real(Rat(3, 8)), 45));

    // alpha = 2 -> null
    CHECK(binomial_asym(Rat(2), 3, p).is_zero());

    // alpha = 1/2 at n = 4: exact coefficient -5/128, 2-term asymptotics
    // within 6% relative
    auto c = binomial_asym(Rat(1, 2), 2, p);
    Real approx = coeff_eval(c, 4);
    Real exact(Rat(-5, 128));
    CHECK(abs(approx - exact) / abs(exact) < Real(0.06));
}

TEST_CASE("transfer of pure powers", "[transfer]") {
    Precision p(40);
    // (1-z)^{-1} -> exactly 1
    auto a = transfer(SingularExpansion::monomial(Value(1L), Rat(-1)), 3, p);
    REQUIRE(a.exact);
    REQUIRE(a.terms.size() == 1);
    CHECK(a.terms[0].npow == Rat(0));
    CHECK(a.terms[0].coeff.rat() == 1);

    // null contribution for m in {0,1,2,3}: checked exactly against the
    // terminating binomial series at finite n > m
    for (long m : {0L, 1L, 2L, 3L}) {
        auto t = transfer(SingularExpansion::monomial(Value(1L), Rat(m)), 3, p);
        CHECK(t.is_zero());
        auto s = binomial_series(Rat(m), 10);
        for (std::size_t n = static_cast<std::size_t>(m) + 1; n <= 10; ++n)
            CHECK(s.coeff(n).rat() == 0);
    }

    // exact polynomial: (1-z)^{-3} -> binom(n+2,2) = n^2/2 + 3n/2 + 1
    auto q = transfer(SingularExpansion::monomial(Value(1L), Rat(-3)), 3, p);
    REQUIRE(q.exact);
    REQUIRE(q.terms.size() == 3);
    CHECK(q.terms[0].coeff.rat() == Rat(1, 2));
    CHECK(q.terms[1].coeff.rat() == Rat(3, 2));
    CHECK(q.terms[2].coeff.rat() == 1);
}

TEST_CASE("transfer with logarithms: psi closed form", "[transfer]") {
    Precision p(40);
    // [z^n](1-z)^{-1/2} L = n^{-1/2}/Gamma(1/2) (log n - psi(1/2)) + O(log n/n^{3/2})
    auto a = transfer(SingularExpansion::monomial(Value(1L), Rat(-1, 2), 1), 1, p);
    REQUIRE(a.terms.size() == 2);
    PrecisionScope ps{p};
    Real ig = Real(1L) / gamma(Rat(1, 2), p);
    CHECK(a.terms[0].npow == Rat(-1, 2));
    CHECK(a.terms[0].logpow == 1);
    CHECK(near(a.terms[0].coeff.real(), ig, 36));
    CHECK(a.terms[1].logpow == 0);
    CHECK(near(a.terms[1].coeff.real(), -ig * digamma(Rat(1, 2), p), 34));
    CHECK(!a.exact);
    CHECK(a.err_npow == Rat(-3, 2));
    CHECK(a.err_logpow == 1);
}

TEST_CASE("transfer at integer alpha with logs", "[transfer]") {
    Precision p(40);
    // (1-z) L: [z^n] = -1/(n(n-1)) = -n^{-2} - n^{-3} - ...
    auto a = transfer(SingularExpansion::monomial(Value(1L), Rat(1), 1), 2, p);
    REQUIRE(a.terms.size() >= 2);
    CHECK(a.terms[0].npow == Rat(-2));
    CHECK(a.terms[0].logpow == 0);
    CHECK(near(a.terms[0].coeff.real(), Real(-1L), 34));
    CHECK(a.terms[1].npow == Rat(-3));
    CHECK(near(a.terms[1].coeff.real(), Real(-1L), 33));

    // (1-z)^{-1} L: [z^n] = H_n = log n + gamma + 1/(2n) - ...
    auto h = transfer(SingularExpansion::monomial(Value(1L), Rat(-1), 1), 2, p);
    PrecisionScope ps{p};
    Real g = euler_gamma(p);
    REQUIRE(h.terms.size() >= 3);
    CHECK(h.terms[0].logpow == 1);
    CHECK(h.terms[0].npow == Rat(0));
    CHECK(near(h.terms[0].coeff.real(), Real(1L), 36));
    CHECK(h.terms[1].logpow == 0);
    CHECK(near(h.terms[1].coeff.real(), g, 34));
    // the 1/(2n) term
    bool found = false;
    for (auto& t : h.terms)
        if (t.npow == Rat(-1) && t.logpow == 0) {
            found = true;
            CHECK(near(t.coeff.real(), Real(0.5), 30));
        }
    CHECK(found);
}

TEST_CASE("transfer inverse log scale", "[transfer]") {
    Precision p(50);
    PrecisionScope ps{p};
    Real pi = Real::pi();
    Real K = Real::parse("0.8825424006106063735858257");
    Real g = euler_gamma(p);
    // -pi L^{-1} + pi^2 K L^{-2}  ->  pi/(n log^2 n) - 2 pi (gamma + pi K)/(n log^3 n) + ...
    SingularExpansion P;
    P.terms.emplace_back(Value(-pi), Rat(0), -1);
    P.terms.emplace_back(Value(pi * pi * K), Rat(0), -2);
    P.error = ErrorBudget::big_o(Rat(0), -4);
    auto a = transfer(P, 2, p);
    REQUIRE(a.terms.size() >= 2);
    CHECK(a.terms[0].npow == Rat(-1));
    CHECK(a.terms[0].logpow == -2);
    CHECK(near(a.terms[0].coeff.real(), pi, 40));
    CHECK(a.terms[1].logpow == -3);
    CHECK(near(a.terms[1].coeff.real(), -(g + pi * K) * pi * 2, 38));
}

TEST_CASE("transfer against exact series ground truth", "[transfer]") {
    // random singular elements: depth-3 transfer vs exact coefficient at n=2000
    Precision p(50);
    std::mt19937 rng(424242);
    std::uniform_int_distribution<long> num(-11, 11);
    std::uniform_int_distribution<long> den(2, 5);
    std::uniform_int_distribution<int> logp(0, 2);
    int tested = 0;
    for (int it = 0; it < 40 && tested < 10; ++it) {
        Rat alpha = mkrat(num(rng), den(rng));
        if (rat_is_int(alpha)) continue;
        if (alpha < Rat(-3) || alpha > Rat(3)) continue;
        int k = logp(rng);
        ++tested;
        long n = 2000;
        PrecisionScope ps{Precision(60)};
        auto s = singular_element_series_float(alpha, k, static_cast<std::size_t>(n));
        Real exact = s.coeff(static_cast<std::size_t>(n)).real();
        auto f = SingularExpansion::monomial(Value(1L), alpha, k);
        auto a = transfer(f, 3, p);
        Real approx = coeff_eval(a, n);
        // first omitted term = what depth 4 adds beyond depth 3
        auto a4 = transfer(f, 4, p);
        Real omitted = abs(coeff_eval(a4, n) - approx);
        CHECK(abs(approx - exact) < omitted * 2);
    }
    CHECK(tested >= 10);
}

TEST_CASE("reconstruct inverts transfer", "[transfer][property]") {
    Precision p(50);
    std::mt19937 rng(777);
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(2, 4);
    std::uniform_int_distribution<int> logp(0, 1);
    for (int it = 0; it < 20; ++it) {
        SingularExpansion f;
        int nt = 1 + (it % 3);
        for (int i = 0; i < nt; ++i) {
            Rat alpha = mkrat(num(rng), den(rng));
            if (rat_is_int(alpha)) alpha += mkrat(1, 2 * den(rng) + 1);
            f.terms.emplace_back(Value(mkrat(num(rng) == 0 ? 3 : num(rng), den(rng))), alpha,
                                 logp(rng));
        }
        f.error = ErrorBudget::exact();
        f = normalize(f);
        if (f.is_zero()) continue;
        auto a = transfer(f, 3, p);
        auto g = reconstruct(a, ReconstructBasis::Standard, p);
        // only terms dominating the transferred error budget are recoverable
        SingularExpansion fcmp = f;
        fcmp.error = g.error;
        fcmp = normalize(fcmp);
        REQUIRE(g.terms.size() == fcmp.terms.size());
        for (std::size_t i = 0; i < fcmp.terms.size(); ++i) {
            CHECK(g.terms[i].alpha == fcmp.terms[i].alpha);
            CHECK(g.terms[i].logpow == fcmp.terms[i].logpow);
            PrecisionScope ps{Precision(60)};
            CHECK(abs(g.terms[i].coeff.real() - fcmp.terms[i].coeff.real()) <
                  Real(1L).scaled_by_pow10(-p.digits + 8) *
                      (abs(fcmp.terms[i].coeff.real()) + Real(1L)));
        }
    }
}

TEST_CASE("reconstruct spec cases", "[transfer]") {
    Precision p(40);
    // a = 1 (all n) -> (1-z)^{-1}
    CoeffAsymptotics ones;
    ones.terms.emplace_back(Value(1L), Rat(0), 0);
    ones.exact = true;
    auto r = reconstruct(ones, ReconstructBasis::Standard, p);
    REQUIRE(r.terms.size() == 1);
    CHECK(r.terms[0].alpha == Rat(-1));
    CHECK(r.terms[0].logpow == 0);
    PrecisionScope ps{p};
    CHECK(near(r.terms[0].coeff.real(), Real(1L), 35));

    // a = 1/(pi n) - 1/(4 pi n^2) + O(n^{-2-eps}): L-scale reconstruction
    Real pi = Real::pi();
    CoeffAsymptotics q;
    q.terms.emplace_back(Value(Real(1L) / pi), Rat(-1), 0);
    q.terms.emplace_back(Value(-(Real(1L) / (pi * 4))), Rat(-2), 0);
    q.exact = false;
    q.err_npow = Rat(-2);
    q.err_logpow = -1;  // stands in for n^{-2-eps}
    auto rq = reconstruct(q, ReconstructBasis::Standard, p);
    REQUIRE(!rq.terms.empty());
    CHECK(rq.terms[0].alpha == Rat(0));
    CHECK(rq.terms[0].logpow == 1);
    CHECK(near(rq.terms[0].coeff.real(), Real(1L) / pi, 34));

    // Catalan-scale: coefficients of 2(1-sqrt(1-z))/z - reconstruct the
    // sqrt(1-z) terms from its transfer
    auto cat = transfer(SingularExpansion::monomial(Value(-2L), Rat(1, 2)), 2, p);
    auto rc = reconstruct(cat, ReconstructBasis::Standard, p);
    REQUIRE(!rc.terms.empty());
    CHECK(rc.terms[0].alpha == Rat(1, 2));
    CHECK(near(rc.terms[0].coeff.real(), Real(-2L), 32));
}

TEST_CASE("reconstruct polylog basis", "[transfer]") {
    Precision p(40);
    // coefficients n^{-1/2}: Li_{1/2} has exactly these; its expansion leads
    // with Gamma(1/2) (1-z)^{-1/2}
    CoeffAsymptotics a;
    a.terms.emplace_back(Value(1L), Rat(-1, 2), 0);
    a.exact = false;
    a.err_npow = Rat(-5, 2);
    a.err_logpow = 0;
    auto r = reconstruct(a, ReconstructBasis::Polylog, p);
    REQUIRE(!r.terms.empty());
    CHECK(r.terms[0].alpha == Rat(-1, 2));
    PrecisionScope ps{p};
    CHECK(near(r.terms[0].coeff.real(), gamma(Rat(1, 2), p), 34));
}

TEST_CASE("coeff arithmetic", "[transfer]") {
    Precision p(40);
    PrecisionScope ps{p};
    // multiply n^{1/2} by the Catalan-number expansion and recover spec row:
    // 4^{-n} C_n ~ (1/sqrt(pi)) n^{-3/2} (1 - 9/(8n) + 145/(128 n^2) - ...)
    SingularExpansion catz;  // C(z/4) = 2 - 2(1-z)^{1/2} + 2(1-z) - 2(1-z)^{3/2} + ...
    for (int k = 0; k <= 6; ++k)
        catz.terms.emplace_back(Value(k % 2 == 0 ? 2L : -2L), mkrat(k, 2), 0);
    catz.error = ErrorBudget::big_o(mkrat(7, 2));
    auto cn = transfer(catz, 3, p);
    REQUIRE(!cn.terms.empty());
    Real isqpi = Real(1L) / sqrt(Real::pi());
    CHECK(cn.terms[0].npow == Rat(-3, 2));
    CHECK(near(cn.terms[0].coeff.real(), isqpi, 34));
    CHECK(near(cn.terms[1].coeff.real(), -isqpi * Real(Rat(9, 8)), 33));
    CHECK(near(cn.terms[2].coeff.real(), isqpi * Real(Rat(145, 128)), 32));

    CoeffAsymptotics sqrtn;
    sqrtn.terms.emplace_back(Value(1L), Rat(1, 2), 0);
    sqrtn.exact = true;
    auto prod = coeff_multiply(sqrtn, cn);
    CHECK(prod.terms[0].npow == Rat(-1));
    CHECK(near(prod.terms[0].coeff.real(), isqpi, 34));

    // reciprocal_series: invert 4^{-n}C_n and multiply back to 1 + O(n^{-2})
    auto inv = coeff_reciprocal(cn, 2);
    CHECK(inv.terms[0].npow == Rat(3, 2));
    CHECK(near(inv.terms[0].coeff.real(), sqrt(Real::pi()), 33));
    CHECK(near(inv.terms[1].coeff.real() / inv.terms[0].coeff.real(), Real(Rat(9, 8)), 30));
    auto one = coeff_multiply(cn, inv);
    REQUIRE(!one.terms.empty());
    CHECK(one.terms[0].npow == Rat(0));
    CHECK(near(one.terms[0].coeff.real(), Real(1L), 30));
    for (std::size_t i = 1; i < one.terms.size(); ++i)
        CHECK(!coeff_scale_dominates(one.terms[i].npow, one.terms[i].logpow, Rat(-2), 10));

    // add(x, -x) = 0
    auto z = coeff_add(prod, coeff_scale(prod, Value(-1L)));
    CHECK(z.is_zero());
}

TEST_CASE("stirling factorial correction", "[transfer]") {
    auto s = stirling_factorial_correction(4);
    // 1 + 1/(12n) + 1/(288 n^2) - 139/(51840 n^3)
    REQUIRE(s.terms.size() == 4);
    CHECK(s.terms[0].coeff.rat() == 1);
    CHECK(s.terms[1].coeff.rat() == Rat(1, 12));
    CHECK(s.terms[2].coeff.rat() == Rat(1, 288));
    CHECK(s.terms[3].coeff.rat() == Rat(-139, 51840));
}

TEST_CASE("transfer rescaling exponential factor", "[transfer]") {
    Precision p(30);
    auto f = SingularExpansion::monomial(Value(1L), Rat(-1, 2));
    auto fq = rescale(f, ScaleFactor::rational(Rat(1, 4)));
    auto a = transfer(fq, 2, p);
    CHECK(a.exp_factor.r == Rat(4));
    auto b = transfer(f, 2, p);
    REQUIRE(a.terms.size() == b.terms.size());
    for (std::size_t i = 0; i < a.terms.size(); ++i) CHECK(a.terms[i].npow == b.terms[i].npow);
}
