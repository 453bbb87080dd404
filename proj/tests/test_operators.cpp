#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qbss/moments.hpp"
#include "qbss/operators.hpp"
#include "support/stancu_oracle.hpp"

using namespace qbss;

namespace {
const TruncationPolicy kPolicy{};

OperatorParams make(int n, double q, double a = 0.0, double b = 0.0) {
    return OperatorParams(n, QParam(q), a, b);
}
} // namespace

TEST_CASE("upper limit and parameter validation") {
    CHECK(make(4, 0.8).upper_limit() ==
          doctest::Approx(0.8 / (1.0 - 0.4096)).epsilon(1e-15));
    CHECK_THROWS_AS(make(0, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(make(4, 0.8, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make(4, 0.8, 0.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(make(4, 1.0).upper_limit(), std::domain_error);
}

TEST_CASE("baskakov basis closed values") {
    // k = 0: 1/(1+x)_q^n
    for (const double x : {0.0, 0.3, 1.0, 4.0}) {
        const auto params = make(3, 0.6);
        const double direct =
            1.0 / ((1.0 + x) * (1.0 + 0.6 * x) * (1.0 + 0.36 * x));
        CHECK(baskakov_basis(params, 0, x) ==
              doctest::Approx(direct).epsilon(1e-13));
    }
    // x = 0 kills every k >= 1 weight
    for (int k = 1; k <= 5; ++k)
        CHECK(baskakov_basis(make(4, 0.5), k, 0.0) == 0.0);
    // direct evaluation of the displayed factors at n=2, k=1, q=0.5, x=0.5
    {
        const double expected = 1.5 * 0.5 / (1.5 * 1.25 * 1.125);
        CHECK(baskakov_basis(make(2, 0.5), 1, 0.5) ==
              doctest::Approx(expected).epsilon(1e-13));
    }
    CHECK_THROWS_AS(baskakov_basis(make(2, 0.5), 1, -0.1), std::domain_error);
}

TEST_CASE("baskakov basis matches the multiplicative recurrence") {
    for (const double q : {0.5, 0.8, 0.95}) {
        for (const double x : {0.25, 1.0, 5.0}) {
            const auto params = make(4, q);
            double p = baskakov_basis(params, 0, x);
            for (int k = 0; k < 20; ++k) {
                const QParam qp(q);
                const double ratio = q_integer(4 + k, qp) /
                                     q_integer(k + 1, qp) * std::pow(q, k) *
                                     x / (1.0 + std::pow(q, 4 + k) * x);
                p *= ratio;
                CHECK(baskakov_basis(params, k + 1, x) ==
                      doctest::Approx(p).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("baskakov basis sums to one") {
    for (const double q : {0.5, 0.8, 0.95}) {
        for (const int n : {2, 4, 8, 16}) {
            for (const double x : {0.0, 0.5, 1.0, 2.0, 5.0}) {
                const auto params = make(n, q);
                double sum = 0.0;
                for (int k = 0; k < 600; ++k) {
                    const double p = baskakov_basis(params, k, x);
                    sum += p;
                    if (k > 5 && p < 1e-16)
                        break;
                }
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("szasz basis values and domain") {
    const auto params = make(3, 0.5);
    CHECK(szasz_basis(params, 0, 0.0) == 1.0);
    CHECK(szasz_basis(params, 2, 0.0) == 0.0);

    // independent recomposition from qcore pieces at t = U/2
    const double t = params.upper_limit() / 2.0;
    const QParam q(0.5);
    const double nq = q_integer(3, q);
    const double expected = big_e_q(-nq * t, q, kPolicy).value *
                            std::pow(nq * t, 2) / q_factorial(2, q);
    CHECK(szasz_basis(params, 2, t) == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(szasz_basis(params, 0, -0.1), std::domain_error);
    CHECK_THROWS_AS(szasz_basis(params, 0, params.upper_limit() + 0.1),
                    std::domain_error);
}

TEST_CASE("szasz basis stays nonnegative across the grid") {
    for (const double q : {0.5, 0.8, 0.95}) {
        for (const int n : {2, 8, 16}) {
            const auto params = make(n, q);
            const double upper = params.upper_limit();
            for (int k = 0; k <= 200; k += 8) {
                for (int i = 0; i <= 10; ++i) {
                    const double t = upper * (i / 10.0);
                    CHECK(szasz_basis(params, k, t) >= 0.0);
                }
            }
        }
    }
}

TEST_CASE("operator normalization on a spot grid") {
    const auto one = [](double) { return 1.0; };
    for (const double q : {0.5, 0.8, 0.95}) {
        for (const int n : {2, 8}) {
            for (const double x : {0.0, 0.5, 2.0, 5.0}) {
                const auto audit = apply(make(n, q, 1.0, 2.0), one, x, kPolicy);
                CHECK(std::abs(audit.value - 1.0) < 1e-8);
                CHECK(audit.k_terms >= 1);
                CHECK(audit.stop_reason == StopReason::tolerance);
            }
        }
    }
}

TEST_CASE("operator frozen examples from the moment closed forms") {
    const auto ident = [](double t) { return t; };
    // plain operator, n=4, q=0.8: image of t at x = 0.5 is x + q/[4]_q
    {
        const double expected = 0.5 + 0.8 / 2.952;
        const auto audit = apply(make(4, 0.8), ident, 0.5, kPolicy);
        CHECK(std::abs(audit.value - expected) < 1e-8);
    }
    // Stancu operator, alpha=1, beta=2: ([n]x + q + alpha)/([n] + beta)
    {
        const double expected = (2.952 * 0.5 + 0.8 + 1.0) / (2.952 + 2.0);
        const auto audit = apply(make(4, 0.8, 1.0, 2.0), ident, 0.5, kPolicy);
        CHECK(std::abs(audit.value - expected) < 1e-8);
    }
}

TEST_CASE("operator is linear, positive and monotone") {
    std::mt19937_64 rng(7150712);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        const double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng);
        const double d0 = coef(rng), d1 = coef(rng), d2 = coef(rng);
        const double wa = coef(rng), wb = coef(rng);
        const auto fa = [&](double t) { return c0 + c1 * t + c2 * t * t; };
        const auto fb = [&](double t) { return d0 + d1 * t + d2 * t * t; };
        const auto combo = [&](double t) { return wa * fa(t) + wb * fb(t); };
        const auto params = make(4, 0.8, 0.5, 0.5);
        const double x = 0.5 + trial * 0.25;
        const double lhs = apply(params, combo, x, kPolicy).value;
        const double rhs = wa * apply(params, fa, x, kPolicy).value +
                           wb * apply(params, fb, x, kPolicy).value;
        CHECK(std::abs(lhs - rhs) < 1e-10);

        // positivity and monotonicity
        const auto pos = [&](double t) { return std::abs(fa(t)); };
        const auto bigger = [&](double t) { return pos(t) + 0.25; };
        CHECK(apply(params, pos, x, kPolicy).value >= 0.0);
        CHECK(apply(params, pos, x, kPolicy).value <=
              apply(params, bigger, x, kPolicy).value + 1e-10);
    }
}

TEST_CASE("alpha=beta=0 reproduces the plain operator against the oracle") {
    const auto sat = [](double t) { return t / (1.0 + t); };
    const auto ident = [](double t) { return t; };
    for (const double q : {0.5, 0.8, 0.95}) {
        for (const int n : {2, 8, 32}) {
            for (const double x : {0.0, 0.5, 2.0}) {
                const double lib = apply(make(n, q), sat, x, kPolicy).value;
                const double ref = stancu_oracle::apply(n, q, 0.0, 0.0, x, sat);
                CHECK(std::abs(lib - ref) < 1e-12);
                const double lib1 = apply(make(n, q), ident, x, kPolicy).value;
                const double ref1 =
                    stancu_oracle::apply(n, q, 0.0, 0.0, x, ident);
                CHECK(std::abs(lib1 - ref1) < 1e-12);
            }
        }
    }
}

TEST_CASE("stancu operator against the oracle") {
    const auto square = [](double t) { return t * t; };
    for (const double x : {0.0, 1.0, 5.0}) {
        const double lib =
            apply(make(4, 0.8, 1.0, 2.0), square, x, kPolicy).value;
        const double ref = stancu_oracle::apply(4, 0.8, 1.0, 2.0, x, square);
        CHECK(std::abs(lib - ref) < 1e-11);
    }
}

TEST_CASE("central moments match their closed forms") {
    for (const double q : {0.5, 0.8}) {
        for (const int n : {4, 16}) {
            const auto params = make(n, q);
            const double nq = q_integer(n, QParam(q));
            for (const double x : {0.0, 0.5, 2.0}) {
                CHECK(std::abs(central_moment(params, 1, x, kPolicy) -
                               q / nq) < 1e-8);
            }
            // r = 2 at x = 0 is the constant term of Lemma 1(iii)
            CHECK(std::abs(central_moment(params, 2, 0.0, kPolicy) -
                           q * q * (1.0 + q) / (nq * nq)) < 1e-8);
        }
    }
    // r = 2 equals delta_n for the Stancu parameters as well
    {
        const auto params = make(4, 0.8, 1.0, 2.0);
        CHECK(std::abs(central_moment(params, 2, 0.5, kPolicy) -
                       delta_n(params, 0.5)) < 1e-8);
    }
    CHECK_THROWS_AS(central_moment(make(4, 0.8), 3, 0.5, kPolicy),
                    std::invalid_argument);
}

TEST_CASE("operator rejects bad inputs") {
    const auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(apply(make(4, 0.8), one, -0.5, kPolicy),
                    std::domain_error);
    CHECK_THROWS_AS(apply(make(4, 1.0), one, 0.5, kPolicy), std::domain_error);
}

TEST_CASE("deep evaluation far from the basis peak stays finite") {
    // x = 50 forces the basis to climb from ~1e-60; the log-space outer sum
    // must still land on the analytic moment value.
    const auto params = make(64, 1.0 - 1.0 / 8.0);
    const auto ident = [](double t) { return t; };
    const double got = apply(params, ident, 50.0, kPolicy).value;
    const double expected = moments_basic(64, QParam(1.0 - 1.0 / 8.0), 50.0).m1;
    CHECK(std::abs(got - expected) < 1e-6);
}
