#include <metaplectic/cocycle.hpp>
#include <metaplectic/sampling.hpp>

#include <gtest/gtest.h>

using namespace metaplectic;
using sampling::Rng;

namespace {

const ExactPhase ONE{};
ExactPhase ph(long p, long q) { return ExactPhase(Rational(p, q)); }

template <class F>
void cocycle_identity(F c, Rng& rng, bool pm, int n) {
    for (int i = 0; i < n; ++i) {
        RMat g1 = pm ? sampling::sl2pm_rational(rng) : sampling::sl2_rational(rng);
        RMat g2 = pm ? sampling::sl2pm_rational(rng) : sampling::sl2_rational(rng);
        RMat g3 = pm ? sampling::sl2pm_rational(rng) : sampling::sl2_rational(rng);
        ASSERT_EQ(c(g1, g2) * c(g1 * g2, g3), c(g1, g2 * g3) * c(g2, g3)) << g1 << g2 << g3;
    }
}

DMat random_p(Rng& rng) {
    double a = sampling::uniform_real(rng, 0.2, 3);
    double D = sampling::coin(rng) ? 1 : -1;
    return {a, sampling::uniform_real(rng, -3, 3), 0, D / a};
}

DMat random_g(Rng& rng) {
    double a = sampling::uniform_real(rng, 0.3, 3) * (sampling::coin(rng) ? 1 : -1);
    double b = sampling::uniform_real(rng, -3, 3), c = sampling::uniform_real(rng, -3, 3);
    double y = sampling::coin(rng) ? 1 : -1;
    return {a, b, c, (y + b * c) / a};
}

}  // namespace

TEST(Cocycle, CTildeExamples) {
    EXPECT_EQ(c_tilde(u_lower<Rational>(1), u_lower<Rational>(1)), ph(1, 4));
    EXPECT_EQ(c_tilde(n2<Rational>(), omega<Rational>()), ONE);
    EXPECT_EQ(c_tilde(omega<Rational>(), omega<Rational>()), ONE);
    EXPECT_THROW(c_tilde(h_minus<Rational>(), omega<Rational>()), DomainError);
}

TEST(Cocycle, CBarExamples) {
    RMat mI = neg_identity<Rational>();
    EXPECT_EQ(c_bar(mI, mI), ph(1, 1));
    for (int n = 1; n <= 100; ++n) EXPECT_EQ(c_bar(mI, RMat{-1, 0, Rational(1, n), -1}), ONE);
    EXPECT_EQ(c_bar(omega<Rational>(), omega<Rational>()), ph(1, 1));
}

TEST(Cocycle, MNormalizer) {
    EXPECT_EQ(m_normalizer(identity<Rational>()), ONE);
    EXPECT_EQ(m_normalizer(neg_identity<Rational>()), ph(1, 2));
    EXPECT_EQ(m_normalizer(omega<Rational>()), ph(-1, 4));
}

TEST(Cocycle, CBarFromCTildeAndM) {
    Rng rng(1);
    for (int i = 0; i < 5000; ++i) {
        RMat g1 = sampling::sl2_rational(rng), g2 = sampling::sl2_rational(rng);
        ASSERT_EQ(c_bar(g1, g2), m_normalizer(g1) * m_normalizer(g2) * c_tilde(g1, g2) / m_normalizer(g1 * g2));
    }
}

TEST(Cocycle, TwoCocycleIdentities) {
    Rng rng(2);
    cocycle_identity([](const RMat& a, const RMat& b) { return c_tilde(a, b); }, rng, false, 3000);
    cocycle_identity([](const RMat& a, const RMat& b) { return c_bar(a, b); }, rng, false, 3000);
    cocycle_identity([](const RMat& a, const RMat& b) { return C_tilde(a, b); }, rng, true, 3000);
    cocycle_identity([](const RMat& a, const RMat& b) { return C_bar(a, b); }, rng, true, 3000);
}

TEST(Cocycle, NuValues) {
    Rational m1(-1), p1(1);
    EXPECT_EQ(nu(p1, omega<Rational>()), ONE);
    EXPECT_EQ(nu(m1, omega<Rational>()), ph(1, 2));
    EXPECT_EQ(nu(m1, neg_identity<Rational>()), ph(1, 1));
    EXPECT_EQ(nu2(m1, omega<Rational>()), ONE);
    EXPECT_EQ(nu2(m1, neg_identity<Rational>()), ph(1, 1));
    EXPECT_EQ(nu2(p1, RMat{-2, 0, 0, Rational(-1, 2)}), ONE);
}

TEST(Cocycle, Nu2ClosedFormMatchesQuotient) {
    Rng rng(3);
    for (int i = 0; i < 5000; ++i) {
        RMat g = sampling::sl2_rational(rng);
        for (int y : {1, -1}) ASSERT_EQ(nu2(Rational(y), g), nu2_quotient(Rational(y), g)) << g;
    }
}

TEST(Cocycle, NuAutomorphismComposition) {
    Rng rng(4);
    for (int i = 0; i < 5000; ++i) {
        RMat g = sampling::sl2_rational(rng);
        for (int y1 : {1, -1})
            for (int y2 : {1, -1}) {
                Rational r1(y1), r2(y2);
                ASSERT_EQ(nu(Rational(r1 * r2), g), nu(r1, g) * nu(r2, conj_section(g, r1)));
            }
    }
}

TEST(Cocycle, InnerAutomorphismTwist) {
    Rng rng(5);
    for (int i = 0; i < 3000; ++i) {
        RMat h = sampling::sl2_rational(rng), hi = h.inverse();
        auto nu_h = [&](const RMat& g) { return c_tilde(hi, g * h) * c_tilde(g, h); };
        RMat g1 = sampling::sl2_rational(rng), g2 = sampling::sl2_rational(rng);
        RMat c1 = hi * g1 * h, c2 = hi * g2 * h;
        ASSERT_EQ(c_tilde(c1, c2), c_tilde(g1, g2) * nu_h(g1 * g2) / (nu_h(g1) * nu_h(g2)));
    }
}

TEST(Cocycle, ExtendedExamples) {
    RMat m{-1, 0, 0, 1};
    EXPECT_EQ(C_tilde(m, m), ph(1, 1));
    Rng rng(6);
    for (int i = 0; i < 3000; ++i) {
        Rational a = sampling::small_rational(rng, 9, 6, true);
        if (a < 0) a = -a;
        int D = sampling::coin(rng) ? 1 : -1;
        RMat p{a, sampling::small_rational(rng), 0, D / a};
        RMat h = sampling::sl2pm_rational(rng);
        ASSERT_EQ(C_tilde(p, h), ONE);
        ASSERT_EQ(C_bar(p, h), ONE);
        auto [y, g] = split_section(h);
        ExactPhase hp = C_bar(h, p);
        if (h.c != 0) ASSERT_EQ(hp, ONE);
        else ASSERT_EQ(hp, ExactPhase::from_sign(hilbert(p.det(), h.a)));
        RMat g1 = sampling::sl2_rational(rng), g2 = sampling::sl2_rational(rng);
        ASSERT_EQ(C_tilde(g1, g2), c_tilde(g1, g2));
        ASSERT_EQ(C_bar(h, g1), C_bar_quotient(h, g1));
        ASSERT_EQ(C_bar(g1, h), C_bar_quotient(g1, h));
    }
}

TEST(Cocycle, F2AndCentralTriviality) {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        Rational y1 = sampling::small_rational(rng, 9, 6, true), y2 = sampling::small_rational(rng, 9, 6, true);
        RMat f1 = section(y1), f2 = section(y2);
        ASSERT_EQ(C_tilde(f1, f2), ONE);
        RMat d1{y1, 0, 0, 1}, d2{y2, 0, 0, 1};
        ASSERT_EQ(C_tilde(d1, d2), ExactPhase::from_sign(hilbert(y1, y2)));
        Rational y = abs(y1);
        RMat yI{y, 0, 0, y};
        RMat h = sampling::sl2pm_rational(rng);
        ASSERT_EQ(C_tilde(yI, h), ONE);
        ASSERT_EQ(C_tilde(h, yI), ONE);
        ASSERT_EQ(C_bar(yI, h), ONE);
        ASSERT_EQ(C_bar(h, yI), ONE);
    }
}

TEST(Cocycle, SimilitudeCocycleIdentity) {
    Rng rng(8);
    for (int i = 0; i < 3000; ++i) {
        auto gl = [&] {
            RMat g = sampling::sl2pm_rational(rng);
            Rational y = sampling::small_rational(rng, 9, 6, true);
            return section(y) * g;
        };
        RMat a = gl(), b = gl(), c = gl();
        ASSERT_EQ(C_tilde(a, b) * C_tilde(a * b, c), C_tilde(a, b * c) * C_tilde(b, c));
        ASSERT_EQ(C_bar(a, b) * C_bar(a * b, c), C_bar(a, b * c) * C_bar(b, c));
    }
}

TEST(SO2, UFunctions) {
    const double pi = std::numbers::pi;
    EXPECT_EQ(u_func(0), 0);
    EXPECT_EQ(u_prime(0), 0);
    EXPECT_EQ(u_func(pi / 2), 1);
    EXPECT_DOUBLE_EQ(u_prime(pi / 2), 2);
    EXPECT_EQ(u_func(pi), 2);
    EXPECT_EQ(u_func(-0.3), -1);
    for (double t : {-2.9, -1.0, 0.2, 1.7, 2.5}) EXPECT_NEAR(u_prime(t + pi) - u_prime(t), 4, 1e-12);
}

TEST(SO2, STildeSBar) {
    const double pi = std::numbers::pi;
    EXPECT_LT(std::abs(s_tilde(rotation(pi / 2)) - cplx(0, 1)), 1e-15);
    EXPECT_LT(std::abs(s_bar(rotation(pi / 2)) - std::polar(1.0, pi / 4)), 1e-15);
    EXPECT_LT(std::abs(s_tilde(identity<double>()) - 1.0), 1e-15);
    EXPECT_LT(std::abs(s_bar(identity<double>()) - 1.0), 1e-15);
    EXPECT_LT(std::abs(s_tilde(neg_identity<double>()) + 1.0), 1e-15);
    Rng rng(9);
    for (int i = 0; i < 3000; ++i) {
        DMat g = random_g(rng);
        if (g.det() < 0) continue;
        if (i % 5 == 0) g = DMat{g.a, g.b, 0, 1 / g.a};
        ASSERT_LT(std::abs(s_tilde(g) - s_bar(g) * m_normalizer(g).value()), 1e-12) << g;
    }
}

TEST(SO2, TrivializesCocyclesOnRotations) {
    Rng rng(10);
    for (int i = 0; i < 5000; ++i) {
        DMat k1 = rotation(sampling::uniform_real(rng, -3.14, 3.14));
        DMat k2 = rotation(sampling::uniform_real(rng, -3.14, 3.14));
        if (i % 10 == 0) k2 = rotation(std::numbers::pi);
        DMat k3 = k1 * k2;
        ASSERT_LT(std::abs(c_tilde(k1, k2).value() - s_tilde(k3) / (s_tilde(k1) * s_tilde(k2))), 1e-10);
        ASSERT_LT(std::abs(c_bar(k1, k2).value() - s_bar(k3) / (s_bar(k1) * s_bar(k2))), 1e-10);
    }
}

TEST(SO2, ModifiedCocycle) {
    Rng rng(11);
    for (int i = 0; i < 3000; ++i) {
        DMat p = random_p(rng), g = random_g(rng), h = random_g(rng);
        DMat k = rotation(sampling::uniform_real(rng, -3.14, 3.14));
        ASSERT_LT(std::abs(C_dbar(p, g) - 1.0), 1e-10);
        ASSERT_LT(std::abs(C_dbar(g, k) - 1.0), 1e-10);
        ASSERT_LT(std::abs(C_dbar(k, rotation(sampling::uniform_real(rng, -3.14, 3.14))) - 1.0), 1e-10);
        // C̿ agrees with the s̃-modification of C̃
        ASSERT_LT(std::abs(C_dbar(g, h) - C_dbar_tilde(g, h)), 1e-10) << g << h;
    }
}

TEST(SO2, JBar) {
    Rng rng(12);
    cplx i(0, 1);
    for (int n = 0; n < 3000; ++n) {
        DMat g1 = random_g(rng), g2 = random_g(rng), p = random_p(rng);
        cplx z(sampling::uniform_real(rng, -3, 3), sampling::uniform_real(rng, 0.2, 3) * (sampling::coin(rng) ? 1 : -1));
        ASSERT_LT(std::abs(j_bar(p, z) - 1.0), 1e-10);
        ASSERT_LT(std::abs(j_bar(rotation(sampling::uniform_real(rng, -3.14, 3.14)), i) - 1.0), 1e-10);
        cplx rhs = j_bar(g1, mobius(g2, z)) * j_bar(g2, z) / j_bar(g1 * g2, z);
        ASSERT_LT(std::abs(C_dbar(g1, g2) - rhs), 1e-10) << g1 << g2 << z;
    }
}

TEST(SO2, PlusMinusObstruction) {
    const double pi = std::numbers::pi;
    EXPECT_EQ(so2pm_obstruction(0), cplx(1, 0));
    EXPECT_EQ(so2pm_obstruction(pi), cplx(-1, 0));
    EXPECT_LT(std::abs(so2pm_obstruction(pi / 3) - std::polar(1.0, pi / 3)), 1e-15);
    for (int j = 0; j < 720; ++j) {
        double t = -pi + (j + 1) * (2 * pi / 720);
        ASSERT_LT(std::abs(so2pm_obstruction(t) - std::polar(1.0, t)), 1e-12) << t;
    }
}
