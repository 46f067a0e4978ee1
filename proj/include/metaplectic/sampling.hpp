#pragma once

// Seeded generators for sweeps and property tests.

#include "group.hpp"

#include <random>

namespace metaplectic::sampling {

using Rng = std::mt19937_64;

inline long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline Rational small_rational(Rng& rng, long num = 9, long den = 6, bool nonzero = false) {
    for (;;) {
        Rational r(uniform_int(rng, -num, num), uniform_int(rng, 1, den));
        if (!nonzero || r != 0) return r;
    }
}

// random SL2(Q) element; boundary cases c = 0 and a = 0 show up often
inline RMat sl2_rational(Rng& rng) {
    switch (uniform_int(rng, 0, 5)) {
        case 0: {
            Rational a = small_rational(rng, 9, 6, true);
            return {a, small_rational(rng), 0, 1 / a};
        }
        case 1: {
            Rational b = small_rational(rng, 9, 6, true);
            return {0, b, -1 / b, small_rational(rng)};
        }
        case 2: {
            Rational s = coin(rng) ? 1 : -1;
            return {s, 0, small_rational(rng, 9, 6, true), s};
        }
        default: {
            Rational a = small_rational(rng, 9, 6, true), b = small_rational(rng), c = small_rational(rng);
            return {a, b, c, (1 + b * c) / a};
        }
    }
}

inline RMat sl2pm_rational(Rng& rng) {
    RMat g = sl2_rational(rng);
    return coin(rng) ? h_minus<Rational>() * g : g;
}

// Γ(2) word (-I)^e n2^k1 n2m^k2 ...
inline GeneratorWord gamma2_word(Rng& rng, int max_len = 12, long max_exp = 5) {
    GeneratorWord w;
    if (coin(rng)) w.push_back({Tag::NEG_I});
    int len = static_cast<int>(uniform_int(rng, 0, max_len));
    bool upper = coin(rng);
    for (int i = 0; i < len; ++i) {
        long e = 0;
        while (e == 0) e = uniform_int(rng, -max_exp, max_exp);
        w.push_back({upper ? Tag::N2 : Tag::N2MINUS, 0, e});
        upper = !upper;
    }
    return w;
}

inline RMat gamma2_element(Rng& rng, int max_len = 6, long max_exp = 3) {
    return evaluate(gamma2_word(rng, max_len, max_exp));
}

// word in u(±2), u-(±2), ω, -I: lands in Γ̆(2)
inline GeneratorWord gamma2hat_word(Rng& rng, int max_len = 8) {
    GeneratorWord w;
    int len = static_cast<int>(uniform_int(rng, 0, max_len));
    for (int i = 0; i < len; ++i) {
        switch (uniform_int(rng, 0, 3)) {
            case 0: w.push_back({Tag::U, Rational(2 * uniform_int(rng, -2, 2))}); break;
            case 1: w.push_back({Tag::ULOWER, Rational(2 * uniform_int(rng, -2, 2))}); break;
            case 2: w.push_back({Tag::OMEGA}); break;
            default: w.push_back({Tag::NEG_I}); break;
        }
    }
    return w;
}

// bounded word in [[1,1],[0,1]] and [[1,0],[1,1]]
inline RMat sl2z_element(Rng& rng, int max_len = 8, long max_exp = 3) {
    RMat g = identity<Rational>();
    int len = static_cast<int>(uniform_int(rng, 0, max_len));
    for (int i = 0; i < len; ++i) {
        long e = uniform_int(rng, -max_exp, max_exp);
        g = g * (coin(rng) ? u_upper<Rational>(Rational(e)) : u_lower<Rational>(Rational(e)));
    }
    return g;
}

// word in n2^±1, ω^±1, -I, hm for theta sweeps
inline GeneratorWord gamma2hat_pm_word(Rng& rng, int max_len = 6) {
    GeneratorWord w;
    int len = static_cast<int>(uniform_int(rng, 1, max_len));
    for (int i = 0; i < len; ++i) {
        switch (uniform_int(rng, 0, 5)) {
            case 0: w.push_back({Tag::N2, 0, 1}); break;
            case 1: w.push_back({Tag::N2, 0, -1}); break;
            case 2: w.push_back({Tag::OMEGA}); break;
            case 3: w.push_back({Tag::OMEGA}); w.push_back({Tag::OMEGA}); w.push_back({Tag::OMEGA}); break;
            case 4: w.push_back({Tag::NEG_I}); break;
            default: w.push_back({Tag::HMINUS}); break;
        }
    }
    return w;
}

// word in u(b), h(a), ω, hm with b in [-3, 3] and |a| in [1/2, 2]
inline GeneratorWord weil_word(Rng& rng, int max_len = 4) {
    GeneratorWord w;
    int len = static_cast<int>(uniform_int(rng, 1, max_len));
    for (int i = 0; i < len; ++i) {
        switch (uniform_int(rng, 0, 3)) {
            case 0: w.push_back({Tag::U, Rational(uniform_int(rng, -24, 24), 8)}); break;
            case 1: {
                Rational a(uniform_int(rng, 4, 16), 8);
                w.push_back({Tag::H, coin(rng) ? a : Rational(-a)});
                break;
            }
            case 2: w.push_back({Tag::OMEGA}); break;
            default: w.push_back({Tag::HMINUS}); break;
        }
    }
    return w;
}

}  // namespace metaplectic::sampling
