#pragma once

#include "cocycle.hpp"

#include <string>

namespace metaplectic {

namespace detail {

inline void require_integral_sl2(const RMat& g, const char* who) {
    if (!in_sl2z(g)) throw DomainError(std::string(who) + ": expected an element of SL2(Z)");
}

}  // namespace detail

// β̃(g) = β(d, c), and 1 when c = 0
inline ExactPhase beta_tilde(const RMat& g) {
    if (!in_gamma2_hat(g)) throw DomainError("beta_tilde: element is not in Γ̆(2)");
    if (g.c == 0) return {};
    return gauss_sum_exact(to_integer(g.d), to_integer(g.c));
}

inline ExactPhase beta_bar(const RMat& g) {
    if (!in_gamma2(g)) throw MembershipError("beta_bar: element is not in Γ(2)");
    if (g.c == 0) return ExactPhase(Rational(sgn(g.d) - 1, 4));
    return gauss_sum_closed(to_integer(g.d), to_integer(g.c)) * ExactPhase(Rational(sgn(g.c), 4));
}

// character of Γ(2) that is -1 on -I and 1 on n2, n2m
inline Sign gamma2_sign_character(const RMat& g) {
    auto w = gamma2_decompose(g);
    return Sign((!w.empty() && w.front().tag == Tag::NEG_I) ? -1 : 1);
}

inline ExactPhase beta_bar_minus(const RMat& g) { return beta_bar(g) * gamma2_sign_character(g); }
inline ExactPhase beta_tilde_minus(const RMat& g) { return beta_tilde(g) * gamma2_sign_character(g); }

inline Rational asai_nu(const RMat& g) {
    detail::require_integral_sl2(g, "asai_nu");
    if (g.c == 0) return g.b / (12 * g.d) + Rational(1 - sgn(g.d), 4);
    Rational s = dedekind_sum(to_integer(g.d), abs(to_integer(g.c)));
    return (g.a + g.d) / (12 * g.c) - sgn(g.c) * (Rational(1, 4) + s);
}

inline ExactPhase beta1_bar(const RMat& g) { return ExactPhase(-asai_nu(g)); }
inline ExactPhase beta1_tilde(const RMat& g) { return beta1_bar(g) * m_normalizer(g); }

inline ExactPhase chi_quotient(const RMat& g) { return beta1_tilde(g) / beta_tilde(g); }

// case-split closed form
inline ExactPhase chi(const RMat& g) {
    if (!in_gamma2(g)) throw MembershipError("chi: element is not in Γ(2)");
    Integer a = to_integer(g.a), b = to_integer(g.b), c = to_integer(g.c), d = to_integer(g.d);
    Rational q;
    ExactPhase out;
    if (c == 0) {
        q = -Rational(b) / (12 * a);
    } else {
        out = ExactPhase::from_sign(jacobi(c / 2, abs(d)));
        Rational s = dedekind_sum(c, d);
        Rational inner = Rational(b - c) / d + (d > 0 ? 12 * s : -12 * s);
        q = -inner / 12;
        bool one_mod4 = floor_mod(d, 4) == 1;
        if (d > 0 && !one_mod4) out *= ExactPhase(Rational(-1, 2));
        if (d < 0 && one_mod4) out *= ExactPhase(Rational(1, 2));
    }
    out *= ExactPhase(q);
    if (!is_integral(out.q() * 12)) throw std::logic_error("chi: value is not a 24th root of unity");
    return out;
}

// χ from the free generators: n2 ↦ e^{-iπ/6}, n2m ↦ e^{iπ/6}, -I ↦ 1
inline ExactPhase chi_from_word(const GeneratorWord& w) {
    ExactPhase out;
    for (const auto& l : w) {
        if (l.tag == Tag::N2) out *= ExactPhase(Rational(-l.exp, 6));
        else if (l.tag == Tag::N2MINUS) out *= ExactPhase(Rational(l.exp, 6));
        else if (l.tag != Tag::NEG_I) throw DomainError("chi_from_word: letter outside Γ(2) generators");
    }
    return out;
}

namespace detail {

inline bool even_integer(const Rational& x) { return is_integral(x) && to_integer(x) % 2 == 0; }

// letter phase for the lattice action: e^{iπ sgn(c)/4} for lower unipotents, else 1
inline ExactPhase epsilon_letter(const Letter& l) {
    switch (l.tag) {
        case Tag::U:
            if (!even_integer(l.param)) throw DomainError("epsilon_word: u(b) needs even integer b");
            return {};
        case Tag::H:
            if (l.param != 1 && l.param != -1) throw DomainError("epsilon_word: h(a) needs a = ±1");
            return {};
        case Tag::OMEGA:
        case Tag::NEG_I:
        case Tag::N2:
            return {};
        case Tag::N2MINUS:
            return ExactPhase(Rational(sgn(l.exp), 4));
        case Tag::ULOWER:
            if (!even_integer(l.param)) throw DomainError("epsilon_word: u-(c) needs even integer c");
            return ExactPhase(Rational(sgn(l.param), 4));
        case Tag::HMINUS:
            break;
    }
    throw DomainError("epsilon_word: inadmissible letter " + to_string(l));
}

}  // namespace detail

// ε_{g1 g2} = ε_{g1} ε_{g2} c̃(g1, g2)^{-1}
inline ExactPhase epsilon_word(const GeneratorWord& w) {
    ExactPhase eps;
    RMat g = identity<Rational>();
    for (const auto& l : w) {
        RMat L = l.matrix<Rational>();
        eps = eps * detail::epsilon_letter(l) / c_tilde(g, L);
        g = g * L;
    }
    return eps;
}

inline ExactPhase gamma2pm_obstruction(const RMat& g) {
    if (!in_gamma2(g)) throw MembershipError("gamma2pm_obstruction: element is not in Γ(2)");
    RMat s = h_minus<Rational>();
    return C_bar(g, s) * beta_bar(g) / beta_bar(conj_section(g, Rational(-1)));
}

inline ExactPhase gamma2pm_obstruction_closed(const RMat& g) {
    if (!in_gamma2(g)) throw MembershipError("gamma2pm_obstruction_closed: element is not in Γ(2)");
    if (g.c == 0) return ExactPhase::from_sign(hilbert(g.a, Rational(-1)));
    return ExactPhase::from_sign(floor_mod(to_integer(g.d), 4) == 1 ? 1 : -1);
}

// ---- generic coboundary check ----

struct TrivializationMap {
    std::string name;
    std::function<ExactPhase(const RMat&)> eval;
    std::function<bool(const RMat&)> domain;
};

using CocycleFn = std::function<ExactPhase(const RMat&, const RMat&)>;

struct CoboundaryFailure {
    std::size_t index;
    ExactPhase expected;  // cocycle value
    ExactPhase got;       // f(g1)^{-1} f(g2)^{-1} f(g1 g2)
};

struct CoboundaryReport {
    std::size_t checked = 0;
    std::vector<CoboundaryFailure> failures;
    bool ok() const { return failures.empty(); }
};

inline CoboundaryReport coboundary_check(const CocycleFn& c, const TrivializationMap& f,
                                         const std::vector<std::pair<RMat, RMat>>& pairs) {
    CoboundaryReport rep;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [g1, g2] = pairs[i];
        RMat g3 = g1 * g2;
        if (f.domain && (!f.domain(g1) || !f.domain(g2) || !f.domain(g3)))
            throw DomainError("coboundary_check: pair outside the domain of " + f.name);
        ExactPhase want = c(g1, g2);
        ExactPhase got = f.eval(g3) / (f.eval(g1) * f.eval(g2));
        if (!(want == got)) rep.failures.push_back({i, want, got});
        ++rep.checked;
    }
    return rep;
}

inline TrivializationMap beta_tilde_map() { return {"beta-tilde", beta_tilde, [](const RMat& g) { return in_gamma2_hat(g); }}; }
inline TrivializationMap beta_bar_map() { return {"beta-bar", beta_bar, in_gamma2}; }
inline TrivializationMap beta1_bar_map() { return {"beta1-bar", beta1_bar, in_sl2z}; }
inline TrivializationMap beta1_tilde_map() { return {"beta1-tilde", beta1_tilde, in_sl2z}; }

}  // namespace metaplectic
