#pragma once

#include "group.hpp"

namespace metaplectic {

namespace detail {

template <class T>
void require_sl2(const Mat2<T>& g, const char* who) {
    if constexpr (std::is_same_v<T, double>) {
        if (std::abs(g.det() - 1.0) > 1e-9) throw DomainError(std::string(who) + ": det must be 1");
    } else {
        if (g.det() != 1) throw DomainError(std::string(who) + ": det must be 1");
    }
}

template <class T>
T unit_sign(const T& y) {
    return T(sgn(y));
}

}  // namespace detail

// c̃(g1, g2) = e^{iπ sgn(c1 c2 c3)/4}
template <class T>
ExactPhase c_tilde(const Mat2<T>& g1, const Mat2<T>& g2) {
    detail::require_sl2(g1, "c_tilde");
    detail::require_sl2(g2, "c_tilde");
    Mat2<T> g3 = g1 * g2;
    return ExactPhase(Rational(sgn(g1.c) * sgn(g2.c) * sgn(g3.c), 4));
}

template <class T>
ExactPhase c_bar(const Mat2<T>& g1, const Mat2<T>& g2) {
    detail::require_sl2(g1, "c_bar");
    detail::require_sl2(g2, "c_bar");
    int x1 = x_invariant(g1).v, x2 = x_invariant(g2).v, x3 = x_invariant(g1 * g2).v;
    return ExactPhase::from_sign(hilbert(x1, x2) * hilbert(-x1 * x2, x3));
}

template <class T>
ExactPhase m_normalizer(const Mat2<T>& g) {
    detail::require_sl2(g, "m_normalizer");
    if (sgn(g.c) == 0) return ExactPhase(Rational(1 - sgn(g.d), 4));
    return ExactPhase(Rational(-sgn(g.c), 4));
}

template <class T>
ExactPhase nu(const T& y, const Mat2<T>& g) {
    if (sgn(y) == 0) throw DomainError("nu with y = 0");
    if (sgn(y) > 0) return {};
    if (sgn(g.c) == 0) return ExactPhase::from_sign(hilbert(y, g.a));
    return ExactPhase::from_sign(hilbert(g.c, y)) / gamma_ratio(y, T(1) / T(2));
}

template <class T>
ExactPhase nu2(const T& y, const Mat2<T>& g) {
    if (sgn(y) == 0) throw DomainError("nu2 with y = 0");
    if (sgn(g.c) == 0) return ExactPhase::from_sign(hilbert(y, g.a));
    return {};
}

// ν(y, g)·m(g)/m(g^{s(y)})
template <class T>
ExactPhase nu2_quotient(const T& y, const Mat2<T>& g) {
    T s = detail::unit_sign(y);
    return nu(y, g) * m_normalizer(g) / m_normalizer(conj_section(g, s));
}

template <class T>
ExactPhase C_tilde(const Mat2<T>& h1, const Mat2<T>& h2) {
    auto [y1, g1] = split_section(h1);
    auto [y2, g2] = split_section(h2);
    return nu(y2, g1) * c_tilde(conj_section(g1, y2), g2);
}

template <class T>
ExactPhase C_bar(const Mat2<T>& h1, const Mat2<T>& h2) {
    auto [y1, g1] = split_section(h1);
    auto [y2, g2] = split_section(h2);
    return nu2(y2, g1) * c_bar(conj_section(g1, y2), g2);
}

// m(g1^{y2} g2)^{-1} m(g1) m(g2) C̃(h1, h2)
template <class T>
ExactPhase C_bar_quotient(const Mat2<T>& h1, const Mat2<T>& h2) {
    auto [y1, g1] = split_section(h1);
    auto [y2, g2] = split_section(h2);
    return m_normalizer(g1) * m_normalizer(g2) * C_tilde(h1, h2) / m_normalizer(conj_section(g1, y2) * g2);
}

// ---- SO2 trivializations ----

inline int u_func(double theta) {
    const double pi = std::numbers::pi;
    double k = std::floor(theta / pi);
    if (theta == k * pi) return static_cast<int>(2 * k);
    return static_cast<int>(2 * k + 1);
}

inline double u_prime(double theta) { return u_func(theta) + 2 * theta / std::numbers::pi; }

inline cplx s_tilde(const DMat& g) {
    double t = rotation_angle(iwasawa(g).k);
    return std::polar(1.0, std::numbers::pi * u_prime(t) / 4);
}

inline cplx s_bar(const DMat& g) {
    double t = rotation_angle(iwasawa(g).k);
    return std::polar(1.0, t / 2);
}

inline cplx C_dbar(const DMat& g1, const DMat& g2) {
    return C_bar(g1, g2).value() * s_bar(g1) * s_bar(g2) / s_bar(g1 * g2);
}

// C̃ modified by s̃
inline cplx C_dbar_tilde(const DMat& g1, const DMat& g2) {
    return C_tilde(g1, g2).value() * s_tilde(g1) * s_tilde(g2) / s_tilde(g1 * g2);
}

inline cplx j_bar(const DMat& g, cplx z) { return C_dbar(g, point_to_parabolic(z)); }

inline cplx so2pm_obstruction(double theta) {
    DMat k = rotation(theta);
    DMat s = h_minus<double>();
    return C_bar(k, s).value() * s_bar(k) / s_bar(conj_section(k, -1.0));
}

}  // namespace metaplectic
