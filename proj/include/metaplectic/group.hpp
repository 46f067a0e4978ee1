#pragma once

#include "scalar.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

namespace metaplectic {

// 2x2 matrix acting on row vectors; T is Rational (exact) or double
template <class T>
struct Mat2 {
    T a{1}, b{0}, c{0}, d{1};

    T det() const { return a * d - b * c; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 inverse() const {
        T D = det();
        return {d / D, -b / D, -c / D, a / D};
    }
    bool operator==(const Mat2&) const = default;
};

using RMat = Mat2<Rational>;
using DMat = Mat2<double>;

template <class T>
std::ostream& operator<<(std::ostream& os, const Mat2<T>& g) {
    return os << "[[" << g.a << "," << g.b << "],[" << g.c << "," << g.d << "]]";
}

inline DMat to_double(const RMat& g) { return {to_double(g.a), to_double(g.b), to_double(g.c), to_double(g.d)}; }

template <class T> Mat2<T> identity() { return {T(1), T(0), T(0), T(1)}; }
template <class T> Mat2<T> omega() { return {T(0), T(-1), T(1), T(0)}; }
template <class T> Mat2<T> u_upper(const T& b) { return {T(1), b, T(0), T(1)}; }
template <class T> Mat2<T> u_lower(const T& c) { return {T(1), T(0), c, T(1)}; }
template <class T> Mat2<T> h_diag(const T& a) { return {a, T(0), T(0), T(1) / a}; }
template <class T> Mat2<T> neg_identity() { return {T(-1), T(0), T(0), T(-1)}; }
// section y ↦ diag(1, y)
template <class T> Mat2<T> section(const T& y) { return {T(1), T(0), T(0), y}; }
template <class T> Mat2<T> h_minus() { return section<T>(T(-1)); }
template <class T> Mat2<T> n2(long k = 1) { return u_upper<T>(T(2 * k)); }
template <class T> Mat2<T> n2_minus(long k = 1) { return u_lower<T>(T(2 * k)); }

// g^{s(y)} = s(y)^{-1} g s(y)
template <class T>
Mat2<T> conj_section(const Mat2<T>& g, const T& y) {
    return {g.a, g.b * y, g.c / y, g.d};
}

// h = s(det h)·g with det g = 1
template <class T>
struct SectionSplit {
    T y;
    Mat2<T> g;
};

template <class T>
SectionSplit<T> split_section(const Mat2<T>& h) {
    T y = h.det();
    if (sgn(y) == 0) throw DomainError("singular matrix");
    return {y, {h.a, h.b, h.c / y, h.d / y}};
}

// ---- predicates ----

inline bool is_integral(const RMat& g) {
    return is_integral(g.a) && is_integral(g.b) && is_integral(g.c) && is_integral(g.d);
}

namespace detail {
inline bool odd(const Rational& x) { return is_integral(x) && to_integer(x) % 2 != 0; }
inline bool even(const Rational& x) { return is_integral(x) && to_integer(x) % 2 == 0; }
}  // namespace detail

inline bool is_sl2pm(const RMat& g) { return g.det() == 1 || g.det() == -1; }

inline bool in_gamma2(const RMat& g) {
    using namespace detail;
    return g.det() == 1 && odd(g.a) && odd(g.d) && even(g.b) && even(g.c);
}

// Γ̆(2): congruent to I or ω mod 2; pm allows det -1
inline bool in_gamma2_hat(const RMat& g, bool pm = false) {
    using namespace detail;
    if (!(g.det() == 1 || (pm && g.det() == -1))) return false;
    return (odd(g.a) && odd(g.d) && even(g.b) && even(g.c)) || (even(g.a) && even(g.d) && odd(g.b) && odd(g.c));
}

inline bool in_sl2z(const RMat& g) { return is_integral(g) && g.det() == 1; }

template <class T>
Sign x_invariant(const Mat2<T>& g) {
    return Sign(sgn(g.c) == 0 ? sgn(g.d) : sgn(g.c));
}

// ---- rotations and Iwasawa ----

// k_θ = [[cos θ, sin θ], [-sin θ, cos θ]], exact at multiples of π/2
inline DMat rotation(double theta) {
    const double pi = std::numbers::pi;
    if (theta == 0) return identity<double>();
    if (theta == pi || theta == -pi) return neg_identity<double>();
    if (theta == pi / 2) return {0, 1, -1, 0};
    if (theta == -pi / 2) return {0, -1, 1, 0};
    double c = std::cos(theta), s = std::sin(theta);
    return {c, s, -s, c};
}

// angle in (-π, π] of a rotation matrix
inline double rotation_angle(const DMat& k) {
    double t = std::atan2(k.b, k.a);
    if (t <= -std::numbers::pi) t = std::numbers::pi;
    return t;
}

struct IwasawaPair {
    DMat p;
    DMat k;
};

inline IwasawaPair iwasawa(const DMat& g) {
    double D = g.det() > 0 ? 1.0 : -1.0;
    double r = std::hypot(g.c, g.d);
    DMat p{1 / r, D * (g.b * g.d + g.a * g.c) / r, 0, D * r};
    DMat k{D * g.d / r, -D * g.c / r, D * g.c / r, D * g.d / r};
    return {p, k};
}

inline cplx mobius(const DMat& g, cplx z) {
    if (z.imag() == 0) throw DomainError("mobius needs Im z != 0");
    return (g.a * z + g.b) / (g.c * z + g.d);
}

// √(det g·(cz+d)), principal branch; a negative real radicand gives -i√r
inline cplx j_factor(const DMat& g, cplx z) {
    double D = g.det() > 0 ? 1.0 : -1.0;
    cplx r = D * (g.c * z + g.d);
    if (r.imag() == 0 && r.real() < 0) return {0, -std::sqrt(-r.real())};
    return std::sqrt(r);
}

inline DMat point_to_parabolic(cplx z) {
    if (z.imag() == 0) throw DomainError("point_to_parabolic needs Im z != 0");
    double D = z.imag() > 0 ? 1.0 : -1.0;
    double a = std::sqrt(std::abs(z.imag()));
    return {a, z.real() * D / a, 0, D / a};
}

// ---- generator words ----

enum class Tag { U, H, OMEGA, HMINUS, NEG_I, N2, N2MINUS, ULOWER };

struct Letter {
    Tag tag;
    Rational param{0};  // b for U, a for H, c for ULOWER
    long exp = 1;       // exponent for N2, N2MINUS

    template <class T>
    Mat2<T> matrix() const {
        auto P = [&] {
            if constexpr (std::is_same_v<T, double>) return to_double(param);
            else return param;
        }();
        switch (tag) {
            case Tag::U: return u_upper<T>(P);
            case Tag::H: return h_diag<T>(P);
            case Tag::OMEGA: return omega<T>();
            case Tag::HMINUS: return h_minus<T>();
            case Tag::NEG_I: return neg_identity<T>();
            case Tag::N2: return n2<T>(exp);
            case Tag::N2MINUS: return n2_minus<T>(exp);
            case Tag::ULOWER: return u_lower<T>(P);
        }
        return identity<T>();
    }
    bool operator==(const Letter&) const = default;
};

using GeneratorWord = std::vector<Letter>;

template <class T = Rational>
Mat2<T> evaluate(const GeneratorWord& w) {
    Mat2<T> g = identity<T>();
    for (const auto& l : w) g = g * l.template matrix<T>();
    return g;
}

inline std::string to_string(const Letter& l) {
    auto pw = [&](const char* base) {
        return l.exp == 1 ? std::string(base) : std::string(base) + "^" + std::to_string(l.exp);
    };
    switch (l.tag) {
        case Tag::U: return "u(" + l.param.str() + ")";
        case Tag::H: return "h(" + l.param.str() + ")";
        case Tag::OMEGA: return "omega";
        case Tag::HMINUS: return "hm";
        case Tag::NEG_I: return "-I";
        case Tag::N2: return pw("n2");
        case Tag::N2MINUS: return pw("n2m");
        case Tag::ULOWER: return "u-(" + l.param.str() + ")";
    }
    return "?";
}

inline std::string to_string(const GeneratorWord& w) {
    std::string s;
    for (const auto& l : w) s += (s.empty() ? "" : " ") + to_string(l);
    return s.empty() ? "1" : s;
}

// tokens: n2, n2^k, n2m, n2m^k, omega, omega^-1, -I, hm, u(b), h(a), u-(c)
inline GeneratorWord parse_word(const std::string& text) {
    GeneratorWord w;
    std::istringstream is(text);
    std::string tok;
    auto paren = [&](const std::string& t, std::size_t start) {
        if (t.back() != ')') throw std::invalid_argument("bad token '" + t + "'");
        return parse_rational(t.substr(start, t.size() - start - 1));
    };
    while (is >> tok) {
        std::string base = tok;
        long e = 1;
        if (auto caret = tok.find('^'); caret != std::string::npos && tok.rfind("u", 0) != 0 && tok.rfind("h(", 0) != 0) {
            base = tok.substr(0, caret);
            try {
                std::size_t used = 0;
                e = std::stol(tok.substr(caret + 1), &used);
                if (used != tok.size() - caret - 1) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw std::invalid_argument("bad exponent in '" + tok + "'");
            }
        }
        if (base == "n2") w.push_back({Tag::N2, 0, e});
        else if (base == "n2m") w.push_back({Tag::N2MINUS, 0, e});
        else if (base == "omega" || base == "w") {
            long r = ((e % 4) + 4) % 4;
            for (long i = 0; i < r; ++i) w.push_back({Tag::OMEGA});
        } else if (base == "-I") {
            if (e % 2 != 0) w.push_back({Tag::NEG_I});
        } else if (base == "hm") {
            if (e % 2 != 0) w.push_back({Tag::HMINUS});
        } else if (tok.rfind("u-(", 0) == 0) w.push_back({Tag::ULOWER, paren(tok, 3)});
        else if (tok.rfind("u(", 0) == 0) w.push_back({Tag::U, paren(tok, 2)});
        else if (tok.rfind("h(", 0) == 0) {
            Rational a = paren(tok, 2);
            if (a == 0) throw std::invalid_argument("h(0) is not invertible");
            w.push_back({Tag::H, a});
        } else throw std::invalid_argument("unknown generator '" + tok + "'");
    }
    return w;
}

// parses "[[a,b],[c,d]]" with rational entries
inline RMat parse_matrix(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.size() < 9 || s.substr(0, 2) != "[[" || s.substr(s.size() - 2) != "]]")
        throw std::invalid_argument("bad matrix '" + text + "'");
    auto mid = s.find("],[");
    if (mid == std::string::npos) throw std::invalid_argument("bad matrix '" + text + "'");
    auto row = [&](const std::string& r) {
        auto comma = r.find(',');
        if (comma == std::string::npos || r.find(',', comma + 1) != std::string::npos)
            throw std::invalid_argument("bad matrix row '" + r + "'");
        return std::pair{parse_rational(r.substr(0, comma)), parse_rational(r.substr(comma + 1))};
    };
    auto [a, b] = row(s.substr(2, mid - 2));
    auto [c, d] = row(s.substr(mid + 3, s.size() - mid - 5));
    RMat g{a, b, c, d};
    if (g.det() == 0) throw std::invalid_argument("singular matrix '" + text + "'");
    return g;
}

// ---- Γ(2) words ----

namespace detail {

inline Integer round_half_to_zero(const Rational& x) {
    Integer f = floor_of(x);
    Rational frac = x - Rational(f);
    if (frac > Rational(1, 2)) return f + 1;
    if (frac < Rational(1, 2)) return f;
    return x > 0 ? f : f + 1;
}

// merge equal adjacent tags, drop zero exponents, move -I to the front
inline GeneratorWord canonical_gamma2(const GeneratorWord& in) {
    bool neg = false;
    GeneratorWord out;
    for (const auto& l : in) {
        if (l.tag == Tag::NEG_I) {
            neg = !neg;
            continue;
        }
        if (!out.empty() && out.back().tag == l.tag) {
            out.back().exp += l.exp;
            if (out.back().exp == 0) out.pop_back();
        } else if (l.exp != 0) {
            out.push_back(l);
        }
    }
    if (neg) out.insert(out.begin(), Letter{Tag::NEG_I});
    return out;
}

}  // namespace detail

inline GeneratorWord gamma2_decompose(const RMat& g_in) {
    if (!in_gamma2(g_in)) throw MembershipError("element is not in Γ(2)");
    RMat g = g_in;
    GeneratorWord inv_steps;  // g_in = inv_steps · g_final
    while (g.c != 0) {
        if (abs(g.a) > abs(g.c)) {
            Integer k = detail::round_half_to_zero(g.a / (2 * g.c));
            long kl = to_ll(k);
            g = n2<Rational>(-kl) * g;
            inv_steps.push_back({Tag::N2, 0, kl});
        } else {
            Integer k = detail::round_half_to_zero(g.c / (2 * g.a));
            long kl = to_ll(k);
            g = n2_minus<Rational>(-kl) * g;
            inv_steps.push_back({Tag::N2MINUS, 0, kl});
        }
    }
    // g = ±n2^k
    if (g.a == -1) inv_steps.push_back({Tag::NEG_I});
    long k = to_ll(to_integer(g.b / (2 * g.a)));
    inv_steps.push_back({Tag::N2, 0, k});
    return detail::canonical_gamma2(inv_steps);
}

// ---- Heisenberg groups ----

template <class T = Rational>
struct HeisenbergElement {
    T x{0}, y{0}, t{0};
    std::optional<int> eps;  // set for Ha^±(W)
    bool operator==(const HeisenbergElement&) const = default;
};

template <class T>
T symplectic(const HeisenbergElement<T>& u, const HeisenbergElement<T>& v) {
    return u.x * v.y - v.x * u.y;
}

// (x, y; t)^{s(-1)} = (x, -y; -t)
template <class T>
HeisenbergElement<T> flip(const HeisenbergElement<T>& h) {
    return {h.x, -h.y, -h.t, h.eps};
}

template <class T>
HeisenbergElement<T> heisenberg_mul(const HeisenbergElement<T>& h1, const HeisenbergElement<T>& h2) {
    if (h1.eps.has_value() != h2.eps.has_value()) throw TypeMismatch("cannot multiply Ha(W) and Ha^±(W) elements");
    HeisenbergElement<T> rhs = h2;
    if (h1.eps && *h1.eps < 0) rhs = flip(h2);
    HeisenbergElement<T> out{h1.x + rhs.x, h1.y + rhs.y, h1.t + rhs.t + symplectic(h1, rhs) / 2, std::nullopt};
    if (h1.eps) out.eps = *h1.eps * *h2.eps;
    return out;
}

// element (a + ib, t) of the complex Heisenberg group
template <class T = Rational>
struct ComplexHeisenberg {
    T re{0}, im{0}, t{0};
};

template <class T>
ComplexHeisenberg<T> complex_heisenberg_mul(const ComplexHeisenberg<T>& u, const ComplexHeisenberg<T>& v) {
    // Im(conj(z) z') / 2
    return {u.re + v.re, u.im + v.im, u.t + v.t + (u.re * v.im - u.im * v.re) / 2};
}

template <class T>
ComplexHeisenberg<T> galois(const ComplexHeisenberg<T>& u) {
    return {u.re, -u.im, -u.t};
}

template <class T>
HeisenbergElement<T> galois_phi(const ComplexHeisenberg<T>& u) {
    return {u.re, u.im, u.t, std::nullopt};
}

template <class T = Rational>
using HeisenbergMap = std::function<HeisenbergElement<T>(const ComplexHeisenberg<T>&)>;

template <class T = Rational>
bool galois_twist_iso_check(const std::vector<std::pair<ComplexHeisenberg<T>, ComplexHeisenberg<T>>>& sample,
                            const HeisenbergMap<T>& phi = galois_phi<T>) {
    for (const auto& [u, v] : sample) {
        if (!(phi(complex_heisenberg_mul(u, v)) == heisenberg_mul(phi(u), phi(v)))) return false;
        if (!(phi(galois(u)) == flip(phi(u)))) return false;
        if (!(phi(galois(v)) == flip(phi(v)))) return false;
    }
    return true;
}

}  // namespace metaplectic
