#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace metaplectic {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using cplx = std::complex<double>;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct MembershipError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ExcludedPairError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DivergenceError : std::domain_error {
    using std::domain_error::domain_error;
};
struct TypeMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

// ---- rational helpers ----

inline Integer floor_of(const Rational& x) {
    Integer n = boost::multiprecision::numerator(x);
    Integer d = boost::multiprecision::denominator(x);
    Integer q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

inline bool is_integral(const Rational& x) { return boost::multiprecision::denominator(x) == 1; }

inline Rational mod2(const Rational& q) { return q - 2 * Rational(floor_of(q / 2)); }

inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline Integer to_integer(const Rational& x) {
    if (!is_integral(x)) throw DomainError("expected an integer, got " + x.str());
    return boost::multiprecision::numerator(x);
}

inline long long to_ll(const Integer& x) { return x.convert_to<long long>(); }

// accepts "p", "p/q", "-p/q" and plain decimals such as "0.25" or "-1e-3"
inline Rational parse_rational(std::string s) {
    auto trim = [](std::string& t) {
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    };
    trim(s);
    if (s.empty()) throw std::invalid_argument("empty number");
    auto slash = s.find('/');
    auto parse_int = [](const std::string& t) {
        if (t.empty()) throw std::invalid_argument("bad integer");
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) throw std::invalid_argument("bad integer '" + t + "'");
        for (std::size_t j = i; j < t.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(t[j]))) throw std::invalid_argument("bad integer '" + t + "'");
        std::string digits = t.substr(i);
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
        return t[0] == '-' ? Integer(-Integer(digits)) : Integer(digits);
    };
    if (slash != std::string::npos) {
        std::string p = s.substr(0, slash), q = s.substr(slash + 1);
        trim(p);
        trim(q);
        Integer den = parse_int(q);
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(parse_int(p)) / den;
    }
    auto epos = s.find_first_of("eE");
    std::string mant = s.substr(0, epos);
    long exp10 = 0;
    if (epos != std::string::npos) exp10 = std::stol(s.substr(epos + 1));
    auto dot = mant.find('.');
    Integer den = 1;
    if (dot != std::string::npos) {
        std::string frac = mant.substr(dot + 1);
        mant = mant.substr(0, dot) + frac;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        if (mant == "-" || mant == "+" || mant.empty()) throw std::invalid_argument("bad number '" + s + "'");
    }
    Rational r(parse_int(mant), den);
    for (; exp10 > 0; --exp10) r *= 10;
    for (; exp10 < 0; ++exp10) r /= 10;
    return r;
}

// ---- signs ----

struct Sign {
    int v = 1;
    Sign() = default;
    constexpr explicit Sign(int s) : v(s > 0 ? 1 : (s < 0 ? -1 : 0)) {}
    Sign operator*(Sign o) const { return Sign(v * o.v); }
    bool operator==(const Sign&) const = default;
    int value() const { return v; }
};

inline int sgn(double x) { return (x > 0) - (x < 0); }
inline int sgn(const Rational& x) { return x.sign(); }
inline int sgn(const Integer& x) { return x.sign(); }

template <class T>
Sign hilbert(const T& a, const T& b) {
    if (sgn(a) == 0 || sgn(b) == 0) throw DomainError("hilbert symbol of zero");
    return Sign((sgn(a) < 0 && sgn(b) < 0) ? -1 : 1);
}
inline Sign hilbert(int a, int b) { return hilbert<double>(a, b); }
inline Sign hilbert(double a, double b) { return hilbert<double>(a, b); }

// ---- exact phases e^{iπq} ----

class ExactPhase {
public:
    ExactPhase() = default;
    explicit ExactPhase(const Rational& q) : q_(mod2(q)) {}

    static ExactPhase eighth(long k) { return ExactPhase(Rational(k, 4)); }
    static ExactPhase from_sign(Sign s) {
        if (s.v == 0) throw DomainError("zero is not a phase");
        return ExactPhase(Rational(s.v > 0 ? 0 : 1));
    }
    static ExactPhase from_sign(int s) { return from_sign(Sign(s)); }

    const Rational& q() const { return q_; }
    // representative in (-1, 1]
    Rational centered() const { return q_ > 1 ? q_ - 2 : q_; }

    ExactPhase operator*(const ExactPhase& o) const { return ExactPhase(q_ + o.q_); }
    ExactPhase operator/(const ExactPhase& o) const { return ExactPhase(q_ - o.q_); }
    ExactPhase& operator*=(const ExactPhase& o) { return *this = *this * o; }
    ExactPhase inverse() const { return ExactPhase(-q_); }
    ExactPhase pow(long k) const { return ExactPhase(q_ * k); }
    ExactPhase operator*(Sign s) const { return *this * from_sign(s); }
    bool operator==(const ExactPhase& o) const { return q_ == o.q_; }

    bool is_sign() const { return q_ == 0 || q_ == 1; }
    bool in_mu8() const { return is_integral(q_ * 4); }
    int sign() const {
        if (!is_sign()) throw DomainError("phase " + str() + " is not a sign");
        return q_ == 0 ? 1 : -1;
    }

    cplx value() const {
        Rational k4 = q_ * 4;
        if (is_integral(k4)) {
            constexpr double r = 0.70710678118654752440;
            static const cplx table[8] = {{1, 0}, {r, r}, {0, 1}, {-r, r}, {-1, 0}, {-r, -r}, {0, -1}, {r, -r}};
            return table[to_ll(to_integer(k4))];
        }
        double t = std::numbers::pi * to_double(centered());
        return {std::cos(t), std::sin(t)};
    }

    std::string str() const {
        if (q_ == 0) return "1";
        if (q_ == 1) return "-1";
        if (q_ == Rational(1, 2)) return "i";
        if (q_ == Rational(3, 2)) return "-i";
        Rational c = centered();
        Integer p = abs(boost::multiprecision::numerator(c));
        Integer r = boost::multiprecision::denominator(c);
        std::string s = "e^{";
        if (c < 0) s += "-";
        s += "iπ";
        if (p != 1) s += "·" + p.str();
        if (r != 1) s += "/" + r.str();
        return s + "}";
    }

private:
    Rational q_{0};
};

inline std::ostream& operator<<(std::ostream& os, const ExactPhase& p) { return os << p.str(); }

// ---- Weil index of x ↦ e x² ----

template <class T>
ExactPhase weil_index(const T& e) {
    if (sgn(e) == 0) throw DomainError("weil index of zero form");
    return ExactPhase(Rational(sgn(e), 4));
}

template <class T>
ExactPhase gamma_ratio(const T& a, const T& e) {
    if (sgn(a) == 0 || sgn(e) == 0) throw DomainError("gamma ratio of zero");
    return ExactPhase(Rational(sgn(a) * sgn(e) - sgn(e), 4));
}

// ---- sawtooth and Dedekind sums ----

inline Rational sawtooth(const Rational& x) {
    if (is_integral(x)) return 0;
    return x - Rational(floor_of(x)) - Rational(1, 2);
}

inline Integer floor_mod(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

namespace detail {

// s(d, c) for c > 0, 0 <= d < c
inline Rational dedekind_direct(long long d, long long c) {
    long long acc = 0;
    for (long long k = 1; k < c; ++k) {
        long long r = (k * d) % c;
        acc += (2 * k - c) * (2 * r - c);
    }
    return Rational(acc, 4 * c * c);
}

}  // namespace detail

inline Rational dedekind_sum(const Integer& d_in, const Integer& c_in) {
    if (c_in == 0) throw DomainError("dedekind sum with c = 0");
    if (gcd(d_in, c_in) != 1) throw DomainError("dedekind sum with non-coprime arguments");
    Integer c = abs(c_in);
    Integer d = floor_mod(d_in, c);
    // s(d, c) = sign * (sum of reciprocity terms) + sign' * s(d', c')
    Rational acc = 0;
    int sign = 1;
    while (c > 1) {
        if (c <= 10000) {
            acc += sign * detail::dedekind_direct(to_ll(d), to_ll(c));
            return acc;
        }
        // 12 s(d,c) + 12 s(c,d) = -3 + d/c + c/d + 1/(cd)
        Rational rd(d), rc(c);
        acc += sign * (Rational(-3) + rd / rc + rc / rd + 1 / (rd * rc)) / 12;
        sign = -sign;
        Integer nc = d;
        d = floor_mod(c, d);
        c = nc;
    }
    return acc;
}

inline Sign jacobi(const Integer& c_in, const Integer& d_in) {
    if (d_in <= 0 || d_in % 2 == 0) throw DomainError("jacobi symbol needs positive odd modulus");
    Integer a = floor_mod(c_in, d_in), n = d_in;
    int t = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            int r = static_cast<int>(n % 8);
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a = a % n;
    }
    if (n != 1) throw DomainError("jacobi symbol with non-coprime arguments");
    return Sign(t);
}

// ---- quadratic Gauss sums β(c,d) = |d|^{-1/2} Σ_{n mod |d|} e^{-iπ c n²/d} ----

inline cplx gauss_sum_direct(const Integer& c, const Integer& d) {
    if (d == 0) throw DomainError("gauss sum with d = 0");
    Integer ad = abs(d), m = 2 * ad;
    long long n_max = to_ll(ad);
    int sd = sgn(d);
    long long cm = to_ll(floor_mod(c, m)), mm = to_ll(m);
    cplx acc = 0;
    for (long long n = 0; n < n_max; ++n) {
        long long nn = (n * n) % mm;
        long long k = static_cast<long long>((static_cast<__int128>(cm) * nn) % mm);
        double t = -std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_max) * sd;
        acc += cplx(std::cos(t), std::sin(t));
    }
    return acc / std::sqrt(static_cast<double>(n_max));
}

// even modulus: β(d, c) with c = 2c' even, d odd
inline ExactPhase gauss_sum_closed(const Integer& d, const Integer& c) {
    if (c == 0 || c % 2 != 0) throw DomainError("gauss_sum_closed needs an even nonzero c");
    if (d % 2 == 0) throw DomainError("gauss_sum_closed needs an odd d");
    if (gcd(c, d) != 1) throw DomainError("gauss_sum_closed with non-coprime arguments");
    Integer cp = c / 2, ad = abs(d);
    ExactPhase out = ExactPhase::from_sign(jacobi(cp, ad));
    bool one_mod4 = floor_mod(d, 4) == 1;
    if (d > 0) {
        if (!one_mod4) out *= ExactPhase(Rational(1, 2));
        out *= ExactPhase(Rational(-sgn(c), 4));
    } else {
        if (one_mod4) out *= ExactPhase(Rational(-1, 2));
        out *= ExactPhase(Rational(-sgn(c) * sgn(d), 4));
    }
    return out;
}

// odd modulus: β(e, o) with e even, o odd
inline ExactPhase gauss_sum_closed_odd(const Integer& e, const Integer& o) {
    if (o % 2 == 0) throw DomainError("gauss_sum_closed_odd needs an odd modulus");
    if (e % 2 != 0) throw DomainError("gauss_sum_closed_odd needs an even numerator");
    if (gcd(e, o) != 1) throw DomainError("gauss_sum_closed_odd with non-coprime arguments");
    Integer ao = abs(o);
    ExactPhase out = ExactPhase::from_sign(jacobi(e / 2, ao));
    if (floor_mod(ao, 4) == 3) out *= ExactPhase(Rational(-1, 2));
    return o > 0 ? out : out.inverse();
}

// β(c, d) for coprime c, d with cd even
inline ExactPhase gauss_sum_exact(const Integer& c, const Integer& d) {
    if (d % 2 == 0) return gauss_sum_closed(c, d);
    return gauss_sum_closed_odd(c, d);
}

}  // namespace metaplectic
