#pragma once

#include "trivialize.hpp"

#include <cmath>

namespace metaplectic {

enum class Weight { Half, ThreeHalves };

struct ThetaQuery {
    cplx z;
    int eps = 1;
    Weight weight = Weight::Half;
    double tail_bound = 1e-16;
};

struct ThetaValue {
    cplx value;
    double tail;  // certified bound on the omitted terms
    long terms;   // terms with |n| < terms are summed
};

namespace detail {

inline void require_sign(int eps, const char* who) {
    if (eps != 1 && eps != -1) throw DomainError(std::string(who) + ": sign must be ±1");
}

// Σ_{|n| >= N} |n|^k e^{-πn²v} ≤ N^k·2e^{-πN²v}/(1 - e^{-π(2N+1)v})
inline double theta_tail(long N, double v, Weight w) {
    double t = 2 * std::exp(-std::numbers::pi * double(N) * double(N) * v) /
               (1 - std::exp(-std::numbers::pi * double(2 * N + 1) * v));
    return w == Weight::ThreeHalves ? t * double(N) : t;
}

}  // namespace detail

// θ_{1/2}(z, ε) = Σ e^{iεπn²z}, θ_{3/2}(z, ε) = Σ n e^{iεπn²z}
inline ThetaValue theta_eval(const ThetaQuery& q) {
    detail::require_sign(q.eps, "theta_eval");
    double v = q.eps * q.z.imag();
    if (!(v > 0)) throw DivergenceError("theta_eval: needs ε·Im z > 0");
    if (!(q.tail_bound > 0)) throw DomainError("theta_eval: tail bound must be positive");
    long N = 1;
    while (detail::theta_tail(N, v, q.weight) >= q.tail_bound) ++N;
    double tail = detail::theta_tail(N, v, q.weight);
    if (q.weight == Weight::ThreeHalves) return {0.0, tail, N};  // n and -n cancel pairwise
    double x = std::fmod(q.z.real(), 2.0);
    double s = 0, c = 0;
    for (long n = N - 1; n >= 1; --n) {
        double nn = double(n) * double(n);
        double amp = std::exp(-std::numbers::pi * nn * v);
        double ph = q.eps * std::numbers::pi * std::fmod(nn * x, 2.0);
        c += amp * std::cos(ph);
        s += amp * std::sin(ph);
    }
    return {cplx(1 + 2 * c, 2 * s), tail, N};
}

// Υ(g, ε) for g in Γ̆(2)^±
inline ExactPhase upsilon(const RMat& g, int eps) {
    detail::require_sign(eps, "upsilon");
    if (!in_gamma2_hat(g, true)) throw MembershipError("upsilon: element is not in Γ̆(2)^±");
    int det = sgn(g.det());
    if (g.c == 0) return ExactPhase::from_sign(hilbert(det * eps, sgn(g.a)));
    Integer c = to_integer(g.c), d = to_integer(g.d);
    return ExactPhase(Rational(1 - eps, 4)) * hilbert(sgn(g.c) * det, eps * det) /
           gauss_sum_exact(d, det * eps * c);
}

inline bool lambda_excluded(const RMat& g, int eps) {
    return eps == -1 && g.b == 0 && g.c == 0 && g.a == -1 && (g.d == -1 || g.d == 1);
}

// λ^±(γ, ε); half_plane = sgn Im z, used only when c = 0
inline ExactPhase multiplier_lambda(const RMat& g, int eps, int half_plane) {
    detail::require_sign(eps, "multiplier_lambda");
    detail::require_sign(half_plane, "multiplier_lambda");
    if (!in_gamma2_hat(g, true)) throw MembershipError("multiplier_lambda: element is not in Γ̆(2)^±");
    if (lambda_excluded(g, eps)) throw ExcludedPairError("multiplier_lambda: excluded pair at ε = -1");
    int det = sgn(g.det()), sa = sgn(g.a), sc = sgn(g.c);
    if (sc == 0)
        return ExactPhase(Rational(1 - sa, 4)) * hilbert(eps * det, sa) * hilbert(half_plane, sa);
    return ExactPhase(Rational(-sc, 4)) * upsilon(g, eps) * hilbert(-sc * eps, det);
}

struct TransformationResult {
    cplx lhs;
    cplx rhs;
    double residual;  // |lhs - rhs| / |rhs|, or |lhs - rhs| when rhs = 0
    double tail;      // truncation bound carried by both sides
};

// θ(γz, ε) against λ^±(γ, ε)·J(γ, z)^{2w}·θ(z, det γ·ε); ε must equal det γ·sgn Im z
inline TransformationResult transformation_check(const RMat& g, cplx z, int eps, Weight w = Weight::Half,
                                                 double tail_bound = 1e-16) {
    detail::require_sign(eps, "transformation_check");
    if (z.imag() == 0) throw DivergenceError("transformation_check: z on the real line");
    int det = sgn(g.det()), hs = z.imag() > 0 ? 1 : -1;
    if (eps != det * hs) throw DivergenceError("transformation_check: ε·Im γz must be positive");
    ExactPhase lam = multiplier_lambda(g, eps, hs);
    DMat gd = to_double(g);
    cplx gz = mobius(gd, z);
    ThetaValue left = theta_eval({gz, eps, w, tail_bound});
    ThetaValue right = theta_eval({z, det * eps, w, tail_bound});
    cplx J = j_factor(gd, z);
    cplx rhs = lam.value() * (w == Weight::Half ? J : J * J * J) * right.value;
    double diff = std::abs(left.value - rhs);
    double scale = std::abs(rhs);
    return {left.value, rhs, scale > 0 ? diff / scale : diff, left.tail + right.tail};
}

struct CocycleLawResult {
    cplx lhs;  // λ(γ1γ2, ε)·J(γ1γ2, z)
    cplx rhs;  // λ(γ1, ε)·λ(γ2, det γ1·ε)·J(γ1, γ2z)·J(γ2, z)
    double residual;
};

// the transformation law applied twice, compared with the law for the product
inline CocycleLawResult lambda_cocycle_check(const RMat& g1, const RMat& g2, cplx z) {
    if (z.imag() == 0) throw DivergenceError("lambda_cocycle_check: z on the real line");
    RMat g = g1 * g2;
    DMat d1 = to_double(g1), d2 = to_double(g2), d = to_double(g);
    int hs = z.imag() > 0 ? 1 : -1;
    int eps = sgn(g.det()) * hs;
    cplx z2 = mobius(d2, z);
    int hs2 = z2.imag() > 0 ? 1 : -1;
    cplx lhs = multiplier_lambda(g, eps, hs).value() * j_factor(d, z);
    cplx rhs = multiplier_lambda(g1, eps, hs2).value() * multiplier_lambda(g2, sgn(g1.det()) * eps, hs).value() *
               j_factor(d1, z2) * j_factor(d2, z);
    return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace metaplectic
