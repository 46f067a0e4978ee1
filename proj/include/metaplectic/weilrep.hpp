#pragma once

#include "theta.hpp"

#include <fftw3.h>

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace metaplectic {

// ---- FFT plumbing ----

namespace fft {

// out[k] = Σ_j in[j] e^{sign·2πijk/n}, unnormalized; in and out must not alias
inline void transform(const cplx* in, cplx* out, int n, int sign) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, fftw_plan> plans;
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = plans[{n, sign}];
        if (!slot) {
            auto* a = fftw_alloc_complex(n);
            auto* b = fftw_alloc_complex(n);
            slot = fftw_plan_dft_1d(n, a, b, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
            fftw_free(a);
            fftw_free(b);
        }
        p = slot;
    }
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)), reinterpret_cast<fftw_complex*>(out));
}

}  // namespace fft

// ---- grid functions on μ2 × R ----

struct GridFunction {
    std::size_t N = 4096;
    std::vector<cplx> plus, minus;

    GridFunction() = default;
    explicit GridFunction(std::size_t n) : N(n), plus(n), minus(n) {
        if (n < 8 || (n & (n - 1)) != 0) throw DomainError("grid size must be a power of two >= 8");
    }

    template <class F1, class F2>
    static GridFunction sample(std::size_t n, F1 f_plus, F2 f_minus) {
        GridFunction g(n);
        for (std::size_t j = 0; j < n; ++j) {
            g.plus[j] = f_plus(g.x(j));
            g.minus[j] = f_minus(g.x(j));
        }
        return g;
    }

    double delta() const { return 1 / std::sqrt(double(N)); }
    double half_width() const { return double(N) * delta() / 2; }
    double x(std::size_t j) const { return (double(j) - double(N) / 2) * delta(); }

    std::vector<cplx>& slot(int eps) { return eps > 0 ? plus : minus; }
    const std::vector<cplx>& slot(int eps) const { return eps > 0 ? plus : minus; }

    cplx inner(const GridFunction& o) const {
        cplx s = 0;
        for (std::size_t j = 0; j < N; ++j) s += plus[j] * std::conj(o.plus[j]) + minus[j] * std::conj(o.minus[j]);
        return s * delta();
    }
    double norm() const { return std::sqrt(std::max(0.0, inner(*this).real())); }

    GridFunction operator-(const GridFunction& o) const {
        GridFunction r = *this;
        for (std::size_t j = 0; j < N; ++j) r.plus[j] -= o.plus[j], r.minus[j] -= o.minus[j];
        return r;
    }
    GridFunction operator+(const GridFunction& o) const {
        GridFunction r = *this;
        for (std::size_t j = 0; j < N; ++j) r.plus[j] += o.plus[j], r.minus[j] += o.minus[j];
        return r;
    }
    GridFunction operator*(cplx s) const {
        GridFunction r = *this;
        for (std::size_t j = 0; j < N; ++j) r.plus[j] *= s, r.minus[j] *= s;
        return r;
    }
};

inline GridFunction gaussian_test_vector(std::size_t n = 4096) {
    const double pi = std::numbers::pi;
    return GridFunction::sample(
        n, [&](double x) { return cplx(std::exp(-pi * x * x) * (1 + 0.3 * x)); },
        [&](double x) { return cplx(2 * x * std::exp(-pi * x * x)); });
}

struct OperatorResult {
    GridFunction output;
    ExactPhase accumulated_phase;
};

// ---- single-slot kernels ----

namespace detail {

inline double grid_delta(std::size_t n) { return 1 / std::sqrt(double(n)); }

// ∫ e^{-2πiεxy} v(y) dy on the self-dual grid
inline std::vector<cplx> fourier_slot(const std::vector<cplx>& v, int eps) {
    std::size_t n = v.size();
    std::vector<cplx> in(n), out(n);
    for (std::size_t j = 0; j < n; ++j) in[j] = (j % 2 ? -v[j] : v[j]);
    fft::transform(in.data(), out.data(), int(n), eps > 0 ? -1 : 1);
    double D = grid_delta(n);
    for (std::size_t j = 0; j < n; ++j) out[j] *= (j % 2 ? -D : D);
    return out;
}

inline std::vector<cplx> reflect_slot(const std::vector<cplx>& v) {
    std::size_t n = v.size();
    std::vector<cplx> out(n);
    out[0] = v[0];
    for (std::size_t j = 1; j < n; ++j) out[j] = v[n - j];
    return out;
}

// v(a·x) by band-limited interpolation (chirp-z); zero where |a x| leaves the grid
inline std::vector<cplx> dilate_slot(const std::vector<cplx>& v, double a) {
    if (a == 1) return v;
    if (a == -1) return reflect_slot(v);
    std::size_t n = v.size(), m = 2 * n;
    const double pi = std::numbers::pi;
    double D = grid_delta(n), L = double(n) * D / 2;
    std::vector<cplx> vh = fourier_slot(v, 1);
    std::vector<cplx> u(m), h(m), U(m), H(m);
    for (std::size_t k = 0; k < n; ++k) {
        double K = double(k) - double(n) / 2;
        u[k] = vh[k] * std::polar(1.0, pi * a * K * K / double(n));
    }
    for (std::size_t k = 0; k < n; ++k) {
        h[k] = std::polar(1.0, -pi * a * double(k) * double(k) / double(n));
        if (k > 0) h[m - k] = h[k];
    }
    fft::transform(u.data(), U.data(), int(m), -1);
    fft::transform(h.data(), H.data(), int(m), -1);
    for (std::size_t k = 0; k < m; ++k) U[k] *= H[k];
    fft::transform(U.data(), u.data(), int(m), 1);
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        double J = double(j) - double(n) / 2;
        if (std::abs(a * J * D) >= L) continue;
        out[j] = u[j] * std::polar(1.0, pi * a * J * J / double(n)) * (D / double(m));
    }
    return out;
}

// band-limited value of the grid function at arbitrary points
inline std::vector<cplx> interpolate_slot(const std::vector<cplx>& v, const std::vector<double>& pts) {
    std::size_t n = v.size();
    double D = grid_delta(n);
    std::vector<cplx> vh = fourier_slot(v, 1);
    std::vector<cplx> out;
    out.reserve(pts.size());
    for (double p : pts) {
        cplx s = 0;
        for (std::size_t k = 0; k < n; ++k)
            s += vh[k] * std::polar(1.0, 2 * std::numbers::pi * ((double(k) - double(n) / 2) * D) * p);
        out.push_back(s * D);
    }
    return out;
}

}  // namespace detail

// ---- generator operators ----

// f(ε, x) ↦ e^{iπεx²b} f(ε, x)
inline GridFunction op_upper(double b, const GridFunction& f) {
    GridFunction r = f;
    for (int eps : {1, -1}) {
        auto& s = r.slot(eps);
        for (std::size_t j = 0; j < r.N; ++j) {
            double x = r.x(j);
            s[j] *= std::polar(1.0, std::numbers::pi * eps * std::fmod(x * x * b, 2.0));
        }
    }
    return r;
}

// f(ε, x) ↦ |a|^{1/2}(a, ε) f(ε, xa)
inline GridFunction op_diag(double a, const GridFunction& f) {
    if (a == 0) throw DomainError("op_diag: a = 0");
    GridFunction r(f.N);
    for (int eps : {1, -1}) {
        double k = std::sqrt(std::abs(a)) * hilbert(a, double(eps)).v;
        r.slot(eps) = detail::dilate_slot(f.slot(eps), a);
        for (auto& v : r.slot(eps)) v *= k;
    }
    return r;
}

// f(ε, x) ↦ ν(ε, ω)∫ e^{-2πiεxy} f(ε, y) dy
inline GridFunction op_omega(const GridFunction& f) {
    GridFunction r(f.N);
    r.plus = detail::fourier_slot(f.plus, 1);
    r.minus = detail::fourier_slot(f.minus, -1);
    for (auto& v : r.minus) v *= cplx(0, 1);
    return r;
}

// f(ε, x) ↦ f(-ε, x)
inline GridFunction op_flip(const GridFunction& f) {
    GridFunction r = f;
    std::swap(r.plus, r.minus);
    return r;
}

// ---- operator programs ----

// Π(g) as a scalar times a sequence of generator steps, applied first to last
struct Step {
    enum class Kind { Chirp, Scale, Fourier, Swap } kind;
    double p = 0;
};

struct Program {
    std::vector<Step> steps;
    ExactPhase phase;
    double badness = 0;
};

// Gaussian e^{-πqx²} on each slot, tracked through a program
struct GaussianState {
    cplx plus{1, 0}, minus{1, 0};
};

namespace detail {

// half-width needed in x and in frequency for e^{-πqx²} to drop below 1e-16
inline double gaussian_extent(cplx q) {
    if (!(q.real() > 0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(36.8 / (std::numbers::pi * q.real())) * std::max(1.0, std::abs(q));
}

inline double step_state(const Step& s, GaussianState& g) {
    switch (s.kind) {
        case Step::Kind::Chirp:
            g.plus -= cplx(0, s.p);
            g.minus += cplx(0, s.p);
            break;
        case Step::Kind::Scale:
            g.plus *= s.p * s.p;
            g.minus *= s.p * s.p;
            break;
        case Step::Kind::Fourier:
            g.plus = 1.0 / g.plus;
            g.minus = 1.0 / g.minus;
            break;
        case Step::Kind::Swap: std::swap(g.plus, g.minus); break;
    }
    return std::max(gaussian_extent(g.plus), gaussian_extent(g.minus));
}

inline double simulate(const std::vector<Step>& steps, GaussianState g) {
    double worst = std::max(gaussian_extent(g.plus), gaussian_extent(g.minus));
    for (const auto& s : steps) worst = std::max(worst, step_state(s, g));
    return worst;
}

// [[A, B], [0, 1/A]] as chirp-then-scale or scale-then-chirp
inline void append_borel(std::vector<Step>& steps, double A, double B, const GaussianState& at) {
    std::vector<Step> first = steps, second = steps;
    first.push_back({Step::Kind::Chirp, B / A});
    first.push_back({Step::Kind::Scale, A});
    second.push_back({Step::Kind::Scale, A});
    second.push_back({Step::Kind::Chirp, A * B});
    GaussianState s1 = at, s2 = at;
    double b1 = step_state(first[first.size() - 2], s1);
    b1 = std::max(b1, step_state(first.back(), s1));
    double b2 = step_state(second[second.size() - 2], s2);
    b2 = std::max(b2, step_state(second.back(), s2));
    steps = b1 <= b2 ? first : second;
}

inline GaussianState run_state(const std::vector<Step>& steps, GaussianState g) {
    for (const auto& s : steps) step_state(s, g);
    return g;
}

// balanced Bruhat form g = p1 ω p2 with p2·i on the unit circle
inline std::vector<Step> sl2_steps(const DMat& g, const GaussianState& in) {
    std::vector<Step> steps;
    if (g.c == 0) {
        append_borel(steps, g.a, g.b, in);
        return steps;
    }
    double r = g.d / g.c;
    double alpha = 1 / std::sqrt(std::hypot(1.0, r));
    append_borel(steps, alpha, alpha * r, in);
    steps.push_back({Step::Kind::Fourier});
    append_borel(steps, alpha / g.c, g.a / alpha, run_state(steps, in));
    return steps;
}

}  // namespace detail

// Π(g) for det g = ±1; picks the better conditioned of Π(g) and C̃(gω⁻¹, ω)⁻¹Π(gω⁻¹)Π(ω)
inline Program make_program(const DMat& h, GaussianState in = {}) {
    double det = h.det();
    if (std::abs(std::abs(det) - 1) > 1e-9) throw DomainError("make_program: det must be ±1");
    int y = det > 0 ? 1 : -1;
    DMat g{h.a, h.b, h.c / y, h.d / y};  // h = s(y)·g
    Program direct;
    direct.steps = detail::sl2_steps(g, in);
    Program split;
    DMat gw{-g.b, g.a, -g.d, g.c};  // g·ω⁻¹
    split.steps.push_back({Step::Kind::Fourier});
    auto tail = detail::sl2_steps(gw, detail::run_state(split.steps, in));
    split.steps.insert(split.steps.end(), tail.begin(), tail.end());
    split.phase = C_tilde(gw, omega<double>()).inverse();
    for (Program* p : {&direct, &split}) {
        if (y < 0) p->steps.push_back({Step::Kind::Swap});
        p->badness = detail::simulate(p->steps, in);
    }
    return direct.badness <= split.badness ? direct : split;
}

inline GaussianState program_output_state(const Program& p, GaussianState in = {}) {
    return detail::run_state(p.steps, in);
}

inline GridFunction run_program(const Program& p, const GridFunction& f) {
    GridFunction r = f;
    for (const auto& s : p.steps) {
        switch (s.kind) {
            case Step::Kind::Chirp: r = op_upper(s.p, r); break;
            case Step::Kind::Scale: r = op_diag(s.p, r); break;
            case Step::Kind::Fourier: r = op_omega(r); break;
            case Step::Kind::Swap: r = op_flip(r); break;
        }
    }
    return r * p.phase.value();
}

inline GridFunction apply_operator(const DMat& g, const GridFunction& f, GaussianState in = {}) {
    return run_program(make_program(g, in), f);
}
inline GridFunction apply_operator(const RMat& g, const GridFunction& f, GaussianState in = {}) {
    return apply_operator(to_double(g), f, in);
}

// Π̄ = m·Π on SL2
inline GridFunction apply_normalized(const DMat& g, const GridFunction& f) {
    return apply_operator(g, f) * m_normalizer(g).value();
}

// Π(L1)···Π(Lk) f with the C̃ phase relating it to Π(L1···Lk) f
inline OperatorResult apply_word(const GeneratorWord& w, const GridFunction& f) {
    OperatorResult res{f, {}};
    GaussianState st;
    RMat tail = identity<Rational>();
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        RMat L = it->matrix<Rational>();
        Program p = make_program(to_double(L), st);
        res.output = run_program(p, res.output);
        st = program_output_state(p, st);
        res.accumulated_phase *= C_tilde(L, tail);
        tail = L * tail;
    }
    return res;
}

// ---- composition against C̃ ----

struct ComposeResult {
    cplx measured;
    ExactPhase expected;
    double phase_error;
    double residual;
    double badness;  // worst Gaussian extent met along the three computations
};

inline double compose_badness(const RMat& g1, const RMat& g2) {
    Program p2 = make_program(to_double(g2));
    Program p1 = make_program(to_double(g1), program_output_state(p2));
    Program p12 = make_program(to_double(g1 * g2));
    return std::max({p1.badness, p2.badness, p12.badness});
}

// ⟨Π(g1)Π(g2)f, Π(g1g2)f⟩/‖Π(g1g2)f‖² against C̃(g1, g2)
inline ComposeResult compose_check(const RMat& g1, const RMat& g2, const GridFunction& f) {
    if (!is_sl2pm(g1) || !is_sl2pm(g2)) throw DomainError("compose_check: det must be ±1");
    Program p2 = make_program(to_double(g2));
    GaussianState mid = program_output_state(p2);
    Program p1 = make_program(to_double(g1), mid);
    Program p12 = make_program(to_double(g1 * g2));
    GridFunction lhs = run_program(p1, run_program(p2, f));
    GridFunction rhs = run_program(p12, f);
    double nr = rhs.inner(rhs).real();
    if (!(nr > 1e-300) || !(f.norm() > 0)) throw DomainError("compose_check: degenerate norm");
    cplx ph = lhs.inner(rhs) / nr;
    ExactPhase want = C_tilde(g1, g2);
    double res = (lhs - rhs * ph).norm() / f.norm();
    return {ph, want, std::abs(ph - want.value()), res, std::max({p1.badness, p2.badness, p12.badness})};
}

inline ComposeResult compose_check(const GeneratorWord& w1, const GeneratorWord& w2, const GridFunction& f) {
    return compose_check(evaluate(w1), evaluate(w2), f);
}

// ---- Fresnel identities ----

struct FresnelResult {
    cplx lhs;  // ∫ f̂(x) e^{σπix²} dx
    cplx rhs;  // e^{σπi/4} ∫ f(x) e^{-σπix²} dx
    double residual;
};

// f̂(x) = ∫ f(y) e^{-2πixy} dy
inline FresnelResult fresnel_check(const std::vector<cplx>& f, int sign) {
    detail::require_sign(sign, "fresnel_check");
    std::size_t n = f.size();
    double D = detail::grid_delta(n);
    std::vector<cplx> fh = detail::fourier_slot(f, 1);
    cplx l = 0, r = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double x = (double(j) - double(n) / 2) * D;
        l += fh[j] * std::polar(1.0, sign * std::numbers::pi * x * x);
        r += f[j] * std::polar(1.0, -sign * std::numbers::pi * x * x);
    }
    l *= D;
    r *= D * std::polar(1.0, sign * std::numbers::pi / 4);
    return {l, r, std::abs(l - r)};
}

// ---- partial Fourier intertwiners ----

struct IntertwinerResult {
    cplx measured;
    ExactPhase expected;    // e^{-iπ sgn(s)/4}
    ExactPhase cocycle;     // c̃(g2 g1⁻¹, g1) for the constructed matrices
    double residual;        // deviation from a scalar multiple of the input
    double phase_error;     // |measured - expected|
};

// F_{X*Z*} F_{Z*Y*} F_{Y*X*} for Y* = R·c e1, Z* = R·(e1 + s e1*), by nested quadrature
inline IntertwinerResult intertwiner_triple_check(double c, double s, int nodes = 1024, double L = 9.0) {
    if (!(c > 0)) throw DomainError("intertwiner_triple_check: c must be positive");
    if (s == 0) throw DomainError("intertwiner_triple_check: s = 0 is degenerate");
    const double pi = std::numbers::pi;
    auto psi = [&](double t) { return std::polar(1.0, 2 * pi * t); };
    auto f = [&](double x) { return std::exp(-pi * x * x) * (1 + 0.5 * x); };
    double h = 2 * L / nodes, r = std::sqrt(std::abs(s)), sg = s > 0 ? 1 : -1;
    std::vector<double> t(nodes);
    for (int k = 0; k < nodes; ++k) t[k] = -L + (k + 1) * h;
    // A(f)(y) = c^{-1/2} ∫ ψ(ty) f(t) dt at y = sgn(s)·t√|s|
    std::vector<cplx> A(nodes);
    for (int k = 0; k < nodes; ++k) {
        double y = sg * t[k] * r;
        cplx acc = 0;
        for (int m = 0; m < nodes; ++m) acc += psi(t[m] * y) * f(t[m]);
        A[k] = acc * h / std::sqrt(c);
    }
    // B(g)(x') = c^{1/2} ∫ ψ(-sgn(s)(t√|s| x' + t²/2)) g(sgn(s) t√|s|) dt
    auto B = [&](double xp) {
        cplx acc = 0;
        for (int k = 0; k < nodes; ++k) acc += psi(-sg * (t[k] * r * xp + t[k] * t[k] / 2)) * A[k];
        return acc * h * std::sqrt(c);
    };
    // C(g)(x) = √|s| ∫ ψ(-sgn(s) t²/2) g(x - sgn(s) t/√|s|) dt
    std::vector<double> xs;
    for (int i = 0; i < 9; ++i) xs.push_back(-1.2 + 0.3 * i);
    std::vector<cplx> out, fx;
    for (double x : xs) {
        cplx acc = 0;
        for (int k = 0; k < nodes; ++k) acc += psi(-sg * t[k] * t[k] / 2) * B(x - sg * t[k] / r);
        out.push_back(acc * h * r);
        fx.push_back(f(x));
    }
    cplx num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) num += out[i] * std::conj(fx[i]), den += std::norm(fx[i]);
    cplx sc = num / den;
    double res = 0, fmax = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        res = std::max(res, std::abs(out[i] - sc * fx[i]));
        fmax = std::max(fmax, std::abs(fx[i]));
    }
    DMat g1{0, -1 / c, c, 0}, g2{0, -1, 1, s};
    ExactPhase want(Rational(-int(sg), 4));
    return {sc, want, c_tilde(g2 * g1.inverse(), g1), res / fmax, std::abs(sc - want.value())};
}

// ---- Gaussian eigenfunctions ----

struct EigenEntry {
    std::string name;
    double residual;
    double tol;
    bool ok() const { return residual < tol; }
};

struct EigenReport {
    std::vector<EigenEntry> entries;
    bool ok() const {
        return std::all_of(entries.begin(), entries.end(), [](const EigenEntry& e) { return e.ok(); });
    }
    std::vector<EigenEntry> failures() const {
        std::vector<EigenEntry> out;
        std::copy_if(entries.begin(), entries.end(), std::back_inserter(out), [](const EigenEntry& e) { return !e.ok(); });
        return out;
    }
};

inline DMat lie_exp(char z, double t) {
    switch (z) {
        case 'h': return h_diag<double>(std::exp(t));
        case '+': return u_upper<double>(t);
        case '-': return u_lower<double>(t);
    }
    throw DomainError("lie_exp: unknown generator");
}

// d/dt Π̄(exp tZ) f at t = 0, central difference with one Richardson step
inline GridFunction lie_derivative(char z, const GridFunction& f, double step = 1e-4) {
    auto diff = [&](double k) {
        GridFunction a = apply_normalized(lie_exp(z, k), f), b = apply_normalized(lie_exp(z, -k), f);
        return (a - b) * cplx(1 / (2 * k));
    };
    GridFunction d1 = diff(step), d2 = diff(step / 2);
    return (d2 * 4.0 - d1) * cplx(1.0 / 3);
}

inline EigenReport gaussian_eigen_check(std::size_t n = 4096, int angles = 32) {
    const double pi = std::numbers::pi;
    EigenReport rep;
    auto on_plus = [&](auto fn) { return GridFunction::sample(n, fn, [](double) { return cplx(0); }); };
    auto on_minus = [&](auto fn) { return GridFunction::sample(n, [](double) { return cplx(0); }, fn); };
    GridFunction A = on_plus([&](double x) { return cplx(std::exp(-pi * x * x)); });
    GridFunction B = on_plus([&](double x) { return cplx(x * std::exp(-pi * x * x)); });
    struct Vec {
        const char* name;
        const GridFunction* f;
        double weight;
    };
    for (Vec v : {Vec{"A", &A, 0.5}, Vec{"B", &B, 1.5}}) {
        double nf = v.f->norm();
        double worst = 0;
        for (int k = 0; k < angles; ++k) {
            double t = -pi + (k + 0.5) * 2 * pi / angles;
            GridFunction r = apply_normalized(rotation(t), *v.f);
            worst = std::max(worst, (r - *v.f * std::polar(1.0, v.weight * t)).norm() / nf);
        }
        rep.entries.push_back({std::string("rotation ") + v.name, worst, 1e-6});

        GridFunction dh = lie_derivative('h', *v.f), dp = lie_derivative('+', *v.f), dm = lie_derivative('-', *v.f);
        // analytic dΠ̄: h ↦ ½ + x d/dx, e+ ↦ iπx², e- ↦ (i/4π) d²/dx² on the ε = +1 slot
        bool is_a = v.f == &A;
        auto fh = on_plus([&](double x) {
            double g = std::exp(-pi * x * x);
            return cplx(is_a ? (0.5 - 2 * pi * x * x) * g : (1.5 - 2 * pi * x * x) * x * g);
        });
        auto fp = on_plus([&](double x) {
            double g = std::exp(-pi * x * x);
            return cplx(0, pi * x * x) * (is_a ? g : x * g);
        });
        auto fm = on_plus([&](double x) {
            double g = std::exp(-pi * x * x);
            double d2 = is_a ? (4 * pi * pi * x * x - 2 * pi) * g : (4 * pi * pi * x * x * x - 6 * pi * x) * g;
            return cplx(0, d2 / (4 * pi));
        });
        rep.entries.push_back({std::string("dh ") + v.name, (dh - fh).norm() / nf, 1e-4});
        rep.entries.push_back({std::string("de+ ") + v.name, (dp - fp).norm() / nf, 1e-4});
        rep.entries.push_back({std::string("de- ") + v.name, (dm - fm).norm() / nf, 1e-4});
        // J0 = e+ - e-, J- = h - i(e+ + e-)
        GridFunction j0 = dp - dm;
        GridFunction jm = dh - (dp + dm) * cplx(0, 1);
        rep.entries.push_back({std::string("J0 ") + v.name, (j0 - *v.f * cplx(0, v.weight)).norm() / nf, 1e-4});
        rep.entries.push_back({std::string("J- ") + v.name, jm.norm() / nf, 1e-4});
    }
    // Π̄([h(-1), -i]) A = (-1, ε) A on either slot
    GridFunction Am = on_minus([&](double x) { return cplx(std::exp(-pi * x * x)); });
    for (auto [name, f, s] : {std::tuple{"h(-1) A+", &A, 1.0}, std::tuple{"h(-1) A-", &Am, -1.0}}) {
        GridFunction r = apply_normalized(neg_identity<double>(), *f) * cplx(0, -1);
        rep.entries.push_back({name, (r - *f * s).norm() / f->norm(), 1e-9});
    }
    return rep;
}

// ---- lattice model ----

struct LatticeCase {
    int eps;
    double X, Xs;
    cplx measured;   // Π(g)F(ε, w) / F(det·ε, w·g)
    ExactPhase expected;
    double rel_error;
};

struct LatticeReport {
    std::string letter;
    std::vector<LatticeCase> cases;
    double tol = 1e-8;
    bool ok() const {
        return std::all_of(cases.begin(), cases.end(), [&](const LatticeCase& c) { return c.rel_error < tol; });
    }
};

namespace detail {

inline bool lattice_letter(const Letter& l) {
    switch (l.tag) {
        case Tag::U:
        case Tag::ULOWER: return even(l.param);
        case Tag::H: return l.param == 1 || l.param == -1;
        default: return true;
    }
}

// Σ_{|l| ≤ lmax} f(ε, X + l) e^{2πiε(l X* + X X*/2)}
inline cplx lattice_theta(const GridFunction& f, int eps, double X, double Xs, int lmax) {
    std::vector<double> pts;
    for (int l = -lmax; l <= lmax; ++l) pts.push_back(X + l);
    auto vals = interpolate_slot(f.slot(eps), pts);
    cplx s = 0;
    for (int l = -lmax; l <= lmax; ++l)
        s += vals[l + lmax] * std::polar(1.0, 2 * std::numbers::pi * eps * (l * Xs + X * Xs / 2));
    return s;
}

}  // namespace detail

inline LatticeReport lattice_action_check(const Letter& letter, const std::vector<std::pair<double, double>>& points,
                                          std::size_t n = 4096, int lmax = 12) {
    if (!detail::lattice_letter(letter)) throw DomainError("lattice_action_check: inadmissible letter " + to_string(letter));
    RMat g = letter.matrix<Rational>();
    DMat gd = to_double(g);
    int det = sgn(g.det());
    const double pi = std::numbers::pi;
    GridFunction phi = GridFunction::sample(
        n, [&](double x) { return cplx(std::exp(-pi * x * x) * (1 + 0.3 * x)); },
        [&](double x) { return cplx(x * std::exp(-pi * x * x)); });
    GridFunction r = apply_operator(gd, phi);
    LatticeReport rep{to_string(letter), {}};
    for (int eps : {1, -1}) {
        ExactPhase want = upsilon(g, eps);
        for (auto [X, Xs] : points) {
            cplx L = detail::lattice_theta(r, eps, X, Xs, lmax);
            cplx R = detail::lattice_theta(phi, det * eps, X * gd.a + Xs * gd.c, X * gd.b + Xs * gd.d, lmax);
            cplx m = L / R;
            rep.cases.push_back({eps, X, Xs, m, want, std::abs(L - want.value() * R) / std::abs(R)});
        }
    }
    return rep;
}

}  // namespace metaplectic
