#ifndef MW128_CURVE_HPP
#define MW128_CURVE_HPP

#include <array>
#include <optional>

#include "mw128/field.hpp"

namespace mw128 {

// Polynomial algebra for the curve y^2 + y = x^3 + t^65 + a6 over k[t].
// x has degree <= 22, y degree <= 33, eta = x^3 + t^65 + a6 degree <= 66.

struct XPoly {
    std::array<fe, 23> c{};
    bool operator==(const XPoly&) const = default;
};

struct YPoly {
    std::array<fe, 34> c{};
    bool operator==(const YPoly&) const = default;
};

struct EtaSeries {
    std::array<fe, 67> c{};
    bool operator==(const EtaSeries&) const = default;
};

struct MinimalPoint {
    XPoly x;
    YPoly y;
    bool operator==(const MinimalPoint&) const = default;
};

enum class EtaRoute { Convolution, PolyMul };

// eta_j = sum over j1 + 2*j2 = j of x_{j1} * x_{j2}^2, plus 1 at j = 65 and
// a6 at j = 0. The two routes are independent implementations kept as a
// permanent self-check; default comes from the field config.
EtaSeries eta_from_x(const Field& f, const XPoly& x, EtaRoute route);
EtaSeries eta_from_x(const Field& f, const XPoly& x);

// sum over m >= 0 of eta_{2^m j0}^(2^-m); zero return means the condition
// holds. Indices beyond 66 contribute nothing.
fe eta_condition(const Field& f, const EtaSeries& eta, int j0);

// Solve y^2 + y = eta exactly over k[t]; returns the lexicographically
// smaller of the two solutions (they differ by 1), or nullopt if eta is not
// of that form.
std::optional<YPoly> recover_y(const Field& f, const EtaSeries& eta);

bool on_curve(const Field& f, const MinimalPoint& p);

int degree(const XPoly& x);
// Canonical height of a polynomial point = deg x; rejects the zero polynomial.
int height(const XPoly& x);
inline int height(const MinimalPoint& p) { return height(p.x); }

// q(t) = p(a*t + b), exact, for any coefficient window.
template <std::size_t N>
std::array<fe, N> poly_subst(const Field& f, const std::array<fe, N>& p, fe a, fe b) {
    std::array<fe, N> pow_a{}, pow_b{};
    pow_a[0] = pow_b[0] = 1;
    for (std::size_t i = 1; i < N; ++i) {
        pow_a[i] = f.mul(pow_a[i - 1], a);
        pow_b[i] = f.mul(pow_b[i - 1], b);
    }
    std::array<fe, N> q{};
    for (std::size_t i = 0; i < N; ++i) {
        if (!p[i]) continue;
        // binomial(i, j) is odd exactly when j is a bitwise submask of i
        for (std::size_t j = 0; j <= i; ++j) {
            if ((i & j) != j) continue;
            q[j] ^= f.mul(p[i], f.mul(pow_a[j], pow_b[i - j]));
        }
    }
    return q;
}

template <std::size_t N>
std::array<fe, N> poly_frob(const Field& f, const std::array<fe, N>& p, int m) {
    std::array<fe, N> q;
    for (std::size_t i = 0; i < N; ++i) q[i] = f.frob_pow(p[i], m);
    return q;
}

template <std::size_t N>
fe poly_eval(const Field& f, const std::array<fe, N>& p, fe t) {
    fe acc = 0;
    for (std::size_t i = N; i-- > 0;) acc = f.mul(acc, t) ^ p[i];
    return acc;
}

}  // namespace mw128

#endif
