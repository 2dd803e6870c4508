#include "mw128/curve.hpp"

#include <vector>

namespace mw128 {

namespace {

std::vector<fe> poly_mul(const Field& f, const std::vector<fe>& a,
                         const std::vector<fe>& b) {
    std::vector<fe> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] ^= f.mul(a[i], b[j]);
    }
    return r;
}

}  // namespace

EtaSeries eta_from_x(const Field& f, const XPoly& x, EtaRoute route) {
    EtaSeries eta;
    if (route == EtaRoute::Convolution) {
        for (int j1 = 0; j1 <= 22; ++j1) {
            fe c = x.c[j1];
            if (!c) continue;
            for (int j2 = 0; j2 <= 22; ++j2)
                eta.c[j1 + 2 * j2] ^= f.mul(c, f.sq(x.c[j2]));
        }
    } else {
        std::vector<fe> v(x.c.begin(), x.c.end());
        std::vector<fe> cube = poly_mul(f, poly_mul(f, v, v), v);
        for (std::size_t j = 0; j < cube.size() && j <= 66; ++j) eta.c[j] = cube[j];
    }
    eta.c[65] ^= 1;
    eta.c[0] ^= f.a6();
    return eta;
}

EtaSeries eta_from_x(const Field& f, const XPoly& x) {
    return eta_from_x(f, x,
                      f.config().eta_by_polymul ? EtaRoute::PolyMul
                                                : EtaRoute::Convolution);
}

fe eta_condition(const Field& f, const EtaSeries& eta, int j0) {
    fe acc = 0;
    int m = 0;
    for (long long j = j0; j <= 66; j <<= 1, ++m) acc ^= f.frob_pow(eta.c[j], -m);
    return acc;
}

std::optional<YPoly> recover_y(const Field& f, const EtaSeries& eta) {
    YPoly y;
    for (int j = 33; j >= 1; --j) {
        fe tail = (2 * j <= 33) ? y.c[2 * j] : 0;
        y.c[j] = f.sqrt(eta.c[2 * j] ^ tail);
    }
    if (f.trace(eta.c[0])) return std::nullopt;
    y.c[0] = f.as_root_raw(eta.c[0]);
    // full consistency check of y^2 + y = eta, odd coefficients included
    for (int j = 0; j <= 66; ++j) {
        fe v = 0;
        if (j % 2 == 0) v ^= f.sq(y.c[j / 2]);
        if (j <= 33) v ^= y.c[j];
        if (v != eta.c[j]) return std::nullopt;
    }
    return y;
}

bool on_curve(const Field& f, const MinimalPoint& p) {
    EtaSeries eta = eta_from_x(f, p.x, EtaRoute::Convolution);
    for (int j = 0; j <= 66; ++j) {
        fe v = 0;
        if (j % 2 == 0) v ^= f.sq(p.y.c[j / 2]);
        if (j <= 33) v ^= p.y.c[j];
        if (v != eta.c[j]) return false;
    }
    return true;
}

int degree(const XPoly& x) {
    for (int j = 22; j >= 0; --j)
        if (x.c[j]) return j;
    return -1;
}

int height(const XPoly& x) {
    int d = degree(x);
    if (d < 0) throw FieldError("height of the zero polynomial is undefined");
    return d;
}

}  // namespace mw128
