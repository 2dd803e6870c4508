#include "mw128/minsearch.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "mw128/io.hpp"

namespace mw128 {

// --- quadratic shortcut ------------------------------------------------------

QuadraticPrefix quadratic_prefix(const Field& f, fe x21, fe x13, fe x9) {
    auto p = [&](long long e) { return f.pw(x21, e); };
    auto m = [&](fe a, fe b) { return f.mul(a, b); };
    fe x13sq = f.sq(x13);
    fe x13p4 = f.frob_pow(x13, 2);
    fe x9p16 = f.frob_pow(x9, 4);
    fe x9p32 = f.sq(x9p16);
    fe x9p48 = m(x9p16, x9p32);
    fe x9p64 = f.frob_pow(x9, 6);

    QuadraticPrefix pre;
    pre.a0 = m(p(288), x13) ^ m(p(192), x9p16) ^ p(496);
    pre.c96 = p(96);
    pre.b0 = m(p(272) ^ m(x13, p(64)), x9p64) ^ m(p(576), x9p48) ^
             m(p(880) ^ m(x13, p(672)) ^ p(100) ^ m(x13p4, p(48)), x9p32) ^
             m(p(1184) ^ m(x13sq, p(768)), x9p16) ^ m(m(x13sq, x13), p(864)) ^
             p(708) ^ m(m(x13p4, x13), p(448)) ^ m(x13sq, p(292)) ^
             m(x13sq, p(97));
    pre.b4 = p(608) ^ m(x13sq, p(192));
    pre.b16 = m(p(480), x9p32) ^ m(x13sq, p(672)) ^ m(x13p4, p(256));
    pre.b32 = m(p(384), x9p16) ^ p(688) ^ m(x13, p(480));
    pre.b48 = p(288);
    return pre;
}

QuadraticData quadratic_AB(const Field& f, const QuadraticPrefix& pre, fe x5) {
    fe x5p4 = f.frob_pow(x5, 2);
    fe x5p16 = f.frob_pow(x5, 4);
    fe x5p32 = f.sq(x5p16);
    fe x5p48 = f.mul(x5p16, x5p32);
    QuadraticData q;
    q.A = pre.a0 ^ f.mul(pre.c96, x5p16);
    q.B = pre.b0 ^ f.mul(pre.b4, x5p4) ^ f.mul(pre.b16, x5p16) ^
          f.mul(pre.b32, x5p32) ^ f.mul(pre.b48, x5p48);
    return q;
}

QuadraticData quadratic_AB(const Field& f, fe x21, fe x17, fe x13, fe x9, fe x5) {
    (void)x17;  // A and B do not involve x17
    return quadratic_AB(f, quadratic_prefix(f, x21, x13, x9), x5);
}

QuadraticData quadratic_ab_direct(const Field& f, fe x21, fe x17, fe x13,
                                  fe x9, fe x5) {
    (void)x17;
    // square-and-multiply over the table-free reference product only
    auto mul = [&](fe a, fe b) { return f.ref_mul(a, b); };
    auto pw = [&](fe a, unsigned e) {
        fe r = 1, b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    };
    QuadraticData q;
    q.A = fe(mul(pw(x21, 288), x13) ^ mul(pw(x21, 192), pw(x9, 16)) ^
             mul(pw(x21, 96), pw(x5, 16)) ^ pw(x21, 496));
    q.B = fe(mul(fe(pw(x21, 272) ^ mul(x13, pw(x21, 64))), pw(x9, 64)) ^
             mul(pw(x21, 576), pw(x9, 48)) ^
             mul(fe(mul(pw(x21, 480), pw(x5, 16)) ^ pw(x21, 880) ^
                    mul(x13, pw(x21, 672)) ^ pw(x21, 100) ^
                    mul(pw(x13, 4), pw(x21, 48))),
                 pw(x9, 32)) ^
             mul(fe(mul(pw(x21, 384), pw(x5, 32)) ^ pw(x21, 1184) ^
                    mul(pw(x13, 2), pw(x21, 768))),
                 pw(x9, 16)) ^
             mul(pw(x21, 288), pw(x5, 48)) ^
             mul(fe(pw(x21, 688) ^ mul(x13, pw(x21, 480))), pw(x5, 32)) ^
             mul(fe(mul(pw(x13, 2), pw(x21, 672)) ^
                    mul(pw(x13, 4), pw(x21, 256))),
                 pw(x5, 16)) ^
             mul(fe(pw(x21, 608) ^ mul(pw(x13, 2), pw(x21, 192))), pw(x5, 4)) ^
             mul(pw(x13, 3), pw(x21, 864)) ^ pw(x21, 708) ^
             mul(pw(x13, 5), pw(x21, 448)) ^ mul(pw(x13, 2), pw(x21, 292)) ^
             mul(pw(x13, 2), pw(x21, 97)));
    return q;
}

X1Solutions solve_x1(const Field& f, const QuadraticData& q) {
    X1Solutions s;
    if (q.A == 0) {
        s.kind = q.B == 0 ? X1Solutions::All : X1Solutions::Empty;
        return s;
    }
    fe iA = f.inv(q.A);
    fe c = f.mul(q.B, f.mul(f.sq(iA), iA));  // B / A^3
    if (f.trace(c)) {
        s.kind = X1Solutions::Empty;
        return s;
    }
    fe u = f.as_root_raw(c);
    fe z1 = f.mul(q.A, u);
    fe z2 = fe(z1 ^ q.A);
    fe x1a = f.frob_pow(z1, 8);  // x1 = z^(2^-4)
    fe x1b = f.frob_pow(z2, 8);
    if (x1b < x1a) std::swap(x1a, x1b);
    s.kind = X1Solutions::Pair;
    s.first = x1a;
    s.second = x1b;
    return s;
}

// --- exact symbolic derivation of the j0 = 19 equation -----------------------
//
// Multivariate GF(2) monomial algebra over (x21, x17, x13, x9, x5, x1) with
// exponents mod 4095 (the multiplicative order of k*). Square root is the
// exponent map e -> 2048 e. For the possibly-zero variables the nonzero
// residue class keeps a representative in [1, 4095] so that evaluation at 0
// stays correct; x21 is nonzero throughout (the derivation divides by it).

namespace sym {

using Mono = std::array<std::uint16_t, 6>;
using Poly = std::set<Mono>;

inline std::uint16_t norm_exp(int slot, std::uint64_t e) {
    std::uint64_t r = e % 4095;
    if (slot != 0 && r == 0 && e != 0) r = 4095;
    return std::uint16_t(r);
}

inline void pxor(Poly& p, const Mono& m) {
    auto it = p.find(m);
    if (it == p.end())
        p.insert(m);
    else
        p.erase(it);
}

Poly pmul(const Poly& a, const Poly& b) {
    Poly out;
    for (const Mono& x : a)
        for (const Mono& y : b) {
            Mono m;
            for (int i = 0; i < 6; ++i)
                m[i] = norm_exp(i, std::uint64_t(x[i]) + y[i]);
            pxor(out, m);
        }
    return out;
}

Poly pfrob(const Poly& a, int k) {
    k = ((k % 12) + 12) % 12;
    std::uint64_t fct = 1;
    for (int i = 0; i < k; ++i) fct = (fct * 2) % 4095;
    Poly out;
    for (const Mono& x : a) {
        Mono m;
        for (int i = 0; i < 6; ++i)
            m[i] = x[i] ? norm_exp(i, std::uint64_t(x[i]) * fct) : 0;
        pxor(out, m);
    }
    return out;
}

inline Poly psq(const Poly& a) { return pfrob(a, 1); }
inline Poly psqrt(const Poly& a) { return pfrob(a, 11); }

Poly pvar(int slot, std::uint64_t e) {
    Mono m{};
    m[slot] = norm_exp(slot, e);
    return Poly{m};
}

Poly pone() { return Poly{Mono{}}; }

// Mirrors the numeric descent exactly, but over symbols; returns the j0 = 19
// residual split by the power of x1.
struct R19Parts {
    Poly rhs, lin, quad;  // x1^0, x1^1024, x1^2048 coefficients
};

R19Parts derive_r19() {
    std::array<Poly, 23> x;
    x[21] = pvar(0, 1);
    x[17] = pvar(1, 1);
    x[13] = pvar(2, 1);
    x[9] = pvar(3, 1);
    x[5] = pvar(4, 1);
    x[1] = pvar(5, 1);

    auto eta_at = [&](int j, int skip_j2) {
        Poly acc;
        int lo = j <= 22 ? 0 : (j - 21) / 2;
        int hi = j / 2 < 22 ? j / 2 : 22;
        for (int j2 = lo; j2 <= hi; ++j2) {
            if (j2 == skip_j2) continue;
            for (const Mono& m : pmul(x[j - 2 * j2], psq(x[j2]))) pxor(acc, m);
        }
        if (j == 65) pxor(acc, Mono{});
        return acc;
    };
    // unknown entering linearly as u * x22^2: u = S * x21 (x22^-2 = x21)
    auto solve_linear = [&](int j, int skip_j1) {
        Poly acc;
        int lo = j <= 22 ? 0 : (j - 21) / 2;
        int hi = j / 2 < 22 ? j / 2 : 22;
        for (int j2 = lo; j2 <= hi; ++j2) {
            if (j - 2 * j2 == skip_j1) continue;
            for (const Mono& m : pmul(x[j - 2 * j2], psq(x[j2]))) pxor(acc, m);
        }
        if (j == 65) pxor(acc, Mono{});
        return pmul(acc, pvar(0, 1));
    };
    Poly inv21 = pvar(0, 4094);
    auto solve_squared = [&](int j, int target, const Poly& extra) {
        Poly s = eta_at(j, target);
        for (const Mono& m : extra) pxor(s, m);
        return psqrt(pmul(s, inv21));
    };

    x[22] = psqrt(inv21);                   // j0 = 65
    x[19] = solve_linear(63, 19);           // j0 = 63
    x[20] = solve_squared(61, 20, {});      // j0 = 61
    x[15] = solve_linear(59, 15);           // j0 = 59
    x[18] = solve_squared(57, 18, {});      // j0 = 57
    x[11] = solve_linear(55, 11);           // j0 = 55
    x[16] = solve_squared(53, 16, {});      // j0 = 53
    x[7] = solve_linear(51, 7);             // j0 = 51
    x[14] = solve_squared(49, 14, {});      // j0 = 49
    x[3] = solve_linear(47, 3);             // j0 = 47
    if (!x[15].empty() || !x[7].empty())
        throw FieldError("x15/x7 failed to vanish in the symbolic descent");
    x[12] = solve_squared(45, 12, {});      // j0 = 45
    x[10] = solve_squared(41, 10, {});      // j0 = 41
    x[8] = solve_squared(37, 8, {});        // j0 = 37
    x[6] = solve_squared(33, 6, psqrt(eta_at(66, -1)));  // j0 = 33
    x[4] = solve_squared(29, 4, psqrt(eta_at(58, -1)));  // j0 = 29
    x[2] = solve_squared(25, 2, psqrt(eta_at(50, -1)));  // j0 = 25
    x[0] = Poly{};
    Poly s21 = eta_at(21, 0);
    Poly s42 = eta_at(42, -1);
    Poly v = pmul([&] {
        Poly t = psq(s21);
        for (const Mono& m : s42) pxor(t, m);
        return t;
    }(), psq(inv21));

    Poly r19 = eta_at(19, -1);
    for (const Mono& m : psqrt(eta_at(38, -1))) pxor(r19, m);
    for (const Mono& m : pmul(x[19], psqrt(v))) pxor(r19, m);

    R19Parts parts;
    for (const Mono& m : r19) {
        Mono frame = m;
        frame[5] = 0;
        switch (m[5]) {
            case 0: pxor(parts.rhs, frame); break;
            case 1024: pxor(parts.lin, frame); break;
            case 2048: pxor(parts.quad, frame); break;
            default:
                throw FieldError("unexpected x1 power in the j0 = 19 residual");
        }
    }
    return parts;
}

}  // namespace sym

const X1ConditionTable& X1ConditionTable::instance() {
    static X1ConditionTable table;
    return table;
}

X1ConditionTable::X1ConditionTable() {
    sym::R19Parts parts = sym::derive_r19();
    auto convert = [](const sym::Poly& p) {
        std::vector<Mono> out;
        for (const auto& m : p) {
            Mono mm{};
            for (int i = 0; i < 5; ++i) mm.e[i] = m[i];
            out.push_back(mm);
        }
        return out;
    };
    rhs_ = convert(parts.rhs);
    lin_ = convert(parts.lin);
    quad_ = convert(parts.quad);
    if (lin_.size() != 8 || quad_.size() != 8 || rhs_.empty())
        throw FieldError("j0 = 19 derivation produced an unexpected shape");
}

namespace {

fe eval_mono_prefix(const Field& f, const X1ConditionTable::Mono& m, fe x21,
                    fe x17, fe x13, fe x9) {
    fe acc = f.pw(x21, m.e[0]);
    auto fold = [&](fe xv, std::uint16_t e) {
        if (!e) return;
        acc = f.mul(acc, f.pw(xv, e));
    };
    fold(x17, m.e[1]);
    fold(x13, m.e[2]);
    fold(x9, m.e[3]);
    return acc;
}

void build_buckets(const Field& f, const std::vector<X1ConditionTable::Mono>& ms,
                   fe x21, fe x17, fe x13, fe x9,
                   std::vector<X1ConditionTable::Prefix::Bucket>& out) {
    for (const auto& m : ms) {
        fe c = eval_mono_prefix(f, m, x21, x17, x13, x9);
        if (!c) continue;
        bool merged = false;
        for (auto& b : out)
            if (b.e5 == m.e[4]) {
                b.coeff ^= c;
                merged = true;
                break;
            }
        if (!merged) out.push_back({c, m.e[4]});
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const auto& b) { return b.coeff == 0; }),
              out.end());
}

}  // namespace

X1ConditionTable::Prefix X1ConditionTable::prefix(const Field& f, fe x21,
                                                  fe x17, fe x13, fe x9) const {
    Prefix pre;
    build_buckets(f, quad_, x21, x17, x13, x9, pre.quad);
    build_buckets(f, lin_, x21, x17, x13, x9, pre.lin);
    build_buckets(f, rhs_, x21, x17, x13, x9, pre.rhs);
    return pre;
}

X1Equation X1ConditionTable::at(const Field& f, const Prefix& pre, fe x5) const {
    auto fold = [&](const std::vector<Prefix::Bucket>& bs) {
        fe acc = 0;
        for (const auto& b : bs)
            acc ^= b.e5 ? f.mul(b.coeff, f.pw(x5, b.e5)) : b.coeff;
        return acc;
    };
    X1Equation eq;
    eq.quad = fold(pre.quad);
    eq.lin = fold(pre.lin);
    eq.rhs = fold(pre.rhs);
    return eq;
}

X1Equation X1ConditionTable::at(const Field& f, fe x21, fe x17, fe x13, fe x9,
                                fe x5) const {
    return at(f, prefix(f, x21, x17, x13, x9), x5);
}

X1Solutions solve_x1_exact(const Field& f, const X1Equation& eq) {
    X1Solutions s;
    if (eq.lin == 0 && eq.quad == 0) {
        s.kind = eq.rhs == 0 ? X1Solutions::All : X1Solutions::Empty;
        return s;
    }
    if (eq.lin != 0 && eq.quad != 0) {
        // quad u^2 + lin u = rhs; u = (lin/quad) w turns it into
        // w^2 + w = rhs * quad / lin^2
        fe ratio = f.div(eq.lin, eq.quad);
        fe c = f.div(f.mul(eq.rhs, eq.quad), f.sq(eq.lin));
        if (f.trace(c)) {
            s.kind = X1Solutions::Empty;
            return s;
        }
        fe w = f.as_root_raw(c);
        fe u1 = f.mul(ratio, w);
        fe u2 = fe(u1 ^ ratio);
        fe a = f.frob_pow(u1, 2);  // x1 = u^(2^-10) = u^4
        fe b = f.frob_pow(u2, 2);
        if (b < a) std::swap(a, b);
        s.kind = X1Solutions::Pair;
        s.first = a;
        s.second = b;
        return s;
    }
    // exactly one coefficient vanishes: a unique root (never observed; the
    // two coefficients vanish together on every sampled frame)
    fe u = eq.quad ? f.sqrt(f.div(eq.rhs, eq.quad)) : f.div(eq.rhs, eq.lin);
    s.kind = X1Solutions::Single;
    s.first = f.frob_pow(u, 2);
    return s;
}

X1Solutions solve_x1_exact(const Field& f, fe x21, fe x17, fe x13, fe x9,
                           fe x5) {
    return solve_x1_exact(
        f, X1ConditionTable::instance().at(f, x21, x17, x13, x9, x5));
}

// --- fast completion core (loop-driven; tested equal to the descent path) ---

namespace {

inline fe eta_at(const Field& f, const fe* x, int j, int skip_j2 = -1) {
    fe acc = 0;
    int lo = j <= 22 ? 0 : (j - 21) / 2;
    int hi = j / 2 < 22 ? j / 2 : 22;
    for (int j2 = lo; j2 <= hi; ++j2) {
        if (j2 == skip_j2) continue;
        acc ^= f.mul(x[j - 2 * j2], f.sq(x[j2]));
    }
    if (j == 65) acc ^= 1;
    return acc;
}

inline fe cond_at(const Field& f, const fe* x, int j0) {
    fe acc = 0;
    int m = 0;
    for (int j = j0; j <= 66; j <<= 1, ++m)
        acc ^= f.frob_pow(eta_at(f, x, j), -m);
    return acc;
}

// Derives x12, x10, x8, x6, x4, x2 in place and returns v = x0^4 + x0.
// Requires x[0] == 0 on entry and all slots above 12 plus the odd slots set.
inline fe fast_descent_v(const Field& f, fe* x, fe i21, fe i21sq,
                         fe sqrt_eta66) {
    x[12] = f.sqrt(f.mul(eta_at(f, x, 45, 12), i21));
    x[10] = f.sqrt(f.mul(eta_at(f, x, 41, 10), i21));
    x[8] = f.sqrt(f.mul(eta_at(f, x, 37, 8), i21));
    x[6] = f.sqrt(f.mul(fe(eta_at(f, x, 33, 6) ^ sqrt_eta66), i21));
    x[4] = f.sqrt(
        f.mul(fe(eta_at(f, x, 29, 4) ^ f.sqrt(eta_at(f, x, 58))), i21));
    x[2] = f.sqrt(
        f.mul(fe(eta_at(f, x, 25, 2) ^ f.sqrt(eta_at(f, x, 50))), i21));
    fe s21 = eta_at(f, x, 21, 0);
    fe s42 = eta_at(f, x, 42);
    return f.mul(fe(f.sq(s21) ^ s42), i21sq);
}

constexpr int kResidualOrder[] = {17, 15, 13, 11, 9, 7, 5, 3, 1, 27};

Stage residual_stage(int j0) {
    switch (j0) {
        case 17: return Stage::J17;
        case 15: return Stage::J15;
        case 13: return Stage::J13;
        case 11: return Stage::J11;
        case 9: return Stage::J9;
        case 7: return Stage::J7;
        case 5: return Stage::J5;
        case 3: return Stage::J3;
        case 1: return Stage::J1;
        case 27: return Stage::J27;
        case 23: return Stage::J23;
        case 31: return Stage::J31;
        case 35: return Stage::J35;
        case 39: return Stage::J39;
        case 43: return Stage::J43;
        default: return Stage::GateDegree;
    }
}

// Everything after the x5/x1 choice; x must hold the cell, x5, x14 and x1
// slots. check_r19 is set when x1 did not come from the quadratic.
inline Stage fast_stages(const Field& f, fe* x, fe i21, fe i21sq,
                         fe sqrt_eta66, bool check_r19, fe* v_out) {
    x[0] = 0;
    fe v = fast_descent_v(f, x, i21, i21sq, sqrt_eta66);
    if (v_out) *v_out = v;
    if (check_r19) {
        if (cond_at(f, x, 19) ^ f.mul(x[19], f.sqrt(v))) return Stage::J19;
    }
    fe x0 = f.x0_solution(v);
    if (x0 == 0xFFFF) return Stage::X0;
    x[0] = x0;
    for (int j0 : kResidualOrder)
        if (cond_at(f, x, j0)) return residual_stage(j0);
    return Stage::Accepted;
}

}  // namespace

std::vector<fe> j19_solution_set_brute(const Field& f, fe x21, fe x17, fe x13,
                                       fe x9, fe x5) {
    if (!x21) throw FieldError("the brute oracle needs x21 != 0");
    fe x[23] = {};
    XPoly sel = selmer_polynomial(f, XiTuple{x21, x17, x13, x9, x5, 0});
    for (int j = 0; j <= 22; ++j) x[j] = sel.c[j];
    ClosedForms cf = closed_forms(f, XiTuple{x21, x17, x13, x9, x5, 0});
    x[22] = cf.x22;
    x[20] = cf.x20;
    x[18] = cf.x18;
    x[16] = cf.x16;
    x[14] = cf.x14;
    fe i21 = f.inv(x21);
    fe i21sq = f.sq(i21);
    fe se66 = f.sqrt(f.pw(cf.x22, 3));
    std::vector<fe> out;
    for (int x1 = 0; x1 < kFieldSize; ++x1) {
        x[1] = fe(x1);
        x[0] = 0;
        fe v = fast_descent_v(f, x, i21, i21sq, se66);
        if (fe(cond_at(f, x, 19) ^ f.mul(x[19], f.sqrt(v))) == 0)
            out.push_back(fe(x1));
    }
    return out;
}

fe j19_residual(const Field& f, const XiTuple& xi) {
    if (!xi.x21) throw FieldError("j19_residual needs x21 != 0");
    fe x[23] = {};
    XPoly sel = selmer_polynomial(f, xi);
    for (int j = 0; j <= 22; ++j) x[j] = sel.c[j];
    x[13] = xi.x13;
    x[9] = xi.x9;
    x[5] = xi.x5;
    x[1] = xi.x1;
    ClosedForms cf = closed_forms(f, xi);
    x[22] = cf.x22;
    x[20] = cf.x20;
    x[18] = cf.x18;
    x[16] = cf.x16;
    x[14] = cf.x14;
    fe i21 = f.inv(xi.x21);
    fe v = fast_descent_v(f, x, i21, f.sq(i21), f.sqrt(f.pw(cf.x22, 3)));
    return fe(cond_at(f, x, 19) ^ f.mul(x[19], f.sqrt(v)));
}

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Accepted: return "accepted";
        case Stage::GateDegree: return "gate:x21=0";
        case Stage::Gate13: return "gate:x13";
        case Stage::J43: return "j0=43";
        case Stage::J39: return "j0=39";
        case Stage::J35: return "j0=35";
        case Stage::J31: return "j0=31";
        case Stage::J27: return "j0=27";
        case Stage::J23: return "j0=23";
        case Stage::J19: return "j0=19";
        case Stage::X0: return "x0";
        case Stage::J17: return "j0=17";
        case Stage::J15: return "j0=15";
        case Stage::J13: return "j0=13";
        case Stage::J11: return "j0=11";
        case Stage::J9: return "j0=9";
        case Stage::J7: return "j0=7";
        case Stage::J5: return "j0=5";
        case Stage::J3: return "j0=3";
        case Stage::J1: return "j0=1";
        case Stage::Y0: return "y0";
    }
    return "?";
}

CandidateResult complete_candidate(const Field& f, const XiTuple& xi,
                                   bool expand) {
    CandidateResult r;
    r.xi = xi;
    if (!xi.x21) {
        r.stage = Stage::GateDegree;
        return r;
    }
    if (f.frob_pow(xi.x13, 4) != xi.x13) {
        r.stage = Stage::Gate13;
        return r;
    }
    DescentState st = descent_begin(f, xi);
    run_descent(f, st, 23);
    if (st.obstruction) {
        r.stage = residual_stage(st.obstruction);
        return r;
    }
    fe i21 = f.inv(xi.x21);
    fe c0 = partial_condition(f, st.x, st.known, 21, 0, 0);
    r.v = f.mul(f.sq(c0), f.sq(i21));
    r.v_known = true;
    fe r19 = fe(partial_condition(f, st.x, st.known, 19, 0, 0) ^
                f.mul(st.x[19], f.sqrt(r.v)));
    if (r19) {
        r.stage = Stage::J19;
        return r;
    }
    derive_coefficient(f, st, 21);
    if (st.obstruction) {
        r.stage = Stage::X0;
        return r;
    }
    for (int j0 : {17, 15, 13, 11, 9, 7, 5, 3, 1})
        if (partial_condition(f, st.x, st.known, j0, -1, 0)) {
            r.stage = residual_stage(j0);
            return r;
        }
    XPoly x;
    for (int j = 0; j <= 22; ++j) x.c[j] = st.x[j];
    EtaSeries eta = eta_from_x(f, x);
    auto y = recover_y(f, eta);
    if (!y) {
        r.stage = Stage::Y0;
        return r;
    }
    r.stage = Stage::Accepted;
    r.point = MinimalPoint{x, *y};
    r.x0 = st.x[0];
    r.y0 = y->c[0];
    r.multiplicity = 8;
    if (!on_curve(f, r.point))
        throw FieldError("accepted candidate fails the curve identity");
    if (expand) {
        for (int cv = 0; cv < kFieldSize; ++cv) {
            fe c = fe(cv);
            if (f.frob_pow(c, 2) != c) continue;  // quaternion needs c^4 = c
            fe c3 = f.mul(f.sq(c), c);
            fe d0 = f.as_root_raw(c3);
            for (fe d : {d0, fe(d0 ^ 1)}) {
                MinimalPoint q = r.point;
                q.x.c[0] ^= f.sq(c);
                for (int j = 0; j <= 22; ++j)
                    q.y.c[j] ^= f.mul(c, r.point.x.c[j]);
                q.y.c[0] ^= d;
                if (!on_curve(f, q))
                    throw FieldError("quaternion completion left the curve");
                r.quaternion_orbit.push_back(q);
            }
        }
        if (r.quaternion_orbit.size() != 8)
            throw FieldError("quaternion orbit has the wrong size");
    }
    return r;
}

// --- cell geometry -----------------------------------------------------------

std::uint32_t cell_index(const Cell& c) {
    return ((std::uint32_t(c.coset) * 2 + c.h) * 16 + c.x13i) * 4096 + c.x9;
}

Cell cell_of_index(std::uint32_t idx) {
    Cell c;
    c.x9 = fe(idx & 0xFFF);
    idx >>= 12;
    c.x13i = std::uint8_t(idx % 16);
    idx /= 16;
    c.h = std::uint8_t(idx % 2);
    c.coset = std::uint8_t(idx / 2);
    return c;
}

CellGeometry::CellGeometry(const Field& f) : f_(f) {
    gf16_lookup_.fill(-1);
    int n16 = 0;
    for (int x = 0; x < kFieldSize; ++x)
        if (f.frob_pow(fe(x), 4) == fe(x)) {
            gf16_[n16] = fe(x);
            gf16_lookup_[x] = std::int8_t(n16);
            ++n16;
        }
    if (n16 != 16) throw FieldError("GF(16) enumeration failed");

    // mu_195-coset representatives: coset id = log(x) mod 21; the canonical
    // representative is the smallest element of the coset inside GF(64)*.
    fe rep_by_id[21];
    for (auto& r : rep_by_id) r = 0;
    for (int x = 1; x < kFieldSize; ++x) {
        if (f.frob_pow(fe(x), 6) != fe(x)) continue;  // not in GF(64)
        int id = f.log_of(fe(x)) % 21;
        if (!rep_by_id[id] || fe(x) < rep_by_id[id]) rep_by_id[id] = fe(x);
    }
    std::array<fe, 21> reps;
    for (int i = 0; i < 21; ++i) reps[i] = rep_by_id[i];
    std::sort(reps.begin(), reps.end());
    reps21_ = reps;
    coset_lookup_.fill(-1);
    for (int x = 1; x < kFieldSize; ++x) {
        fe rep = rep_by_id[f.log_of(fe(x)) % 21];
        auto it = std::find(reps21_.begin(), reps21_.end(), rep);
        coset_lookup_[x] = std::int8_t(it - reps21_.begin());
    }

    // Residual-symmetry tables: for each (coset, m) the unique (a, alpha)
    // recanonicalizing scalar and, per x17-class, the two translations.
    for (int ci = 0; ci < 21; ++ci) {
        fe x21 = reps21_[ci];
        for (int m = 0; m < 12; ++m) {
            FrobStep& st = steps_[ci][m];
            fe x21m = f.frob_pow(x21, m);
            fe rep2 = rep_by_id[f.log_of(x21m) % 21];
            st.coset2 = std::uint8_t(
                std::find(reps21_.begin(), reps21_.end(), rep2) -
                reps21_.begin());
            fe s = f.mul(rep2, f.inv(x21m));
            if (f.pw(s, 195) != 1)
                throw FieldError("recanonicalization scalar outside mu_195");
            fe alpha = f.pw(s, 130);  // mu_3 component
            fe a = f.pw(s, 2046);     // mu_65 component, a^21 * alpha = s
            if (f.mul(alpha, f.pw(a, 21)) != s || f.pw(a, 65) != 1 ||
                f.pw(alpha, 3) != 1)
                throw FieldError("scalar decomposition failed");
            st.s13 = f.mul(alpha, f.pw(a, 13));
            st.s9 = f.mul(alpha, f.pw(a, 9));
            st.s5 = f.mul(alpha, f.pw(a, 5));
            st.s1 = f.mul(alpha, a);
            st.x16c = f.pw(rep2, 16);
            fe s17 = f.mul(alpha, f.pw(a, 17));
            fe irep7 = f.inv(f.pw(rep2, 7));
            for (int h = 0; h < 2; ++h) {
                fe x17src = h ? f.mul(f.pw(x21, 7), f.a6()) : fe(0);
                fe x17fs = f.mul(s17, f.frob_pow(x17src, m));
                fe w = f.mul(x17fs, irep7);
                int h2 = f.trace(w);
                st.h2[h] = std::uint8_t(h2);
                fe beta0 = f.as_root_raw(fe(w ^ (h2 ? f.a6() : fe(0))));
                if (beta0 == 0xFFFF)
                    throw FieldError("x17 class normalization unsolvable");
                for (int bc = 0; bc < 2; ++bc) {
                    fe beta = fe(beta0 ^ fe(bc));
                    fe b = f.sqrt(f.mul(beta, f.pw(rep2, 3)));
                    st.b[h][bc] = b;
                    st.b2[h][bc] = f.sq(b);
                    st.b4[h][bc] = f.sq(st.b2[h][bc]);
                    st.b8[h][bc] = f.sq(st.b4[h][bc]);
                    st.b16[h][bc] = f.sq(st.b8[h][bc]);
                }
            }
        }
    }
}

int CellGeometry::coset_index_of(fe rep) const {
    auto it = std::find(reps21_.begin(), reps21_.end(), rep);
    return it == reps21_.end() ? -1 : int(it - reps21_.begin());
}

int CellGeometry::gf16_index_of(fe x) const { return gf16_lookup_[x]; }

fe CellGeometry::x17_of(const Cell& c) const {
    return c.h ? f_.mul(f_.pw(reps21_[c.coset], 7), f_.a6()) : fe(0);
}

XiTuple CellGeometry::tuple_of(const Cell& c, fe x5, fe x1) const {
    return XiTuple{x21_of(c), x17_of(c), x13_of(c), c.x9, x5, x1};
}

Cell CellGeometry::cell_of_tuple(const XiTuple& xi, XiTuple* canonical) const {
    const Field& f = f_;
    if (!xi.x21) throw FieldError("cell_of_tuple needs x21 != 0");
    if (f.frob_pow(xi.x13, 4) != xi.x13)
        throw FieldError("cell_of_tuple needs x13 in GF(16)");
    int idx = coset_lookup_[xi.x21];
    fe rep = reps21_[idx];
    fe s = f.mul(rep, f.inv(xi.x21));
    fe alpha = f.pw(s, 130);
    fe a = f.pw(s, 2046);
    XiTuple t1 = xi_apply(f, xi, a, 0, alpha, 0);
    if (t1.x21 != rep) throw FieldError("x21 recanonicalization failed");
    fe irep7 = f.inv(f.pw(rep, 7));
    fe w = f.mul(t1.x17, irep7);
    int h = f.trace(w);
    fe beta = f.as_root_raw(fe(w ^ (h ? f.a6() : fe(0))));
    fe b = f.sqrt(f.mul(beta, f.pw(rep, 3)));
    XiTuple t2 = xi_apply(f, t1, 1, b, 1, 0);
    fe want17 = h ? f.mul(f.pw(rep, 7), f.a6()) : fe(0);
    if (t2.x17 != want17) throw FieldError("x17 recanonicalization failed");
    Cell c;
    c.coset = std::uint8_t(idx);
    c.h = std::uint8_t(h);
    c.x13i = std::uint8_t(gf16_index_of(t2.x13));
    c.x9 = t2.x9;
    if (canonical) *canonical = t2;
    return c;
}

std::array<std::uint32_t, 24> CellGeometry::orbit_images(const Cell& c) const {
    const Field& f = f_;
    std::array<std::uint32_t, 24> out;
    fe x13 = gf16_[c.x13i];
    int k = 0;
    for (int m = 0; m < 12; ++m) {
        const FrobStep& st = steps_[c.coset][m];
        fe x13n = f.mul(st.s13, f.frob_pow(x13, m));
        int x13ni = gf16_lookup_[x13n];
        if (x13ni < 0) throw FieldError("x13 left GF(16) under symmetry");
        fe x9base = f.mul(st.s9, f.frob_pow(c.x9, m));
        for (int bc = 0; bc < 2; ++bc) {
            fe x9n = fe(x9base ^ f.mul(st.b4[c.h][bc], x13n) ^
                        f.mul(st.b2[c.h][bc], st.x16c));
            Cell img;
            img.coset = st.coset2;
            img.h = st.h2[c.h];
            img.x13i = std::uint8_t(x13ni);
            img.x9 = x9n;
            out[k++] = cell_index(img);
        }
    }
    return out;
}

std::pair<std::uint32_t, int> CellGeometry::orbit_min_and_weight(
    const Cell& c) const {
    auto imgs = orbit_images(c);
    std::sort(imgs.begin(), imgs.end());
    int distinct = 1;
    for (int i = 1; i < 24; ++i)
        if (imgs[i] != imgs[i - 1]) ++distinct;
    return {imgs[0], distinct};
}

bool CellGeometry::is_canonical(const Cell& c) const {
    std::uint32_t self = cell_index(c);
    for (std::uint32_t img : orbit_images(c))
        if (img < self) return false;
    return true;
}

// --- filters ------------------------------------------------------------------

bool SearchFilter::is_total() const {
    return coset_lo == 0 && coset_hi == 20 && h_lo == 0 && h_hi == 1 &&
           x13_lo == 0 && x13_hi == 15 && x9_lo == 0 && x9_hi == 0xFFF;
}

bool SearchFilter::contains(const Cell& c) const {
    return c.coset >= coset_lo && c.coset <= coset_hi && c.h >= h_lo &&
           c.h <= h_hi && c.x13i >= x13_lo && c.x13i <= x13_hi &&
           c.x9 >= x9_lo && c.x9 <= x9_hi;
}

std::string SearchFilter::to_string() const {
    std::ostringstream os;
    os << "coset=" << coset_lo << "-" << coset_hi << ";h=" << h_lo << "-"
       << h_hi << ";x13=" << x13_lo << "-" << x13_hi
       << ";x9=" << io::fe_hex(x9_lo) << "-" << io::fe_hex(x9_hi);
    return os.str();
}

SearchFilter SearchFilter::parse(const std::string& s) {
    SearchFilter flt;
    if (s.empty()) return flt;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t semi = s.find(';', pos);
        std::string part = s.substr(
            pos, semi == std::string::npos ? std::string::npos : semi - pos);
        pos = semi == std::string::npos ? s.size() : semi + 1;
        std::size_t eq = part.find('=');
        if (eq == std::string::npos)
            throw FieldError("filter: expected key=range in '" + part + "'");
        std::string key = part.substr(0, eq);
        std::string range = part.substr(eq + 1);
        std::size_t dash = range.find('-');
        std::string lo = dash == std::string::npos ? range : range.substr(0, dash);
        std::string hi = dash == std::string::npos ? range : range.substr(dash + 1);
        try {
            if (key == "coset") {
                flt.coset_lo = std::stoi(lo);
                flt.coset_hi = std::stoi(hi);
            } else if (key == "h") {
                flt.h_lo = std::stoi(lo);
                flt.h_hi = std::stoi(hi);
            } else if (key == "x13") {
                flt.x13_lo = std::stoi(lo);
                flt.x13_hi = std::stoi(hi);
            } else if (key == "x9") {
                flt.x9_lo = io::parse_fe(lo);
                flt.x9_hi = io::parse_fe(hi);
            } else {
                throw FieldError("filter: unknown key '" + key + "'");
            }
        } catch (const FieldError&) {
            throw;
        } catch (const std::exception& e) {
            throw FieldError("filter: bad range '" + part + "': " + e.what());
        }
    }
    if (flt.coset_lo < 0 || flt.coset_hi > 20 || flt.coset_lo > flt.coset_hi ||
        flt.h_lo < 0 || flt.h_hi > 1 || flt.h_lo > flt.h_hi || flt.x13_lo < 0 ||
        flt.x13_hi > 15 || flt.x13_lo > flt.x13_hi || flt.x9_lo > flt.x9_hi)
        throw FieldError("filter: ranges out of bounds");
    return flt;
}

std::vector<CellRec> canonical_tuples(const Field& f, const CellGeometry& geo,
                                      const SearchFilter& filter) {
    (void)f;
    std::vector<CellRec> out;
    for (int ci = filter.coset_lo; ci <= filter.coset_hi; ++ci)
        for (int h = filter.h_lo; h <= filter.h_hi; ++h)
            for (int xi = filter.x13_lo; xi <= filter.x13_hi; ++xi)
                for (int x9 = filter.x9_lo; x9 <= filter.x9_hi; ++x9) {
                    Cell c{std::uint8_t(ci), std::uint8_t(h), std::uint8_t(xi),
                           fe(x9)};
                    auto [mn, weight] = geo.orbit_min_and_weight(c);
                    if (mn == cell_index(c))
                        out.push_back(CellRec{mn, std::uint8_t(weight)});
                }
    return out;
}

void SearchStats::merge(const SearchStats& o) {
    cells_searched += o.cells_searched;
    cells_from_checkpoint += o.cells_from_checkpoint;
    weight_sum += o.weight_sum;
    x5_pairs += o.x5_pairs;
    empty_a0 += o.empty_a0;
    all_branch += o.all_branch;
    single_solutions += o.single_solutions;
    trace_reject += o.trace_reject;
    candidates += o.candidates;
    x0_reject += o.x0_reject;
    residual_reject += o.residual_reject;
    j27_reject += o.j27_reject;
    y0_reject += o.y0_reject;
    accepted += o.accepted;
    shortcut_samples += o.shortcut_samples;
    reference_samples += o.reference_samples;
}

// --- checkpoints ---------------------------------------------------------------

namespace {

std::string survivor_token(const SurvivorRec& r) {
    using io::fe_hex;
    return fe_hex(r.xi.x21) + fe_hex(r.xi.x17) + fe_hex(r.xi.x13) +
           fe_hex(r.xi.x9) + fe_hex(r.xi.x5) + fe_hex(r.xi.x1) + fe_hex(r.x0) +
           fe_hex(r.y0);
}

SurvivorRec parse_survivor_token(const std::string& tok, std::uint32_t cell) {
    if (tok.size() != 24) throw FieldError("bad survivor token: " + tok);
    auto at = [&](int i) {
        return io::parse_fe(std::string_view(tok).substr(std::size_t(i) * 3, 3));
    };
    SurvivorRec r;
    r.cell = cell;
    r.xi = XiTuple{at(0), at(1), at(2), at(3), at(4), at(5)};
    r.x0 = at(6);
    r.y0 = at(7);
    return r;
}

struct Checkpoint {
    std::string path;
    std::unordered_map<std::uint32_t, std::vector<SurvivorRec>> done;
    std::ofstream out;
    std::mutex mu;

    static std::string header_line(const Field& f, const std::string& filter) {
        std::ostringstream os;
        os << "mw128-ckpt v1 modulus=" << std::hex << f.modulus() << std::dec
           << " a6=" << io::fe_hex(f.a6()) << " version=" << io::kVersion
           << " filter=" << filter;
        return os.str();
    }

    void load(const Field& f, const std::string& filter) {
        std::ifstream in(path);
        if (!in) return;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (first) {
                first = false;
                if (line != header_line(f, filter))
                    throw FieldError(
                        "checkpoint header mismatch (modulus, a6, version or "
                        "filter changed): " +
                        path);
                continue;
            }
            if (line.empty()) continue;
            std::size_t hpos = line.rfind(" H ");
            if (hpos == std::string::npos) continue;  // interrupted tail write
            std::string payload = line.substr(0, hpos);
            std::string sum = line.substr(hpos + 3);
            if (io::hex_u64(io::fnv1a64(payload)) != sum)
                throw FieldError("checkpoint corruption detected: " + path);
            std::istringstream ss(payload);
            std::string tag;
            std::uint32_t idx;
            std::size_t n;
            ss >> tag >> idx >> n;
            if (tag != "C" || !ss)
                throw FieldError("checkpoint corruption: bad record");
            std::vector<SurvivorRec> recs;
            for (std::size_t i = 0; i < n; ++i) {
                std::string tok;
                ss >> tok;
                if (!ss) throw FieldError("checkpoint corruption: short record");
                recs.push_back(parse_survivor_token(tok, idx));
            }
            done[idx] = std::move(recs);
        }
    }

    void open_for_append(const Field& f, const std::string& filter) {
        bool fresh = done.empty();
        out.open(path, fresh ? (std::ios::out | std::ios::trunc)
                             : (std::ios::out | std::ios::app));
        if (!out) throw FieldError("cannot open checkpoint " + path);
        if (fresh) out << header_line(f, filter) << "\n" << std::flush;
    }

    void append(std::uint32_t idx, const std::vector<SurvivorRec>& recs) {
        std::ostringstream ss;
        ss << "C " << idx << " " << recs.size();
        for (const auto& r : recs) ss << " " << survivor_token(r);
        std::string payload = ss.str();
        std::lock_guard<std::mutex> lk(mu);
        out << payload << " H " << io::hex_u64(io::fnv1a64(payload)) << "\n";
        out.flush();
    }
};

// --- per-cell engine ---

struct CellConstants {
    fe xbase[23];
    fe x14base;
    fe i21, i21sq, sqrt_eta66;
    X1ConditionTable::Prefix x1pre;
    QuadraticPrefix qpre;  // printed-form coefficients, sampled cross-check
};

CellConstants make_cell_constants(const Field& f, const CellGeometry& geo,
                                  const Cell& cell) {
    CellConstants cc{};
    fe x21 = geo.x21_of(cell);
    fe x17 = geo.x17_of(cell);
    fe x13 = geo.x13_of(cell);
    fe x9 = cell.x9;
    XiTuple xi{x21, x17, x13, x9, 0, 0};
    ClosedForms cf = closed_forms(f, xi);
    for (auto& v : cc.xbase) v = 0;
    cc.xbase[21] = x21;
    cc.xbase[19] = cf.x19;
    cc.xbase[17] = x17;
    cc.xbase[13] = x13;
    cc.xbase[11] = cf.x11;
    cc.xbase[9] = x9;
    cc.xbase[3] = cf.x3;
    cc.xbase[22] = cf.x22;
    cc.xbase[20] = cf.x20;
    cc.xbase[18] = cf.x18;
    cc.xbase[16] = cf.x16;
    cc.x14base = cf.x14;  // at x5 = 0; the only x5 term is x21^-1 x5^(1/2)
    cc.i21 = f.inv(x21);
    cc.i21sq = f.sq(cc.i21);
    cc.sqrt_eta66 = f.sqrt(f.pw(cf.x22, 3));
    cc.x1pre = X1ConditionTable::instance().prefix(f, x21, x17, x13, x9);
    cc.qpre = quadratic_prefix(f, x21, x13, x9);
    return cc;
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Full x1 sweep collecting the j0 = 19 residual solution set (the oracle side
// of the shortcut soundness check).
std::vector<fe> brute_x1_set(const Field& f, const CellConstants& cc, fe x5) {
    std::vector<fe> out;
    fe x[23];
    std::copy(std::begin(cc.xbase), std::end(cc.xbase), x);
    x[5] = x5;
    x[14] = fe(cc.x14base ^ f.mul(cc.i21, f.sqrt(x5)));
    for (int x1 = 0; x1 < kFieldSize; ++x1) {
        x[1] = fe(x1);
        x[0] = 0;
        fe v = fast_descent_v(f, x, cc.i21, cc.i21sq, cc.sqrt_eta66);
        if (fe(cond_at(f, x, 19) ^ f.mul(x[19], f.sqrt(v))) == 0)
            out.push_back(fe(x1));
    }
    return out;
}

void search_cell(const Field& f, const CellGeometry& geo, const Cell& cell,
                 std::uint64_t sample_mask, SearchStats& stats,
                 std::vector<SurvivorRec>& out) {
    CellConstants cc = make_cell_constants(f, geo, cell);
    std::uint32_t idx = cell_index(cell);
    fe x[23];
    std::copy(std::begin(cc.xbase), std::end(cc.xbase), x);

    auto try_candidate = [&](fe x5, fe x1, bool check_r19) {
        ++stats.candidates;
        x[1] = x1;
        fe v = 0;
        Stage st =
            fast_stages(f, x, cc.i21, cc.i21sq, cc.sqrt_eta66, check_r19, &v);
        switch (st) {
            case Stage::Accepted: break;
            case Stage::X0: ++stats.x0_reject; return;
            case Stage::J27: ++stats.j27_reject; return;
            case Stage::J19: return;  // all-branch sweep residual miss
            default: ++stats.residual_reject; return;
        }
        XPoly xp;
        for (int j = 0; j <= 22; ++j) xp.c[j] = x[j];
        EtaSeries eta = eta_from_x(f, xp, EtaRoute::Convolution);
        auto y = recover_y(f, eta);
        if (!y) {
            ++stats.y0_reject;
            return;
        }
        SurvivorRec rec;
        rec.cell = idx;
        rec.xi = XiTuple{x[21], x[17], x[13], x[9], x5, x1};
        rec.x0 = x[0];
        rec.y0 = y->c[0];
        out.push_back(rec);
        ++stats.accepted;
    };

    const X1ConditionTable& table = X1ConditionTable::instance();
    for (int x5v = 0; x5v < kFieldSize; ++x5v) {
        fe x5 = fe(x5v);
        x[5] = x5;
        x[14] = fe(cc.x14base ^ f.mul(cc.i21, f.sqrt(x5)));
        X1Equation eq = table.at(f, cc.x1pre, x5);
        X1Solutions sol = solve_x1_exact(f, eq);
        ++stats.x5_pairs;

        if ((mix64((std::uint64_t(idx) << 12) | std::uint64_t(x5v)) &
             sample_mask) == 0) {
            // In-run shortcut soundness spot check: the equation's solution
            // set must equal the brute-forced j0 = 19 residual set.
            ++stats.shortcut_samples;
            std::vector<fe> brute = brute_x1_set(f, cc, x5);
            std::vector<fe> quick;
            if (sol.kind == X1Solutions::Pair)
                quick = {sol.first, sol.second};
            else if (sol.kind == X1Solutions::Single)
                quick = {sol.first};
            else if (sol.kind == X1Solutions::All)
                for (int x1 = 0; x1 < kFieldSize; ++x1) quick.push_back(fe(x1));
            if (quick != brute)
                throw FieldError("shortcut soundness violation in cell " +
                                 std::to_string(idx) + " x5 " + io::fe_hex(x5));
            // On the x17 = 0 slice the printed A/B coefficients must agree
            // once the dropped x13^7 x21^32 monomial is restored.
            if (cell.h == 0) {
                QuadraticData q = quadratic_AB(f, cc.qpre, x5);
                q.B ^= f.mul(f.pw(x[13], 7), f.pw(x[21], 32));
                X1Solutions printed = solve_x1(f, q);
                if (printed.kind != sol.kind || printed.first != sol.first ||
                    printed.second != sol.second)
                    throw FieldError(
                        "printed quadratic deviates from the exact equation "
                        "on the x17 = 0 slice, cell " + std::to_string(idx));
            }
            // Cross-check one candidate against the reference path.
            ++stats.reference_samples;
            fe probe = brute.empty() ? fe(x5v & 0xFFF) : brute.front();
            XiTuple xi = geo.tuple_of(cell, x5, probe);
            CandidateResult ref = complete_candidate(f, xi);
            fe xx[23];
            std::copy(std::begin(cc.xbase), std::end(cc.xbase), xx);
            xx[5] = x5;
            xx[14] = x[14];
            xx[1] = probe;
            Stage fast = fast_stages(f, xx, cc.i21, cc.i21sq, cc.sqrt_eta66,
                                     true, nullptr);
            bool fast_accept = fast == Stage::Accepted;
            if (fast_accept) {
                XPoly xp;
                for (int j = 0; j <= 22; ++j) xp.c[j] = xx[j];
                fast_accept = recover_y(f, eta_from_x(f, xp)).has_value();
            }
            if (fast_accept != (ref.stage == Stage::Accepted))
                throw FieldError("fast/reference completion mismatch in cell " +
                                 std::to_string(idx));
        }

        switch (sol.kind) {
            case X1Solutions::Empty:
                if (eq.lin == 0 && eq.quad == 0)
                    ++stats.empty_a0;
                else
                    ++stats.trace_reject;
                break;
            case X1Solutions::Single:
                ++stats.single_solutions;
                try_candidate(x5, sol.first, true);
                break;
            case X1Solutions::Pair:
                try_candidate(x5, sol.first, false);
                try_candidate(x5, sol.second, false);
                break;
            case X1Solutions::All:
                ++stats.all_branch;
                for (int x1 = 0; x1 < kFieldSize; ++x1)
                    try_candidate(x5, fe(x1), true);
                break;
        }
    }
}

}  // namespace

MinimalPoint survivor_point(const Field& f, const SurvivorRec& rec) {
    CandidateResult r = complete_candidate(f, rec.xi);
    if (r.stage != Stage::Accepted)
        throw FieldError("survivor record does not complete: stage " +
                         std::string(stage_name(r.stage)));
    MinimalPoint p = r.point;
    // shift to the recorded (x0, y0) completion
    fe c2 = fe(p.x.c[0] ^ rec.x0);
    fe c = f.sqrt(c2);
    if (f.frob_pow(c, 2) != c)
        throw FieldError("survivor x0 is not a GF(4) shift of the canonical one");
    p.x.c[0] = rec.x0;
    for (int j = 0; j <= 22; ++j) p.y.c[j] ^= f.mul(c, r.point.x.c[j]);
    fe d = fe(p.y.c[0] ^ rec.y0);
    p.y.c[0] = rec.y0;
    fe c3 = f.mul(f.sq(c), c);
    if (fe(f.sq(d) ^ d) != c3)
        throw FieldError("survivor y0 is not a valid quaternion completion");
    if (!on_curve(f, p)) throw FieldError("survivor record is off the curve");
    return p;
}

XiTuple reduce_tuple(const Field& f, const CellGeometry& geo, const XiTuple& xi,
                     Cell* cell_out) {
    bool have = false;
    std::uint32_t best_idx = 0;
    XiTuple best{};
    Cell best_cell{};
    for (int m = 0; m < 12; ++m) {
        XiTuple t1 = xi_apply(f, xi, 1, 0, 1, m);
        XiTuple t2;
        Cell c = geo.cell_of_tuple(t1, &t2);
        for (int bc = 0; bc < 2; ++bc) {
            XiTuple cand = t2;
            Cell cc = c;
            if (bc) {
                fe bstar = f.sqrt(f.pw(t2.x21, 3));
                cand = xi_apply(f, t2, 1, bstar, 1, 0);
                cc.x9 = cand.x9;
            }
            std::uint32_t idx = cell_index(cc);
            if (!have || idx < best_idx) {
                have = true;
                best_idx = idx;
                best = cand;
                best_cell = cc;
            }
        }
    }
    if (cell_out) *cell_out = best_cell;
    return best;
}

void verify_survivor_closure(const Field& f, const CellGeometry& geo,
                             const std::vector<SurvivorRec>& survivors,
                             const SearchFilter& filter,
                             int probes_per_survivor, std::uint64_t seed) {
    std::set<std::uint64_t> present;
    for (const auto& s : survivors)
        present.insert((std::uint64_t(s.cell) << 24) |
                       (std::uint64_t(s.xi.x5) << 12) | s.xi.x1);
    std::vector<fe> mu65 = f.roots_of_unity(65);
    std::vector<fe> mu3 = f.roots_of_unity(3);
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        for (int pr = 0; pr < probes_per_survivor; ++pr) {
            std::uint64_t r = mix64(seed ^ (i * 131 + std::uint64_t(pr)));
            fe a = mu65[r % 65];
            fe b = fe((r >> 7) & 0xFFF);
            fe alpha = mu3[(r >> 19) % 3];
            int m = int((r >> 21) % 12);
            XiTuple img = xi_apply(f, survivors[i].xi, a, b, alpha, m);
            Cell cell;
            XiTuple red = reduce_tuple(f, geo, img, &cell);
            if (!filter.contains(cell)) continue;
            std::uint64_t key = (std::uint64_t(cell_index(cell)) << 24) |
                                (std::uint64_t(red.x5) << 12) | red.x1;
            if (!present.count(key))
                throw FieldError(
                    "survivor closure violated: a symmetry image of an "
                    "accepted point is missing from the survivor set");
        }
    }
}

SearchReport run_search(const Field& f, const SearchConfig& cfg) {
    CellGeometry geo(f);
    SearchReport report;
    report.filter_str = cfg.filter.to_string();
    report.total = cfg.filter.is_total();

    Checkpoint ckpt;
    bool use_ckpt = !cfg.checkpoint_path.empty();
    if (use_ckpt) {
        ckpt.path = cfg.checkpoint_path;
        ckpt.load(f, report.filter_str);
        ckpt.open_for_append(f, report.filter_str);
    }

    // Work unit: one (coset, h, x13) column of 4096 x9 values.
    struct Column {
        int ci, h, x13i;
    };
    std::vector<Column> columns;
    for (int ci = cfg.filter.coset_lo; ci <= cfg.filter.coset_hi; ++ci)
        for (int h = cfg.filter.h_lo; h <= cfg.filter.h_hi; ++h)
            for (int xi = cfg.filter.x13_lo; xi <= cfg.filter.x13_hi; ++xi)
                columns.push_back(Column{ci, h, xi});

    struct ColumnResult {
        std::vector<SurvivorRec> survivors;
        SearchStats stats;
    };
    std::vector<ColumnResult> results(columns.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::uint64_t> done_columns{0};

    int nthreads =
        cfg.threads > 0 ? cfg.threads : int(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;

    auto worker = [&]() {
        for (;;) {
            std::size_t my = next.fetch_add(1);
            if (my >= columns.size()) return;
            const Column& col = columns[my];
            ColumnResult& res = results[my];
            for (int x9 = cfg.filter.x9_lo; x9 <= cfg.filter.x9_hi; ++x9) {
                Cell cell{std::uint8_t(col.ci), std::uint8_t(col.h),
                          std::uint8_t(col.x13i), fe(x9)};
                auto [mn, weight] = geo.orbit_min_and_weight(cell);
                if (mn != cell_index(cell)) continue;  // not canonical
                res.stats.weight_sum += std::uint64_t(weight);
                std::uint32_t idx = cell_index(cell);
                if (use_ckpt) {
                    auto it = ckpt.done.find(idx);
                    if (it != ckpt.done.end()) {
                        ++res.stats.cells_from_checkpoint;
                        ++res.stats.cells_searched;
                        res.survivors.insert(res.survivors.end(),
                                             it->second.begin(),
                                             it->second.end());
                        continue;
                    }
                }
                std::size_t before = res.survivors.size();
                search_cell(f, geo, cell, cfg.sample_mask, res.stats,
                            res.survivors);
                ++res.stats.cells_searched;
                if (use_ckpt) {
                    std::vector<SurvivorRec> recs(
                        res.survivors.begin() + long(before),
                        res.survivors.end());
                    ckpt.append(idx, recs);
                }
            }
            std::uint64_t d = done_columns.fetch_add(1) + 1;
            if (cfg.progress) cfg.progress(d, columns.size());
        }
    };

    std::vector<std::thread> pool;
    for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (auto& res : results) {
        report.stats.merge(res.stats);
        report.survivors.insert(report.survivors.end(), res.survivors.begin(),
                                res.survivors.end());
    }
    return report;
}

}  // namespace mw128
