#include "mw128/selmer.hpp"

#include <algorithm>

namespace mw128 {

XPoly selmer_polynomial(const Field& f, const XiTuple& xi) {
    XPoly p;
    p.c[21] = xi.x21;
    p.c[19] = f.pw(xi.x21, 4);
    p.c[17] = xi.x17;
    p.c[13] = xi.x13;
    p.c[11] = f.pw(xi.x21, 16);
    p.c[9] = xi.x9;
    p.c[5] = xi.x5;
    p.c[3] = f.pw(xi.x17, 4);
    p.c[1] = xi.x1;
    return p;
}

XiTuple xi_of(const XPoly& x) {
    return XiTuple{x.c[21], x.c[17], x.c[13], x.c[9], x.c[5], x.c[1]};
}

bool is_selmer_member(const Field& f, const XiTuple& xi) {
    return f.frob_pow(xi.x13, 4) == xi.x13;
}

XiTuple xi_apply(const Field& f, const XiTuple& xi, fe a, fe b, fe alpha, int m) {
    XPoly p = selmer_polynomial(f, xi);
    auto q = poly_subst(f, p.c, a, b);
    for (auto& c : q) c = f.mul(alpha, c);
    q = poly_frob(f, q, m);
    // Mod squares only the odd part survives; the derived odd slots must keep
    // the Selmer shape exactly.
    XiTuple out{q[21], q[17], q[13], q[9], q[5], q[1]};
    if (q[19] != f.pw(out.x21, 4) || q[11] != f.pw(out.x21, 16) ||
        q[3] != f.pw(out.x17, 4) || q[15] != 0 || q[7] != 0)
        throw FieldError("xi_apply: image lost the Selmer shape");
    return out;
}

const std::vector<DescentStep>& descent_schedule() {
    static const std::vector<DescentStep> schedule = {
        {65, 22}, {63, 19}, {61, 20}, {59, 15}, {57, 18}, {55, 11},
        {53, 16}, {51, 7},  {49, 14}, {47, 3},  {45, 12}, {43, -1},
        {41, 10}, {39, -1}, {37, 8},  {35, -1}, {33, 6},  {31, -1},
        {29, 4},  {27, -1}, {25, 2},  {23, -1}, {21, 0},
    };
    return schedule;
}

fe partial_condition(const Field& f, const std::array<fe, 23>& x,
                     std::uint32_t known, int j0, int target, fe trial) {
    auto coeff = [&](int j) -> fe {
        if (j == target) return trial;
        if (!((known >> j) & 1))
            throw FieldError("descent schedule broken: x_" + std::to_string(j) +
                             " consumed before it was derived (j0 = " +
                             std::to_string(j0) + ")");
        return x[j];
    };
    fe acc = 0;
    int m = 0;
    for (long long j = j0; j <= 66; j <<= 1, ++m) {
        fe etaj = 0;
        int lo = j <= 22 ? 0 : (int(j) - 22 + 1) / 2;
        for (int j2 = lo; j2 <= 22 && 2 * j2 <= j; ++j2) {
            int j1 = int(j) - 2 * j2;
            etaj ^= f.mul(coeff(j1), f.sq(coeff(j2)));
        }
        if (j == 65) etaj ^= 1;
        if (j == 0) etaj ^= f.a6();
        acc ^= f.frob_pow(etaj, -m);
    }
    return acc;
}

DescentState descent_begin(const Field& f, const XiTuple& xi) {
    (void)f;
    DescentState st;
    st.x[21] = xi.x21;
    st.x[17] = xi.x17;
    st.x[13] = xi.x13;
    st.x[9] = xi.x9;
    st.x[5] = xi.x5;
    st.x[1] = xi.x1;
    st.known = (1u << 21) | (1u << 17) | (1u << 13) | (1u << 9) | (1u << 5) |
               (1u << 1);
    return st;
}

void derive_coefficient(const Field& f, DescentState& st, int j0) {
    if (st.obstruction) return;
    const auto& schedule = descent_schedule();
    std::size_t idx = st.consumed.size();
    if (idx >= schedule.size() || schedule[idx].j0 != j0)
        throw FieldError("descent steps must be consumed in schedule order");
    const DescentStep& step = schedule[idx];

    if (step.target < 0) {
        fe val = partial_condition(f, st.x, st.known, j0, -1, 0);
        if (val != 0) {
            st.obstruction = j0;
            return;
        }
        st.consumed.push_back(j0);
        return;
    }

    fe c0 = partial_condition(f, st.x, st.known, j0, step.target, 0);
    LinearizedMap L;
    for (int i = 0; i < 12; ++i)
        L.col[i] =
            partial_condition(f, st.x, st.known, j0, step.target, fe(1) << i) ^ c0;
    std::vector<fe> sols = linearized_solve(L, c0);

    if (j0 == 21) {
        // The unknown enters as x21*(x0^2 + x0^(1/2)); squaring the condition
        // with the unknown slot zeroed yields x0^4 + x0 directly.
        fe ix21 = f.inv(st.x[21]);
        st.v = f.mul(f.sq(c0), f.sq(ix21));
        st.v_known = true;
        if (sols.empty()) {
            st.obstruction = 21;
            return;
        }
        if (sols.size() != 4) st.nonsingleton.push_back(j0);
        st.x0_all = sols;
        st.x[0] = sols[0];
        st.known |= 1u;
        st.consumed.push_back(j0);
        return;
    }

    if (sols.empty()) {
        st.obstruction = j0;
        return;
    }
    if (sols.size() != 1) st.nonsingleton.push_back(j0);
    st.x[step.target] = sols[0];
    st.known |= 1u << step.target;
    st.consumed.push_back(j0);
}

void run_descent(const Field& f, DescentState& st, int through_j0) {
    for (const auto& step : descent_schedule()) {
        if (st.obstruction) return;
        if (std::find(st.consumed.begin(), st.consumed.end(), step.j0) !=
            st.consumed.end())
            continue;
        derive_coefficient(f, st, step.j0);
        if (step.j0 == through_j0) return;
    }
}

ClosedForms closed_forms(const Field& f, const XiTuple& xi) {
    fe x21 = xi.x21, x17 = xi.x17, x13 = xi.x13, x9 = xi.x9, x5 = xi.x5;
    if (!x21) throw FieldError("closed forms need x21 != 0");
    fe r21 = f.sqrt(x21), r17 = f.sqrt(x17), r13 = f.sqrt(x13), r9 = f.sqrt(x9),
       r5 = f.sqrt(x5);
    fe i21 = f.inv(x21);
    ClosedForms cf;
    cf.x22 = f.inv(r21);
    cf.x19 = f.pw(x21, 4);
    // x20 = x21^(5/2) + x21^-1 x17^(1/2)
    cf.x20 = f.pw(r21, 5) ^ f.mul(i21, r17);
    cf.x15 = 0;
    // x18 = x21^(11/2) + x21^2 x17^(1/2) + x21^(-3/2) x17 + x21^-1 x13^(1/2)
    cf.x18 = f.pw(r21, 11) ^ f.mul(f.pw(x21, 2), r17) ^
             f.mul(f.pw(r21, -3), x17) ^ f.mul(i21, r13);
    cf.x11 = f.pw(x21, 16);
    // x16 = x21^(17/2) + x21^5 x17^(1/2) + x21^-2 x17^(3/2)
    //       + x21^2 x13^(1/2) + x21^-1 x9^(1/2)
    cf.x16 = f.pw(r21, 17) ^ f.mul(f.pw(x21, 5), r17) ^
             f.mul(f.pw(x21, -2), f.mul(x17, r17)) ^ f.mul(f.pw(x21, 2), r13) ^
             f.mul(i21, r9);
    cf.x7 = 0;
    // x14 = x21^(23/2) + x21^8 x17^(1/2) + x21^(9/2) x17 + x21^(-5/2) x17^2
    //       + x21^-2 x13^(1/2) x17 + x21^5 x13^(1/2) + x21^(-3/2) x13
    //       + x21^2 x9^(1/2) + x21^-1 x5^(1/2)
    cf.x14 = f.pw(r21, 23) ^ f.mul(f.pw(x21, 8), r17) ^
             f.mul(f.pw(r21, 9), x17) ^ f.mul(f.pw(r21, -5), f.sq(x17)) ^
             f.mul(f.pw(x21, -2), f.mul(r13, x17)) ^ f.mul(f.pw(x21, 5), r13) ^
             f.mul(f.pw(r21, -3), x13) ^ f.mul(f.pw(x21, 2), r9) ^
             f.mul(i21, r5);
    cf.x3 = f.pw(x17, 4);
    return cf;
}

bool closed_form_check(const Field& f, const XiTuple& xi) {
    DescentState st = descent_begin(f, xi);
    run_descent(f, st, 47);
    if (st.obstruction) return false;
    ClosedForms cf = closed_forms(f, xi);
    return st.x[22] == cf.x22 && st.x[19] == cf.x19 && st.x[20] == cf.x20 &&
           st.x[15] == cf.x15 && st.x[18] == cf.x18 && st.x[11] == cf.x11 &&
           st.x[16] == cf.x16 && st.x[7] == cf.x7 && st.x[14] == cf.x14 &&
           st.x[3] == cf.x3;
}

LocalSolvability local_solvability(const Field& f, const XiTuple& xi) {
    if (!xi.x21) {
        // Degree < 21 reduces to degree 21 by adding a known Selmer element.
        XiTuple shifted = xi;
        shifted.x21 ^= 1;
        return local_solvability(f, shifted);
    }
    DescentState st = descent_begin(f, xi);
    run_descent(f, st, 31);
    if (st.obstruction) return {false, st.obstruction};
    return {true, 0};
}

SelmerRankReport selmer_rank_report() {
    SelmerRankReport r;
    r.dims = {12, 12, 4, 12, 12, 12};
    r.total = 0;
    for (int d : r.dims) r.total += d;
    r.group_size_decimal = "18446744073709551616";  // 2^64
    r.half_rank = 128 / 2;
    r.sha_order = 1;
    r.disc_log2 = 120;
    r.disc_flag =
        "derived: |Sha| * disc = 2^120 with Sha trivial; not independently "
        "verified";
    return r;
}

}  // namespace mw128
