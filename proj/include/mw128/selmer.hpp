#ifndef MW128_SELMER_HPP
#define MW128_SELMER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mw128/curve.hpp"
#include "mw128/field.hpp"

namespace mw128 {

// The six free coefficients of a Selmer representative of degree 21.
struct XiTuple {
    fe x21 = 0, x17 = 0, x13 = 0, x9 = 0, x5 = 0, x1 = 0;
    bool operator==(const XiTuple&) const = default;
};

// x21 t^21 + x21^4 t^19 + x17 t^17 + x13 t^13 + x21^16 t^11 + x9 t^9
//   + x5 t^5 + x17^4 t^3 + x1 t
XPoly selmer_polynomial(const Field& f, const XiTuple& xi);

// Read the free coordinates back off an x-polynomial.
XiTuple xi_of(const XPoly& x);

// Membership in the Selmer group: x13 must lie in GF(16); everything else
// is free over k.
bool is_selmer_member(const Field& f, const XiTuple& xi);

// Image of xi under t -> a*t + b, then x -> alpha*x, then the m-fold field
// Frobenius, reduced back to the odd (Selmer) representative.
XiTuple xi_apply(const Field& f, const XiTuple& xi, fe a, fe b, fe alpha, int m);

// One descent step per odd j0 from 65 down to 21: either solves for the
// designated coefficient or records a pass/fail checkpoint.
struct DescentStep {
    int j0;
    int target;  // coefficient index solved at this j0; -1 = condition only
};
const std::vector<DescentStep>& descent_schedule();

struct DescentState {
    std::array<fe, 23> x{};      // coefficient values, valid where known
    std::uint32_t known = 0;     // bit j set when x_j is pinned
    std::vector<int> consumed;   // j0 values processed so far
    int obstruction = 0;         // first failing j0 (0 = none)
    bool v_known = false;
    fe v = 0;                    // x0^4 + x0, available after j0 = 21
    std::vector<fe> x0_all;      // the 4 solutions for x0 when they exist
    std::vector<int> nonsingleton;  // scheduled j0 with unexpected solution sets

    bool knows(int j) const { return (known >> j) & 1; }
};

DescentState descent_begin(const Field& f, const XiTuple& xi);
// Processes one schedule entry; requires j0 to be the next unconsumed entry.
void derive_coefficient(const Field& f, DescentState& st, int j0);
// Runs schedule entries down to and including through_j0 (or until obstructed).
void run_descent(const Field& f, DescentState& st, int through_j0);

// Condition functional at j0 evaluated over a partial coefficient vector,
// with the single unknown slot `target` set to `trial` (target = -1: none).
fe partial_condition(const Field& f, const std::array<fe, 23>& x,
                     std::uint32_t known, int j0, int target, fe trial);

// The explicit printed formulas for the ten coefficients derived at
// j0 = 65..47, as functions of the xi coordinates (x21 != 0).
struct ClosedForms {
    fe x22, x19, x20, x15, x18, x11, x16, x7, x14, x3;
};
ClosedForms closed_forms(const Field& f, const XiTuple& xi);
// True iff the generic descent reproduces every closed form exactly.
bool closed_form_check(const Field& f, const XiTuple& xi);

struct LocalSolvability {
    bool solvable;
    int obstruction_j0;  // meaningful when !solvable
};
// Descent through the j0 = 31 residual; handles x21 = 0 by adding a known
// degree-21 Selmer element first.
LocalSolvability local_solvability(const Field& f, const XiTuple& xi);

struct SelmerRankReport {
    std::array<int, 6> dims;          // per-coordinate GF(2)-dimensions
    int total;                        // 64
    std::string group_size_decimal;   // 2^64 as digits
    int half_rank;                    // 128/2
    int sha_order;                    // 1
    int disc_log2;                    // 120
    std::string disc_flag;
};
SelmerRankReport selmer_rank_report();

}  // namespace mw128

#endif
