#ifndef MW128_MINSEARCH_HPP
#define MW128_MINSEARCH_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mw128/curve.hpp"
#include "mw128/field.hpp"
#include "mw128/selmer.hpp"

namespace mw128 {

// --- the quadratic shortcut in x1^16 ----------------------------------------

struct QuadraticData {
    fe A = 0, B = 0;
};

// x5-independent part, computed once per (x21, x13, x9).
struct QuadraticPrefix {
    fe a0 = 0, c96 = 0;                    // A = a0 + c96 * x5^16
    fe b0 = 0, b4 = 0, b16 = 0, b32 = 0, b48 = 0;  // B = b0 + sum b_e * x5^e
};

QuadraticPrefix quadratic_prefix(const Field& f, fe x21, fe x13, fe x9);
QuadraticData quadratic_AB(const Field& f, const QuadraticPrefix& pre, fe x5);
QuadraticData quadratic_AB(const Field& f, fe x21, fe x17, fe x13, fe x9, fe x5);
// Independent term-by-term route using only square-and-multiply over the
// table-free reference product.
QuadraticData quadratic_ab_direct(const Field& f, fe x21, fe x17, fe x13,
                                  fe x9, fe x5);

struct X1Solutions {
    enum Kind { Empty, Single, Pair, All } kind = Empty;
    fe first = 0, second = 0;  // sorted, valid for Pair; first for Single
};
// Solver over the printed A/B form (valid on the x17 = 0 slice).
X1Solutions solve_x1(const Field& f, const QuadraticData& q);

// The exact j0 = 19 condition as an equation quad*u^2 + lin*u = rhs in
// u = x1^1024, self-derived from the eta-conditions by exact monomial
// algebra. Restricted to x17 = 0 it coincides with the printed A/B form.
struct X1Equation {
    fe quad = 0, lin = 0, rhs = 0;
};

class X1ConditionTable {
public:
    static const X1ConditionTable& instance();

    // per-(x21, x17, x13, x9) prefix: x5-independent parts bucketed by the
    // x5-exponent of each monomial
    struct Prefix {
        struct Bucket {
            fe coeff;
            std::uint16_t e5;
        };
        std::vector<Bucket> quad, lin, rhs;
    };
    Prefix prefix(const Field& f, fe x21, fe x17, fe x13, fe x9) const;
    X1Equation at(const Field& f, const Prefix& pre, fe x5) const;
    X1Equation at(const Field& f, fe x21, fe x17, fe x13, fe x9, fe x5) const;

    // exponent vectors over (x21, x17, x13, x9, x5), for inspection/tests
    struct Mono {
        std::uint16_t e[5];
    };
    const std::vector<Mono>& quad_monomials() const { return quad_; }
    const std::vector<Mono>& lin_monomials() const { return lin_; }
    const std::vector<Mono>& rhs_monomials() const { return rhs_; }

private:
    X1ConditionTable();
    std::vector<Mono> quad_, lin_, rhs_;
};

X1Solutions solve_x1_exact(const Field& f, const X1Equation& eq);
// Convenience: build the equation for a tuple frame and solve it.
X1Solutions solve_x1_exact(const Field& f, fe x21, fe x17, fe x13, fe x9,
                           fe x5);

// --- completion of a tuple to minimal points --------------------------------

enum class Stage {
    Accepted,
    GateDegree,  // x21 = 0
    Gate13,      // x13 outside GF(16)
    J43, J39, J35, J31, J27, J23,  // schedule checkpoints
    J19,
    X0,
    J17, J15, J13, J11, J9, J7, J5, J3, J1,
    Y0,
};
const char* stage_name(Stage s);

struct CandidateResult {
    Stage stage = Stage::GateDegree;
    XiTuple xi;
    bool v_known = false;
    fe v = 0;                     // x0^4 + x0
    MinimalPoint point;           // canonical representative when accepted
    fe x0 = 0, y0 = 0;
    int multiplicity = 0;         // 8 when accepted
    std::vector<MinimalPoint> quaternion_orbit;  // filled when expand = true
};

// Reference path: selmer-module descent plus staged residual checks; exact.
CandidateResult complete_candidate(const Field& f, const XiTuple& xi,
                                   bool expand = false);

// The j0 = 19 residual as a function of the tuple alone (the x0-dependence
// collapses through v = x0^4 + x0); used by the brute-force shortcut oracle.
fe j19_residual(const Field& f, const XiTuple& xi);

// Brute-force oracle: all x1 in k whose j0 = 19 residual vanishes for the
// given frame, by running the descent for each of the 4096 values.
std::vector<fe> j19_solution_set_brute(const Field& f, fe x21, fe x17, fe x13,
                                       fe x9, fe x5);

// --- symmetry-reduced cell enumeration --------------------------------------

// A canonical search cell: x21 one of 21 coset representatives in GF(64)*,
// x17 in {0, x21^7 a6}, x13 in GF(16), x9 in k, reduced further by the
// residual order-24 group (12 Frobenius maps x 2 leftover translations).
struct Cell {
    std::uint8_t coset = 0;  // index into CellGeometry::reps21
    std::uint8_t h = 0;      // x17 class
    std::uint8_t x13i = 0;   // index into CellGeometry::gf16
    fe x9 = 0;
};

constexpr std::uint32_t kRawCellCount = 21u * 2u * 16u * 4096u;

std::uint32_t cell_index(const Cell& c);
Cell cell_of_index(std::uint32_t idx);

class CellGeometry {
public:
    explicit CellGeometry(const Field& f);

    const std::array<fe, 21>& reps21() const { return reps21_; }
    const std::array<fe, 16>& gf16() const { return gf16_; }
    int coset_index_of(fe rep) const;  // -1 if not a representative
    int gf16_index_of(fe x) const;     // -1 if outside GF(16)

    fe x21_of(const Cell& c) const { return reps21_[c.coset]; }
    fe x17_of(const Cell& c) const;
    fe x13_of(const Cell& c) const { return gf16_[c.x13i]; }
    XiTuple tuple_of(const Cell& c, fe x5 = 0, fe x1 = 0) const;

    // Cell containing a tuple (before any reduction); x21 may be any nonzero
    // element, x17 any element: both are canonicalized, mutating x9/x5/x1
    // accordingly. Returns the transformed full tuple as well.
    Cell cell_of_tuple(const XiTuple& xi, XiTuple* canonical = nullptr) const;

    // The 24 residual-symmetry images of a cell (with multiplicity).
    std::array<std::uint32_t, 24> orbit_images(const Cell& c) const;
    // Index of the lexicographic minimum of the orbit, and the number of
    // distinct images (the cell's exact weight).
    std::pair<std::uint32_t, int> orbit_min_and_weight(const Cell& c) const;
    bool is_canonical(const Cell& c) const;

private:
    const Field& f_;
    std::array<fe, 21> reps21_;
    std::array<std::int8_t, kFieldSize> coset_lookup_;  // by field element
    std::array<fe, 16> gf16_;
    std::array<std::int8_t, kFieldSize> gf16_lookup_;
    struct FrobStep {  // per (coset, m): recanonicalization data
        std::uint8_t coset2;  // target coset index
        fe s13, s9, s5, s1;   // scaling factors alpha * a^j
        fe x16c;              // x21'^16 of the target representative
        // per source h: target class and the two translation choices
        std::uint8_t h2[2];
        fe b[2][2], b2[2][2], b4[2][2], b8[2][2], b16[2][2];
    };
    FrobStep steps_[21][12];
};

// --- filters, configuration, reports ----------------------------------------

struct SearchFilter {
    int coset_lo = 0, coset_hi = 20;
    int h_lo = 0, h_hi = 1;
    int x13_lo = 0, x13_hi = 15;
    fe x9_lo = 0, x9_hi = 0xFFF;

    bool is_total() const;
    bool contains(const Cell& c) const;
    std::string to_string() const;
    static SearchFilter parse(const std::string& s);  // throws FieldError
};

struct SearchConfig {
    int threads = 0;  // 0 = hardware concurrency
    std::string checkpoint_path;
    SearchFilter filter;
    // Deterministic sampling rate for the in-run shortcut soundness check:
    // a cell/x5 pair is sampled when (hash & sample_mask) == 0.
    std::uint64_t sample_mask = 0xFFFF;
    std::function<void(std::uint64_t done, std::uint64_t total)> progress;
};

struct SearchStats {
    std::uint64_t cells_searched = 0;
    std::uint64_t cells_from_checkpoint = 0;
    std::uint64_t weight_sum = 0;
    std::uint64_t x5_pairs = 0;          // quadratic solves attempted
    std::uint64_t empty_a0 = 0;          // degenerate leading coefficients, no roots
    std::uint64_t all_branch = 0;        // fully degenerate equations: full x1 loops
    std::uint64_t single_solutions = 0;  // one-root equations (never seen)
    std::uint64_t trace_reject = 0;      // quadratic unsolvable
    std::uint64_t candidates = 0;        // x1 roots completed
    std::uint64_t x0_reject = 0;
    std::uint64_t residual_reject = 0;   // failed some j0 <= 17 residual
    std::uint64_t j27_reject = 0;        // would flag a non-automatic j0 = 27
    std::uint64_t y0_reject = 0;
    std::uint64_t accepted = 0;
    std::uint64_t shortcut_samples = 0;  // in-run oracle comparisons
    std::uint64_t reference_samples = 0; // fast-vs-reference comparisons

    void merge(const SearchStats& o);
};

struct SurvivorRec {
    std::uint32_t cell = 0;
    XiTuple xi;
    fe x0 = 0, y0 = 0;
};

struct SearchReport {
    bool total = false;
    std::string filter_str;
    SearchStats stats;
    std::vector<SurvivorRec> survivors;  // deterministic order
};

// Canonical (cell, weight) stream for a filter; exact weights.
struct CellRec {
    std::uint32_t index;
    std::uint8_t weight;
};
std::vector<CellRec> canonical_tuples(const Field& f, const CellGeometry& geo,
                                      const SearchFilter& filter);

SearchReport run_search(const Field& f, const SearchConfig& cfg);

// Rebuild the full point a survivor record encodes (exact; throws if the
// record is inconsistent with the field).
MinimalPoint survivor_point(const Field& f, const SurvivorRec& rec);

// Reduce an arbitrary Selmer tuple (x21 != 0, x13 in GF(16)) to the
// canonical cell of its symmetry orbit, returning the transformed tuple.
XiTuple reduce_tuple(const Field& f, const CellGeometry& geo, const XiTuple& xi,
                     Cell* cell_out = nullptr);

// Consistency probe: pushes each survivor through pseudorandom symmetry
// elements, re-canonicalizes, and requires the image to land back inside
// the survivor set (restricted to the filter for partial runs). Throws on
// any miss: the search would have lost a point.
void verify_survivor_closure(const Field& f, const CellGeometry& geo,
                             const std::vector<SurvivorRec>& survivors,
                             const SearchFilter& filter,
                             int probes_per_survivor, std::uint64_t seed);

}  // namespace mw128

#endif
