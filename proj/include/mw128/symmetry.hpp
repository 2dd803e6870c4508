#ifndef MW128_SYMMETRY_HPP
#define MW128_SYMMETRY_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mw128/curve.hpp"
#include "mw128/field.hpp"

namespace mw128 {

// The known automorphism group of the minimal-vector set, of order
// 65 * 2^12 * 3 * 8 * 12 = 76,677,120: substitutions t -> a t + b with
// a^65 = 1, scalings x -> alpha x with alpha^3 = 1, the twelve field
// automorphisms, and the 8-element quaternion group permuting the (x0, y0)
// completions.
constexpr std::int64_t kAutomorphismGroupOrder = 76677120;

struct Automorphism {
    fe a = 1;      // a^65 = 1
    fe b = 0;
    fe alpha = 1;  // alpha^3 = 1
    int frob = 0;  // 0..11
    fe qc = 0;     // qc^4 = qc
    fe qd = 0;     // qd^2 + qd = qc^3
    bool operator==(const Automorphism&) const = default;
};

// Applies in fixed order: substitution, scaling, frobenius, quaternion.
// Any Artin-Schreier failure inside the corrections is a broken invariant
// and throws.
MinimalPoint apply(const Field& f, const Automorphism& g, const MinimalPoint& p);

// The y-correction polynomial for t -> a t + b (degree <= 32, canonical
// even constant term), verified against its defining identity.
YPoly subst_correction(const Field& f, fe a, fe b);

Automorphism compose(const Field& f, const Automorphism& g, const Automorphism& h);
Automorphism inverse(const Field& f, const Automorphism& g);
bool is_identity(const Automorphism& g);
int automorphism_order(const Field& f, const Automorphism& g);

// All group elements fixing p, found by scanning the 2340 (frob, alpha, a)
// skeletons, solving for the at most two consistent translations from the
// leading x-coefficients, and resolving the quaternion part from the
// constant terms. Never iterates the full group.
std::vector<Automorphism> stabilizer_elements(const Field& f, const MinimalPoint& p);
int stabilizer_order(const Field& f, const MinimalPoint& p);

// Exact orbit-minimal serialization of (x, y): the lexicographically least
// image of p under the full group. Two points are in the same orbit iff
// their keys are equal.
using PointKey = std::array<fe, 57>;
PointKey point_key(const MinimalPoint& p);
MinimalPoint point_of_key(const PointKey& k);
PointKey canonical_point_key(const Field& f, const MinimalPoint& p);

struct OrbitRecord {
    MinimalPoint rep;           // the canonical-form representative
    int stab = 1;               // exact stabilizer order
    std::int64_t orbit_size = 0;  // |G| / stab
    int survivor_count = 0;     // multiplicity among the input points
};

std::vector<OrbitRecord> orbit_partition(const Field& f,
                                         const std::vector<MinimalPoint>& pts,
                                         int threads = 0);

// stabilizer order -> number of orbits, ascending
std::vector<std::pair<int, int>> stabilizer_histogram(
    const std::vector<OrbitRecord>& records);

struct Rational {
    std::int64_t num = 0, den = 1;
    void add(std::int64_t n, std::int64_t d);
    std::string str() const;
    bool operator==(const Rational&) const = default;
};

// sum of 1/|Stab| over the records, exact
Rational stab_sum(const std::vector<OrbitRecord>& records);
// |G| * stab_sum, exact; throws if the total is not an integer
std::int64_t kissing_number(const std::vector<OrbitRecord>& records);
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
std::string factorization_str(std::int64_t n);

struct LatticeConstants {
    int min_norm;              // 22
    int dimension;             // 128
    int disc_log2;             // 120
    std::string disc_flag;     // derived, not independently verified
    std::string density_num;   // 11^64 in decimal
    std::string density_den;   // 2^124 in decimal
    long double log2_density;  // ~97.4036
    int min_norm_bound;        // 2 * floor((2^6 + 4)/6) = 22
};
LatticeConstants lattice_constants();

}  // namespace mw128

#endif
