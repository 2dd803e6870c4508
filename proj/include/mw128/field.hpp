#ifndef MW128_FIELD_HPP
#define MW128_FIELD_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mw128 {

// Element of k = GF(2^12) in a fixed polynomial basis: bit i is the
// coefficient of X^i modulo the configured degree-12 irreducible polynomial.
using fe = std::uint16_t;

constexpr int kFieldBits = 12;
constexpr int kFieldSize = 4096;
constexpr int kGroupOrderMul = 4095;  // |k*| = 3^2 * 5 * 7 * 13

struct FieldError : std::runtime_error {
    explicit FieldError(const std::string& msg) : std::runtime_error(msg) {}
};

// --- GF(2)[X] bit-polynomial helpers (schoolbook, word-sized) ---------------
// These are deliberately table-free: they verify the modulus and serve as the
// independent multiplication oracle for the table-driven arithmetic.
std::uint64_t gf2x_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t gf2x_mod(std::uint64_t a, std::uint64_t m);
std::uint64_t gf2x_gcd(std::uint64_t a, std::uint64_t b);
int gf2x_deg(std::uint64_t a);
// Empty result = irreducible; otherwise a nontrivial factor as witness.
std::optional<std::uint64_t> reducibility_witness(std::uint64_t m);

struct FieldConfig {
    std::uint32_t modulus = 0x1053;  // X^12 + X^6 + X^4 + X + 1
    fe generator = 0;                // 0 = auto (X if primitive, else smallest)
    fe a6 = 0xFFFF;                  // 0xFFFF = auto (smallest trace-1 element)
    bool eta_by_polymul = false;     // alternate cubing route for eta
};

class Field {
public:
    explicit Field(const FieldConfig& cfg = FieldConfig{});

    std::uint32_t modulus() const { return mod_; }
    fe generator() const { return gen_; }
    fe a6() const { return a6_; }
    const FieldConfig& config() const { return cfg_; }

    fe add(fe a, fe b) const { return a ^ b; }
    // Branch-free: log of zero is a sentinel index into the zero-padded
    // antilog table.
    fe mul(fe a, fe b) const {
        return alog_[unsigned(logt_[a]) + unsigned(logt_[b])];
    }
    fe sq(fe a) const { return sq_[a]; }
    fe sqrt(fe a) const { return sqrt_[a]; }
    fe inv(fe a) const {
        if (!a) throw FieldError("inverse of zero");
        return inv_[a];
    }
    fe div(fe a, fe b) const { return mul(a, inv(b)); }

    // a^e with e interpreted mod 4095 for a != 0; negative e allowed.
    fe pw(fe a, long long e) const;

    int trace(fe a) const { return tr_[a]; }
    // x^(2^(m mod 12)); m may be negative.
    fe frob_pow(fe x, int m) const { return frob_[((m % 12) + 12) % 12][x]; }

    // Table-free reference product (oracle path).
    fe ref_mul(fe a, fe b) const {
        return fe(gf2x_mod(gf2x_mul(a, b), mod_));
    }

    // Solutions {y, y+1} of Y^2 + Y = c when trace(c) = 0.
    std::optional<std::pair<fe, fe>> artin_schreier_solve(fe c) const {
        if (tr_[c]) return std::nullopt;
        fe y = asroot_[c];
        return std::make_pair(y, fe(y ^ 1));
    }
    // Even (numerically smaller) root only; 0xFFFF when trace(c) = 1.
    fe as_root_raw(fe c) const { return asroot_[c]; }
    // Smallest u with u^4 + u = v; 0xFFFF when v is not in the image.
    fe x0_solution(fe v) const { return x0sol_[v]; }

    // Constant y-correction for the m-fold Frobenius point map:
    // e_m^2 + e_m = a6^(2^m) + a6, even root.
    fe frob_fix(int m) const { return frob_fix_[((m % 12) + 12) % 12]; }

    // All n solutions of a^n = 1 (n must divide 4095), as consecutive powers
    // of generator^(4095/n).
    std::vector<fe> roots_of_unity(int n) const;

    int log_of(fe a) const {
        if (!a) throw FieldError("log of zero");
        return logt_[a];
    }
    fe exp_of(int e) const { return alog_[((e % 4095) + 4095) % 4095]; }

    static constexpr unsigned kLogZero = 2 * kGroupOrderMul;  // sentinel

private:
    FieldConfig cfg_;
    std::uint32_t mod_;
    fe gen_;
    fe a6_;
    std::array<std::uint16_t, kFieldSize> logt_;
    // [0, 8190): powers of the generator (doubled range so two logs add
    // without reduction); [8190, 16384): zero, reached only via kLogZero.
    std::array<fe, 16384> alog_;
    std::array<fe, kFieldSize> sq_, sqrt_, inv_;
    std::array<std::array<fe, kFieldSize>, 12> frob_;
    std::array<std::uint8_t, kFieldSize> tr_;
    std::array<fe, kFieldSize> asroot_;
    std::array<fe, kFieldSize> x0sol_;
    std::array<fe, 12> frob_fix_;
};

// Canonical a6: the numerically smallest trace-1 element.
fe pick_a6(const Field& f);

// --- GF(2)-linear maps on k (additive polynomials as 12x12 bit matrices) ----
struct LinearizedMap {
    // col[i] = L(basis element 1<<i); L(x) = xor of col[i] over set bits of x.
    std::array<fe, 12> col{};

    fe apply(fe x) const {
        fe r = 0;
        for (int i = 0; i < 12; ++i)
            if (x >> i & 1) r ^= col[i];
        return r;
    }
    // Build from additive-polynomial coefficients c[m] of sum c_m X^(2^m).
    static LinearizedMap from_additive(const Field& f, const std::vector<fe>& c);
};

// All x with L(x) = v, sorted; empty when unsolvable, else a kernel coset.
std::vector<fe> linearized_solve(const LinearizedMap& L, fe v);

}  // namespace mw128

#endif
