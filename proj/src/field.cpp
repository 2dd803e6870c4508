#include "mw128/field.hpp"

#include <algorithm>
#include <sstream>

namespace mw128 {

std::uint64_t gf2x_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return r;
}

int gf2x_deg(std::uint64_t a) {
    int d = -1;
    while (a) {
        ++d;
        a >>= 1;
    }
    return d;
}

std::uint64_t gf2x_mod(std::uint64_t a, std::uint64_t m) {
    int dm = gf2x_deg(m);
    for (int d = gf2x_deg(a); d >= dm; --d)
        if (a >> d & 1) a ^= m << (d - dm);
    return a;
}

std::uint64_t gf2x_gcd(std::uint64_t a, std::uint64_t b) {
    while (b) {
        a = gf2x_mod(a, b);
        std::swap(a, b);
    }
    return a;
}

namespace {

std::uint64_t gf2x_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return gf2x_mod(gf2x_mul(a, b), m);
}

// X^(2^k) mod m by repeated squaring of the running value.
std::uint64_t gf2x_frob_of_x(int k, std::uint64_t m) {
    std::uint64_t v = 2;  // X
    for (int i = 0; i < k; ++i) v = gf2x_mulmod(v, v, m);
    return v;
}

std::string poly_str(std::uint64_t p) {
    std::ostringstream os;
    bool first = true;
    for (int d = gf2x_deg(p); d >= 0; --d) {
        if (!(p >> d & 1)) continue;
        if (!first) os << "+";
        if (d == 0)
            os << "1";
        else if (d == 1)
            os << "x";
        else
            os << "x^" << d;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace

std::optional<std::uint64_t> reducibility_witness(std::uint64_t m) {
    int n = gf2x_deg(m);
    if (n < 1) return m;
    if (!(m & 1)) return std::uint64_t(2);  // X divides m
    // m irreducible of degree n iff X^(2^n) = X mod m and
    // gcd(X^(2^(n/p)) - X, m) = 1 for every prime p | n.
    std::uint64_t xn = gf2x_frob_of_x(n, m);
    if (xn != 2) {
        // Some irreducible factor of degree d < n exists; find one via
        // gcd with X^(2^d) - X.
        for (int d = 1; d < n; ++d) {
            std::uint64_t g = gf2x_gcd(gf2x_frob_of_x(d, m) ^ 2u, m);
            if (g != 1 && g != m) return g;
        }
        return m;  // m itself is a product of equal-degree factors of deg n? unreachable for xn != 2
    }
    std::vector<int> primes;
    int nn = n;
    for (int p = 2; p * p <= nn; ++p)
        while (nn % p == 0) {
            primes.push_back(p);
            nn /= p;
        }
    if (nn > 1) primes.push_back(nn);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (int p : primes) {
        std::uint64_t g = gf2x_gcd(gf2x_frob_of_x(n / p, m) ^ 2u, m);
        if (g != 1) return g;  // g is a factor of degree n/p-smooth part
    }
    return std::nullopt;
}

namespace {

int element_order(fe g, std::uint32_t mod) {
    if (!g) return 0;
    // order divides 4095 = 3^2*5*7*13
    auto pw = [&](fe a, int e) {
        std::uint64_t r = 1, b = a;
        while (e) {
            if (e & 1) r = gf2x_mulmod(r, b, mod);
            b = gf2x_mulmod(b, b, mod);
            e >>= 1;
        }
        return fe(r);
    };
    if (pw(g, 4095) != 1) return 0;  // not in k* (impossible for nonzero)
    int ord = 4095;
    for (int p : {3, 5, 7, 13})
        while (ord % p == 0 && pw(g, ord / p) == 1) ord /= p;
    return ord;
}

}  // namespace

Field::Field(const FieldConfig& cfg) : cfg_(cfg), mod_(cfg.modulus) {
    if (gf2x_deg(mod_) != 12)
        throw FieldError("modulus must have degree 12, got " + poly_str(mod_));
    if (auto w = reducibility_witness(mod_))
        throw FieldError("modulus " + poly_str(mod_) +
                         " is reducible; factor witness: " + poly_str(*w));

    if (cfg.generator) {
        if (element_order(cfg.generator, mod_) != kGroupOrderMul)
            throw FieldError("configured generator does not have order 4095");
        gen_ = cfg.generator;
    } else {
        gen_ = 0;
        for (fe g = 2; g < kFieldSize; ++g)
            if (element_order(g, mod_) == kGroupOrderMul) {
                gen_ = g;
                break;
            }
        if (!gen_) throw FieldError("no generator found");  // cannot happen
    }

    // log/antilog chain.
    logt_.fill(0);
    logt_[0] = std::uint16_t(kLogZero);
    alog_.fill(0);
    std::uint64_t v = 1;
    for (int i = 0; i < kGroupOrderMul; ++i) {
        alog_[i] = fe(v);
        logt_[v] = std::uint16_t(i);
        v = gf2x_mulmod(v, gen_, mod_);
    }
    if (v != 1) throw FieldError("generator order check failed");
    for (int i = 0; i < kGroupOrderMul; ++i) alog_[i + kGroupOrderMul] = alog_[i];

    for (int x = 0; x < kFieldSize; ++x) sq_[x] = fe(gf2x_mulmod(x, x, mod_));
    for (int x = 0; x < kFieldSize; ++x) sqrt_[sq_[x]] = fe(x);
    inv_[0] = 0;
    for (int x = 1; x < kFieldSize; ++x)
        inv_[x] = alog_[kGroupOrderMul - logt_[x]];

    for (int x = 0; x < kFieldSize; ++x) frob_[0][x] = fe(x);
    for (int m = 1; m < 12; ++m)
        for (int x = 0; x < kFieldSize; ++x) frob_[m][x] = sq_[frob_[m - 1][x]];

    for (int x = 0; x < kFieldSize; ++x) {
        fe t = 0;
        for (int m = 0; m < 12; ++m) t ^= frob_[m][x];
        if (t > 1) throw FieldError("trace fell outside GF(2)");
        tr_[x] = std::uint8_t(t);
    }

    asroot_.fill(0xFFFF);
    for (int y = 0; y < kFieldSize; ++y) {
        fe c = sq_[y] ^ fe(y);
        if (asroot_[c] == 0xFFFF) asroot_[c] = fe(y);
    }
    x0sol_.fill(0xFFFF);
    for (int u = 0; u < kFieldSize; ++u) {
        fe w = frob_[2][u] ^ fe(u);
        if (x0sol_[w] == 0xFFFF) x0sol_[w] = fe(u);
    }

    if (cfg.a6 != 0xFFFF) {
        if (cfg.a6 >= kFieldSize || !tr_[cfg.a6])
            throw FieldError("configured a6 must be a trace-1 element");
        a6_ = cfg.a6;
    } else {
        a6_ = 0;
        while (a6_ < kFieldSize && !tr_[a6_]) ++a6_;
    }

    for (int m = 0; m < 12; ++m) {
        fe c = frob_[m][a6_] ^ a6_;
        if (tr_[c]) throw FieldError("frobenius y-correction not solvable");
        frob_fix_[m] = asroot_[c];
    }
}

fe Field::pw(fe a, long long e) const {
    if (!a) {
        if (e > 0) return 0;
        if (e == 0) return 1;
        throw FieldError("negative power of zero");
    }
    long long idx = (static_cast<long long>(logt_[a]) * (e % kGroupOrderMul)) %
                    kGroupOrderMul;
    if (idx < 0) idx += kGroupOrderMul;
    return alog_[idx];
}

std::vector<fe> Field::roots_of_unity(int n) const {
    if (n <= 0 || kGroupOrderMul % n != 0)
        throw FieldError("roots_of_unity: " + std::to_string(n) +
                         " does not divide 4095");
    int step = kGroupOrderMul / n;
    std::vector<fe> out(n);
    for (int i = 0; i < n; ++i) out[i] = alog_[std::size_t(i) * step % kGroupOrderMul];
    return out;
}

fe pick_a6(const Field& f) { return f.a6(); }

LinearizedMap LinearizedMap::from_additive(const Field& f, const std::vector<fe>& c) {
    LinearizedMap L;
    for (int i = 0; i < 12; ++i) {
        fe x = fe(1) << i, acc = 0;
        for (std::size_t m = 0; m < c.size(); ++m)
            acc ^= f.mul(c[m], f.frob_pow(x, int(m)));
        L.col[i] = acc;
    }
    return L;
}

std::vector<fe> linearized_solve(const LinearizedMap& L, fe v) {
    // Row r of the system: sum_i M[r][i] x_i = v_r over GF(2).
    // Pack each equation as 12 coefficient bits plus the rhs in bit 12.
    std::array<std::uint16_t, 12> rows;
    for (int r = 0; r < 12; ++r) {
        std::uint16_t row = 0;
        for (int i = 0; i < 12; ++i)
            if (L.col[i] >> r & 1) row |= std::uint16_t(1) << i;
        if (v >> r & 1) row |= std::uint16_t(1) << 12;
        rows[r] = row;
    }
    int pivot_col[12];
    int nrows = 0;
    for (int c = 0; c < 12; ++c) {
        int p = -1;
        for (int r = nrows; r < 12; ++r)
            if (rows[r] >> c & 1) {
                p = r;
                break;
            }
        if (p < 0) continue;
        std::swap(rows[nrows], rows[p]);
        for (int r = 0; r < 12; ++r)
            if (r != nrows && (rows[r] >> c & 1)) rows[r] ^= rows[nrows];
        pivot_col[nrows++] = c;
    }
    for (int r = nrows; r < 12; ++r)
        if (rows[r] >> 12 & 1) return {};  // inconsistent
    bool is_pivot[12] = {};
    fe part = 0;
    for (int r = 0; r < nrows; ++r) {
        is_pivot[pivot_col[r]] = true;
        if (rows[r] >> 12 & 1) part |= fe(1) << pivot_col[r];
    }
    std::vector<fe> kernel;
    for (int c = 0; c < 12; ++c) {
        if (is_pivot[c]) continue;
        fe k = fe(1) << c;
        for (int r = 0; r < nrows; ++r)
            if (rows[r] >> c & 1) k |= fe(1) << pivot_col[r];
        kernel.push_back(k);
    }
    std::vector<fe> out;
    out.reserve(std::size_t(1) << kernel.size());
    for (std::size_t mask = 0; mask < (std::size_t(1) << kernel.size()); ++mask) {
        fe x = part;
        for (std::size_t i = 0; i < kernel.size(); ++i)
            if (mask >> i & 1) x ^= kernel[i];
        out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace mw128
