#include "mw128/symmetry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <thread>

namespace mw128 {

YPoly subst_correction(const Field& f, fe a, fe b) {
    // (a t + b)^65 + t^65 has the three terms a^64 b t^64 + a b^64 t + b^65
    // by Lucas; the t^65 terms cancel because a^65 = 1.
    if (f.pw(a, 65) != 1) throw FieldError("substitution needs a^65 = 1");
    fe h64 = f.mul(f.frob_pow(a, 6), b);
    fe h1 = f.mul(a, f.frob_pow(b, 6));
    fe h0 = f.pw(b, 65);
    std::array<fe, 65> h{};
    h[64] = h64;
    h[1] = h1;
    h[0] = h0;
    YPoly g;  // degree <= 32
    for (int j = 32; j >= 1; --j) {
        fe tail = (2 * j <= 32) ? g.c[2 * j] : 0;
        g.c[j] = f.sqrt(fe(h[2 * j] ^ tail));
    }
    if (f.trace(h0))
        throw FieldError("substitution correction: constant term unsolvable");
    g.c[0] = f.as_root_raw(h0);
    for (int j = 0; j <= 64; ++j) {
        fe v = 0;
        if (j % 2 == 0) v ^= f.sq(g.c[j / 2]);
        if (j <= 32) v ^= g.c[j];
        if (v != h[j])
            throw FieldError("substitution correction failed its identity");
    }
    return g;
}

MinimalPoint apply(const Field& f, const Automorphism& g, const MinimalPoint& p) {
    MinimalPoint q;
    // substitution t -> a t + b with the y-correction
    q.x.c = poly_subst(f, p.x.c, g.a, g.b);
    q.y.c = poly_subst(f, p.y.c, g.a, g.b);
    YPoly corr = subst_correction(f, g.a, g.b);
    for (int j = 0; j <= 33; ++j) q.y.c[j] ^= corr.c[j];
    // scaling x -> alpha x
    if (f.pw(g.alpha, 3) != 1) throw FieldError("scaling needs alpha^3 = 1");
    for (auto& c : q.x.c) c = f.mul(g.alpha, c);
    // coefficientwise frobenius with the constant y-correction
    q.x.c = poly_frob(f, q.x.c, g.frob);
    q.y.c = poly_frob(f, q.y.c, g.frob);
    q.y.c[0] ^= f.frob_fix(g.frob);
    // quaternion (x, y) -> (x + qc^2, y + qc x + qd)
    if (f.frob_pow(g.qc, 2) != g.qc) throw FieldError("quaternion needs qc^4 = qc");
    fe qc3 = f.mul(f.sq(g.qc), g.qc);
    if (fe(f.sq(g.qd) ^ g.qd) != qc3)
        throw FieldError("quaternion needs qd^2 + qd = qc^3");
    for (int j = 0; j <= 22; ++j) q.y.c[j] ^= f.mul(g.qc, q.x.c[j]);
    q.x.c[0] ^= f.sq(g.qc);
    q.y.c[0] ^= g.qd;
    return q;
}

bool is_identity(const Automorphism& g) {
    return g.a == 1 && g.b == 0 && g.alpha == 1 && g.frob == 0 && g.qc == 0 &&
           g.qd == 0;
}

namespace {

// direct form of the x-action: x' = lam * x^(sigma^m)(A t + B) + qc^2
struct DirectForm {
    fe lam, A, B;
    int m;
};

DirectForm direct_of(const Field& f, const Automorphism& g) {
    DirectForm d;
    d.m = g.frob;
    d.lam = f.frob_pow(g.alpha, g.frob);
    d.A = f.frob_pow(g.a, g.frob);
    d.B = f.frob_pow(g.b, g.frob);
    return d;
}

Automorphism storage_of(const Field& f, const DirectForm& d, fe qc, fe qd) {
    Automorphism g;
    g.frob = d.m;
    g.alpha = f.frob_pow(d.lam, -d.m);
    g.a = f.frob_pow(d.A, -d.m);
    g.b = f.frob_pow(d.B, -d.m);
    g.qc = qc;
    g.qd = qd;
    return g;
}

MinimalPoint dummy_point() {
    MinimalPoint p;
    p.x.c[1] = 1;  // x = t, y = 0; apply() is formula-driven, no curve needed
    return p;
}

fe valid_qd(const Field& f, fe qc) {
    fe qc3 = f.mul(f.sq(qc), qc);
    fe d = f.as_root_raw(qc3);
    if (d == 0xFFFF) throw FieldError("no valid quaternion qd");
    return d;
}

}  // namespace

Automorphism compose(const Field& f, const Automorphism& g, const Automorphism& h) {
    DirectForm dg = direct_of(f, g), dh = direct_of(f, h);
    DirectForm dc;
    dc.m = (dg.m + dh.m) % 12;
    dc.lam = f.mul(dg.lam, f.frob_pow(dh.lam, dg.m));
    dc.A = f.mul(dg.A, f.frob_pow(dh.A, dg.m));
    dc.B = fe(f.mul(f.frob_pow(dh.A, dg.m), dg.B) ^ f.frob_pow(dh.B, dg.m));
    fe qcsq = fe(f.sq(g.qc) ^ f.mul(dg.lam, f.frob_pow(h.qc, dg.m + 1)));
    fe qc = f.sqrt(qcsq);
    if (f.frob_pow(qc, 2) != qc)
        throw FieldError("composition left the quaternion domain");
    Automorphism k = storage_of(f, dc, qc, valid_qd(f, qc));
    // The canonical corrections inside apply() determine the composite up to
    // the central involution; one probe fixes the qd bit.
    MinimalPoint probe = dummy_point();
    MinimalPoint lhs = apply(f, g, apply(f, h, probe));
    MinimalPoint rhs = apply(f, k, probe);
    if (lhs.x != rhs.x) throw FieldError("composition x-part mismatch");
    if (lhs.y != rhs.y) {
        k.qd ^= 1;
        rhs.y.c[0] ^= 1;
        if (lhs.y != rhs.y) throw FieldError("composition y-part mismatch");
    }
    return k;
}

Automorphism inverse(const Field& f, const Automorphism& g) {
    DirectForm dg = direct_of(f, g);
    DirectForm di;
    di.m = (12 - dg.m) % 12;
    di.lam = f.inv(f.frob_pow(dg.lam, di.m));
    di.A = f.inv(f.frob_pow(dg.A, di.m));
    di.B = f.mul(f.frob_pow(dg.B, di.m), di.A);
    fe qcsq = f.mul(di.lam, f.frob_pow(g.qc, di.m + 1));
    fe qc = f.sqrt(qcsq);
    Automorphism k = storage_of(f, di, qc, valid_qd(f, qc));
    MinimalPoint probe = dummy_point();
    MinimalPoint round = apply(f, k, apply(f, g, probe));
    if (round.x != probe.x) throw FieldError("inverse x-part mismatch");
    if (round.y != probe.y) {
        k.qd ^= 1;
        round.y.c[0] ^= 1;
        if (round.y != probe.y) throw FieldError("inverse y-part mismatch");
    }
    return k;
}

int automorphism_order(const Field& f, const Automorphism& g) {
    Automorphism acc = g;
    for (int n = 1; n <= 4096; ++n) {
        if (is_identity(acc)) return n;
        acc = compose(f, acc, g);
    }
    throw FieldError("automorphism order exceeds the group bound");
}

std::vector<Automorphism> stabilizer_elements(const Field& f,
                                              const MinimalPoint& p) {
    std::vector<Automorphism> out;
    std::vector<fe> mu65 = f.roots_of_unity(65);
    std::vector<fe> mu3 = f.roots_of_unity(3);
    for (int m = 0; m < 12; ++m) {
        XPoly xm;
        xm.c = poly_frob(f, p.x.c, m);
        YPoly ym;
        ym.c = poly_frob(f, p.y.c, m);
        ym.c[0] ^= f.frob_fix(m);
        // translation solve: x20 = lam A^20 (xm20 + xm21 B + xm22 B^2)
        LinearizedMap L;
        for (int i = 0; i < 12; ++i) {
            fe e = fe(1) << i;
            L.col[i] = fe(f.mul(xm.c[21], e) ^ f.mul(xm.c[22], f.sq(e)));
        }
        for (fe lam : mu3) {
            for (fe A : mu65) {
                fe lamA22 = f.mul(lam, f.pw(A, 22));
                if (p.x.c[22] != f.mul(lamA22, xm.c[22])) continue;
                fe lamA21 = f.mul(lam, f.pw(A, 21));
                if (p.x.c[21] != f.mul(lamA21, xm.c[21])) continue;
                fe lamA19 = f.mul(lam, f.pw(A, 19));
                if (p.x.c[19] != f.mul(lamA19, xm.c[19])) continue;
                fe lamA20 = f.mul(lam, f.pw(A, 20));
                fe rhs = fe(f.mul(f.inv(lamA20), p.x.c[20]) ^ xm.c[20]);
                for (fe B : linearized_solve(L, rhs)) {
                    DirectForm d{lam, A, B, m};
                    Automorphism skel = storage_of(f, d, 0, 0);
                    MinimalPoint img = apply(f, skel, p);
                    // x must match up to a GF(4) constant shift
                    bool ok = true;
                    for (int j = 1; j <= 22 && ok; ++j)
                        ok = img.x.c[j] == p.x.c[j];
                    if (!ok) continue;
                    fe qcsq = fe(img.x.c[0] ^ p.x.c[0]);
                    fe qc = f.sqrt(qcsq);
                    if (f.frob_pow(qc, 2) != qc) continue;
                    // y must match as y_img + qc x_img + qd
                    fe qd = 0;
                    for (int j = 33; j >= 0 && ok; --j) {
                        fe want = p.y.c[j];
                        fe have = img.y.c[j];
                        if (j <= 22) have ^= f.mul(qc, img.x.c[j]);
                        if (j == 0)
                            qd = fe(want ^ have);
                        else
                            ok = want == have;
                    }
                    if (!ok) continue;
                    fe qc3 = f.mul(f.sq(qc), qc);
                    if (fe(f.sq(qd) ^ qd) != qc3) continue;
                    Automorphism full = skel;
                    full.qc = qc;
                    full.qd = qd;
                    out.push_back(full);
                }
            }
        }
    }
    return out;
}

int stabilizer_order(const Field& f, const MinimalPoint& p) {
    return int(stabilizer_elements(f, p).size());
}

PointKey point_key(const MinimalPoint& p) {
    PointKey k;
    for (int j = 0; j <= 22; ++j) k[j] = p.x.c[22 - j];
    for (int j = 0; j <= 33; ++j) k[23 + j] = p.y.c[33 - j];
    return k;
}

MinimalPoint point_of_key(const PointKey& k) {
    MinimalPoint p;
    for (int j = 0; j <= 22; ++j) p.x.c[22 - j] = k[j];
    for (int j = 0; j <= 33; ++j) p.y.c[33 - j] = k[23 + j];
    return p;
}

namespace {

// Lexicographic minimum over the quaternion orbit of a fixed pre-image.
PointKey quaternion_min_key(const Field& f, const std::array<fe, 4>& gf4,
                            const MinimalPoint& p) {
    PointKey best{};
    bool first = true;
    for (int cv = 0; cv < 4; ++cv) {
        fe c = gf4[cv];
        fe d0 = valid_qd(f, c);
        for (fe d : {d0, fe(d0 ^ 1)}) {
            MinimalPoint q = p;
            q.x.c[0] ^= f.sq(c);
            for (int j = 0; j <= 22; ++j) q.y.c[j] ^= f.mul(c, p.x.c[j]);
            q.y.c[0] ^= d;
            PointKey k = point_key(q);
            if (first || k < best) {
                best = k;
                first = false;
            }
        }
    }
    return best;
}

}  // namespace

PointKey canonical_point_key(const Field& f, const MinimalPoint& p) {
    std::vector<fe> mu65 = f.roots_of_unity(65);
    std::vector<fe> mu3 = f.roots_of_unity(3);
    std::array<fe, 4> gf4 = {0, 1, mu3[1], mu3[2]};
    std::sort(gf4.begin(), gf4.end());
    PointKey best{};
    bool first = true;
    for (int m = 0; m < 12; ++m) {
        MinimalPoint pm;
        pm.x.c = poly_frob(f, p.x.c, m);
        pm.y.c = poly_frob(f, p.y.c, m);
        pm.y.c[0] ^= f.frob_fix(m);
        LinearizedMap L;
        for (int i = 0; i < 12; ++i) {
            fe e = fe(1) << i;
            L.col[i] = fe(f.mul(pm.x.c[21], e) ^ f.mul(pm.x.c[22], f.sq(e)));
        }
        for (fe lam : mu3) {
            for (fe A : mu65) {
                fe lamA20 = f.mul(lam, f.pw(A, 20));
                // minimize the t^20 coefficient over the reachable coset:
                // echelon basis of the image of B -> lamA20 * L(B)
                fe basis[12];
                int nb = 0;
                for (int i = 0; i < 12; ++i) {
                    fe v = f.mul(lamA20, L.col[i]);
                    for (bool changed = true; changed;) {
                        changed = false;
                        for (int r = 0; r < nb; ++r)
                            if (fe(v ^ basis[r]) < v) {
                                v ^= basis[r];
                                changed = true;
                            }
                    }
                    if (v) basis[nb++] = v;
                }
                fe c0 = f.mul(lamA20, pm.x.c[20]);
                fe vmin = c0;
                for (bool changed = true; changed;) {
                    changed = false;
                    for (int r = 0; r < nb; ++r)
                        if (fe(vmin ^ basis[r]) < vmin) {
                            vmin ^= basis[r];
                            changed = true;
                        }
                }
                fe rhs = fe(f.mul(f.inv(lamA20), fe(c0 ^ vmin)));
                std::vector<fe> bs = linearized_solve(L, rhs);
                for (fe B : bs) {
                    MinimalPoint q;
                    q.x.c = poly_subst(f, pm.x.c, A, B);
                    for (auto& c : q.x.c) c = f.mul(lam, c);
                    q.y.c = poly_subst(f, pm.y.c, A, B);
                    YPoly corr = subst_correction(f, A, B);
                    for (int j = 0; j <= 33; ++j) q.y.c[j] ^= corr.c[j];
                    PointKey k = quaternion_min_key(f, gf4, q);
                    if (first || k < best) {
                        best = k;
                        first = false;
                    }
                }
            }
        }
    }
    return best;
}

std::vector<OrbitRecord> orbit_partition(const Field& f,
                                         const std::vector<MinimalPoint>& pts,
                                         int threads) {
    int nthreads =
        threads > 0 ? threads : int(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    std::vector<PointKey> keys(pts.size());
    std::atomic<std::size_t> next{0};
    auto key_worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= pts.size()) return;
            keys[i] = canonical_point_key(f, pts[i]);
        }
    };
    {
        std::vector<std::thread> pool;
        for (int i = 1; i < nthreads; ++i) pool.emplace_back(key_worker);
        key_worker();
        for (auto& t : pool) t.join();
    }
    std::map<PointKey, int> counts;
    for (const auto& k : keys) ++counts[k];
    std::vector<OrbitRecord> records(counts.size());
    std::vector<const PointKey*> order;
    order.reserve(counts.size());
    for (const auto& [k, n] : counts) order.push_back(&k);
    std::atomic<std::size_t> next2{0};
    auto stab_worker = [&]() {
        for (;;) {
            std::size_t i = next2.fetch_add(1);
            if (i >= order.size()) return;
            OrbitRecord& r = records[i];
            r.rep = point_of_key(*order[i]);
            r.survivor_count = counts.at(*order[i]);
            r.stab = stabilizer_order(f, r.rep);
            if (r.stab <= 0 || kAutomorphismGroupOrder % r.stab != 0)
                throw FieldError("stabilizer order does not divide |G|");
            r.orbit_size = kAutomorphismGroupOrder / r.stab;
        }
    };
    {
        std::vector<std::thread> pool;
        for (int i = 1; i < nthreads; ++i) pool.emplace_back(stab_worker);
        stab_worker();
        for (auto& t : pool) t.join();
    }
    return records;
}

std::vector<std::pair<int, int>> stabilizer_histogram(
    const std::vector<OrbitRecord>& records) {
    std::map<int, int> h;
    for (const auto& r : records) ++h[r.stab];
    return {h.begin(), h.end()};
}

void Rational::add(std::int64_t n, std::int64_t d) {
    num = num * d + n * den;
    den *= d;
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num)
                    : std::to_string(num) + "/" + std::to_string(den);
}

Rational stab_sum(const std::vector<OrbitRecord>& records) {
    Rational s;
    for (const auto& r : records) s.add(1, r.stab);
    return s;
}

std::int64_t kissing_number(const std::vector<OrbitRecord>& records) {
    // two routes: sum of orbit sizes, and |G| * sum 1/|Stab| in rationals
    std::int64_t direct = 0;
    for (const auto& r : records) direct += r.orbit_size;
    Rational s = stab_sum(records);
    if ((kAutomorphismGroupOrder * s.num) % s.den != 0)
        throw FieldError("kissing number came out non-integral");
    std::int64_t via_sum = kAutomorphismGroupOrder / s.den * s.num;
    if (direct != via_sum)
        throw FieldError("kissing number routes disagree");
    return direct;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

std::string factorization_str(std::int64_t n) {
    std::string s;
    for (const auto& [p, e] : factorize(n)) {
        if (!s.empty()) s += " * ";
        s += std::to_string(p);
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

namespace {

// decimal string of base^exp via schoolbook bignum
std::string power_decimal(std::uint32_t base, int exp) {
    std::vector<std::uint32_t> limbs{1};  // base 10^9
    for (int i = 0; i < exp; ++i) {
        std::uint64_t carry = 0;
        for (auto& l : limbs) {
            std::uint64_t v = std::uint64_t(l) * base + carry;
            l = std::uint32_t(v % 1000000000);
            carry = v / 1000000000;
        }
        while (carry) {
            limbs.push_back(std::uint32_t(carry % 1000000000));
            carry /= 1000000000;
        }
    }
    std::string s = std::to_string(limbs.back());
    for (auto it = limbs.rbegin() + 1; it != limbs.rend(); ++it) {
        std::string part = std::to_string(*it);
        s += std::string(9 - part.size(), '0') + part;
    }
    return s;
}

}  // namespace

LatticeConstants lattice_constants() {
    LatticeConstants c;
    c.min_norm = 22;
    c.dimension = 128;
    c.disc_log2 = 120;
    c.disc_flag =
        "derived: |Sha| * disc = 2^120 with Sha trivial; not independently "
        "verified";
    // normalized center density (min/4)^(dim/2) / sqrt(disc) = 11^64 / 2^124
    c.density_num = power_decimal(11, 64);
    c.density_den = power_decimal(2, 124);
    c.log2_density = 64.0L * std::log2l(11.0L) - 124.0L;
    c.min_norm_bound = 2 * (((1 << 6) + 4) / 6);
    return c;
}

}  // namespace mw128
