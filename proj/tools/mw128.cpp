// mw128: exact-arithmetic toolkit for the minimal vectors of the rank-128
// Mordell-Weil lattice of y^2 + y = x^3 + t^65 + a6 over GF(4096)(t).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mw128/io.hpp"
#include "mw128/minsearch.hpp"
#include "mw128/report.hpp"
#include "mw128/selmer.hpp"
#include "mw128/symmetry.hpp"

using namespace mw128;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalOpts {
    std::string modulus_hex;
    std::string generator = "auto";
    std::string a6 = "auto";
    std::string config_path;
    std::string format = "text";
};

FieldConfig field_config(const GlobalOpts& g) {
    FieldConfig cfg;
    if (!g.config_path.empty()) cfg = io::parse_config_file(g.config_path);
    if (!g.modulus_hex.empty())
        cfg.modulus = std::uint32_t(std::stoul(g.modulus_hex, nullptr, 16));
    if (g.generator != "auto" && !g.generator.empty())
        cfg.generator = io::parse_fe(g.generator);
    if (g.a6 != "auto" && !g.a6.empty()) cfg.a6 = io::parse_fe(g.a6);
    return cfg;
}

std::string poly_line(const std::array<fe, 23>& c) {
    return io::format_poly(std::vector<fe>(c.begin(), c.end()));
}
std::string poly_line(const std::array<fe, 34>& c) {
    return io::format_poly(std::vector<fe>(c.begin(), c.end()));
}

// ---------------------------------------------------------------- selftest --

int cmd_selftest(const Field& f, bool corrupt_table) {
    std::uint32_t seed = 0x5e1f7e57;
    std::mt19937 rng(seed);
    auto fail = [&](const char* invariant) {
        std::printf("selftest: FAIL %s (seed %08x)\n", invariant, seed);
        return 1;
    };

    // field tables vs the table-free reference product
    for (int i = 0; i < 20000; ++i) {
        fe a = fe(rng() & 0xFFF), b = fe(rng() & 0xFFF);
        fe want = f.ref_mul(a, b);
        fe got = f.mul(a, b);
        if (corrupt_table && i == 12345) got ^= 1;  // test hook
        if (got != want) return fail("log/antilog multiplication tables");
    }
    for (int x = 0; x < kFieldSize; ++x) {
        if (f.sqrt(f.sq(fe(x))) != fe(x))
            return fail("square / square-root bijection");
        if (f.trace(fe(f.sq(fe(x)) ^ fe(x))) != 0)
            return fail("trace of x^2 + x");
    }
    // linearized solver vs brute force
    for (int t = 0; t < 50; ++t) {
        LinearizedMap L;
        for (auto& c : L.col) c = fe(rng() & 0xFFF);
        fe v = fe(rng() & 0xFFF);
        std::vector<fe> brute;
        for (int x = 0; x < kFieldSize; ++x)
            if (L.apply(fe(x)) == v) brute.push_back(fe(x));
        if (linearized_solve(L, v) != brute) return fail("linearized solver");
    }
    // curve identity: the two eta routes agree; recover_y inverts y^2 + y
    for (int t = 0; t < 300; ++t) {
        XPoly x;
        for (auto& c : x.c) c = fe(rng() & 0xFFF);
        if (eta_from_x(f, x, EtaRoute::Convolution) !=
            eta_from_x(f, x, EtaRoute::PolyMul))
            return fail("eta convolution vs polynomial-cube route");
    }
    // automorphism machinery start-up checks
    auto mu65 = f.roots_of_unity(65);
    for (int t = 0; t < 500; ++t) {
        fe a = mu65[rng() % 65], b = fe(rng() & 0xFFF);
        try {
            subst_correction(f, a, b);
        } catch (const FieldError&) {
            return fail("substitution y-correction");
        }
    }
    auto roots = f.roots_of_unity(3);
    CandidateResult basic =
        complete_candidate(f, XiTuple{1, 0, 0, 0, 0, roots[1]}, true);
    if (basic.stage != Stage::Accepted || basic.quaternion_orbit.size() != 8)
        return fail("quaternion completion family");
    for (const auto& q : basic.quaternion_orbit)
        if (!on_curve(f, q)) return fail("quaternion curve preservation");
    std::printf("selftest: ok (modulus %x, a6 %s)\n", f.modulus(),
                io::fe_hex(f.a6()).c_str());
    return 0;
}

// -------------------------------------------------------------- find-basic --

int cmd_find_basic(const Field& f, const std::string& format) {
    auto roots = f.roots_of_unity(3);
    CandidateResult r = complete_candidate(f, XiTuple{1, 0, 0, 0, 0, roots[1]});
    if (r.stage != Stage::Accepted) {
        std::printf("find-basic: completion failed at stage %s\n",
                    stage_name(r.stage));
        return 1;
    }
    fe p = r.v;
    fe x0 = r.x0;
    fe x0cube = f.mul(f.sq(x0), x0);
    bool ok = on_curve(f, r.point) && height(r.point) == 22 &&
              fe(f.sq(p) ^ p ^ 1) == 0 && fe(f.frob_pow(x0, 2) ^ x0) == p &&
              f.trace(x0cube) == 1;
    if (format == "json") {
        nlohmann::ordered_json j;
        j["x"] = poly_line(r.point.x.c);
        j["y"] = poly_line(r.point.y.c);
        j["x1"] = io::fe_hex(p);
        j["x0"] = io::fe_hex(x0);
        j["height"] = height(r.point);
        j["on_curve"] = on_curve(f, r.point);
        j["x1_cube_root_condition"] = fe(f.sq(p) ^ p ^ 1) == 0;
        j["x0_quartic_condition"] = fe(f.frob_pow(x0, 2) ^ x0) == p;
        j["trace_x0_cubed"] = f.trace(x0cube);
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("x  = %s\n", poly_line(r.point.x.c).c_str());
        std::printf("y  = %s\n", poly_line(r.point.y.c).c_str());
        std::printf("x1 = %s  (x1^2 + x1 + 1 = 0: %s)\n", io::fe_hex(p).c_str(),
                    fe(f.sq(p) ^ p ^ 1) == 0 ? "yes" : "NO");
        std::printf("x0 = %s  (x0^4 + x0 = x1: %s, trace(x0^3) = %d)\n",
                    io::fe_hex(x0).c_str(),
                    fe(f.frob_pow(x0, 2) ^ x0) == p ? "yes" : "NO",
                    f.trace(x0cube));
        std::printf("height = %d\n", height(r.point));
        std::printf("on_curve = %s\n", on_curve(f, r.point) ? "true" : "false");
    }
    return ok ? 0 : 1;
}

// ------------------------------------------------------------ selmer-check --

int cmd_selmer_check(const Field& f, const std::vector<std::string>& hex,
                     const std::string& format) {
    if (hex.size() != 6)
        throw UsageError("selmer-check needs six hex field elements");
    XiTuple xi;
    try {
        xi = XiTuple{io::parse_fe(hex[0]), io::parse_fe(hex[1]),
                     io::parse_fe(hex[2]), io::parse_fe(hex[3]),
                     io::parse_fe(hex[4]), io::parse_fe(hex[5])};
    } catch (const FieldError& e) {
        throw UsageError(e.what());
    }
    bool member = is_selmer_member(f, xi);
    LocalSolvability ls = local_solvability(f, xi);
    CandidateResult r = complete_candidate(f, xi);
    SelmerRankReport rank = selmer_rank_report();
    bool cf_ok = xi.x21 ? closed_form_check(f, xi) : true;

    if (format == "json") {
        nlohmann::ordered_json j;
        j["xi"] = {io::fe_hex(xi.x21), io::fe_hex(xi.x17), io::fe_hex(xi.x13),
                   io::fe_hex(xi.x9), io::fe_hex(xi.x5), io::fe_hex(xi.x1)};
        j["selmer_member"] = member;
        j["locally_solvable"] = ls.solvable;
        if (!ls.solvable) j["obstruction_j0"] = ls.obstruction_j0;
        j["closed_forms_match"] = cf_ok;
        j["completion_stage"] = stage_name(r.stage);
        if (r.stage == Stage::Accepted) {
            j["x"] = poly_line(r.point.x.c);
            j["y"] = poly_line(r.point.y.c);
        }
        nlohmann::ordered_json rk;
        rk["dims"] = rank.dims;
        rk["total"] = rank.total;
        rk["group_size"] = rank.group_size_decimal;
        rk["half_rank"] = rank.half_rank;
        rk["sha_order"] = rank.sha_order;
        rk["disc"] = "2^" + std::to_string(rank.disc_log2);
        rk["disc_flag"] = rank.disc_flag;
        j["rank_report"] = rk;
        std::cout << j.dump(2) << "\n";
    } else {
        const char* sep = format == "tsv" ? "\t" : " = ";
        std::printf("selmer_member%s%s\n", sep, member ? "true" : "false");
        std::printf("locally_solvable%s%s\n", sep, ls.solvable ? "true" : "false");
        if (!ls.solvable)
            std::printf("obstruction_j0%s%d\n", sep, ls.obstruction_j0);
        std::printf("closed_forms_match%s%s\n", sep, cf_ok ? "true" : "false");
        std::printf("completion_stage%s%s\n", sep, stage_name(r.stage));
        if (r.stage == Stage::Accepted)
            std::printf("x%s%s\n", sep, poly_line(r.point.x.c).c_str());
        std::printf("selmer_dims%s12+12+4+12+12+12 = %d\n", sep, rank.total);
        std::printf("selmer_group_size%s%s\n", sep,
                    rank.group_size_decimal.c_str());
        std::printf("half_rank%s%d\n", sep, rank.half_rank);
        std::printf("disc%s2^%d (%s)\n", sep, rank.disc_log2,
                    rank.disc_flag.c_str());
    }
    // solvable must coincide with membership; anything else is a broken
    // invariant of the descent
    if (ls.solvable != member) {
        std::fprintf(stderr,
                     "selmer-check: local solvability disagrees with the "
                     "membership criterion\n");
        return 1;
    }
    return 0;
}

// ------------------------------------------------------------------ search --

int cmd_search(const Field& f, int threads, const std::string& checkpoint,
               const std::string& filter_str, const std::string& out_dir,
               int probes) {
    SearchConfig cfg;
    cfg.threads = threads;
    cfg.checkpoint_path = checkpoint;
    try {
        cfg.filter = SearchFilter::parse(filter_str);
    } catch (const FieldError& e) {
        throw UsageError(e.what());
    }
    auto t0 = std::chrono::steady_clock::now();
    SearchReport rep = run_search(f, cfg);
    std::vector<MinimalPoint> pts;
    pts.reserve(rep.survivors.size());
    for (const auto& s : rep.survivors) pts.push_back(survivor_point(f, s));
    std::vector<OrbitRecord> records = orbit_partition(f, pts, threads);
    CellGeometry geo(f);
    verify_survivor_closure(f, geo, rep.survivors, cfg.filter, probes,
                            0x5eedc105u);
    for (const auto& rec : records)
        if (24 % rec.stab != 0)
            std::fprintf(stderr,
                         "warning: stabilizer order %d outside the divisors "
                         "of 24; flagged for review\n",
                         rec.stab);
    auto t1 = std::chrono::steady_clock::now();

    std::filesystem::create_directories(out_dir.empty() ? "." : out_dir);
    std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
    std::string manifest_name = "manifest.json";

    std::string orbits = orbit_file_text(f, records, rep.filter_str, rep.total,
                                         manifest_name);
    std::string hist = histogram_tsv(f, records, rep.filter_str, rep.total,
                                     manifest_name);
    io::write_file((dir / "orbits.txt").string(), orbits);
    io::write_file((dir / "histogram.tsv").string(), hist);

    RunManifest man;
    man.command = "search";
    man.version = io::kVersion;
    {
        std::ostringstream os;
        os << std::hex << f.modulus();
        man.modulus_hex = os.str();
    }
    man.generator_hex = io::fe_hex(f.generator());
    man.a6_hex = io::fe_hex(f.a6());
    man.filter = rep.filter_str;
    man.threads = threads;
    man.total = rep.total;
    man.timing_ms = std::uint64_t(
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
    man.outputs = {{"orbits.txt", file_digest(orbits)},
                   {"histogram.tsv", file_digest(hist)}};
    man.stats = {{"cells", rep.stats.cells_searched},
                 {"cells_from_checkpoint", rep.stats.cells_from_checkpoint},
                 {"weight_sum", rep.stats.weight_sum},
                 {"x5_pairs", rep.stats.x5_pairs},
                 {"candidates", rep.stats.candidates},
                 {"survivors", rep.survivors.size()},
                 {"orbits", records.size()},
                 {"duplicates_across_cells",
                  rep.survivors.size() - records.size()},
                 {"all_branch", rep.stats.all_branch},
                 {"single_solutions", rep.stats.single_solutions},
                 {"shortcut_samples", rep.stats.shortcut_samples},
                 {"reference_samples", rep.stats.reference_samples},
                 {"closure_probes_per_survivor", std::uint64_t(probes)}};
    io::write_file((dir / manifest_name).string(), manifest_json(man));

    std::printf("%s\n", search_summary(records, rep.total).c_str());
    std::printf("kissing factorization: %s\n",
                factorization_str(kissing_number(records)).c_str());
    std::printf("outputs: %s, %s, %s\n", (dir / "orbits.txt").c_str(),
                (dir / "histogram.tsv").c_str(), (dir / manifest_name).c_str());
    return 0;
}

// ------------------------------------------------------------ verify-point --

int cmd_verify_point(const Field& f, const std::string& in_path,
                     const std::string& orbits_path, const std::string& format) {
    std::string text;
    try {
        text = io::read_file(in_path);
    } catch (const FieldError& e) {
        throw UsageError(e.what());
    }
    std::vector<std::vector<fe>> polys;
    {
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            std::vector<fe> coeffs;
            try {
                coeffs = io::parse_poly_line(line, line_no);
            } catch (const FieldError& e) {
                throw UsageError(e.what());
            }
            if (!coeffs.empty()) polys.push_back(std::move(coeffs));
        }
    }
    if (polys.empty() || polys.size() > 2)
        throw UsageError("expected one line with x (and optionally one with y)");
    if (polys[0].size() > 23)
        throw UsageError("x has degree above 22: not a minimal-point candidate");
    XPoly x;
    std::copy(polys[0].begin(), polys[0].end(), x.c.begin());
    if (degree(x) < 0) throw UsageError("the zero polynomial is rejected");

    std::optional<YPoly> y;
    if (polys.size() == 2) {
        if (polys[1].size() > 34) throw UsageError("y has degree above 33");
        YPoly yy;
        std::copy(polys[1].begin(), polys[1].end(), yy.c.begin());
        y = yy;
    } else {
        y = recover_y(f, eta_from_x(f, x));
    }

    int h = height(x);
    XiTuple xi = xi_of(x);
    bool member = is_selmer_member(f, xi);
    bool curve = false;
    int stab = 0;
    std::string orbit_match = "n/a";
    if (y) {
        MinimalPoint p{x, *y};
        curve = on_curve(f, p);
        if (curve && h == 22) {
            stab = stabilizer_order(f, p);
            if (!orbits_path.empty()) {
                std::vector<OrbitLine> lines;
                try {
                    lines = parse_orbit_file(io::read_file(orbits_path));
                } catch (const FieldError& e) {
                    throw UsageError(e.what());
                }
                PointKey key = canonical_point_key(f, p);
                orbit_match = "absent";
                for (std::size_t i = 0; i < lines.size(); ++i) {
                    MinimalPoint rep = orbit_line_point(f, lines[i]);
                    if (canonical_point_key(f, rep) == key) {
                        orbit_match = "line " + std::to_string(i + 1);
                        break;
                    }
                }
            }
        }
    }

    if (format == "json") {
        nlohmann::ordered_json j;
        j["height"] = h;
        j["on_curve"] = curve;
        j["y_exists"] = bool(y);
        j["xi"] = {io::fe_hex(xi.x21), io::fe_hex(xi.x17), io::fe_hex(xi.x13),
                   io::fe_hex(xi.x9), io::fe_hex(xi.x5), io::fe_hex(xi.x1)};
        j["selmer_member"] = member;
        if (stab) j["stabilizer_order"] = stab;
        j["orbit_match"] = orbit_match;
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("height = %d\n", h);
        std::printf("y_exists = %s\n", y ? "true" : "false");
        std::printf("on_curve = %s\n", curve ? "true" : "false");
        std::printf("xi = %s %s %s %s %s %s\n", io::fe_hex(xi.x21).c_str(),
                    io::fe_hex(xi.x17).c_str(), io::fe_hex(xi.x13).c_str(),
                    io::fe_hex(xi.x9).c_str(), io::fe_hex(xi.x5).c_str(),
                    io::fe_hex(xi.x1).c_str());
        std::printf("selmer_member = %s\n", member ? "true" : "false");
        if (stab) std::printf("stabilizer_order = %d\n", stab);
        std::printf("orbit_match = %s\n", orbit_match.c_str());
    }
    return 0;
}

// --------------------------------------------------------------- constants --

int cmd_constants(const std::string& format) {
    LatticeConstants c = lattice_constants();
    SelmerRankReport r = selmer_rank_report();
    if (format == "json") {
        nlohmann::ordered_json j;
        j["dimension"] = c.dimension;
        j["min_norm"] = c.min_norm;
        j["min_norm_lower_bound"] = c.min_norm_bound;
        j["discriminant"] = "2^" + std::to_string(c.disc_log2);
        j["discriminant_flag"] = c.disc_flag;
        j["center_density"] = {{"numerator", c.density_num},
                               {"denominator", c.density_den},
                               {"form", "11^64 / 2^124"},
                               {"log2", double(c.log2_density)}};
        j["selmer_rank"] = r.total;
        j["kissing_number"] = 218044170240;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    const char* sep = format == "tsv" ? "\t" : " = ";
    std::printf("dimension%s%d\n", sep, c.dimension);
    std::printf("min_norm%s%d\n", sep, c.min_norm);
    std::printf("min_norm_lower_bound%s%d\n", sep, c.min_norm_bound);
    std::printf("discriminant%s2^%d (%s)\n", sep, c.disc_log2,
                c.disc_flag.c_str());
    std::printf("center_density%s11^64 / 2^124\n", sep);
    std::printf("center_density_numerator%s%s\n", sep, c.density_num.c_str());
    std::printf("center_density_denominator%s%s\n", sep, c.density_den.c_str());
    std::printf("center_density_log2%s%.6Lf\n", sep, c.log2_density);
    std::printf("selmer_rank%s%d\n", sep, r.total);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact minimal-vector engine for the rank-128 Mordell-Weil "
                 "lattice of y^2 + y = x^3 + t^65 + a6 over GF(4096)(t)"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--modulus", g.modulus_hex,
                   "degree-12 modulus bits in hex (default 1053)");
    app.add_option("--generator", g.generator, "generator element or 'auto'");
    app.add_option("--a6", g.a6, "trace-1 curve constant or 'auto'");
    app.add_option("--config", g.config_path, "field config file");
    app.add_option("--format", g.format, "text | json | tsv")
        ->check(CLI::IsMember({"text", "json", "tsv"}));

    auto* selftest = app.add_subcommand("selftest", "run the property suites");
    bool corrupt = false;
    selftest->add_flag("--corrupt-table", corrupt,
                       "deliberately corrupt a table lookup (failure-path hook)");

    app.add_subcommand("find-basic",
                       "construct and verify the explicit basic solution");

    auto* selmer = app.add_subcommand(
        "selmer-check", "analyze a tuple of six free coefficients");
    std::vector<std::string> xi_hex;
    selmer->add_option("xi", xi_hex, "x21 x17 x13 x9 x5 x1 (hex)")
        ->expected(6);

    auto* search = app.add_subcommand(
        "search", "symmetry-reduced enumeration of all height-22 points");
    int threads = 0, probes = 4;
    std::string checkpoint, filter_str, out_dir = ".";
    search->add_option("--threads", threads, "worker threads (0 = all cores)");
    search->add_option("--checkpoint", checkpoint, "checkpoint file path");
    search->add_option("--filter", filter_str,
                       "cell filter, e.g. coset=0-20;h=0-1;x13=0-15;x9=000-fff");
    search->add_option("--out", out_dir, "output directory");
    search->add_option("--probes", probes,
                       "closure probes per survivor (0 disables)");

    auto* verify = app.add_subcommand("verify-point",
                                      "check a point given as coefficient lines");
    std::string in_path, orbits_path;
    verify->add_option("--in", in_path, "file with x (and optionally y)")
        ->required();
    verify->add_option("--orbits", orbits_path,
                       "orbit file to test membership against");

    app.add_subcommand("constants", "lattice constants and rank bookkeeping");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Field f{field_config(g)};
        if (app.got_subcommand("selftest")) return cmd_selftest(f, corrupt);
        if (app.got_subcommand("find-basic")) return cmd_find_basic(f, g.format);
        if (app.got_subcommand("selmer-check"))
            return cmd_selmer_check(f, xi_hex, g.format);
        if (app.got_subcommand("search"))
            return cmd_search(f, threads, checkpoint, filter_str, out_dir,
                              probes);
        if (app.got_subcommand("verify-point"))
            return cmd_verify_point(f, in_path, orbits_path, g.format);
        if (app.got_subcommand("constants")) return cmd_constants(g.format);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const FieldError& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
