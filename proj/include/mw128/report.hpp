#ifndef MW128_REPORT_HPP
#define MW128_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mw128/minsearch.hpp"
#include "mw128/symmetry.hpp"

namespace mw128 {

// One orbit per line: the six free coefficients of the representative, its
// x0 and y(0), the exact stabilizer order, and the orbit size. Lines are
// sorted lexicographically. Report files carry only deterministic content;
// timing and digests live in the manifest they reference.

struct OrbitLine {
    XiTuple xi;
    fe x0 = 0, y0 = 0;
    int stab = 1;
    std::int64_t orbit_size = 0;
};

OrbitLine orbit_line_of(const OrbitRecord& rec);
MinimalPoint orbit_line_point(const Field& f, const OrbitLine& line);

std::string orbit_file_text(const Field& f, const std::vector<OrbitRecord>& records,
                            const std::string& filter_str, bool total,
                            const std::string& manifest_ref);
std::vector<OrbitLine> parse_orbit_file(const std::string& text);

std::string histogram_tsv(const Field& f, const std::vector<OrbitRecord>& records,
                          const std::string& filter_str, bool total,
                          const std::string& manifest_ref);

// "orbits=2940 kissing=218044170240 sum=8531/3", prefixed PARTIAL when the
// run was filtered.
std::string search_summary(const std::vector<OrbitRecord>& records, bool total);

struct RunManifest {
    std::string command;
    std::string version;
    std::string modulus_hex;
    std::string generator_hex;
    std::string a6_hex;
    std::string filter;
    int threads = 0;
    bool total = false;
    std::uint64_t timing_ms = 0;
    std::vector<std::pair<std::string, std::string>> outputs;  // name, digest
    std::vector<std::pair<std::string, std::uint64_t>> stats;
};
std::string manifest_json(const RunManifest& m);

std::string file_digest(const std::string& content);

}  // namespace mw128

#endif
