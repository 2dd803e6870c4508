#include "mw128/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "mw128/io.hpp"

namespace mw128 {

OrbitLine orbit_line_of(const OrbitRecord& rec) {
    OrbitLine line;
    line.xi = xi_of(rec.rep.x);
    line.x0 = rec.rep.x.c[0];
    line.y0 = rec.rep.y.c[0];
    line.stab = rec.stab;
    line.orbit_size = rec.orbit_size;
    return line;
}

MinimalPoint orbit_line_point(const Field& f, const OrbitLine& line) {
    SurvivorRec rec;
    rec.xi = line.xi;
    rec.x0 = line.x0;
    rec.y0 = line.y0;
    return survivor_point(f, rec);
}

namespace {

std::string header(const Field& f, const char* kind,
                   const std::string& filter_str, bool total,
                   const std::string& manifest_ref) {
    std::ostringstream os;
    os << "# mw128 " << kind << " v1\n";
    os << "# modulus=" << std::hex << f.modulus() << std::dec
       << " generator=" << io::fe_hex(f.generator()) << " a6="
       << io::fe_hex(f.a6()) << "\n";
    os << "# scope=" << (total ? "total" : "PARTIAL") << " filter="
       << filter_str << "\n";
    if (!manifest_ref.empty()) os << "# manifest=" << manifest_ref << "\n";
    return os.str();
}

}  // namespace

std::string orbit_file_text(const Field& f, const std::vector<OrbitRecord>& records,
                            const std::string& filter_str, bool total,
                            const std::string& manifest_ref) {
    std::vector<std::string> lines;
    lines.reserve(records.size());
    for (const auto& rec : records) {
        OrbitLine l = orbit_line_of(rec);
        std::ostringstream os;
        os << io::fe_hex(l.xi.x21) << " " << io::fe_hex(l.xi.x17) << " "
           << io::fe_hex(l.xi.x13) << " " << io::fe_hex(l.xi.x9) << " "
           << io::fe_hex(l.xi.x5) << " " << io::fe_hex(l.xi.x1) << " "
           << io::fe_hex(l.x0) << " " << io::fe_hex(l.y0) << " " << l.stab
           << " " << l.orbit_size;
        lines.push_back(os.str());
    }
    std::sort(lines.begin(), lines.end());
    std::string out = header(f, "orbits", filter_str, total, manifest_ref);
    out += "# columns: x21 x17 x13 x9 x5 x1 x0 y0 stab orbit_size\n";
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

std::vector<OrbitLine> parse_orbit_file(const std::string& text) {
    std::vector<OrbitLine> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string t[8];
        long long stab = 0, orbit = 0;
        for (auto& s : t) ls >> s;
        ls >> stab >> orbit;
        if (!ls)
            throw FieldError("orbit file line " + std::to_string(line_no) +
                             ": expected 8 hex fields, stab, orbit_size");
        OrbitLine l;
        try {
            l.xi = XiTuple{io::parse_fe(t[0]), io::parse_fe(t[1]),
                           io::parse_fe(t[2]), io::parse_fe(t[3]),
                           io::parse_fe(t[4]), io::parse_fe(t[5])};
            l.x0 = io::parse_fe(t[6]);
            l.y0 = io::parse_fe(t[7]);
        } catch (const FieldError& e) {
            throw FieldError("orbit file line " + std::to_string(line_no) +
                             ": " + e.what());
        }
        l.stab = int(stab);
        l.orbit_size = orbit;
        out.push_back(l);
    }
    return out;
}

std::string histogram_tsv(const Field& f, const std::vector<OrbitRecord>& records,
                          const std::string& filter_str, bool total,
                          const std::string& manifest_ref) {
    std::string out = header(f, "stabilizer-histogram", filter_str, total,
                             manifest_ref);
    out += "stabilizer_order\torbit_count\n";
    for (auto [stab, count] : stabilizer_histogram(records))
        out += std::to_string(stab) + "\t" + std::to_string(count) + "\n";
    return out;
}

std::string search_summary(const std::vector<OrbitRecord>& records, bool total) {
    std::ostringstream os;
    if (!total) os << "PARTIAL ";
    os << "orbits=" << records.size() << " kissing="
       << kissing_number(records) << " sum=" << stab_sum(records).str();
    return os.str();
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["tool"] = "mw128";
    j["version"] = m.version;
    j["command"] = m.command;
    j["modulus"] = m.modulus_hex;
    j["generator"] = m.generator_hex;
    j["a6"] = m.a6_hex;
    j["filter"] = m.filter;
    j["threads"] = m.threads;
    j["total"] = m.total;
    j["timing_ms"] = m.timing_ms;
    nlohmann::ordered_json outs = nlohmann::ordered_json::object();
    for (const auto& [name, digest] : m.outputs) outs[name] = digest;
    j["outputs"] = outs;
    nlohmann::ordered_json stats = nlohmann::ordered_json::object();
    for (const auto& [name, value] : m.stats) stats[name] = value;
    j["stats"] = stats;
    return j.dump(2) + "\n";
}

std::string file_digest(const std::string& content) {
    return "fnv1a64:" + io::hex_u64(io::fnv1a64(content));
}

}  // namespace mw128
