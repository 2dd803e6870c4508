#include "mw128/io.hpp"

#include <fstream>
#include <sstream>

#include "mw128/curve.hpp"

namespace mw128::io {

std::string fe_hex(fe x) {
    static const char* digits = "0123456789abcdef";
    std::string s(3, '0');
    s[0] = digits[(x >> 8) & 0xF];
    s[1] = digits[(x >> 4) & 0xF];
    s[2] = digits[x & 0xF];
    return s;
}

namespace {
int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

fe parse_fe(std::string_view s) {
    if (s.empty() || s.size() > 3)
        throw FieldError("field element must be 1-3 hex digits, got '" +
                         std::string(s) + "'");
    unsigned v = 0;
    for (char c : s) {
        int d = hex_digit(c);
        if (d < 0)
            throw FieldError("bad hex digit '" + std::string(1, c) + "' in '" +
                             std::string(s) + "'");
        v = v << 4 | unsigned(d);
    }
    if (v >= kFieldSize)
        throw FieldError("field element out of range: " + std::string(s));
    return fe(v);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex_u64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

std::string format_poly(const std::vector<fe>& coeffs) {
    std::string s;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (i) s += ' ';
        s += fe_hex(coeffs[i]);
    }
    return s;
}

std::vector<fe> parse_poly_line(std::string_view line, int line_no) {
    std::vector<fe> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size()) break;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        std::string_view tok = line.substr(start, i - start);
        try {
            out.push_back(parse_fe(tok));
        } catch (const FieldError& e) {
            throw FieldError("line " + std::to_string(line_no) + ", column " +
                             std::to_string(start + 1) + ": " + e.what());
        }
    }
    return out;
}

FieldConfig parse_config_text(std::string_view text) {
    FieldConfig cfg;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                          : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            bool blank = true;
            for (char c : line)
                if (c != ' ' && c != '\t' && c != '\r') blank = false;
            if (!blank)
                throw FieldError("config line " + std::to_string(line_no) +
                                 ": expected key = value");
            continue;
        }
        auto trim = [](std::string_view v) {
            while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
            while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r'))
                v.remove_suffix(1);
            return v;
        };
        std::string_view key = trim(line.substr(0, eq));
        std::string_view val = trim(line.substr(eq + 1));
        if (key == "modulus") {
            cfg.modulus = std::uint32_t(std::stoul(std::string(val), nullptr, 16));
        } else if (key == "generator") {
            cfg.generator = (val == "auto") ? fe(0) : parse_fe(val);
        } else if (key == "a6") {
            cfg.a6 = (val == "auto") ? fe(0xFFFF) : parse_fe(val);
        } else if (key == "eta_route") {
            if (val == "convolution")
                cfg.eta_by_polymul = false;
            else if (val == "polymul")
                cfg.eta_by_polymul = true;
            else
                throw FieldError("config line " + std::to_string(line_no) +
                                 ": eta_route must be convolution or polymul");
        } else {
            throw FieldError("config line " + std::to_string(line_no) +
                             ": unknown key '" + std::string(key) + "'");
        }
    }
    return cfg;
}

FieldConfig parse_config_file(const std::string& path) {
    return parse_config_text(read_file(path));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FieldError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FieldError("cannot write " + path);
    out << content;
    if (!out) throw FieldError("write failed: " + path);
}

}  // namespace mw128::io
