#ifndef MW128_IO_HPP
#define MW128_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mw128/field.hpp"

namespace mw128 {
struct XPoly;
struct YPoly;
}

namespace mw128::io {

inline constexpr const char* kVersion = "0.1.0";

// Field elements serialize as exactly 3 lowercase hex digits.
std::string fe_hex(fe x);
fe parse_fe(std::string_view s);  // throws FieldError on malformed input

std::uint64_t fnv1a64(std::string_view s);
std::string hex_u64(std::uint64_t v);

// Textual polynomial format: space-separated hex coefficients from degree 0
// upward. Throws FieldError carrying line/column diagnostics.
std::string format_poly(const std::vector<fe>& coeffs);
std::vector<fe> parse_poly_line(std::string_view line, int line_no);

// Field configuration file, documented key = value text format with '#'
// comments: modulus (hex bits), generator (auto | hex), a6 (auto | hex).
FieldConfig parse_config_file(const std::string& path);
FieldConfig parse_config_text(std::string_view text);

std::string read_file(const std::string& path);      // throws FieldError
void write_file(const std::string& path, std::string_view content);

}  // namespace mw128::io

#endif
