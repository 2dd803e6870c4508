#ifndef MW128_TEST_UTIL_HPP
#define MW128_TEST_UTIL_HPP

#include <random>

#include "mw128/field.hpp"

namespace mw128::test {

inline const Field& default_field() {
    static Field f{FieldConfig{}};
    return f;
}

// Next verified-irreducible degree-12 modulus after the default one.
inline std::uint32_t alt_modulus() {
    static std::uint32_t alt = [] {
        for (std::uint32_t m = 0x1054; m < 0x2000; ++m) {
            if (!(m & 1)) continue;
            if (!reducibility_witness(m)) return m;
        }
        throw FieldError("no alternate modulus found");
    }();
    return alt;
}

inline const Field& alt_field() {
    static Field f = [] {
        FieldConfig cfg;
        cfg.modulus = alt_modulus();
        return Field{cfg};
    }();
    return f;
}

struct Rng {
    std::mt19937 g;
    explicit Rng(std::uint32_t seed) : g(seed) {}
    fe element() { return fe(g() & 0xFFF); }
    fe nonzero() {
        fe x;
        do x = element();
        while (!x);
        return x;
    }
};

}  // namespace mw128::test

#endif
