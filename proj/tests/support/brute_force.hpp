// brute_force.hpp
//
// Test-only reference sums. Plain 64-bit loops that share nothing with the
// library's evaluation paths, so the library oracle is itself checked too.

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace brute {

inline int sign(std::uint64_t n) { return (std::popcount(n) & 1) ? -1 : 1; }

// sum over a <= n < b, n = l (mod m)
inline std::int64_t interval(std::uint64_t m, std::uint64_t l, std::uint64_t a, std::uint64_t b) {
    std::int64_t acc = 0;
    for (std::uint64_t n = a; n < b; ++n) {
        if (n % m == l) {
            acc += sign(n);
        }
    }
    return acc;
}

inline std::int64_t sum(std::uint64_t m, std::uint64_t l, std::uint64_t x) { return interval(m, l, 0, x); }

// prefix[x] = S_{m,l}(x) for 0 <= x <= x_max
inline std::vector<std::int64_t> prefix(std::uint64_t m, std::uint64_t l, std::uint64_t x_max) {
    std::vector<std::int64_t> p(x_max + 1, 0);
    for (std::uint64_t n = 0; n < x_max; ++n) {
        p[n + 1] = p[n] + ((n % m == l) ? sign(n) : 0);
    }
    return p;
}

}  // namespace brute
