// core.hpp
//
// Exact evaluation of the Newman digit sum
//
//   S_{m,l}(x) = sum_{0 <= n < x, n = l (mod m)} (-1)^{sigma(n)}
//
// where sigma(n) is the binary digit sum. The central case is m = 3, l = 0,
// written S(x) below.
//
// Two independent O(log x) evaluators are provided:
//
//   newman_sum_decomposition   walks the binary expansion of x from the top
//                              bit down. Every prefix interval [y, y + 2^m)
//                              is reduced, through t(y) mod 6, to one of two
//                              closed forms:
//                                S(2^m)              = 2*3^(m/2-1)  (m even)
//                                                      3^((m-1)/2)  (m odd)
//                                S([2^n, 2^n+2^m))   = 3^(m/2-1)    (m even)
//                                                      3^((m-1)/2)  (m, n odd)
//                                                      0            (m odd, n even)
//                              plus a single boundary term when x is odd.
//
//   newman_sum_recursive       S(N) = 3 S(floor(N/4)) + nu(N), S(0) = 0,
//                              with nu(N) read off a table mod 24.
//
// oracle_sum is the O(x) reference both are checked against.

#pragma once

#include "newman/types.hpp"

#include <cstdint>
#include <map>
#include <optional>

namespace newman {

inline constexpr std::uint64_t default_oracle_cap = std::uint64_t{1} << 32;

// sigma(n)
unsigned long digit_sum(const Natural& n) noexcept;

// (-1)^{sigma(n)} as +1 / -1.
inline int thue_morse_sign(const Natural& n) noexcept { return (digit_sum(n) & 1u) ? -1 : 1; }

// t(y) = sum over set bits 2^k of y of (-1)^k. Congruent to y mod 3.
// Throws DomainError for y = 0.
long alt_exponent_sum(const Natural& y);

// Direct summation over [0, x). Refuses x > cap with OracleCapError.
SumValue oracle_sum(const ResidueClass& rc, const Natural& x,
                    std::uint64_t cap = default_oracle_cap);

// Direct summation over [lo, hi).
SumValue oracle_interval_sum(const ResidueClass& rc, const Natural& lo, const Natural& hi,
                             std::uint64_t cap = default_oracle_cap);

// ---- closed forms ----------------------------------------------------------

// S(2^m); S(1) = 1 for m = 0.
SumValue power_sum(unsigned long m);

// S([2^n, 2^n + 2^m)) for n > m; depends only on m and the parity of n.
// Throws DomainError for m = 0.
SumValue dyadic_sum(Parity n_parity, unsigned long m);

// t(y) mod 6, floored into [0, 6).
TClass classify_prefix(const Natural& y);
TClass tclass_from_t(long t) noexcept;

// Reduction of S([y, y + 2^m)) for a prefix y whose lowest set bit is above m.
// Throws DomainError for m = 0.
ReductionOutcome reduce_interval(TClass tc, unsigned long m);

SumValue evaluate(const ReductionOutcome& outcome);

// S([N-1, N)) for odd N. Throws DomainError for even N.
SumValue boundary_term(const Natural& n);

// ---- algorithms ------------------------------------------------------------

SumValue newman_sum_decomposition(const Natural& x);

// Same result; every contributing term is appended to `trace`.
SumValue newman_sum_decomposition(const Natural& x, Trace& trace);

NuClass nu_class(unsigned residue_mod_24);

// Correction term of the mod-24 recursion. Throws DomainError for N = 0.
SumValue nu(const Natural& n);

SumValue newman_sum_recursive(const Natural& n);

// Trace holds one entry per recursion level, outermost first:
// description "S(N_k) = 3*S(N_{k+1}) + nu(N_k)", value 3^k * nu(N_k).
SumValue newman_sum_recursive(const Natural& n, Trace& trace);

// Renders the nonzero terms of a recursive trace deepest-first, e.g.
// "19683-2187+729+27+9=18261".
std::string render_recursive_summary(const Trace& trace, const SumValue& total);

// Renders a decomposition trace in closed form, e.g.
// "2*3^8+0+2*3^7+0+3^6+3^3+3^2=18261".
std::string render_decomposition_summary(const Trace& trace, const SumValue& total);

// Evaluator for the mod-24 recursion with an optional memo table shared
// across calls. Not synchronized: keep one instance per worker.
class RecursiveEvaluator {
public:
    explicit RecursiveEvaluator(bool memoize = false) : memoize_(memoize) {}

    SumValue operator()(const Natural& n);

    std::size_t memo_size() const noexcept { return memo_.size(); }

private:
    struct MpzLess {
        bool operator()(const mpz_class& a, const mpz_class& b) const noexcept { return cmp(a, b) < 0; }
    };

    SumValue memoized(const mpz_class& n);

    bool memoize_;
    std::map<mpz_class, SumValue, MpzLess> memo_;
};

// ---- residue-class relatives ----------------------------------------------

enum class Algorithm { decomposition, recursive };

// S([x, y)) = S(y) - S(x). Throws DomainError for x > y.
SumValue interval_sum(const Natural& x, const Natural& y, Algorithm alg = Algorithm::recursive);

// S_{3,l}(N) for l in {0,1,2}, expressed through S_{3,0}.
SumValue residue_sum(unsigned l, const Natural& n, Algorithm alg = Algorithm::recursive);

// S_{6,j}([2x, 2y)) for j in {0..5}. Throws DomainError for x > y or j > 5.
// x == y gives 0.
SumValue six_residue_sum(unsigned j, const Natural& x, const Natural& y);

// S_{3*2^m, k*2^m + r}(2^n) = (-1)^{sigma(r)} S_{3,k}(2^{n-m}).
// Requires 0 <= r < 2^m, k in {0,1,2}, n > m.
SumValue scaled_residue_sum(unsigned long m, unsigned k, const Natural& r, unsigned long n);

}  // namespace newman
