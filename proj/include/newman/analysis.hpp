// analysis.hpp
//
// Normalized ratios, sharp bounds and extremal sequences for S(N) = S_{3,0}(N).
//
//   lambda        = ln 3 / ln 4, the growth exponent (4^lambda = 3)
//   delta(N)      = S(N) / N^lambda
//   liminf delta  = 2 / 6^lambda            realized on N = 2^n + 2^(n-1), n even
//   limsup delta  = 55 / (3 * 65^lambda)    realized on N = 2^n + 2^(n-6), n even
//
//   floor(2 (N/6)^lambda) <= S(N) <= ceil((55/3) (N/65)^lambda)    (upper: N >= 2)
//   (2/sqrt 3) x^lambda <= S(3x) <= (55/3)(3/65)^lambda x^lambda  (x >= 2)
//
// Reals are MPFR numbers with 50 significant decimal digits. Floor and ceil
// of the bound expressions are re-evaluated at 100 digits when the 50-digit
// argument lies within 1e-9 of an integer, since several bounds land exactly
// on integers (N = 6, 24, 260, ...).

#pragma once

#include "newman/core.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <functional>
#include <optional>
#include <vector>

namespace newman {

using Real = boost::multiprecision::mpfr_float_50;
using WideReal = boost::multiprecision::mpfr_float_100;

Real lambda();

// Symbolic constants, evaluated on demand.
Real liminf_delta();   // 2 / 6^lambda
Real limsup_delta();   // 55 / (3 * 65^lambda)
Real coquet_liminf();  // 2 / sqrt(3)
Real coquet_limsup();  // (55/3) (3/65)^lambda

Real to_real(const mpz_class& z);

// S(N) / N^lambda. Throws DomainError for N = 0.
Real delta(const Natural& n);

// S([x, y)) / (y - x)^lambda. Throws DomainError unless x < y.
Real interval_delta(const Natural& x, const Natural& y);

// floor(2 (N/6)^lambda). Throws DomainError for N = 0.
SumValue lower_bound(const Natural& n);

// ceil((55/3) (N/65)^lambda). Throws DomainError for N < 2.
SumValue upper_bound(const Natural& n);

// S(3x) / x^lambda. Throws DomainError for x < 2.
Real coquet_ratio(const Natural& x);

struct DeltaRecord {
    Natural n;
    SumValue s;
    Real delta;
    SumValue lower;
    std::optional<SumValue> upper;  // empty for N = 1
    bool in_bounds;
};

// Builds the record for one N >= 1 from a known S(N).
DeltaRecord make_delta_record(const Natural& n, const SumValue& s);

// Records for N = 2^n + 2^(n-1) (even n >= 2) and N = 2^n + 2^(n-6)
// (even n >= 8), n <= n_max, in ascending N. Throws DomainError for n_max < 8.
std::vector<DeltaRecord> extremal_sequences(unsigned long n_max);

// 1/20 < S(x) x^(-lambda) < 5. Throws DomainError for x = 0.
bool newman_inequality_check(const Natural& x);

// Correction term as originally defined: 0 for even x, (-1)^{sigma(3x-3)} for odd x.
SumValue eta_defined(const Natural& x);

// Value forced by 1-periodicity: 3 S(3x) - S(12x).
SumValue eta_derived(const Natural& x);

// Value forced at x = k + 1/2: 3 S(3k) - S(3(4k+2)) + 3 (-1)^{sigma(3k)}.
SumValue eta_half(const Natural& k);

struct EtaRow {
    Natural x;
    SumValue eta_defined;
    SumValue eta_derived;
    bool agree;
};

EtaRow eta_row(const Natural& x);

// One DeltaRecord per N in [from, to) stepping by `step`, delivered to `sink`
// in ascending N. With workers > 1 the range is split into contiguous blocks
// evaluated concurrently; delivery order is unchanged.
// Throws DomainError unless 1 <= from < to and step >= 1.
void scan(const Natural& from, const Natural& to, std::uint64_t step,
          const std::function<void(const DeltaRecord&)>& sink, unsigned workers = 1);

std::vector<DeltaRecord> scan(const Natural& from, const Natural& to, std::uint64_t step,
                              unsigned workers = 1);

}  // namespace newman
