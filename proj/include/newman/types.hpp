// types.hpp
//
// Domain types shared by the evaluation algorithms and the analysis layer.
//
//   Natural          arbitrary-precision integer >= 0 (argument of every sum)
//   SumValue         arbitrary-precision signed integer (value of S_{m,l})
//   BitDecomposition strictly descending set-bit exponents of a Natural
//   ResidueClass     (modulus, residue) pair selecting n = residue (mod modulus)
//   TClass           t(y) mod 6, drives the six-way interval reduction
//   ReductionOutcome signed reference to a closed-form primitive
//   NuClass          coefficient of the mod-24 correction term
//
// All types are plain values; nothing here holds shared mutable state.

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace newman {

// Raised when an operation is called outside its mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised by the brute-force oracle instead of starting an O(x) loop that
// exceeds the configured cap.
class OracleCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using SumValue = mpz_class;

// -------------------------------------------------------
// Natural: nonnegative, unbounded.
// -------------------------------------------------------
class Natural {
public:
    Natural() = default;
    Natural(std::uint64_t v) : value_(mpz_class(static_cast<unsigned long>(v))) {}
    explicit Natural(mpz_class v);

    // Accepts decimal digits, or a 0x / 0b prefix for hex / binary.
    // Throws DomainError on malformed or negative input.
    static Natural parse(std::string_view text);

    // 2^k
    static Natural power_of_two(unsigned long k);

    const mpz_class& value() const noexcept { return value_; }

    bool is_zero() const noexcept { return sgn(value_) == 0; }
    bool is_odd() const noexcept { return mpz_odd_p(value_.get_mpz_t()) != 0; }
    bool test_bit(unsigned long k) const noexcept { return mpz_tstbit(value_.get_mpz_t(), k) != 0; }

    // Number of binary digits; 0 for zero.
    std::size_t bit_length() const noexcept;

    // Value mod a small positive modulus.
    unsigned long mod(unsigned long m) const noexcept;

    // Narrowing accessors; throw DomainError when the value does not fit.
    std::uint64_t to_u64() const;

    std::string to_string() const { return value_.get_str(); }

    friend bool operator==(const Natural& a, const Natural& b) noexcept { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Natural& a, const Natural& b) noexcept {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend Natural operator+(const Natural& a, const Natural& b) { return Natural(mpz_class(a.value_ + b.value_)); }
    friend Natural operator*(const Natural& a, unsigned long k) { return Natural(mpz_class(a.value_ * k)); }

    // a - b, requires a >= b.
    friend Natural operator-(const Natural& a, const Natural& b);

private:
    mpz_class value_;
};

// -------------------------------------------------------
// BitDecomposition: x = sum 2^exponents[i], exponents strictly descending.
// -------------------------------------------------------
class BitDecomposition {
public:
    explicit BitDecomposition(const Natural& x);

    const std::vector<unsigned long>& exponents() const noexcept { return exponents_; }
    bool empty() const noexcept { return exponents_.empty(); }
    std::size_t size() const noexcept { return exponents_.size(); }

    Natural reconstruct() const;

private:
    std::vector<unsigned long> exponents_;
};

// -------------------------------------------------------
// ResidueClass: integers n with n = residue (mod modulus).
// -------------------------------------------------------
class ResidueClass {
public:
    ResidueClass(std::uint64_t modulus, std::uint64_t residue);

    std::uint64_t modulus() const noexcept { return modulus_; }
    std::uint64_t residue() const noexcept { return residue_; }

private:
    std::uint64_t modulus_;
    std::uint64_t residue_;
};

enum class TClass : int { T0 = 0, T1, T2, T3, T4, T5 };

enum class Parity { even, odd };

inline Parity parity_of(unsigned long k) noexcept { return (k & 1u) ? Parity::odd : Parity::even; }

// S_{3,0}(2^m)
struct PowerForm {
    unsigned long m;
    bool operator==(const PowerForm&) const = default;
};

// S_{3,0}([2^n, 2^n + 2^m)) for any n > m of the given parity.
struct DyadicForm {
    Parity n_parity;
    unsigned long m;
    bool operator==(const DyadicForm&) const = default;
};

struct ReductionOutcome {
    int sign;  // +1 or -1
    std::variant<PowerForm, DyadicForm> form;
    bool operator==(const ReductionOutcome&) const = default;
};

// Coefficient of (-1)^{sigma(N)} in the mod-24 correction term.
enum class NuCoefficient : int {
    zero = 0,
    plus_sigma = 1,
    minus_sigma = -1,
    plus_two_sigma = 2,
    minus_two_sigma = -2,
};

struct NuClass {
    unsigned residue_mod_24;
    NuCoefficient coefficient;
};

// One step of an evaluation trace: a human-readable label and the signed
// integer it contributes to the total.
struct TraceTerm {
    std::string description;
    std::string closed_form;
    SumValue value;
};

using Trace = std::vector<TraceTerm>;

}  // namespace newman
