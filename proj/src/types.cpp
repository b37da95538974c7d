#include "newman/types.hpp"

#include <algorithm>
#include <cctype>

namespace newman {

Natural::Natural(mpz_class v) : value_(std::move(v)) {
    if (sgn(value_) < 0) {
        throw DomainError("Natural: negative value " + value_.get_str());
    }
}

Natural Natural::parse(std::string_view text) {
    int base = 10;
    std::string_view digits = text;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
        base = 16;
        digits.remove_prefix(2);
    } else if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'b' || digits[1] == 'B')) {
        base = 2;
        digits.remove_prefix(2);
    }
    const auto valid = [base](char c) {
        const auto u = static_cast<unsigned char>(c);
        switch (base) {
            case 2: return c == '0' || c == '1';
            case 16: return std::isxdigit(u) != 0;
            default: return std::isdigit(u) != 0;
        }
    };
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), valid)) {
        throw DomainError("not a nonnegative integer: '" + std::string(text) + "'");
    }
    mpz_class v;
    v.set_str(std::string(digits), base);
    return Natural(std::move(v));
}

Natural Natural::power_of_two(unsigned long k) {
    mpz_class v;
    mpz_setbit(v.get_mpz_t(), k);
    return Natural(std::move(v));
}

std::size_t Natural::bit_length() const noexcept {
    return is_zero() ? 0 : mpz_sizeinbase(value_.get_mpz_t(), 2);
}

unsigned long Natural::mod(unsigned long m) const noexcept {
    return mpz_fdiv_ui(value_.get_mpz_t(), m);
}

std::uint64_t Natural::to_u64() const {
    if (!value_.fits_ulong_p()) {
        throw DomainError("value does not fit in 64 bits: " + value_.get_str());
    }
    return value_.get_ui();
}

Natural operator-(const Natural& a, const Natural& b) {
    if (a < b) {
        throw DomainError("Natural subtraction underflow");
    }
    return Natural(mpz_class(a.value_ - b.value_));
}

BitDecomposition::BitDecomposition(const Natural& x) {
    const mpz_srcptr z = x.value().get_mpz_t();
    for (std::size_t k = x.bit_length(); k-- > 0;) {
        if (mpz_tstbit(z, k)) {
            exponents_.push_back(k);
        }
    }
}

Natural BitDecomposition::reconstruct() const {
    mpz_class v;
    for (const unsigned long k : exponents_) {
        mpz_setbit(v.get_mpz_t(), k);
    }
    return Natural(std::move(v));
}

ResidueClass::ResidueClass(std::uint64_t modulus, std::uint64_t residue)
    : modulus_(modulus), residue_(residue) {
    if (modulus == 0) {
        throw DomainError("ResidueClass: modulus must be >= 1");
    }
    if (residue >= modulus) {
        throw DomainError("ResidueClass: residue must lie in [0, modulus)");
    }
}

}  // namespace newman
