#include "newman/analysis.hpp"

#include <algorithm>
#include <future>

namespace newman {

namespace mp = boost::multiprecision;

namespace {

template <class T>
T real_from(const mpz_class& z) {
    T r;
    mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

template <class T>
mpz_class integer_from(const T& r) {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), r.backend().data(), MPFR_RNDN);
    return z;
}

template <class T>
const T& lambda_of() {
    static const T value = mp::log(T(3)) / mp::log(T(4));
    return value;
}

template <class T>
T pow_lambda(const Natural& n) {
    return mp::pow(real_from<T>(n.value()), lambda_of<T>());
}

// 2 / 6^lambda, so that 2 (N/6)^lambda = lower_scale * N^lambda
template <class T>
const T& lower_scale() {
    static const T value = 2 / mp::pow(T(6), lambda_of<T>());
    return value;
}

// 55 / (3 * 65^lambda), so that (55/3)(N/65)^lambda = upper_scale * N^lambda
template <class T>
const T& upper_scale() {
    static const T value = T(55) / (3 * mp::pow(T(65), lambda_of<T>()));
    return value;
}

enum class Rounding { floor, ceil };

template <Rounding R, class T>
SumValue round_to_integer(const T& v) {
    return integer_from(R == Rounding::floor ? T(mp::floor(v)) : T(mp::ceil(v)));
}

// floor/ceil of scale * N^lambda, given the 50-digit value of N^lambda.
// Within 1e-9 of an integer the product is recomputed at 100 digits; if it
// is still within 1e-40 of an integer it is taken to be that integer.
template <Rounding R>
SumValue guarded_round(const Natural& n, const Real& n_pow, const Real& scale, const WideReal& wide_scale) {
    const Real a = scale * n_pow;
    if (mp::abs(a - mp::round(a)) >= Real("1e-9")) {
        return round_to_integer<R>(a);
    }
    const WideReal w = wide_scale * pow_lambda<WideReal>(n);
    const WideReal nearest = mp::round(w);
    if (mp::abs(w - nearest) < WideReal("1e-40")) {
        return integer_from(nearest);
    }
    return round_to_integer<R>(w);
}

SumValue lower_bound_from(const Natural& n, const Real& n_pow) {
    return guarded_round<Rounding::floor>(n, n_pow, lower_scale<Real>(), lower_scale<WideReal>());
}

SumValue upper_bound_from(const Natural& n, const Real& n_pow) {
    return guarded_round<Rounding::ceil>(n, n_pow, upper_scale<Real>(), upper_scale<WideReal>());
}

Real n_pow_lambda(const Natural& n) { return pow_lambda<Real>(n); }

}  // namespace

Real lambda() { return lambda_of<Real>(); }

Real liminf_delta() { return lower_scale<Real>(); }

Real limsup_delta() { return upper_scale<Real>(); }

Real coquet_liminf() { return 2 / mp::sqrt(Real(3)); }

Real coquet_limsup() { return Real(55) / 3 * mp::pow(Real(3) / 65, lambda()); }

Real to_real(const mpz_class& z) { return real_from<Real>(z); }

Real delta(const Natural& n) {
    if (n.is_zero()) {
        throw DomainError("delta: N must be >= 1");
    }
    return to_real(newman_sum_recursive(n)) / n_pow_lambda(n);
}

Real interval_delta(const Natural& x, const Natural& y) {
    if (!(x < y)) {
        throw DomainError("interval_delta: requires x < y");
    }
    return to_real(interval_sum(x, y)) / n_pow_lambda(y - x);
}

SumValue lower_bound(const Natural& n) {
    if (n.is_zero()) {
        throw DomainError("lower_bound: N must be >= 1");
    }
    return lower_bound_from(n, n_pow_lambda(n));
}

SumValue upper_bound(const Natural& n) {
    if (n < Natural(2)) {
        throw DomainError("upper_bound: N must be >= 2");
    }
    return upper_bound_from(n, n_pow_lambda(n));
}

Real coquet_ratio(const Natural& x) {
    if (x < Natural(2)) {
        throw DomainError("coquet_ratio: x must be >= 2");
    }
    return to_real(newman_sum_recursive(x * 3)) / n_pow_lambda(x);
}

DeltaRecord make_delta_record(const Natural& n, const SumValue& s) {
    if (n.is_zero()) {
        throw DomainError("make_delta_record: N must be >= 1");
    }
    const Real n_pow = n_pow_lambda(n);
    DeltaRecord rec{n, s, to_real(s) / n_pow, lower_bound_from(n, n_pow), std::nullopt, false};
    if (n >= Natural(2)) {
        rec.upper = upper_bound_from(n, n_pow);
    }
    rec.in_bounds = rec.lower <= s && (!rec.upper || s <= *rec.upper);
    return rec;
}

std::vector<DeltaRecord> extremal_sequences(unsigned long n_max) {
    if (n_max < 8) {
        throw DomainError("extremal_sequences: n_max must be >= 8");
    }
    std::vector<DeltaRecord> out;
    for (unsigned long n = 2; n <= n_max; n += 2) {
        const Natural low = Natural::power_of_two(n) + Natural::power_of_two(n - 1);
        out.push_back(make_delta_record(low, newman_sum_recursive(low)));
        if (n >= 8) {
            const Natural high = Natural::power_of_two(n) + Natural::power_of_two(n - 6);
            out.push_back(make_delta_record(high, newman_sum_recursive(high)));
        }
    }
    std::sort(out.begin(), out.end(), [](const DeltaRecord& a, const DeltaRecord& b) { return a.n < b.n; });
    return out;
}

bool newman_inequality_check(const Natural& x) {
    if (x.is_zero()) {
        throw DomainError("newman_inequality_check: x must be >= 1");
    }
    const Real d = delta(x);
    return Real(1) / 20 < d && d < 5;
}

SumValue eta_defined(const Natural& x) {
    if (x.is_zero()) {
        throw DomainError("eta_defined: x must be >= 1");
    }
    if (!x.is_odd()) {
        return 0;
    }
    return thue_morse_sign(x * 3 - Natural(3));
}

SumValue eta_derived(const Natural& x) {
    if (x.is_zero()) {
        throw DomainError("eta_derived: x must be >= 1");
    }
    return 3 * newman_sum_recursive(x * 3) - newman_sum_recursive(x * 12);
}

SumValue eta_half(const Natural& k) {
    const Natural three_k = k * 3;
    return 3 * newman_sum_recursive(three_k) - newman_sum_recursive((k * 4 + Natural(2)) * 3) +
           3 * thue_morse_sign(three_k);
}

EtaRow eta_row(const Natural& x) {
    EtaRow row{x, eta_defined(x), eta_derived(x), false};
    row.agree = row.eta_defined == row.eta_derived;
    return row;
}

namespace {

std::vector<DeltaRecord> scan_block(Natural first, std::uint64_t count, std::uint64_t step) {
    std::vector<DeltaRecord> out;
    out.reserve(count);
    const Natural stride(step);
    for (std::uint64_t i = 0; i < count; ++i, first = first + stride) {
        out.push_back(make_delta_record(first, newman_sum_recursive(first)));
    }
    return out;
}

}  // namespace

void scan(const Natural& from, const Natural& to, std::uint64_t step,
          const std::function<void(const DeltaRecord&)>& sink, unsigned workers) {
    if (from.is_zero() || !(from < to) || step == 0) {
        throw DomainError("scan: requires 1 <= from < to and step >= 1");
    }
    mpz_class remaining_z = (to - from).value() + (step - 1);
    remaining_z /= step;
    if (!remaining_z.fits_ulong_p()) {
        throw DomainError("scan: range too large");
    }
    std::uint64_t remaining = remaining_z.get_ui();
    workers = std::max(1u, workers);

    constexpr std::uint64_t block = 2048;
    Natural next = from;
    while (remaining > 0) {
        std::vector<std::future<std::vector<DeltaRecord>>> jobs;
        for (unsigned w = 0; w < workers && remaining > 0; ++w) {
            const std::uint64_t count = std::min(block, remaining);
            if (workers == 1) {
                std::promise<std::vector<DeltaRecord>> p;
                p.set_value(scan_block(next, count, step));
                jobs.push_back(p.get_future());
            } else {
                jobs.push_back(std::async(std::launch::async, scan_block, next, count, step));
            }
            next = next + Natural(count) * step;
            remaining -= count;
        }
        for (auto& job : jobs) {
            for (const auto& rec : job.get()) {
                sink(rec);
            }
        }
    }
}

std::vector<DeltaRecord> scan(const Natural& from, const Natural& to, std::uint64_t step, unsigned workers) {
    std::vector<DeltaRecord> out;
    scan(from, to, step, [&out](const DeltaRecord& r) { out.push_back(r); }, workers);
    return out;
}

}  // namespace newman
