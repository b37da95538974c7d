#include "newman/core.hpp"

#include <bit>
#include <sstream>

namespace newman {

namespace {

mpz_class pow3(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 3, e);
    return r;
}

std::string pow3_label(unsigned long e, bool doubled) {
    if (e == 0) {
        return doubled ? "2" : "1";
    }
    if (e == 1) {
        return doubled ? "2*3" : "3";
    }
    return (doubled ? "2*3^" : "3^") + std::to_string(e);
}

// Closed-form label of S(2^m) / S([2^n, 2^n+2^m)) without sign.
std::string form_label(const std::variant<PowerForm, DyadicForm>& form) {
    if (const auto* p = std::get_if<PowerForm>(&form)) {
        if (p->m == 0) {
            return "1";
        }
        return (p->m % 2 == 0) ? pow3_label(p->m / 2 - 1, true) : pow3_label((p->m - 1) / 2, false);
    }
    const auto& d = std::get<DyadicForm>(form);
    if (d.m % 2 == 0) {
        return pow3_label(d.m / 2 - 1, false);
    }
    return d.n_parity == Parity::odd ? pow3_label((d.m - 1) / 2, false) : "0";
}

std::string signed_label(int sign, const std::string& label) {
    return (sign < 0 && label != "0") ? "-" + label : label;
}

std::string form_description(const ReductionOutcome& r) {
    std::ostringstream os;
    os << (r.sign < 0 ? '-' : '+');
    if (const auto* p = std::get_if<PowerForm>(&r.form)) {
        os << "S(2^" << p->m << ")";
    } else {
        const auto& d = std::get<DyadicForm>(r.form);
        os << "S([2^n, 2^n+2^" << d.m << ")), n " << (d.n_parity == Parity::odd ? "odd" : "even");
    }
    return os.str();
}

std::string join_terms(const std::vector<std::string>& labels, const SumValue& total) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0 && labels[i].front() != '-') {
            out += '+';
        }
        out += labels[i];
    }
    if (out.empty()) {
        out = "0";
    }
    return out + "=" + total.get_str();
}

int nu_factor(NuCoefficient c) noexcept { return static_cast<int>(c); }

}  // namespace

unsigned long digit_sum(const Natural& n) noexcept {
    return n.is_zero() ? 0 : mpz_popcount(n.value().get_mpz_t());
}

long alt_exponent_sum(const Natural& y) {
    if (y.is_zero()) {
        throw DomainError("alt_exponent_sum: undefined for y = 0");
    }
    long t = 0;
    const BitDecomposition bits(y);
    for (const unsigned long k : bits.exponents()) {
        t += (k & 1u) ? -1 : 1;
    }
    return t;
}

SumValue oracle_interval_sum(const ResidueClass& rc, const Natural& lo, const Natural& hi,
                             std::uint64_t cap) {
    if (hi > Natural(cap)) {
        throw OracleCapError("oracle cap exceeded: " + hi.to_string() + " > " + std::to_string(cap));
    }
    if (lo > hi) {
        throw DomainError("oracle_interval_sum: lo > hi");
    }
    const std::uint64_t a = lo.to_u64();
    const std::uint64_t b = hi.to_u64();
    const std::uint64_t m = rc.modulus();
    // first n >= a with n = residue (mod m)
    std::uint64_t n = a + (rc.residue() + m - a % m) % m;
    std::int64_t acc = 0;
    for (; n < b; n += m) {
        acc += (std::popcount(n) & 1) ? -1 : 1;
    }
    return SumValue(static_cast<long>(acc));
}

SumValue oracle_sum(const ResidueClass& rc, const Natural& x, std::uint64_t cap) {
    return oracle_interval_sum(rc, Natural(0), x, cap);
}

SumValue power_sum(unsigned long m) {
    if (m == 0) {
        return 1;
    }
    return (m % 2 == 0) ? SumValue(2 * pow3(m / 2 - 1)) : pow3((m - 1) / 2);
}

SumValue dyadic_sum(Parity n_parity, unsigned long m) {
    if (m == 0) {
        throw DomainError("dyadic_sum: m must be >= 1 (use boundary_term for the last bit)");
    }
    if (m % 2 == 0) {
        return pow3(m / 2 - 1);
    }
    return n_parity == Parity::odd ? pow3((m - 1) / 2) : SumValue(0);
}

TClass tclass_from_t(long t) noexcept {
    const long r = ((t % 6) + 6) % 6;
    return static_cast<TClass>(r);
}

TClass classify_prefix(const Natural& y) {
    return tclass_from_t(alt_exponent_sum(y));
}

ReductionOutcome reduce_interval(TClass tc, unsigned long m) {
    if (m == 0) {
        throw DomainError("reduce_interval: m must be >= 1");
    }
    switch (tc) {
        case TClass::T0: return {+1, PowerForm{m}};
        case TClass::T1: return {+1, DyadicForm{Parity::even, m}};
        case TClass::T2: return {-1, DyadicForm{Parity::odd, m}};
        case TClass::T3: return {-1, PowerForm{m}};
        case TClass::T4: return {-1, DyadicForm{Parity::even, m}};
        case TClass::T5: return {+1, DyadicForm{Parity::odd, m}};
    }
    throw DomainError("reduce_interval: invalid TClass");
}

SumValue evaluate(const ReductionOutcome& outcome) {
    SumValue v;
    if (const auto* p = std::get_if<PowerForm>(&outcome.form)) {
        v = power_sum(p->m);
    } else {
        const auto& d = std::get<DyadicForm>(outcome.form);
        v = dyadic_sum(d.n_parity, d.m);
    }
    return outcome.sign < 0 ? SumValue(-v) : v;
}

SumValue boundary_term(const Natural& n) {
    if (!n.is_odd()) {
        throw DomainError("boundary_term: N must be odd, got " + n.to_string());
    }
    if (n.mod(3) != 1) {
        return 0;
    }
    return thue_morse_sign(n - Natural(1));
}

namespace {

SumValue decomposition_impl(const Natural& x, Trace* trace) {
    const BitDecomposition bits(x);
    const auto& exps = bits.exponents();
    if (exps.empty()) {
        return 0;
    }

    SumValue total = power_sum(exps.front());
    if (trace) {
        const std::string label = form_label(PowerForm{exps.front()});
        trace->push_back({"S(2^" + std::to_string(exps.front()) + ")", label, total});
    }

    long t = (exps.front() & 1u) ? -1 : 1;
    for (std::size_t i = 1; i < exps.size(); ++i) {
        const unsigned long m = exps[i];
        if (m == 0) {
            // only the last exponent can be zero
            const SumValue b = boundary_term(x);
            total += b;
            if (trace) {
                trace->push_back({"S([x-1, x))", b.get_str(), b});
            }
            break;
        }
        const TClass tc = tclass_from_t(t);
        const ReductionOutcome r = reduce_interval(tc, m);
        const SumValue term = evaluate(r);
        total += term;
        if (trace) {
            std::ostringstream desc;
            desc << "S([y, y+2^" << m << ")), t(y)=" << static_cast<int>(tc) << " mod 6 -> "
                 << form_description(r);
            trace->push_back({desc.str(), signed_label(r.sign, form_label(r.form)), term});
        }
        t += (m & 1u) ? -1 : 1;
    }
    return total;
}

}  // namespace

SumValue newman_sum_decomposition(const Natural& x) { return decomposition_impl(x, nullptr); }

SumValue newman_sum_decomposition(const Natural& x, Trace& trace) { return decomposition_impl(x, &trace); }

NuClass nu_class(unsigned residue_mod_24) {
    if (residue_mod_24 >= 24) {
        throw DomainError("nu_class: residue must lie in [0, 24)");
    }
    using enum NuCoefficient;
    static constexpr NuCoefficient table[24] = {
        zero,            // 0
        minus_sigma,     // 1
        minus_sigma,     // 2
        plus_sigma,      // 3
        plus_sigma,      // 4
        minus_sigma,     // 5
        minus_sigma,     // 6
        zero,            // 7
        zero,            // 8
        zero,            // 9
        plus_sigma,      // 10
        minus_sigma,     // 11
        plus_sigma,      // 12
        minus_two_sigma, // 13
        minus_two_sigma, // 14
        plus_two_sigma,  // 15
        zero,            // 16
        zero,            // 17
        zero,            // 18
        minus_sigma,     // 19
        plus_sigma,      // 20
        minus_sigma,     // 21
        zero,            // 22
        zero,            // 23
    };
    return {residue_mod_24, table[residue_mod_24]};
}

SumValue nu(const Natural& n) {
    if (n.is_zero()) {
        throw DomainError("nu: N must be >= 1");
    }
    const NuClass c = nu_class(static_cast<unsigned>(n.mod(24)));
    return nu_factor(c.coefficient) * thue_morse_sign(n);
}

namespace {

SumValue recursive_impl(const Natural& n, Trace* trace) {
    mpz_class cur = n.value();
    mpz_class weight = 1;
    SumValue total = 0;
    // parity of sigma(cur), updated as two low bits are shifted out
    unsigned long parity = digit_sum(n) & 1u;
    while (sgn(cur) != 0) {
        const auto r = static_cast<unsigned>(mpz_fdiv_ui(cur.get_mpz_t(), 24));
        const int coef = nu_factor(nu_class(r).coefficient) * (parity ? -1 : 1);
        if (coef != 0) {
            total += weight * coef;
        }
        const unsigned long low = mpz_fdiv_ui(cur.get_mpz_t(), 4);
        mpz_class next;
        mpz_fdiv_q_2exp(next.get_mpz_t(), cur.get_mpz_t(), 2);
        if (trace) {
            std::ostringstream desc;
            desc << "S(" << cur.get_str() << ") = 3*S(" << next.get_str() << ") + nu(" << cur.get_str()
                 << "), nu = " << coef;
            const SumValue term = weight * coef;
            trace->push_back({desc.str(), term.get_str(), term});
        }
        parity ^= static_cast<unsigned long>(std::popcount(low)) & 1u;
        cur = std::move(next);
        weight *= 3;
    }
    return total;
}

}  // namespace

SumValue newman_sum_recursive(const Natural& n) { return recursive_impl(n, nullptr); }

SumValue newman_sum_recursive(const Natural& n, Trace& trace) { return recursive_impl(n, &trace); }

std::string render_recursive_summary(const Trace& trace, const SumValue& total) {
    std::vector<std::string> labels;
    for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
        if (sgn(it->value) != 0) {
            labels.push_back(it->value.get_str());
        }
    }
    return join_terms(labels, total);
}

std::string render_decomposition_summary(const Trace& trace, const SumValue& total) {
    std::vector<std::string> labels;
    labels.reserve(trace.size());
    for (const auto& t : trace) {
        labels.push_back(t.closed_form);
    }
    return join_terms(labels, total);
}

SumValue RecursiveEvaluator::operator()(const Natural& n) {
    return memoize_ ? memoized(n.value()) : newman_sum_recursive(n);
}

SumValue RecursiveEvaluator::memoized(const mpz_class& n) {
    if (sgn(n) == 0) {
        return 0;
    }
    if (const auto it = memo_.find(n); it != memo_.end()) {
        return it->second;
    }
    mpz_class quarter;
    mpz_fdiv_q_2exp(quarter.get_mpz_t(), n.get_mpz_t(), 2);
    SumValue s = 3 * memoized(quarter) + nu(Natural(n));
    memo_.emplace(n, s);
    return s;
}

// ---- residue-class relatives ----------------------------------------------

namespace {

SumValue eval_s(const Natural& x, Algorithm alg) {
    return alg == Algorithm::decomposition ? newman_sum_decomposition(x) : newman_sum_recursive(x);
}

}  // namespace

SumValue interval_sum(const Natural& x, const Natural& y, Algorithm alg) {
    if (x > y) {
        throw DomainError("interval_sum: empty or reversed interval [" + x.to_string() + ", " +
                          y.to_string() + ")");
    }
    return eval_s(y, alg) - eval_s(x, alg);
}

SumValue residue_sum(unsigned l, const Natural& n, Algorithm alg) {
    switch (l) {
        case 0: return eval_s(n, alg);
        case 1: return eval_s(n, alg) - eval_s(n * 2, alg);
        case 2: return eval_s(n, alg) + eval_s(n * 2, alg) - eval_s(n * 4, alg);
        default: throw DomainError("residue_sum: l must be 0, 1 or 2");
    }
}

SumValue six_residue_sum(unsigned j, const Natural& x, const Natural& y) {
    if (j > 5) {
        throw DomainError("six_residue_sum: j must lie in [0, 5]");
    }
    if (x > y) {
        throw DomainError("six_residue_sum: requires x <= y");
    }
    // scaled interval sums S([a x, a y))
    const auto scaled = [&](unsigned long a) { return interval_sum(x * a, y * a); };
    switch (j) {
        case 0: return scaled(1);
        case 1: return -scaled(1);
        case 2: return scaled(1) - scaled(2);
        case 3: return scaled(2) - scaled(1);
        case 4: return scaled(2) - scaled(4) + scaled(1);
        default: {
            // S_{3,2}([2x,2y)) - S_{6,2}([2x,2y))
            const SumValue s32 = scaled(2) + scaled(4) - scaled(8);
            return s32 - (scaled(1) - scaled(2));
        }
    }
}

SumValue scaled_residue_sum(unsigned long m, unsigned k, const Natural& r, unsigned long n) {
    if (k > 2) {
        throw DomainError("scaled_residue_sum: k must be 0, 1 or 2");
    }
    if (r >= Natural::power_of_two(m)) {
        throw DomainError("scaled_residue_sum: r must lie in [0, 2^m)");
    }
    if (n <= m) {
        throw DomainError("scaled_residue_sum: requires n > m");
    }
    return thue_morse_sign(r) * residue_sum(k, Natural::power_of_two(n - m));
}

}  // namespace newman
