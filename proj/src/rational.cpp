#include "hrta/rational.hpp"

#include "hrta/error.hpp"

#include <limits>

namespace hrta {

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) {
        throw Error(ErrorCode::DomainError, "zero denominator");
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Integer floor(const Rational& x) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Integer ceil(const Rational& x) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Time floor_div(Time a, Time b) {
    Time q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

Time ceil_div(Time a, Time b) {
    Time q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) {
        ++q;
    }
    return q;
}

Time floor_mod(Time a, Time m) { return a - m * floor_div(a, m); }

bool is_integer(const Rational& x) { return x.get_den() == 1; }

Time to_time(const Integer& v) {
    if (!v.fits_slong_p()) {
        throw Error(ErrorCode::DomainError, "value " + v.get_str() + " exceeds the 64-bit time range");
    }
    return static_cast<Time>(v.get_si());
}

std::string to_string(const Integer& x) { return x.get_str(); }

std::string to_string(const Rational& x) {
    if (is_integer(x)) {
        return x.get_num().get_str();
    }
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_decimal(const Rational& x, int places) {
    Integer scale = 1;
    for (int i = 0; i < places; ++i) {
        scale *= 10;
    }
    const bool negative = x < 0;
    Rational mag = negative ? Rational(-x) : x;
    // round half away from zero
    Integer scaled = floor(mag * Rational(scale) + Rational(1, 2));
    Integer whole = scaled / scale;
    Integer frac = scaled % scale;

    std::string out = negative && scaled != 0 ? "-" : "";
    out += whole.get_str();
    if (places > 0) {
        std::string digits = frac.get_str();
        out += '.';
        out.append(static_cast<std::size_t>(places) - digits.size(), '0');
        out += digits;
    }
    return out;
}

Rational parse_rational(const std::string& text) {
    auto fail = [&]() -> Rational {
        throw Error(ErrorCode::ParseError, "not a rational number: '" + text + "'");
    };
    if (text.empty()) {
        return fail();
    }
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Integer num, den;
        if (num.set_str(text.substr(0, slash), 10) != 0 || den.set_str(text.substr(slash + 1), 10) != 0 ||
            den == 0) {
            return fail();
        }
        return make_rational(num, den);
    }
    auto dot = text.find('.');
    std::string digits = text;
    Integer den = 1;
    if (dot != std::string::npos) {
        std::string frac = text.substr(dot + 1);
        digits = text.substr(0, dot) + frac;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            den *= 10;
        }
        if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos) {
            return fail();
        }
    }
    if (digits == "-" || digits.empty()) {
        return fail();
    }
    Integer num;
    if (num.set_str(digits, 10) != 0) {
        return fail();
    }
    return make_rational(num, den);
}

}  // namespace hrta
