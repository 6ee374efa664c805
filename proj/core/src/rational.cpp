#include "brickplan/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>

#include "brickplan/errors.hpp"

namespace brickplan {

namespace {

using i128 = __int128;

std::int64_t checked_64(i128 v, const char* op) {
    if (v > INT64_MAX || v < INT64_MIN) throw Error(std::string("rational overflow in ") + op);
    return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw Error("rational with zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
    if (num_ == 0) den_ = 1;
}

Rational Rational::parse(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    i128 num = 0;
    i128 den = 1;
    bool any_digit = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
        num = num * 10 + (text[i] - '0');
        any_digit = true;
        if (num > INT64_MAX) throw Error("numeric literal out of range");
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
            num = num * 10 + (text[i] - '0');
            den *= 10;
            any_digit = true;
            if (num > INT64_MAX || den > INT64_MAX) throw Error("numeric literal out of range");
        }
    }
    if (!any_digit || i != text.size())
        throw Error("malformed numeric literal '" + std::string(text) + "'");
    if (negative) num = -num;
    return {checked_64(num, "parse"), checked_64(den, "parse")};
}

double Rational::to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    // Scale the denominator to a power of ten if it only has factors 2 and 5.
    std::int64_t d = den_;
    int twos = 0;
    int fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
    const int digits = twos > fives ? twos : fives;
    i128 pow10 = 1;
    for (int k = 0; k < digits; ++k) pow10 *= 10;
    const i128 scaled = i128(num_ < 0 ? -num_ : num_) * (pow10 / den_);
    std::string frac = std::to_string(static_cast<std::int64_t>(scaled % static_cast<i128>(pow10)));
    frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(), '0');
    std::string whole = std::to_string(static_cast<std::int64_t>(scaled / static_cast<i128>(pow10)));
    return (num_ < 0 ? "-" : "") + whole + "." + frac;
}

std::string Rational::to_fixed(int digits) const {
    i128 pow10 = 1;
    for (int k = 0; k < digits; ++k) pow10 *= 10;
    const bool negative = num_ < 0;
    const i128 n = i128(negative ? -num_ : num_) * pow10;
    // round half away from zero
    const i128 scaled = (2 * n + den_) / (2 * i128(den_));
    std::string frac = std::to_string(static_cast<std::int64_t>(scaled % pow10));
    std::string whole = std::to_string(static_cast<std::int64_t>(scaled / pow10));
    if (digits == 0) return (negative && scaled != 0 ? "-" : "") + whole;
    frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(), '0');
    return (negative && scaled != 0 ? "-" : "") + whole + "." + frac;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
    const i128 n = i128(num_) * rhs.den_ + i128(rhs.num_) * den_;
    const i128 d = i128(den_) * rhs.den_;
    num_ = checked_64(n, "+");
    den_ = checked_64(d, "+");
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
    return *this += -rhs;
}

Rational& Rational::operator*=(const Rational& rhs) {
    const i128 n = i128(num_) * rhs.num_;
    const i128 d = i128(den_) * rhs.den_;
    num_ = checked_64(n, "*");
    den_ = checked_64(d, "*");
    normalize();
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const i128 lhs = i128(a.num_) * b.den_;
    const i128 rhs = i128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational abs(const Rational& r) {
    return r.num() < 0 ? -r : r;
}

}  // namespace brickplan
