#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace brickplan {

// Exact rational number with int64 numerator and positive int64 denominator,
// always stored in lowest terms. Coordinates and face levels are compared
// through this type so contact tests never go through floating point.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design
    Rational(std::int64_t num, std::int64_t den);

    // Parses an integer or decimal literal, e.g. "-7", "2.5", ".25".
    static Rational parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }

    double to_double() const;

    // Shortest exact decimal when the denominator is 2^a * 5^b, otherwise
    // "num/den".
    std::string to_string() const;

    // Fixed-point decimal with `digits` fractional digits, rounding ties
    // away from zero (0.625 -> "0.63" at two digits).
    std::string to_fixed(int digits) const;

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

    void normalize();
};

Rational abs(const Rational& r);

}  // namespace brickplan
