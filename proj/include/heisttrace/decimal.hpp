#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace heisttrace {

// Exact base-10 amount stored as integer units scaled by 10^-scale.
// All ledger arithmetic stays integral so sums are associative and
// reproducible; never goes through binary floating point.
class Decimal {
public:
    using Int = boost::multiprecision::cpp_int;

    Decimal() = default;
    Decimal(long long whole) : units_(whole) {}  // NOLINT: implicit for literals

    static Decimal from_units(Int units, std::uint32_t scale);
    // Strict grammar: -?[0-9]+(.[0-9]+)? — no exponents, no bare '.'.
    static Decimal parse(std::string_view text);
    static std::optional<Decimal> try_parse(std::string_view text);

    Decimal& operator+=(const Decimal& o);
    Decimal& operator-=(const Decimal& o);
    friend Decimal operator+(Decimal a, const Decimal& b) { return a += b; }
    friend Decimal operator-(Decimal a, const Decimal& b) { return a -= b; }
    Decimal operator-() const;

    std::strong_ordering operator<=>(const Decimal& o) const;
    bool operator==(const Decimal& o) const { return (*this <=> o) == 0; }

    bool is_zero() const { return units_ == 0; }
    bool is_negative() const { return units_ < 0; }

    // Canonical rendering: minimal digits, no trailing fraction zeros.
    std::string to_string() const;
    // Rendering for ledger CSV cells: always carries a decimal point so the
    // loader reads it back as display units, never as raw base units.
    std::string to_csv_string() const;
    double to_double() const;

    const Int& units() const { return units_; }
    std::uint32_t scale() const { return scale_; }

private:
    void normalize();
    Int units_{0};
    std::uint32_t scale_{0};
};

}  // namespace heisttrace
