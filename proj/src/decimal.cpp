#include "heisttrace/decimal.hpp"

#include <cctype>
#include <cmath>

#include "heisttrace/error.hpp"

namespace heisttrace {

namespace {

Decimal::Int pow10(std::uint32_t n) {
    Decimal::Int r = 1;
    for (std::uint32_t i = 0; i < n; ++i) r *= 10;
    return r;
}

}  // namespace

void Decimal::normalize() {
    if (units_ == 0) {
        scale_ = 0;
        return;
    }
    while (scale_ > 0 && units_ % 10 == 0) {
        units_ /= 10;
        --scale_;
    }
}

Decimal Decimal::from_units(Int units, std::uint32_t scale) {
    Decimal d;
    d.units_ = std::move(units);
    d.scale_ = scale;
    d.normalize();
    return d;
}

std::optional<Decimal> Decimal::try_parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (text[0] == '-') {
        neg = true;
        i = 1;
    }
    Int units = 0;
    std::uint32_t scale = 0;
    bool seen_digit = false;
    bool seen_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_dot || !seen_digit) return std::nullopt;
            seen_dot = true;
            // a dot must be followed by at least one digit
            if (i + 1 == text.size()) return std::nullopt;
            continue;
        }
        if (c < '0' || c > '9') return std::nullopt;
        units = units * 10 + (c - '0');
        if (seen_dot) ++scale;
        seen_digit = true;
    }
    if (!seen_digit) return std::nullopt;
    if (neg) units = -units;
    return from_units(std::move(units), scale);
}

Decimal Decimal::parse(std::string_view text) {
    auto d = try_parse(text);
    if (!d) throw Error("malformed decimal amount '" + std::string(text) + "'");
    return *d;
}

Decimal& Decimal::operator+=(const Decimal& o) {
    if (scale_ == o.scale_) {
        units_ += o.units_;
    } else if (scale_ < o.scale_) {
        units_ = units_ * pow10(o.scale_ - scale_) + o.units_;
        scale_ = o.scale_;
    } else {
        units_ += o.units_ * pow10(scale_ - o.scale_);
    }
    normalize();
    return *this;
}

Decimal& Decimal::operator-=(const Decimal& o) { return *this += (-o); }

Decimal Decimal::operator-() const {
    Decimal d = *this;
    d.units_ = -d.units_;
    return d;
}

std::strong_ordering Decimal::operator<=>(const Decimal& o) const {
    Int a = units_;
    Int b = o.units_;
    if (scale_ < o.scale_) a *= pow10(o.scale_ - scale_);
    if (o.scale_ < scale_) b *= pow10(scale_ - o.scale_);
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Decimal::to_string() const {
    Int mag = units_ < 0 ? Int(-units_) : units_;
    std::string digits = mag.str();
    std::string out;
    if (units_ < 0) out.push_back('-');
    if (scale_ == 0) {
        out += digits;
        return out;
    }
    if (digits.size() <= scale_) {
        out += "0.";
        out.append(scale_ - digits.size(), '0');
        out += digits;
    } else {
        out.append(digits, 0, digits.size() - scale_);
        out.push_back('.');
        out.append(digits, digits.size() - scale_, scale_);
    }
    return out;
}

std::string Decimal::to_csv_string() const {
    std::string s = to_string();
    if (s.find('.') == std::string::npos) s += ".0";
    return s;
}

double Decimal::to_double() const {
    return units_.convert_to<double>() / std::pow(10.0, static_cast<double>(scale_));
}

}  // namespace heisttrace
