#include "holdover/units.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "holdover/error.hpp"

namespace holdover::units {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_number_char(char c)
{
    return (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.' || c == 'e' || c == 'E';
}

struct NumberUnit {
    double value;
    std::string unit;
};

// Splits "<number><ws?><unit>" and requires both parts.
NumberUnit split_number_unit(std::string_view text, const char* what)
{
    std::string_view s = trim(text);
    if (s.empty())
        fail(Errc::parse, std::string("empty ") + what + " value");

    size_t i = 0;
    while (i < s.size() && is_number_char(s[i])) {
        // 'e'/'E' only counts as part of the number when followed by a digit or sign
        if ((s[i] == 'e' || s[i] == 'E') &&
            (i + 1 >= s.size() || !(std::isdigit(static_cast<unsigned char>(s[i + 1])) ||
                                    s[i + 1] == '+' || s[i + 1] == '-')))
            break;
        ++i;
    }
    std::string_view num = s.substr(0, i);
    std::string_view unit = trim(s.substr(i));

    double value = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc{} || ptr != num.data() + num.size() || num.empty())
        fail(Errc::parse, std::string("malformed ") + what + " number '" + std::string(num) + "'");
    if (unit.empty())
        fail(Errc::parse, std::string("missing ") + what + " unit after '" + std::string(num) +
                              "' (unit tokens are mandatory)");
    return {value, std::string(unit)};
}

} // namespace

double parse_duration(std::string_view text, bool allow_negative)
{
    auto [value, unit] = split_number_unit(text, "duration");
    double scale = 0.0;
    if (unit == "s" || unit == "sec") scale = 1.0;
    else if (unit == "min") scale = seconds_per_minute;
    else if (unit == "h" || unit == "hr") scale = seconds_per_hour;
    else if (unit == "d" || unit == "day" || unit == "days") scale = seconds_per_day;
    else if (unit == "y" || unit == "yr" || unit == "year" || unit == "years") scale = seconds_per_year;
    else fail(Errc::parse, "unknown duration unit '" + unit + "'");

    double seconds = value * scale;
    if (!allow_negative && seconds < 0.0)
        fail(Errc::parse, "negative duration '" + std::string(trim(text)) + "'");
    return seconds;
}

double parse_accuracy(std::string_view text)
{
    auto [value, unit] = split_number_unit(text, "accuracy");
    if (unit == "ppm") return value * ppm;
    if (unit == "ppb") return value * ppb;
    fail(Errc::parse, "unknown accuracy unit '" + unit + "' (expected ppm or ppb)");
}

double parse_temperature_c(std::string_view text)
{
    auto [value, unit] = split_number_unit(text, "temperature");
    if (unit == "C") return value;
    fail(Errc::parse, "unknown temperature unit '" + unit + "' (expected C)");
}

double parse_frequency_hz(std::string_view text)
{
    auto [value, unit] = split_number_unit(text, "frequency");
    if (unit == "Hz") return value;
    if (unit == "kHz") return value * 1e3;
    if (unit == "MHz") return value * 1e6;
    fail(Errc::parse, "unknown frequency unit '" + unit + "' (expected Hz, kHz or MHz)");
}

double parse_per_g(std::string_view text)
{
    auto [value, unit] = split_number_unit(text, "acceleration sensitivity");
    if (unit == "ppb_per_g") return value * ppb;
    if (unit == "ppm_per_g") return value * ppm;
    fail(Errc::parse, "unknown sensitivity unit '" + unit + "' (expected ppb_per_g or ppm_per_g)");
}

double parse_per_c(std::string_view text)
{
    auto [value, unit] = split_number_unit(text, "temperature slope");
    if (unit == "ppb_per_C") return value * ppb;
    if (unit == "ppm_per_C") return value * ppm;
    fail(Errc::parse, "unknown slope unit '" + unit + "' (expected ppb_per_C or ppm_per_C)");
}

double parse_per_c2(std::string_view text)
{
    auto [value, unit] = split_number_unit(text, "parabolic coefficient");
    if (unit == "ppm_per_C2") return value * ppm;
    if (unit == "ppb_per_C2") return value * ppb;
    fail(Errc::parse, "unknown coefficient unit '" + unit + "' (expected ppm_per_C2 or ppb_per_C2)");
}

double parse_acceleration_g(std::string_view text)
{
    auto [value, unit] = split_number_unit(text, "acceleration");
    if (unit == "g") return value;
    fail(Errc::parse, "unknown acceleration unit '" + unit + "' (expected g)");
}

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

std::string format_fixed(double v, int decimals)
{
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", decimals, v);
    return std::string(buf.data());
}

std::string format_duration(double seconds)
{
    if (std::isinf(seconds)) return seconds > 0 ? "unbounded" : "-unbounded";
    double mag = std::fabs(seconds);
    if (mag >= seconds_per_year) return format_fixed(seconds / seconds_per_year, 2) + " years";
    if (mag >= seconds_per_day) return format_fixed(seconds / seconds_per_day, 2) + " days";
    if (mag >= seconds_per_hour) return format_fixed(seconds / seconds_per_hour, 2) + " h";
    if (mag >= seconds_per_minute) return format_fixed(seconds / seconds_per_minute, 2) + " min";
    return format_fixed(seconds, 2) + " s";
}

} // namespace holdover::units
