#pragma once

#include <string>
#include <string_view>

namespace holdover::units {

inline constexpr double seconds_per_minute = 60.0;
inline constexpr double seconds_per_hour   = 3600.0;
inline constexpr double seconds_per_day    = 86'400.0;
// 365-day year throughout; this is the convention that reproduces the
// published catalog figures.
inline constexpr double seconds_per_year   = 31'536'000.0;

inline constexpr double ppm = 1e-6;
inline constexpr double ppb = 1e-9;

/// "2y", "90 d", "3600s", "1 year" -> seconds.
double parse_duration(std::string_view text, bool allow_negative = false);

/// "0.5 ppm" / "250 ppb" -> dimensionless fraction. Bare numbers are rejected.
double parse_accuracy(std::string_view text);

double parse_temperature_c(std::string_view text);   // "25 C"
double parse_frequency_hz(std::string_view text);    // "32768 Hz", "10 MHz"
double parse_per_g(std::string_view text);           // "0.1 ppb_per_g"
double parse_per_c(std::string_view text);           // "5 ppb_per_C"
double parse_per_c2(std::string_view text);          // "-0.44 ppm_per_C2"
double parse_acceleration_g(std::string_view text);  // "0.5 g"

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Fixed decimals, plain C locale.
std::string format_fixed(double v, int decimals);

/// Human-readable duration: "110.38 s", "17.08 min", "115.74 days",
/// "2.62 years"; +infinity renders as "unbounded".
std::string format_duration(double seconds);

inline double to_ppm(double fraction) { return fraction / ppm; }
inline double from_ppm(double v) { return v * ppm; }

} // namespace holdover::units
