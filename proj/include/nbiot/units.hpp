#pragma once

#include <chrono>
#include <cmath>
#include <compare>
#include <cstdint>

namespace nbiot {

// All timer arithmetic is done in whole microseconds.
using Duration = std::chrono::microseconds;

inline Duration from_ms(double ms) {
    return Duration{static_cast<std::int64_t>(std::llround(ms * 1000.0))};
}
inline Duration from_s(double s) {
    return Duration{static_cast<std::int64_t>(std::llround(s * 1e6))};
}
inline constexpr double to_ms(Duration d) { return static_cast<double>(d.count()) / 1000.0; }
inline constexpr double to_s(Duration d) { return static_cast<double>(d.count()) / 1e6; }

// Thin tagged scalar so that dBm, dB, mW and mJ cannot be mixed by accident.
template <class Tag>
struct Quantity {
    double value{0.0};

    constexpr Quantity() = default;
    constexpr explicit Quantity(double v) : value(v) {}

    constexpr auto operator<=>(const Quantity&) const = default;

    constexpr Quantity operator+(Quantity o) const { return Quantity{value + o.value}; }
    constexpr Quantity operator-(Quantity o) const { return Quantity{value - o.value}; }
    constexpr Quantity operator*(double k) const { return Quantity{value * k}; }
    constexpr Quantity operator/(double k) const { return Quantity{value / k}; }
    constexpr Quantity& operator+=(Quantity o) {
        value += o.value;
        return *this;
    }
};

struct DecibelTag {};
struct DbmTag {};
struct MilliwattTag {};
struct MillijouleTag {};

using Decibel = Quantity<DecibelTag>;
using Dbm = Quantity<DbmTag>;
using Milliwatt = Quantity<MilliwattTag>;
using Millijoule = Quantity<MillijouleTag>;

inline Milliwatt dbm_to_mw(Dbm p) { return Milliwatt{std::pow(10.0, p.value / 10.0)}; }
inline Dbm mw_to_dbm(Milliwatt p) { return Dbm{10.0 * std::log10(p.value)}; }

// mW * us = nJ; report mJ.
inline Millijoule energy(Milliwatt p, Duration d) {
    return Millijoule{p.value * static_cast<double>(d.count()) * 1e-6};
}

inline constexpr double kHoursPerYear = 8760.0;
inline constexpr double kSecondsPerHour = 3600.0;

}  // namespace nbiot
