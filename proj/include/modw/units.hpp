#pragma once

#include <numbers>

// Dimensionless convention: length 1/k, momentum hbar*k, energy E_R = (hbar k)^2 / 2m,
// time hbar/E_R. Kinetic energy is p^2 in these units.
namespace modw::units {

/// Recoil frequency E_R/h of the modelled experiment, in Hz.
inline constexpr double kRecoilFrequencyHz = 2000.0;

/// E_R/hbar in s^-1, i.e. one unit of dimensionless rate.
inline constexpr double kRatePerSecond = 2.0 * std::numbers::pi * kRecoilFrequencyHz;

/// Duration of one dimensionless time unit (hbar/E_R) in seconds (about 79.58 us).
inline constexpr double kSecondsPerTau = 1.0 / kRatePerSecond;

inline constexpr double tau_to_seconds(double tau) { return tau * kSecondsPerTau; }
inline constexpr double seconds_to_tau(double t) { return t * kRatePerSecond; }
inline constexpr double rate_to_per_second(double rate) { return rate * kRatePerSecond; }
inline constexpr double per_second_to_rate(double rate) { return rate / kRatePerSecond; }

}  // namespace modw::units
