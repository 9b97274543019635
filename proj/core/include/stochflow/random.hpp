#pragma once

#include <array>
#include <cstdint>

namespace stochflow {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al. counter-based generator).
PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key);

// 53 high bits mapped to the open interval (0, 1)
double uniform_open(std::uint64_t bits);

// Inverse standard normal CDF, Acklam's rational approximation (relative error below 1.15e-9).
double normal_quantile(double p);

// Two independent standard normals for (seed, stream, step). Pure function of its arguments.
std::array<double, 2> gaussian_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t step);

}  // namespace stochflow
