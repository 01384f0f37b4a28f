#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace spillnet {

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // population (1/N) divisor
double sample_variance(std::span<const double> x);  // 1/(N-1) divisor
double stddev(std::span<const double> x);

// Inclusive linear-interpolation quantile (position (N-1)*q between order
// statistics). Used everywhere a quantile is needed so the convention is
// fixed project-wide.
double quantile(std::vector<double> x, double q);

// Sample expectile at level psi: the minimizer of
// sum_i |psi - 1{x_i < d}| (x_i - d)^2, found by fixed-point iteration on
// the weighted mean. psi = 0.5 gives the sample mean.
double expectile(std::span<const double> x, double psi);

// FNV-1a 64-bit. Stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view s);

// splitmix64 step; used to derive independent per-task seeds from a root
// seed so parallel fits are schedule-independent.
std::uint64_t mix_seed(std::uint64_t root, std::uint64_t salt);

// Integral of f over (-inf, inf) via tangent substitution and fixed
// 256-point Gauss-Legendre. Adequate for the absolute-moment integrands
// used by the volatility recursions.
double integrate_real_line(const std::function<double(double)>& f);

}  // namespace spillnet
