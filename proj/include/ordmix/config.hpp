#pragma once

#include <cstdint>

// Central defaults. Every CLI report echoes these so thresholds are auditable.
namespace ordmix::config {

inline constexpr std::uint64_t default_seed = 42;

// Asymptotic 5% critical constant of the Kolmogorov-Smirnov statistic.
inline constexpr double ks_critical_5pct = 1.36;

inline constexpr int order_grid_size = 512;
inline constexpr double order_tol_closed_form = 1e-9;
inline constexpr double order_tol_numeric = 1e-6;
inline constexpr double star_min_x = 1e-6;
inline constexpr int pair_subsample = 128;

inline constexpr int copula_resolution = 100; // 101 x 101 nodes
inline constexpr double copula_volume_tol = 1e-12;

inline constexpr double quad_abs_tol = 1e-10;
inline constexpr int quad_max_depth = 50;

inline constexpr double bisection_prob_tol = 1e-12;
inline constexpr int bisection_max_iter = 200;

} // namespace ordmix::config
