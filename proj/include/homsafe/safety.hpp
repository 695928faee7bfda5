#pragma once

// Safety-filter laws wrapped around the nonovershooting controllers: the
// plain min filter, the finite-time filter with an override margin, and the
// fixed-time filter that adapts its radius to the running state history.

#include <limits>

#include "homsafe/homctl.hpp"

namespace homsafe {

enum class FilterMode { Off, MinLinear, MinHom, FnTSf, FxTSf, Mixed };

struct FilterConfig {
    FilterMode mode = FilterMode::FnTSf;
    Vec c;                    // override-margin constants c_2..c_{n-1}; empty means all 1
    double r_min = 1e-3;
    double delta_cap = 1e9;   // finite stand-in for +infinity in the margin algebra
};

struct FilterState {
    double running_radius = 0.0;  // non-decreasing over a run, >= r_min
    double last_time = -std::numeric_limits<double>::infinity();
};

struct GammaPair {
    double gamma_r = 0;  // > 0 away from the origin
    double gamma_u = 0;  // >= 0 on the homogeneous cone
};

/// Decay/input sensitivities of the homogeneous barrier dynamics at x != 0.
GammaPair gammas(const HomDesign& d, const Vec& x, double r);

/// Override margin. +infinity (delta_cap) for n <= 2, outside the homogeneous
/// cone, and whenever a denominator degenerates (boundary convention).
double delta_r(const FilterConfig& cfg, const HomDesign& d, const Vec& x, double r);

/// Plain min filter.
double filter_min(double u_nom, double u_safe);

/// Finite-time safety filter: max{u_h - Delta, min{u_nom, u_h}}.
double filter_fntsf(const FilterConfig& cfg, const HomDesign& d, double u_nom, const Vec& x, double r);

/// Fixed-time safety filter: updates the running radius from the state
/// sample, then applies the finite-time law at that radius. Calls must have
/// non-decreasing time stamps.
double filter_fxtsf(const FilterConfig& cfg, const HomDesign& d, FilterState& state, double u_nom,
                    const Vec& x, double t);

/// Finite-time law around the mixed controller: the margin is +infinity
/// outside the homogeneous ball. Experimental variant without separate
/// guarantees.
double filter_mixed(const FilterConfig& cfg, const HomDesign& d, double u_nom, const Vec& x, double r);

/// Membership in the compound invariant set (cone intersected with ball).
bool in_theta(const HomDesign& d, const Vec& x, double r);

/// Initial running radius for the fixed-time filter.
FilterState make_filter_state(const FilterConfig& cfg, const HomDesign& d, const Vec& x0);

}  // namespace homsafe
