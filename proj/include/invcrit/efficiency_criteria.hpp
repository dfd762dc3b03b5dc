/**
 * @file efficiency_criteria.hpp
 * @brief Invariant spectral, power, energy, coverage and investment efficiency criteria.
 *
 *   ICSE  c_F = C_m / (B_s/2)                    (bit/s)/Hz
 *   ICPE  w   = g² / c_F = h² / C_m              SINR per (bit/s)/Hz
 *   ICEE  w_Jc = w·N0m·B_s/2,  w_Jb = w_Jc·B_s/2 J per (bit/s)/Hz, J/bit
 *   ICCE  w / (π R_c²)                           per km²
 *   ICIE  F_I(w) / (π R_c²)                      caller-defined cost per km²
 */
#pragma once

#include "invcrit/channel_core.hpp"
#include "invcrit/errors.hpp"
#include "invcrit/numeric.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string_view>

namespace invcrit {

enum class CriterionKind { Icse, Icpe, IceePerBitHz, IceePerBit, Icce, Icie };

constexpr std::string_view units(CriterionKind kind) noexcept {
    switch (kind) {
        case CriterionKind::Icse: return "(bit/s)/Hz";
        case CriterionKind::Icpe: return "SINR/((bit/s)/Hz)";
        case CriterionKind::IceePerBitHz: return "J/((bit/s)/Hz)";
        case CriterionKind::IceePerBit: return "J/bit";
        case CriterionKind::Icce: return "SINR/((bit/s)/Hz)/km^2";
        case CriterionKind::Icie: return "cost/km^2";
    }
    return "";
}

struct CriterionValue {
    CriterionKind kind;
    double value;
    [[nodiscard]] std::string_view units() const noexcept { return invcrit::units(kind); }
};

/// One-sided noise and interference spectral densities, W/Hz.
struct NoiseSpec {
    double noise_density = 0.0;         // N_0n
    double interference_density = 0.0;  // N_0i

    [[nodiscard]] double total() const noexcept { return noise_density + interference_density; }
};

/// Log-distance link budget: received power P_t·G_sys / (L0·(d/d0)^a).
struct LinkBudget {
    double transmit_power_w = 1.0;
    double system_gain = 1.0;
    double path_loss_exponent = 2.0;
    double reference_distance_m = 1.0;
    double reference_loss = 1.0;
    double noise_interference_power_w = 1.0;  // P_i + P_n

    void validate() const {
        if (!(transmit_power_w > 0.0) || !(system_gain > 0.0) || !(reference_distance_m > 0.0) ||
            !(reference_loss > 0.0) || !(noise_interference_power_w > 0.0))
            throw DomainError("link budget terms must be strictly positive");
        if (!(path_loss_exponent >= 2.0)) throw DomainError("path-loss exponent must be >= 2");
    }
};

/// ICSE from m and h at signal base B_s (the optimizer's inner form).
inline double icse_at(int m, double h, double signal_base, const SerModel& model) {
    return capacity_bits_per_symbol(m, ser_at(m, h, model)) / (signal_base / 2.0);
}

inline double icse(const ChannelPoint& point, const SerModel& model) {
    return icse_at(point.m(), point.esinr(), point.signal_base(), model);
}

/// ICPE as a function of (m, h) alone: w = h² / C_m(h).
inline double icpe_at(int m, double h, const SerModel& model) {
    const double c = capacity_bits_per_symbol(m, ser_at(m, h, model));
    if (!(c > 0.0)) throw UndefinedIcpe();
    return h * h / c;
}

inline double icpe(const ChannelPoint& point, const SerModel& model) {
    const double cf = icse(point, model);
    if (!(cf > 0.0)) throw UndefinedIcpe();
    return point.g() * point.g() / cf;
}

struct JouleForms {
    double per_bit_hz;  // w_Jc, J per (bit/s)/Hz
    double per_bit;     // w_Jb, J/bit
};

inline JouleForms icpe_joule_forms(double w, const NoiseSpec& noise, double signal_base) {
    if (!(w >= 0.0)) throw DomainError("ICPE must be non-negative");
    if (noise.noise_density < 0.0 || noise.interference_density < 0.0)
        throw DomainError("spectral densities must be non-negative");
    if (!(noise.total() > 0.0)) throw DomainError("N0m = N0i + N0n must be positive for Joule conversion");
    if (!(signal_base > 0.0)) throw DomainError("signal base must be positive");
    const double per_bit_hz = w * noise.total() * signal_base / 2.0;
    return {per_bit_hz, per_bit_hz * signal_base / 2.0};
}

/// ICPE in dB (10·log10 of the power ratio).
inline double icpe_db(double w) { return numeric::to_db(w); }

/**
 * Largest distance at which the received SINR still reaches g_target²:
 * R_c = d0·[P_t·G_sys / (L0·g²·(P_i+P_n))]^(1/a).
 */
inline double cell_radius(const LinkBudget& budget, double g_target) {
    budget.validate();
    if (!(g_target > 0.0)) throw DomainError("target SINR amplitude must be positive");
    const double margin = budget.transmit_power_w * budget.system_gain /
                          (budget.reference_loss * g_target * g_target * budget.noise_interference_power_w);
    if (margin < 1.0) throw NoCoverage("no coverage: link budget does not close at the reference distance");
    return budget.reference_distance_m * std::pow(margin, 1.0 / budget.path_loss_exponent);
}

inline double area_km2(double radius_m) {
    if (!(radius_m > 0.0)) throw DomainError("cell radius must be positive");
    const double r_km = radius_m / 1000.0;
    return std::numbers::pi * r_km * r_km;
}

inline double icce(double w, double radius_m) { return w / area_km2(radius_m); }

/// Cost hook F_I: expected to be monotone non-decreasing in w.
using CostFunction = std::function<double(double)>;

inline double icie(const CostFunction& cost, double w, double radius_m) { return cost(w) / area_km2(radius_m); }

inline double icie(double w, double radius_m) { return icce(w, radius_m); }

}  // namespace invcrit
