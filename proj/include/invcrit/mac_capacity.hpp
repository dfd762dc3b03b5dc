/**
 * @file mac_capacity.hpp
 * @brief Overhead infimum and potential throughput capacity of an ideal distributed TDMA MAC.
 *
 * For an equivalent centralized queue with packet length L = B·M[τ] bits:
 *   M/M/1 (geometric lengths): v_inf = (2 + H(τ)) / L
 *   M/D/1 (constant lengths):  v_inf = 1.854 / L
 * and in both cases the capacity supremum is C_sup = 1 / (1 + v_inf).
 */
#pragma once

#include "invcrit/errors.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace invcrit {

enum class Discipline { MM1, MD1 };

constexpr std::string_view to_string(Discipline d) noexcept { return d == Discipline::MM1 ? "mm1" : "md1"; }

/// Additive constant of the M/M/1 overhead infimum, taken as given.
inline constexpr double kGeometricOverheadConstant = 2.0;
/// Overhead constant of the M/D/1 infimum, taken as given.
inline constexpr double kDeterministicOverheadConstant = 1.854;

struct MacModel {
    Discipline discipline = Discipline::MD1;
    double bit_rate = 1.0;          ///< B, bit/s
    double mean_duration_s = 1.0;   ///< M[τ], s
    std::optional<double> geometric_p;  ///< MM1 success probability; defaults to 1/L

    /// Model with the given mean packet length in bits and a 1 bit/s channel.
    static MacModel from_length(Discipline d, double length_bits, std::optional<double> p = std::nullopt) {
        MacModel m{d, 1.0, length_bits, p};
        m.validate();
        return m;
    }

    [[nodiscard]] double mean_length_bits() const noexcept { return bit_rate * mean_duration_s; }
    [[nodiscard]] double p() const noexcept { return geometric_p.value_or(1.0 / mean_length_bits()); }

    void validate() const {
        if (!(bit_rate > 0.0) || !(mean_duration_s > 0.0)) throw DomainError("bit rate and packet duration must be positive");
        if (!(mean_length_bits() >= 1.0)) throw DomainError("mean packet length B·M[τ] must be at least one bit");
        if (discipline == Discipline::MM1) {
            const double q = p();
            if (!(q > 0.0) || !(q <= 1.0)) throw DomainError("geometric parameter p must lie in (0, 1]");
        }
    }
};

/**
 * Entropy in bits of the geometric law P(k) = p(1-p)^(k-1) on {1, 2, ...}:
 * H = [-p·log2 p - (1-p)·log2(1-p)] / p.
 */
inline double geometric_entropy(double p) {
    if (!(p > 0.0) || !(p <= 1.0)) throw DomainError("geometric parameter p must lie in (0, 1]");
    if (p == 1.0) return 0.0;
    return (-p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p)) / p;
}

struct MacLimits {
    double overhead_infimum = 0.0;    ///< v_inf
    double capacity_supremum = 0.0;   ///< C_sup = 1/(1 + v_inf)
    std::optional<double> entropy_bits;  ///< H(τ), M/M/1 only
};

inline double capacity_from_overhead(double v) { return 1.0 / (1.0 + v); }

inline MacLimits mm1_limits(const MacModel& model) {
    model.validate();
    if (model.discipline != Discipline::MM1) throw DomainError("mm1_limits requires the M/M/1 discipline");
    const double h = geometric_entropy(model.p());
    const double v = (kGeometricOverheadConstant + h) / model.mean_length_bits();
    return {v, capacity_from_overhead(v), h};
}

inline MacLimits md1_limits(const MacModel& model) {
    model.validate();
    if (model.discipline != Discipline::MD1) throw DomainError("md1_limits requires the M/D/1 discipline");
    const double v = kDeterministicOverheadConstant / model.mean_length_bits();
    return {v, capacity_from_overhead(v), std::nullopt};
}

inline MacLimits limits(const MacModel& model) {
    return model.discipline == Discipline::MM1 ? mm1_limits(model) : md1_limits(model);
}

}  // namespace invcrit
