/**
 * @file channel_core.hpp
 * @brief Symbol error rate and Shannon capacity of the m-ary orthogonal digital channel.
 *
 * A channel point is the invariant triple (m, g, B_s): alphabet size, RMS
 * SINR amplitude g (g² = P_s/(P_i+P_n)) and signal base B_s = 2·ΔF_s·T_s.
 * Every PHY quantity in this library depends on (m, g, B_s) only through
 * m and the ESINR amplitude h = g·sqrt(B_s/2).
 */
#pragma once

#include "invcrit/errors.hpp"
#include "invcrit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace invcrit {

class ChannelPoint {
public:
    ChannelPoint(int m, double g, double signal_base) : m_(m), g_(g), bs_(signal_base) { validate(); }

    /// Builds the point from bandwidth ΔF_s (Hz) and symbol duration T_s (s); B_s = 2·ΔF_s·T_s.
    static ChannelPoint from_bandwidth(int m, double g, double bandwidth_hz, double symbol_s) {
        if (!(bandwidth_hz > 0.0) || !(symbol_s > 0.0))
            throw DomainError("bandwidth and symbol duration must be positive");
        ChannelPoint p(m, g, 2.0 * bandwidth_hz * symbol_s);
        p.bandwidth_ = bandwidth_hz;
        p.symbol_ = symbol_s;
        return p;
    }

    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] double g() const noexcept { return g_; }
    [[nodiscard]] double signal_base() const noexcept { return bs_; }
    [[nodiscard]] std::optional<double> bandwidth_hz() const noexcept { return bandwidth_; }
    [[nodiscard]] std::optional<double> symbol_duration_s() const noexcept { return symbol_; }

    /// h = g·sqrt(B_s/2).
    [[nodiscard]] double esinr() const noexcept { return g_ * std::sqrt(bs_ / 2.0); }

private:
    void validate() const {
        if (m_ < 2) throw DomainError("alphabet size m must be >= 2, got " + std::to_string(m_));
        if (!(g_ > 0.0) || !std::isfinite(g_)) throw DomainError("SINR amplitude g must be positive and finite");
        if (!(bs_ > 0.0) || !std::isfinite(bs_)) throw DomainError("signal base B_s must be positive and finite");
    }

    int m_;
    double g_;
    double bs_;
    std::optional<double> bandwidth_;
    std::optional<double> symbol_;
};

inline double esinr(const ChannelPoint& point) noexcept { return point.esinr(); }

/// Coherent detection of m equal-energy orthogonal signals.
struct ExactCoherentOrthogonal {};

/// min((m-1)·Q(h), (m-1)/m).
struct UnionBound {};

/// Measured SER curve: linear interpolation between (h, p) knots, no extrapolation.
class SerTable {
public:
    explicit SerTable(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
        if (knots_.size() < 2) throw DomainError("SER table needs at least two knots");
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            const auto [h, p] = knots_[i];
            if (!(h >= 0.0) || !(p >= 0.0) || !(p <= 1.0)) throw DomainError("SER table knot out of range");
            if (i > 0 && !(h > knots_[i - 1].first)) throw DomainError("SER table h knots must be strictly increasing");
            if (i > 0 && p > knots_[i - 1].second) throw DomainError("SER table p must be non-increasing in h");
        }
    }

    /// Table that is identically zero on [0, h_max]: the error-free channel.
    static SerTable error_free(double h_max = 1e12) { return SerTable({{0.0, 0.0}, {h_max, 0.0}}); }

    [[nodiscard]] double lookup(double h) const {
        if (h < knots_.front().first || h > knots_.back().first)
            throw OutOfTableRange(h, knots_.front().first, knots_.back().first);
        auto it = std::lower_bound(knots_.begin(), knots_.end(), h,
                                   [](const auto& k, double x) { return k.first < x; });
        if (it->first == h) return it->second;
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double t = (h - lo.first) / (hi.first - lo.first);
        return lo.second + t * (hi.second - lo.second);
    }

    [[nodiscard]] std::span<const std::pair<double, double>> knots() const noexcept { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;
};

struct SerModel {
    std::variant<ExactCoherentOrthogonal, UnionBound, SerTable> rule{ExactCoherentOrthogonal{}};
    double tolerance = 1e-10;

    static SerModel exact(double tol = 1e-10) { return {ExactCoherentOrthogonal{}, tol}; }
    static SerModel union_bound() { return {UnionBound{}, 1e-10}; }
    static SerModel table(SerTable t) { return {std::move(t), 1e-10}; }

    [[nodiscard]] std::string name() const {
        switch (rule.index()) {
            case 0: return "exact";
            case 1: return "union";
            default: return "table";
        }
    }
};

namespace detail {

inline double max_ser(int m) noexcept { return static_cast<double>(m - 1) / static_cast<double>(m); }

/**
 * SER of coherent m-ary orthogonal detection.
 *
 * p = 1 - ∫φ(u)·Φ(u + h√2)^(m-1) du. Near h = 0 the result is evaluated via the
 * deficit (m-1)/m - p = ∫φ(u)[Φ(u+s)^(m-1) - Φ(u)^(m-1)]du, which keeps the
 * relative precision that the capacity needs as p → (m-1)/m (the deficit is
 * O(h), so its tolerance is scaled by h√2). Elsewhere the
 * integrand 1 - Φ^(m-1) is formed with expm1/log1p so tiny error rates survive.
 */
inline double exact_orthogonal_ser(int m, double h, double tol) {
    const double s = h * std::numbers::sqrt2;
    const double k = static_cast<double>(m - 1);
    constexpr double lo = -10.0;
    constexpr double hi = 10.0;
    if (s == 0.0) return max_ser(m);
    if (s < 1.0) {
        const auto deficit = numeric::adaptive_simpson(
            [&](double u) {
                const double a = k * numeric::log_normal_cdf(u + s);
                const double b = k * numeric::log_normal_cdf(u);
                if (a - b > 1.0) return numeric::normal_pdf(u) * (std::exp(a) - std::exp(b));
                return numeric::normal_pdf(u) * std::exp(b) * std::expm1(a - b);
            },
            lo, hi, tol * s);
        return max_ser(m) - deficit.value;
    }
    const auto err = numeric::adaptive_simpson(
        [&](double u) {
            const double log_correct = k * std::log1p(-numeric::normal_q(u + s));
            return numeric::normal_pdf(u) * -std::expm1(log_correct);
        },
        lo, hi, tol);
    return err.value;
}

}  // namespace detail

/// SER as a function of (m, h); the h-only form used by the optimizer.
inline double ser_at(int m, double h, const SerModel& model) {
    if (m < 2) throw DomainError("alphabet size m must be >= 2");
    if (!(h >= 0.0)) throw DomainError("ESINR amplitude h must be non-negative");
    const double pmax = detail::max_ser(m);
    const double p = std::visit(
        [&](const auto& rule) -> double {
            using R = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<R, ExactCoherentOrthogonal>) {
                return detail::exact_orthogonal_ser(m, h, model.tolerance);
            } else if constexpr (std::is_same_v<R, UnionBound>) {
                return std::min(static_cast<double>(m - 1) * numeric::normal_q(h), pmax);
            } else {
                return rule.lookup(h);
            }
        },
        model.rule);
    return std::clamp(p, 0.0, pmax);
}

inline double ser(const ChannelPoint& point, const SerModel& model) { return ser_at(point.m(), point.esinr(), model); }

/**
 * Capacity of the m-ary symmetric channel in bits per symbol:
 * C_m = log2 m + (1-p)·log2(1-p) + p·log2(p/(m-1)).
 */
inline double capacity_bits_per_symbol(int m, double p) {
    if (m < 2) throw DomainError("alphabet size m must be >= 2");
    const double pmax = detail::max_ser(m);
    if (!(p >= 0.0) || !(p <= pmax))
        throw DomainError("SER p=" + std::to_string(p) + " outside [0, (m-1)/m] for m=" + std::to_string(m));
    const double mm = static_cast<double>(m);
    if (p == 0.0) return std::log2(mm);
    p = std::clamp(p, 1e-300, pmax);
    const double q = 1.0 - p;
    const double d = pmax - p;  // q - 1/m
    double c = 0.0;
    if (d < 0.25 * pmax) {
        // Near-useless channel: C = q·log2(q·m) + p·log2(p·m/(m-1)), both logs vanish at p = (m-1)/m.
        c = (q * std::log1p(mm * d) + p * std::log1p(-mm * d / (mm - 1.0))) / std::numbers::ln2;
    } else {
        c = std::log2(mm) + (q * std::log1p(-p) + p * std::log(p / (mm - 1.0))) / std::numbers::ln2;
    }
    return std::clamp(c, 0.0, std::log2(mm));
}

/// Capacity of the point under the given SER rule.
inline double capacity(const ChannelPoint& point, const SerModel& model) {
    return capacity_bits_per_symbol(point.m(), ser(point, model));
}

/// Continuous AWGN reference capacity C = ΔF·log2(1 + snr), bit/s.
inline double continuous_capacity(double bandwidth_hz, double snr) {
    if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
    if (!(snr >= 0.0)) throw DomainError("SNR must be non-negative");
    return bandwidth_hz * std::log2(1.0 + snr);
}

}  // namespace invcrit
