/**
 * @file numeric.hpp
 * @brief Small numerical kernels shared by the criteria, optimizer and simulators.
 *
 * Everything here is deterministic and free of global state: normal tail
 * functions, adaptive Simpson quadrature, log-spaced grids, golden-section
 * line search, compensated summation and counter-based seeding.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace invcrit::numeric {

/// Standard normal density.
inline double normal_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Upper normal tail Q(x) = P(Z > x).
inline double normal_q(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Standard normal CDF Φ(x), accurate in both tails.
inline double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// log Φ(x) without cancellation for large positive x.
inline double log_normal_cdf(double x) noexcept {
    if (x > 0.0) return std::log1p(-normal_q(x));
    return std::log(normal_cdf(x));
}

namespace detail {

struct SimpsonPanel {
    double a, b, fa, fm, fb, whole;
};

inline double simpson(double a, double b, double fa, double fm, double fb) noexcept {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(F& f, const SimpsonPanel& p, double tol, int depth, std::size_t& evals) {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    evals += 2;
    const double left = simpson(p.a, m, p.fa, flm, p.fm);
    const double right = simpson(m, p.b, p.fm, frm, p.fb);
    const double delta = left + right - p.whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1, evals) +
           adaptive_simpson_rec(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1, evals);
}

}  // namespace detail

struct QuadratureResult {
    double value = 0.0;
    std::size_t evaluations = 0;
};

/**
 * Adaptive Simpson with Richardson correction on [a, b].
 *
 * The interval is first cut into @p panels equal pieces, each refined to
 * tol/panels, so a narrow peak cannot hide between the three initial nodes.
 */
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, double tol, std::size_t panels = 64,
                                  int max_depth = 40) {
    QuadratureResult out;
    const double width = (b - a) / static_cast<double>(panels);
    const double panel_tol = tol / static_cast<double>(panels);
    double lo = a;
    double flo = f(lo);
    ++out.evaluations;
    for (std::size_t i = 0; i < panels; ++i) {
        const double hi = (i + 1 == panels) ? b : a + width * static_cast<double>(i + 1);
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        const double fhi = f(hi);
        out.evaluations += 2;
        detail::SimpsonPanel p{lo, hi, flo, fmid, fhi, detail::simpson(lo, hi, flo, fmid, fhi)};
        out.value += detail::adaptive_simpson_rec(f, p, panel_tol, max_depth, out.evaluations);
        lo = hi;
        flo = fhi;
    }
    return out;
}

/// Neumaier compensated accumulator; order of add() calls fixes the result.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// @p n log-spaced points from lo to hi inclusive (n == 1 gives {lo}).
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi >= lo) || n == 0)
        throw std::invalid_argument("log_grid: need 0 < lo <= hi and n >= 1");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double llo = std::log(lo);
    const double step = (std::log(hi) - llo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(llo + step * static_cast<double>(i));
    out.front() = lo;
    out.back() = hi;
    return out;
}

/// @p n evenly spaced points from lo to hi inclusive.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (n == 0) throw std::invalid_argument("linear_grid: need n >= 1");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

struct LineMinimum {
    double x = 0.0;
    double value = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
};

/**
 * Golden-section minimization of @p f on [lo, hi].
 *
 * Stops once the bracket is narrower than @p abs_tol. Returns the best point
 * ever evaluated, so the answer is never worse than any probe.
 */
template <class F>
LineMinimum golden_section(F&& f, double lo, double hi, double abs_tol, std::size_t max_iter = 200) {
    constexpr double inv_phi = 0.6180339887498948482;
    LineMinimum best;
    auto probe = [&](double x) {
        const double v = f(x);
        ++best.evaluations;
        if (v < best.value) {
            best.value = v;
            best.x = x;
        }
        return v;
    };
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = probe(c);
    double fd = probe(d);
    for (std::size_t it = 0; it < max_iter && (b - a) > abs_tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = probe(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = probe(d);
        }
    }
    return best;
}

/// SplitMix64 finalizer; used to derive independent per-trial seeds from a root seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index = 0) noexcept {
    return splitmix64(splitmix64(root ^ splitmix64(stream)) ^ index);
}

/// 10·log10(x).
inline double to_db(double ratio) { return 10.0 * std::log10(ratio); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace invcrit::numeric
