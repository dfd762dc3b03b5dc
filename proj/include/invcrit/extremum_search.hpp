/**
 * @file extremum_search.hpp
 * @brief Constrained extremums of ICPE and ICSE over the invariant variables (m, g, B_s).
 *
 * Search strategy: exhaustive log-spaced grid, then golden-section refinement
 * along each free axis inside the bracket of the best grid point. The refined
 * answer is never worse than the best grid point. When g and B_s are both free
 * and ICPE is minimized, the search collapses to one dimension in h, since
 * w = h²/C_m(h) does not depend on g and B_s separately.
 */
#pragma once

#include "invcrit/channel_core.hpp"
#include "invcrit/efficiency_criteria.hpp"
#include "invcrit/errors.hpp"
#include "invcrit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace invcrit {

enum class Objective { MinIcpe, MaxIcse };

/// Log-spaced search range [lo, hi] with `points` grid nodes.
struct LogAxis {
    double lo = 1.0;
    double hi = 1.0;
    std::size_t points = 1;

    void validate(std::string_view name) const {
        if (!(lo > 0.0) || !(hi >= lo) || points == 0 || (hi > lo && points < 2))
            throw DomainError(std::string(name) + " range must satisfy 0 < lo <= hi with >= 2 points");
    }
    [[nodiscard]] std::vector<double> grid() const { return numeric::log_grid(lo, hi, points); }
};

/// A variable that is either fixed or searched over a log range.
struct Variable {
    std::optional<double> fixed;
    LogAxis range;

    static Variable at(double v) { return {v, {v, v, 1}}; }
    static Variable over(double lo, double hi, std::size_t n) { return {std::nullopt, {lo, hi, n}}; }

    [[nodiscard]] bool is_free() const noexcept { return !fixed.has_value(); }
    [[nodiscard]] double lo() const noexcept { return fixed ? *fixed : range.lo; }
    [[nodiscard]] double hi() const noexcept { return fixed ? *fixed : range.hi; }
    [[nodiscard]] std::size_t points() const noexcept { return fixed ? 1 : range.points; }
};

struct ExtremumSpec {
    Objective objective = Objective::MinIcpe;
    std::vector<int> alphabet{2, 4, 8, 16, 32, 64};
    Variable g = Variable::over(1e-2, 1e1, 61);
    Variable signal_base = Variable::over(1e-2, 1e3, 81);
    std::optional<double> min_icse;   ///< c_F >= min_icse
    std::optional<double> max_icpe;   ///< w <= max_icpe
    std::optional<double> icpe_band;  ///< w <= w_inf(m)·(1 + band)
    SerModel ser;
    double rel_tol = 1e-6;
    double constraint_tol = 1e-9;  ///< relative violation still accepted as feasible
    bool use_h_reduction = true;

    void validate() const {
        if (alphabet.empty()) throw DomainError("alphabet set is empty");
        for (int m : alphabet)
            if (m < 2) throw DomainError("alphabet sizes must be >= 2");
        if (g.fixed && !(*g.fixed > 0.0)) throw DomainError("fixed g must be positive");
        if (signal_base.fixed && !(*signal_base.fixed > 0.0)) throw DomainError("fixed B_s must be positive");
        if (g.is_free()) g.range.validate("g");
        if (signal_base.is_free()) signal_base.range.validate("B_s");
        if (!g.is_free() && !signal_base.is_free() && alphabet.size() < 2)
            throw DomainError("at least one of m, g, B_s must be free");
        if (!(rel_tol > 0.0)) throw DomainError("refinement tolerance must be positive");
        if (!(constraint_tol >= 0.0)) throw DomainError("constraint tolerance must be non-negative");
        if (min_icse && !(*min_icse > 0.0)) throw DomainError("least permissible ICSE must be positive");
        if (max_icpe && !(*max_icpe > 0.0)) throw DomainError("ICPE cap must be positive");
        if (icpe_band && !(*icpe_band >= 0.0)) throw DomainError("ICPE band must be non-negative");
    }
};

struct ExtremumResult {
    int m = 0;
    double g = 0.0;
    double signal_base = 0.0;
    double h = 0.0;
    double objective = 0.0;  ///< w for MinIcpe, c_F for MaxIcse
    double icse = 0.0;
    double icpe = 0.0;
    std::optional<double> icse_slack;  ///< c_F - min_icse
    std::optional<double> icpe_cap;    ///< effective ICPE cap (explicit cap and band combined)
    std::optional<double> icpe_slack;  ///< icpe_cap - w
    bool constraint_active = false;
    bool attained = true;  ///< false when the optimum sits on a search-range boundary (infimum/supremum)
    bool feasible = true;
    double violation = 0.0;  ///< relative constraint violation; 0 when feasible
    double best_grid_objective = 0.0;
    std::size_t grid_evaluations = 0;
    std::size_t refine_evaluations = 0;

    [[nodiscard]] std::size_t evaluations() const noexcept { return grid_evaluations + refine_evaluations; }
};

/// No searched point satisfies the constraints; carries the least-violating point.
class Infeasible : public std::runtime_error {
public:
    Infeasible(const std::string& what, ExtremumResult certificate)
        : std::runtime_error(what), certificate_(std::move(certificate)) {}
    [[nodiscard]] const ExtremumResult& certificate() const noexcept { return certificate_; }

private:
    ExtremumResult certificate_;
};

namespace detail {

struct Probe {
    double g = 0.0;
    double bs = 0.0;
    double h = 0.0;
    double w = std::numeric_limits<double>::infinity();
    double cf = 0.0;
    double violation = std::numeric_limits<double>::infinity();
    double score = std::numeric_limits<double>::infinity();
};

inline bool better(const Probe& a, const Probe& b) noexcept {
    if (a.score != b.score) return a.score < b.score;
    return a.violation < b.violation;
}

class Evaluator {
public:
    Evaluator(const ExtremumSpec& spec, int m, std::optional<double> cap) : spec_(spec), m_(m), cap_(cap) {}

    Probe operator()(double g, double bs) {
        ++count_;
        Probe p;
        p.g = g;
        p.bs = bs;
        p.h = g * std::sqrt(bs / 2.0);
        const double c = capacity_bits_per_symbol(m_, ser_at(m_, p.h, spec_.ser));
        p.cf = c / (bs / 2.0);
        p.w = c > 0.0 ? p.h * p.h / c : std::numeric_limits<double>::infinity();
        double v = 0.0;
        if (spec_.min_icse) v = std::max(v, (*spec_.min_icse - p.cf) / *spec_.min_icse);
        if (cap_) v = std::max(v, (p.w - *cap_) / *cap_);
        if (v <= spec_.constraint_tol) v = 0.0;
        p.violation = v;
        const double raw = spec_.objective == Objective::MinIcpe ? p.w : -p.cf;
        p.score = v > 0.0 ? std::numeric_limits<double>::infinity() : raw;
        return p;
    }

    [[nodiscard]] std::size_t count() const noexcept { return count_; }
    void reset_count() noexcept { count_ = 0; }

private:
    const ExtremumSpec& spec_;
    int m_;
    std::optional<double> cap_;
    std::size_t count_ = 0;
};

inline bool at_bound(double x, double lo, double hi, double rel_tol) {
    if (lo == hi) return false;
    const double lx = std::log(x);
    return std::abs(lx - std::log(lo)) <= 2.0 * rel_tol || std::abs(lx - std::log(hi)) <= 2.0 * rel_tol;
}

/// Golden refinement of a 1-D log-coordinate function around grid node i.
template <class F>
Probe refine_axis(F&& at_log, const std::vector<double>& log_grid, std::size_t i, double center_log, Probe best,
                  double rel_tol) {
    if (log_grid.size() < 2) return best;
    const double step = (log_grid.back() - log_grid.front()) / static_cast<double>(log_grid.size() - 1);
    const double lo = std::max(log_grid.front(), std::min(center_log, log_grid[i]) - step);
    const double hi = std::min(log_grid.back(), std::max(center_log, log_grid[i]) + step);
    Probe found = best;
    numeric::golden_section(
        [&](double x) {
            Probe p = at_log(x);
            if (better(p, found)) found = p;
            return p.score;
        },
        lo, hi, rel_tol);
    return found;
}

inline std::size_t nearest_index(const std::vector<double>& log_grid, double x) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < log_grid.size(); ++k)
        if (std::abs(log_grid[k] - x) < std::abs(log_grid[best] - x)) best = k;
    return best;
}

inline std::vector<double> logs_of(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::log(x); });
    return out;
}

inline double h_lo(const ExtremumSpec& s) { return s.g.lo() * std::sqrt(s.signal_base.lo() / 2.0); }
inline double h_hi(const ExtremumSpec& s) { return s.g.hi() * std::sqrt(s.signal_base.hi() / 2.0); }
inline std::size_t h_points(const ExtremumSpec& s) {
    if (h_lo(s) == h_hi(s)) return 1;
    return std::max<std::size_t>({s.g.points(), s.signal_base.points(), 3});
}

/// Unconstrained 1-D minimum of w(h) = h²/C_m(h) on [lo, hi].
inline Probe icpe_infimum_probe(int m, double lo, double hi, std::size_t points, const SerModel& ser, double rel_tol,
                                std::size_t& evals) {
    auto eval = [&](double h) {
        ++evals;
        Probe p;
        p.h = h;
        const double c = capacity_bits_per_symbol(m, ser_at(m, h, ser));
        p.w = c > 0.0 ? h * h / c : std::numeric_limits<double>::infinity();
        p.score = p.w;
        p.violation = 0.0;
        return p;
    };
    const auto hs = numeric::log_grid(lo, hi, points);
    const auto lh = logs_of(hs);
    Probe best;
    std::size_t bi = 0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
        Probe p = eval(hs[k]);
        if (better(p, best)) {
            best = p;
            bi = k;
        }
    }
    return refine_axis([&](double x) { return eval(std::exp(x)); }, lh, bi, lh[bi], best, rel_tol);
}

inline ExtremumResult to_result(const ExtremumSpec& spec, int m, const Probe& p, std::optional<double> cap) {
    ExtremumResult r;
    r.m = m;
    r.g = p.g;
    r.signal_base = p.bs;
    r.h = p.h;
    r.icse = p.cf;
    r.icpe = p.w;
    r.objective = spec.objective == Objective::MinIcpe ? p.w : p.cf;
    r.violation = std::isfinite(p.violation) ? p.violation : 0.0;
    r.feasible = p.violation <= 0.0;
    const double active_tol = std::max(1e-9, 10.0 * spec.rel_tol);
    if (spec.min_icse) {
        r.icse_slack = p.cf - *spec.min_icse;
        if (*r.icse_slack <= active_tol * *spec.min_icse) r.constraint_active = true;
    }
    if (cap) {
        r.icpe_cap = cap;
        r.icpe_slack = *cap - p.w;
        if (*r.icpe_slack <= active_tol * *cap) r.constraint_active = true;
    }
    return r;
}

}  // namespace detail

/**
 * Infimum of ICPE over h ∈ [h_lo, h_hi] at fixed m (free g and B_s).
 * The returned point has g and B_s unset (0); attained is false at a range end.
 */
inline ExtremumResult icpe_infimum(int m, const LogAxis& h_range, const SerModel& ser, double rel_tol = 1e-6) {
    h_range.validate("h");
    std::size_t evals = 0;
    const auto p = detail::icpe_infimum_probe(m, h_range.lo, h_range.hi, h_range.points, ser, rel_tol, evals);
    ExtremumResult r;
    r.m = m;
    r.h = p.h;
    r.icpe = p.w;
    r.objective = p.w;
    r.icse = std::numeric_limits<double>::quiet_NaN();
    r.attained = !detail::at_bound(p.h, h_range.lo, h_range.hi, rel_tol);
    r.refine_evaluations = evals;
    return r;
}

/// Solves the search described by the ExtremumSpec for one alphabet size; infeasibility is reported via the `feasible` flag.
inline ExtremumResult optimize_alphabet(const ExtremumSpec& spec, int m) {
    using detail::Probe;
    spec.validate();

    std::optional<double> cap = spec.max_icpe;
    std::size_t band_evals = 0;
    if (spec.icpe_band) {
        const double lo = detail::h_lo(spec);
        const double hi = detail::h_hi(spec);
        const auto inf = detail::icpe_infimum_probe(m, lo, hi, detail::h_points(spec), spec.ser, spec.rel_tol,
                                                    band_evals);
        const double band_cap = inf.w * (1.0 + *spec.icpe_band);
        cap = cap ? std::min(*cap, band_cap) : band_cap;
    }

    detail::Evaluator eval(spec, m, cap);
    Probe best;
    Probe grid_best;
    std::size_t grid_evals = 0;
    bool attained = true;

    const bool reduce = spec.objective == Objective::MinIcpe && spec.use_h_reduction && spec.g.is_free() &&
                        spec.signal_base.is_free();
    if (reduce) {
        // For each h, take the smallest admissible B_s: it maximizes c_F (slack of the ICSE constraint)
        // and leaves w unchanged.
        const double glo = spec.g.lo(), ghi = spec.g.hi();
        const double blo = spec.signal_base.lo(), bhi = spec.signal_base.hi();
        auto at_h = [&](double h) {
            const double bs = std::clamp(2.0 * h * h / (ghi * ghi), blo, bhi);
            const double g = std::clamp(h / std::sqrt(bs / 2.0), glo, ghi);
            return eval(g, bs);
        };
        const double lo = detail::h_lo(spec), hi = detail::h_hi(spec);
        const auto hs = numeric::log_grid(lo, hi, detail::h_points(spec));
        const auto lh = detail::logs_of(hs);
        std::size_t bi = 0;
        for (std::size_t k = 0; k < hs.size(); ++k) {
            Probe p = at_h(hs[k]);
            if (detail::better(p, best)) {
                best = p;
                bi = k;
            }
        }
        grid_best = best;
        grid_evals = eval.count();
        best = detail::refine_axis([&](double x) { return at_h(std::exp(x)); }, lh, bi, lh[bi], best, spec.rel_tol);
        attained = !detail::at_bound(best.h, lo, hi, spec.rel_tol);
    } else {
        const auto gs = spec.g.is_free() ? spec.g.range.grid() : std::vector<double>{*spec.g.fixed};
        const auto bss = spec.signal_base.is_free() ? spec.signal_base.range.grid()
                                                    : std::vector<double>{*spec.signal_base.fixed};
        const auto lg = detail::logs_of(gs);
        const auto lb = detail::logs_of(bss);
        for (double g : gs) {
            for (double bs : bss) {
                Probe p = eval(g, bs);
                if (detail::better(p, best)) best = p;
            }
        }
        grid_best = best;
        grid_evals = eval.count();
        // Alternating golden refinement per free axis.
        for (int sweep = 0; sweep < 4; ++sweep) {
            const double before = best.score;
            if (spec.g.is_free()) {
                const double bs = best.bs;
                best = detail::refine_axis([&](double x) { return eval(std::exp(x), bs); }, lg,
                                           detail::nearest_index(lg, std::log(best.g)), std::log(best.g), best,
                                           spec.rel_tol);
            }
            if (spec.signal_base.is_free()) {
                const double g = best.g;
                best = detail::refine_axis([&](double x) { return eval(g, std::exp(x)); }, lb,
                                           detail::nearest_index(lb, std::log(best.bs)), std::log(best.bs), best,
                                           spec.rel_tol);
            }
            if (!(spec.g.is_free() && spec.signal_base.is_free())) break;
            if (!(best.score < before)) break;
        }
        if (spec.g.is_free() && detail::at_bound(best.g, spec.g.lo(), spec.g.hi(), spec.rel_tol)) attained = false;
        if (spec.signal_base.is_free() &&
            detail::at_bound(best.bs, spec.signal_base.lo(), spec.signal_base.hi(), spec.rel_tol))
            attained = false;
    }

    auto r = detail::to_result(spec, m, best, cap);
    r.attained = r.feasible && attained;
    r.grid_evaluations = grid_evals;
    r.refine_evaluations = eval.count() - grid_evals + band_evals;
    r.best_grid_objective = spec.objective == Objective::MinIcpe ? grid_best.w : grid_best.cf;
    return r;
}

/// Best over the alphabet set; throws Infeasible with the least-violating point when nothing is feasible.
inline ExtremumResult solve(const ExtremumSpec& spec) {
    spec.validate();
    std::optional<ExtremumResult> best;
    std::optional<ExtremumResult> least_bad;
    std::size_t grid = 0, refine = 0;
    for (int m : spec.alphabet) {
        auto r = optimize_alphabet(spec, m);
        grid += r.grid_evaluations;
        refine += r.refine_evaluations;
        if (r.feasible) {
            const bool improves = !best || (spec.objective == Objective::MinIcpe ? r.objective < best->objective
                                                                                 : r.objective > best->objective);
            if (improves) best = r;
        } else if (!least_bad || r.violation < least_bad->violation) {
            least_bad = r;
        }
    }
    if (!best) {
        least_bad->grid_evaluations = grid;
        least_bad->refine_evaluations = refine;
        throw Infeasible("no searched point satisfies the constraints", *least_bad);
    }
    best->grid_evaluations = grid;
    best->refine_evaluations = refine;
    return *best;
}

inline ExtremumResult minimize_icpe(const ExtremumSpec& spec) {
    if (spec.objective != Objective::MinIcpe) throw DomainError("minimize_icpe requires objective MinIcpe");
    return solve(spec);
}

inline ExtremumResult maximize_icse(const ExtremumSpec& spec) {
    if (spec.objective != Objective::MaxIcse) throw DomainError("maximize_icse requires objective MaxIcse");
    return solve(spec);
}

// ---------------------------------------------------------------------------
// Curve families

struct CurveFamily {
    int m;
    double g;
};

struct SweepRow {
    int m;
    double g;
    double signal_base;
    double h;
    double ser;
    double capacity;
    double icse;
    double icpe;  ///< NaN where c_F = 0
};

inline std::vector<SweepRow> sweep_curves(std::span<const CurveFamily> families, const LogAxis& signal_base,
                                          const SerModel& ser) {
    signal_base.validate("B_s");
    const auto bss = signal_base.grid();
    std::vector<SweepRow> rows;
    rows.reserve(families.size() * bss.size());
    for (const auto& f : families) {
        for (double bs : bss) {
            const ChannelPoint pt(f.m, f.g, bs);
            SweepRow row{f.m, f.g, bs, pt.esinr(), 0.0, 0.0, 0.0, 0.0};
            row.ser = invcrit::ser(pt, ser);
            row.capacity = capacity_bits_per_symbol(f.m, row.ser);
            row.icse = row.capacity / (bs / 2.0);
            row.icpe = row.icse > 0.0 ? f.g * f.g / row.icse : std::numeric_limits<double>::quiet_NaN();
            rows.push_back(row);
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Statement checks

struct FlatnessReport {
    int m = 0;
    std::vector<double> signal_base;
    std::vector<double> best_g;
    std::vector<double> min_icpe;
    double smallest = 0.0;
    double largest = 0.0;
    double spread = 0.0;  ///< (largest - smallest) / smallest
    double threshold = 1e-6;
    bool pass = false;
};

/// Minimum ICPE over g at every B_s of the grid; the minima should coincide.
inline FlatnessReport verify_statement1(int m, const LogAxis& g_range, const LogAxis& bs_range, const SerModel& ser,
                                        double rel_tol = 1e-6, double threshold = 1e-6) {
    g_range.validate("g");
    bs_range.validate("B_s");
    FlatnessReport rep;
    rep.m = m;
    rep.threshold = threshold;
    ExtremumSpec spec;
    spec.objective = Objective::MinIcpe;
    spec.alphabet = {m};
    spec.g = Variable{std::nullopt, g_range};
    spec.ser = ser;
    spec.rel_tol = rel_tol;
    for (double bs : bs_range.grid()) {
        spec.signal_base = Variable::at(bs);
        const auto r = optimize_alphabet(spec, m);
        rep.signal_base.push_back(bs);
        rep.best_g.push_back(r.g);
        rep.min_icpe.push_back(r.icpe);
    }
    const auto [mn, mx] = std::minmax_element(rep.min_icpe.begin(), rep.min_icpe.end());
    rep.smallest = *mn;
    rep.largest = *mx;
    rep.spread = (*mx - *mn) / *mn;
    rep.pass = rep.spread <= threshold;
    return rep;
}

struct MonotonicityRow {
    double g;
    double optimal_signal_base;
    double product;  ///< B_s*·g²
    double icse;
    bool attained;
};

struct MonotonicityReport {
    int m = 0;
    std::vector<MonotonicityRow> rows;
    bool strictly_decreasing = false;
    double product_spread = 0.0;  ///< relative spread of B_s*·g²
    double threshold = 1e-4;
    bool pass = false;
};

/**
 * Spectral-efficiency-optimal B_s for each g of an increasing list.
 *
 * For every g the B_s range is the image of one common h-range, so that each
 * search sees the same set of h values.
 */
inline MonotonicityReport verify_statement3(int m, std::span<const double> g_values, const LogAxis& h_range,
                                            const SerModel& ser, double rel_tol = 1e-6, double threshold = 1e-4) {
    if (g_values.size() < 3) throw DomainError("statement-3 check needs at least three g values");
    for (std::size_t i = 1; i < g_values.size(); ++i)
        if (!(g_values[i] > g_values[i - 1])) throw DomainError("g values must be strictly increasing");
    h_range.validate("h");
    MonotonicityReport rep;
    rep.m = m;
    rep.threshold = threshold;
    ExtremumSpec spec;
    spec.objective = Objective::MaxIcse;
    spec.alphabet = {m};
    spec.ser = ser;
    spec.rel_tol = rel_tol;
    for (double g : g_values) {
        spec.g = Variable::at(g);
        spec.signal_base = Variable::over(2.0 * h_range.lo * h_range.lo / (g * g),
                                          2.0 * h_range.hi * h_range.hi / (g * g), h_range.points);
        const auto r = optimize_alphabet(spec, m);
        rep.rows.push_back({g, r.signal_base, r.signal_base * g * g, r.icse, r.attained});
    }
    rep.strictly_decreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (!(rep.rows[i].optimal_signal_base < rep.rows[i - 1].optimal_signal_base)) rep.strictly_decreasing = false;
    double pmin = rep.rows.front().product, pmax = pmin;
    for (const auto& row : rep.rows) {
        pmin = std::min(pmin, row.product);
        pmax = std::max(pmax, row.product);
    }
    rep.product_spread = (pmax - pmin) / pmin;
    rep.pass = rep.strictly_decreasing && rep.product_spread <= threshold;
    return rep;
}

}  // namespace invcrit
