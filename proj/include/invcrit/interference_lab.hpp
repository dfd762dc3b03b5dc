/**
 * @file interference_lab.hpp
 * @brief Interference caused by orthogonality errors of m-sequence based signal ensembles.
 *
 * The receiver correlates its ideal reference against error-perturbed copies
 * of the other signals. A timing error of τ chips is applied by linear
 * interpolation between neighbouring chips and a carrier phase error φ scales
 * the correlator output by cos φ. Powers are in units of the unit received
 * signal power, so the per-signal term (1/T)·sqrt(M[K²]) reduces to the RMS of
 * the chip-normalized correlation.
 *
 * Monte Carlo trials are seeded individually from a root seed and reduced in
 * trial order with compensated sums, so estimates are bit-reproducible.
 */
#pragma once

#include "invcrit/errors.hpp"
#include "invcrit/msequence.hpp"
#include "invcrit/numeric.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace invcrit {

enum class EnsembleKind { Walsh, CyclicShift };

/// Signals of one cell, all equal length, as ±1 chips.
class SignalEnsemble {
public:
    /**
     * Walsh rows 0..active-1 of order 2^n scrambled by the cell's m-sequence.
     * The scrambler is extended by one +1 chip to the Walsh length 2^n.
     */
    static SignalEnsemble walsh(int cell_id, const MSequence& scrambler, std::size_t active,
                                double chip_duration_s = 1.0) {
        const std::size_t length = scrambler.period() + 1;
        if (active < 1 || active > length) throw DomainError("Walsh ensemble size must be in [1, 2^n]");
        SignalEnsemble e(cell_id, EnsembleKind::Walsh, chip_duration_s, scrambler.polynomial());
        const auto chips = scrambler.chips();
        for (std::size_t row = 0; row < active; ++row) {
            std::vector<double> s(length);
            for (std::size_t k = 0; k < length; ++k) {
                const double walsh = (std::popcount(row & k) & 1) ? -1.0 : 1.0;
                const double scr = k < chips.size() ? chips[k] : 1.0;
                s[k] = walsh * scr;
            }
            e.signals_.push_back(std::move(s));
        }
        return e;
    }

    /// Cyclic shifts of one m-sequence spaced N/active chips apart.
    static SignalEnsemble cyclic_shifts(int cell_id, const MSequence& seq, std::size_t active,
                                        double chip_duration_s = 1.0) {
        const std::size_t n = seq.period();
        if (active < 1 || active > n) throw DomainError("shift ensemble size must be in [1, 2^n - 1]");
        SignalEnsemble e(cell_id, EnsembleKind::CyclicShift, chip_duration_s, seq.polynomial());
        const auto chips = seq.chips();
        const std::size_t spacing = n / active;
        for (std::size_t j = 0; j < active; ++j) {
            std::vector<double> s(n);
            for (std::size_t k = 0; k < n; ++k) s[k] = chips[(k + j * spacing) % n];
            e.signals_.push_back(std::move(s));
        }
        return e;
    }

    [[nodiscard]] int cell_id() const noexcept { return cell_id_; }
    [[nodiscard]] EnsembleKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::uint64_t scrambler_polynomial() const noexcept { return polynomial_; }
    [[nodiscard]] std::size_t size() const noexcept { return signals_.size(); }
    [[nodiscard]] std::size_t length() const noexcept { return signals_.front().size(); }
    [[nodiscard]] double chip_duration_s() const noexcept { return chip_s_; }
    [[nodiscard]] double symbol_duration_s() const noexcept { return chip_s_ * static_cast<double>(length()); }
    [[nodiscard]] std::span<const double> signal(std::size_t j) const { return signals_.at(j); }

private:
    SignalEnsemble(int cell, EnsembleKind kind, double chip_s, std::uint64_t poly)
        : cell_id_(cell), kind_(kind), chip_s_(chip_s), polynomial_(poly) {
        if (!(chip_s > 0.0)) throw DomainError("chip duration must be positive");
    }

    int cell_id_;
    EnsembleKind kind_;
    double chip_s_;
    std::uint64_t polynomial_;
    std::vector<std::vector<double>> signals_;
};

/// Zero-mean Gaussian timing (chips) and phase (radians) errors, independent per signal and trial.
struct SyncErrorModel {
    double timing_std = 0.0;
    double phase_std = 0.0;

    void validate() const {
        if (!(timing_std >= 0.0) || !(phase_std >= 0.0)) throw DomainError("error standard deviations must be >= 0");
    }
};

/// One realization of the synchronization errors of a signal.
struct SyncError {
    double timing_chips = 0.0;
    double phase_rad = 0.0;
};

struct InterferingCell {
    double path_loss_index = 3.0;
    double weight = 1.0;  ///< mean received amplitude weight of the cell
};

struct CellLayout {
    int own_cell = 0;
    std::vector<InterferingCell> interferers;

    void validate() const {
        for (const auto& c : interferers)
            if (!(c.weight >= 0.0) || !(c.path_loss_index > 0.0))
                throw DomainError("cell weights must be >= 0 and path-loss indexes positive");
    }

    /// Weight-averaged path-loss index M[a].
    [[nodiscard]] double mean_path_loss_index() const {
        double ws = 0.0, was = 0.0;
        for (const auto& c : interferers) {
            ws += c.weight;
            was += c.weight * c.path_loss_index;
        }
        return ws > 0.0 ? was / ws : 0.0;
    }
};

namespace detail {

/// (1/L)·Σ_k ref[k]·other[(k + shift) mod L].
inline double cyclic_dot(std::span<const double> ref, std::span<const double> other, std::size_t shift) {
    const std::size_t n = ref.size();
    shift %= n;
    double acc = 0.0;
    const std::size_t first = n - shift;
    for (std::size_t k = 0; k < first; ++k) acc += ref[k] * other[k + shift];
    for (std::size_t k = first; k < n; ++k) acc += ref[k] * other[k + shift - n];
    return acc / static_cast<double>(n);
}

}  // namespace detail

/**
 * K(t, E): correlation of `reference` with `other` cyclically advanced by `lag`
 * chips, delayed by the timing error and scaled by the cosine of the phase error.
 */
inline double cross_correlation(std::span<const double> reference, std::span<const double> other, std::size_t lag,
                                const SyncError& error = {}) {
    if (reference.size() != other.size() || reference.empty()) throw DomainError("signals must have equal length");
    const auto n = static_cast<long long>(reference.size());
    if (lag >= reference.size()) throw DomainError("lag must lie within one period");
    // delayed(k) = other(k + lag - τ) with linear interpolation between chips; by linearity this is a blend
    // of two integer-shift correlations.
    const double pos = -error.timing_chips;
    const double base = std::floor(pos);
    const double frac = pos - base;
    long long shift = (static_cast<long long>(lag) + static_cast<long long>(base)) % n;
    if (shift < 0) shift += n;
    const auto s0 = static_cast<std::size_t>(shift);
    double k = detail::cyclic_dot(reference, other, s0);
    if (frac != 0.0) k = (1.0 - frac) * k + frac * detail::cyclic_dot(reference, other, (s0 + 1) % reference.size());
    return std::cos(error.phase_rad) * k;
}

/// Monte Carlo power estimate with delta-method standard error.
struct InterferenceEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
};

/// Desired-signal power and interference powers from one common set of draws.
struct LinkEstimate {
    InterferenceEstimate signal;
    InterferenceEstimate intra;
    InterferenceEstimate inter;
};

namespace detail {

/// Mean-square accumulator over trials for a set of correlation terms with weights c_j.
class RmsSum {
public:
    RmsSum(std::size_t terms, std::size_t trials) : terms_(terms), samples_(terms * trials, 0.0), weights_(terms, 1.0) {}

    void set_weight(std::size_t j, double w) { weights_[j] = w; }
    void put(std::size_t trial, std::size_t j, double k2) { samples_[trial * terms_ + j] = k2; }

    /// Σ_j c_j·sqrt(mean_t K²_tj) and its delta-method standard error.
    [[nodiscard]] InterferenceEstimate finish(std::size_t trials) const {
        InterferenceEstimate est;
        est.trials = trials;
        if (terms_ == 0 || trials == 0) return est;
        std::vector<double> mean(terms_);
        for (std::size_t j = 0; j < terms_; ++j) {
            numeric::CompensatedSum s;
            for (std::size_t t = 0; t < trials; ++t) s.add(samples_[t * terms_ + j]);
            mean[j] = s.value() / static_cast<double>(trials);
        }
        numeric::CompensatedSum total;
        for (std::size_t j = 0; j < terms_; ++j) total.add(weights_[j] * std::sqrt(mean[j]));
        est.value = total.value();
        if (trials < 2) return est;
        // Linearized per-trial contribution Y_t = Σ_j c_j·K²_tj / (2·sqrt(μ_j)).
        numeric::CompensatedSum ys, yy;
        std::vector<double> y(trials, 0.0);
        for (std::size_t t = 0; t < trials; ++t) {
            for (std::size_t j = 0; j < terms_; ++j)
                if (mean[j] > 0.0) y[t] += weights_[j] * samples_[t * terms_ + j] / (2.0 * std::sqrt(mean[j]));
            ys.add(y[t]);
        }
        const double ybar = ys.value() / static_cast<double>(trials);
        for (double v : y) yy.add((v - ybar) * (v - ybar));
        const double var = yy.value() / static_cast<double>(trials - 1);
        est.std_error = std::sqrt(var / static_cast<double>(trials));
        return est;
    }

private:
    std::size_t terms_;
    std::vector<double> samples_;
    std::vector<double> weights_;
};

inline SyncError draw_error(std::mt19937_64& rng, const SyncErrorModel& model) {
    std::normal_distribution<double> z(0.0, 1.0);
    const double zt = z(rng);
    const double zp = z(rng);
    return {model.timing_std * zt, model.phase_std * zp};
}

constexpr std::uint64_t kInterferenceStream = 0x1A7E5F;

}  // namespace detail

/**
 * Joint estimate of the desired-signal power (RMS of its own degraded
 * correlation peak), the intra-cell interference and the inter-cell
 * interference seen by signal `desired` of `own`.
 *
 * Per trial: every own-cell signal j draws (τ_j, φ_j) in index order; the own
 * cell is synchronous (lag 0). Then each interfering cell draws a uniform lag
 * over the period followed by one error pair per signal.
 */
inline LinkEstimate estimate_link(const SignalEnsemble& own, const CellLayout& layout,
                                  std::span<const SignalEnsemble> interferers, const SyncErrorModel& errors,
                                  std::size_t trials, std::uint64_t seed, std::size_t desired = 0) {
    errors.validate();
    layout.validate();
    if (interferers.size() != layout.interferers.size())
        throw DomainError("one ensemble is required per interfering cell");
    if (desired >= own.size()) throw DomainError("desired signal index out of range");
    for (const auto& e : interferers)
        if (e.length() != own.length()) throw DomainError("all ensembles must share the symbol length");
    if (trials == 0) throw DomainError("at least one trial is required");

    const std::size_t intra_terms = own.size() - 1;
    std::size_t inter_terms = 0;
    for (const auto& e : interferers) inter_terms += e.size();

    detail::RmsSum signal(1, trials);
    detail::RmsSum intra(intra_terms, trials);
    detail::RmsSum inter(inter_terms, trials);
    {
        std::size_t j = 0;
        for (std::size_t c = 0; c < interferers.size(); ++c)
            for (std::size_t s = 0; s < interferers[c].size(); ++s) inter.set_weight(j++, layout.interferers[c].weight);
    }

    const auto ref = own.signal(desired);
    const std::size_t length = own.length();
    std::vector<SyncError> drawn(own.size());
    for (std::size_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(numeric::derive_seed(seed, detail::kInterferenceStream, t));
        for (auto& e : drawn) e = detail::draw_error(rng, errors);
        const double peak = cross_correlation(ref, own.signal(desired), 0, drawn[desired]);
        signal.put(t, 0, peak * peak);
        std::size_t slot = 0;
        for (std::size_t j = 0; j < own.size(); ++j) {
            if (j == desired) continue;
            const double k = cross_correlation(ref, own.signal(j), 0, drawn[j]);
            intra.put(t, slot++, k * k);
        }
        slot = 0;
        for (const auto& cell : interferers) {
            std::uniform_int_distribution<std::size_t> lag_dist(0, length - 1);
            const std::size_t lag = lag_dist(rng);
            for (std::size_t s = 0; s < cell.size(); ++s) {
                const SyncError e = detail::draw_error(rng, errors);
                const double k = cross_correlation(ref, cell.signal(s), lag, e);
                inter.put(t, slot++, k * k);
            }
        }
    }
    return {signal.finish(trials), intra.finish(trials), inter.finish(trials)};
}

/// P_intra = Σ_{j≠i} (1/T)·sqrt(M[K²_ji]).
inline InterferenceEstimate intra_cell_interference(const SignalEnsemble& ensemble, const SyncErrorModel& errors,
                                                    std::size_t trials, std::uint64_t seed, std::size_t desired = 0) {
    return estimate_link(ensemble, CellLayout{}, {}, errors, trials, seed, desired).intra;
}

/// P_inter = Σ_J weight_J · Σ_jj (1/T)·sqrt(M[K²_{jj,i}]).
inline InterferenceEstimate inter_cell_interference(const CellLayout& layout, const SignalEnsemble& own,
                                                    std::span<const SignalEnsemble> interferers,
                                                    const SyncErrorModel& errors, std::size_t trials,
                                                    std::uint64_t seed, std::size_t desired = 0) {
    if (layout.interferers.empty()) return {0.0, 0.0, trials};
    return estimate_link(own, layout, interferers, errors, trials, seed, desired).inter;
}

/// Own cell plus interfering cells, each on a distinct primitive polynomial of degree n.
struct CellEnsembles {
    SignalEnsemble own;
    std::vector<SignalEnsemble> interferers;
};

inline CellEnsembles build_cell_ensembles(int degree, std::size_t active, std::size_t interfering_cells,
                                          EnsembleKind kind = EnsembleKind::Walsh) {
    const auto polys = primitive_polynomials(degree, interfering_cells + 1);
    auto make = [&](int cell, std::uint64_t poly) {
        const auto seq = MSequence::generate(degree, poly);
        return kind == EnsembleKind::Walsh ? SignalEnsemble::walsh(cell, seq, active)
                                           : SignalEnsemble::cyclic_shifts(cell, seq, active);
    };
    CellEnsembles out{make(0, polys[0]), {}};
    for (std::size_t c = 0; c < interfering_cells; ++c) out.interferers.push_back(make(static_cast<int>(c + 1), polys[c + 1]));
    return out;
}

struct SurfacePoint {
    double timing_std;
    double phase_std;
    double signal;
    double intra;
    double inter;
    double sinr_db;
};

/**
 * SINR(ε_t, ε_φ) = P_s / (P_intra + P_inter + P_n) on a dense grid, P_n from
 * `noise_power_db` relative to unit signal power. Every grid cell reuses the
 * same trial seeds.
 */
inline std::vector<SurfacePoint> sinr_surface(std::span<const double> timing_grid, std::span<const double> phase_grid,
                                              double noise_power_db, const SignalEnsemble& own,
                                              const CellLayout& layout, std::span<const SignalEnsemble> interferers,
                                              std::size_t trials, std::uint64_t seed) {
    if (timing_grid.empty() || phase_grid.empty()) throw DomainError("error grids must be non-empty");
    const double noise = numeric::from_db(noise_power_db);
    std::vector<SurfacePoint> out;
    out.reserve(timing_grid.size() * phase_grid.size());
    for (double et : timing_grid) {
        for (double ep : phase_grid) {
            const auto link = estimate_link(own, layout, interferers, {et, ep}, trials, seed);
            const double denom = link.intra.value + link.inter.value + noise;
            out.push_back({et, ep, link.signal.value, link.intra.value, link.inter.value,
                           numeric::to_db(link.signal.value / denom)});
        }
    }
    return out;
}

}  // namespace invcrit
