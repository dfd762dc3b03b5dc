/**
 * @file tdma_simulator.hpp
 * @brief Discrete-event single-server queue used to cross-check the MAC capacity limits.
 *
 * Poisson arrivals at rate G / (M[τ]·(1 + v)); each packet occupies the server
 * for an access overhead v·M[τ] followed by its payload (constant M[τ] for
 * M/D/1, exponential with mean M[τ] rounded to whole bits for M/M/1, at least
 * one bit). Useful throughput S(G) is the fraction of the measurement window
 * spent on payload; confidence intervals come from equal-width batch means.
 */
#pragma once

#include "invcrit/errors.hpp"
#include "invcrit/mac_capacity.hpp"
#include "invcrit/numeric.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace invcrit {

struct SimConfig {
    std::vector<double> offered_load{0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
    std::optional<double> overhead;  ///< normalized per-packet overhead v; defaults to the model's v_inf
    std::size_t warmup_packets = 10'000;
    std::size_t measured_packets = 100'000;
    std::uint64_t seed = 1;
    double confidence = 0.95;
    std::size_t batches = 20;
    double target_half_width = 0.01;  ///< CI half-widths above 5x this are flagged unstable
    /// Exploratory, not part of the zero-error limits: per-transmission corruption probability with
    /// retransmission until success. Wasted transmissions count as overhead time.
    double corruption_probability = 0.0;

    static constexpr std::size_t min_horizon = 10'000;

    void validate() const {
        if (offered_load.empty()) throw DomainError("offered-load grid is empty");
        for (double g : offered_load)
            if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("offered load values must be positive");
        if (overhead && !(*overhead >= 0.0)) throw DomainError("overhead v must be non-negative");
        if (warmup_packets < min_horizon || measured_packets < min_horizon)
            throw DomainError("warmup and measurement horizons must be at least 10^4 packets");
        if (!(confidence > 0.0) || !(confidence < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
        if (batches < 2) throw DomainError("at least two batches are required");
        if (!(target_half_width > 0.0)) throw DomainError("target CI half-width must be positive");
        if (!(corruption_probability >= 0.0) || !(corruption_probability < 1.0))
            throw DomainError("corruption probability must lie in [0, 1)");
    }
};

struct SimPoint {
    double offered_load = 0.0;
    double throughput = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool unstable = false;
    double useful_time = 0.0;
    double overhead_time = 0.0;
    double idle_time = 0.0;
    double horizon = 0.0;
    std::size_t packets = 0;
};

struct SimResult {
    Discipline discipline = Discipline::MD1;
    double overhead = 0.0;             ///< v used by the simulation
    std::vector<SimPoint> points;
    double empirical_capacity = 0.0;   ///< max_G S(G)
    double saturation_capacity = 0.0;  ///< 1/(1+v)
    MacLimits analytic;                ///< closed-form limits of the model
    double relative_gap = 0.0;         ///< |C_emp - C_sup| / C_sup

    [[nodiscard]] bool any_unstable() const noexcept {
        return std::any_of(points.begin(), points.end(), [](const SimPoint& p) { return p.unstable; });
    }
};

namespace detail {

/// Busy/idle bookkeeping clipped to the measurement window and split across batches.
class WindowLedger {
public:
    WindowLedger(double t0, double t1, std::size_t batches)
        : t0_(t0), t1_(t1), width_((t1 - t0) / static_cast<double>(batches)), useful_(batches, 0.0) {}

    void useful(double a, double b) { credit(a, b, true); }
    void overhead(double a, double b) { credit(a, b, false); }
    void idle(double a, double b) {
        const double lo = std::max(a, t0_), hi = std::min(b, t1_);
        if (hi > lo) idle_.add(hi - lo);
    }

    [[nodiscard]] double useful_total() const noexcept { return useful_total_.value(); }
    [[nodiscard]] double overhead_total() const noexcept { return overhead_total_.value(); }
    [[nodiscard]] double idle_total() const noexcept { return idle_.value(); }
    [[nodiscard]] const std::vector<double>& useful_per_batch() const noexcept { return useful_; }
    [[nodiscard]] double batch_width() const noexcept { return width_; }

private:
    void credit(double a, double b, bool is_useful) {
        const double lo = std::max(a, t0_), hi = std::min(b, t1_);
        if (!(hi > lo)) return;
        (is_useful ? useful_total_ : overhead_total_).add(hi - lo);
        if (!is_useful) return;
        auto batch_of = [&](double t) {
            const auto k = static_cast<std::size_t>((t - t0_) / width_);
            return std::min(k, useful_.size() - 1);
        };
        const std::size_t first = batch_of(lo);
        const std::size_t last = batch_of(hi);
        for (std::size_t k = first; k <= last; ++k) {
            const double bl = t0_ + width_ * static_cast<double>(k);
            const double br = (k + 1 == useful_.size()) ? t1_ : bl + width_;
            const double l = std::max(lo, bl), r = std::min(hi, br);
            if (r > l) useful_[k] += r - l;
        }
    }

    double t0_, t1_, width_;
    std::vector<double> useful_;
    numeric::CompensatedSum useful_total_, overhead_total_, idle_;
};

constexpr std::uint64_t kArrivalStream = 0xA441;
constexpr std::uint64_t kServiceStream = 0x5E41;

inline SimPoint simulate_load(const MacModel& model, const SimConfig& cfg, double v, double load, std::size_t index) {
    const double mean = model.mean_duration_s;
    const double rate = load / (mean * (1.0 + v));
    const std::size_t total = cfg.warmup_packets + cfg.measured_packets;

    std::mt19937_64 arrival_rng(numeric::derive_seed(cfg.seed, kArrivalStream, index));
    std::mt19937_64 service_rng(numeric::derive_seed(cfg.seed, kServiceStream, index));
    std::exponential_distribution<double> interarrival(rate);
    std::exponential_distribution<double> length_bits(1.0 / model.mean_length_bits());
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<double> arrivals(total + 1);
    double t = 0.0;
    for (auto& a : arrivals) {
        t += interarrival(arrival_rng);
        a = t;
    }
    const double t0 = arrivals[cfg.warmup_packets];
    const double t1 = arrivals[total];
    WindowLedger ledger(t0, t1, cfg.batches);

    const double overhead_time = v * mean;
    double server_free = 0.0;
    for (std::size_t k = 0; k <= total; ++k) {
        const double start = std::max(arrivals[k], server_free);
        if (start > server_free) ledger.idle(server_free, start);
        if (start >= t1) {
            server_free = start;
            break;
        }
        double payload = mean;
        if (model.discipline == Discipline::MM1) {
            const double bits = std::max(1.0, std::round(length_bits(service_rng)));
            payload = bits / model.bit_rate;
        }
        double clock = start;
        while (true) {
            ledger.overhead(clock, clock + overhead_time);
            clock += overhead_time;
            const bool corrupted = cfg.corruption_probability > 0.0 && unit(service_rng) < cfg.corruption_probability;
            if (corrupted) {
                ledger.overhead(clock, clock + payload);
            } else {
                ledger.useful(clock, clock + payload);
            }
            clock += payload;
            if (!corrupted) break;
        }
        server_free = clock;
    }
    if (server_free < t1) ledger.idle(server_free, t1);

    SimPoint pt;
    pt.offered_load = load;
    pt.horizon = t1 - t0;
    pt.useful_time = ledger.useful_total();
    pt.overhead_time = ledger.overhead_total();
    pt.idle_time = ledger.idle_total();
    pt.packets = cfg.measured_packets;
    pt.throughput = pt.useful_time / pt.horizon;

    const auto& per_batch = ledger.useful_per_batch();
    const double b = static_cast<double>(per_batch.size());
    numeric::CompensatedSum ss;
    for (std::size_t k = 0; k < per_batch.size(); ++k) {
        const double width = (k + 1 == per_batch.size()) ? (t1 - (t0 + ledger.batch_width() * (b - 1))) : ledger.batch_width();
        const double s = per_batch[k] / width;
        ss.add((s - pt.throughput) * (s - pt.throughput));
    }
    const double sd = std::sqrt(ss.value() / (b - 1.0));
    const boost::math::students_t dist(b - 1.0);
    const double tq = boost::math::quantile(dist, 0.5 + cfg.confidence / 2.0);
    const double half = tq * sd / std::sqrt(b);
    pt.ci_low = pt.throughput - half;
    pt.ci_high = pt.throughput + half;
    pt.unstable = half > 5.0 * cfg.target_half_width;
    return pt;
}

}  // namespace detail

/**
 * Runs one independent simulation per offered load; each load index gets its
 * own arrival and service streams derived from the root seed.
 */
inline SimResult simulate_tdma(const MacModel& model, const SimConfig& config) {
    model.validate();
    config.validate();
    SimResult res;
    res.discipline = model.discipline;
    res.analytic = limits(model);
    res.overhead = config.overhead.value_or(res.analytic.overhead_infimum);
    res.saturation_capacity = capacity_from_overhead(res.overhead);
    for (std::size_t i = 0; i < config.offered_load.size(); ++i)
        res.points.push_back(detail::simulate_load(model, config, res.overhead, config.offered_load[i], i));
    for (const auto& p : res.points) res.empirical_capacity = std::max(res.empirical_capacity, p.throughput);
    res.relative_gap =
        std::abs(res.empirical_capacity - res.analytic.capacity_supremum) / res.analytic.capacity_supremum;
    return res;
}

}  // namespace invcrit
