#include "invcrit/tdma_simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace invcrit;

namespace {
SimConfig quick(std::vector<double> loads, std::optional<double> v) {
    SimConfig c;
    c.offered_load = std::move(loads);
    c.overhead = v;
    c.warmup_packets = 10'000;
    c.measured_packets = 50'000;
    c.seed = 7;
    return c;
}
}  // namespace

TEST(Simulator, UnderloadThroughputEqualsOfferedLoad) {
    for (auto d : {Discipline::MD1, Discipline::MM1}) {
        const auto r = simulate_tdma(MacModel::from_length(d, 1000.0), quick({0.1}, 0.0));
        const auto& p = r.points.front();
        EXPECT_LE(p.ci_low, 0.1 + 0.005);
        EXPECT_GE(p.ci_high, 0.1 - 0.005);
        EXPECT_NEAR(p.throughput, 0.1, 0.005);
    }
}

TEST(Simulator, OverloadConvergesToSaturationLaw) {
    for (double v : {0.001854, 0.25, 1.0}) {
        const auto r = simulate_tdma(MacModel::from_length(Discipline::MD1, 1000.0), quick({1.2, 1.5, 2.0}, v));
        for (const auto& p : r.points) EXPECT_NEAR(p.throughput / (1.0 / (1.0 + v)) - 1.0, 0.0, 2e-3) << v;
        EXPECT_EQ(r.saturation_capacity, 1.0 / (1.0 + v));
    }
    const auto half = simulate_tdma(MacModel::from_length(Discipline::MM1, 1000.0), quick({1.5}, 1.0));
    EXPECT_NEAR(half.points.front().throughput, 0.5, 0.01);
}

TEST(Simulator, TimePartitionIsExact) {
    for (auto d : {Discipline::MD1, Discipline::MM1}) {
        const auto r = simulate_tdma(MacModel::from_length(d, 200.0), quick({0.3, 0.9, 1.6}, 0.1));
        for (const auto& p : r.points) {
            EXPECT_NEAR(p.useful_time + p.overhead_time + p.idle_time, p.horizon, 1e-9 * p.horizon);
            EXPECT_GE(p.idle_time, 0.0);
        }
    }
}

TEST(Simulator, SeedDeterminismAndIndependence) {
    const auto model = MacModel::from_length(Discipline::MM1, 500.0);
    const auto a = simulate_tdma(model, quick({0.5, 1.5}, std::nullopt));
    const auto b = simulate_tdma(model, quick({0.5, 1.5}, std::nullopt));
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].throughput, b.points[i].throughput);
        EXPECT_EQ(a.points[i].ci_high, b.points[i].ci_high);
    }
    auto cfg = quick({0.5, 1.5}, std::nullopt);
    cfg.seed = 8;
    EXPECT_NE(simulate_tdma(model, cfg).points[0].throughput, a.points[0].throughput);
    EXPECT_EQ(a.overhead, limits(model).overhead_infimum);
}

TEST(Simulator, CorruptionModeLowersThroughput) {
    auto cfg = quick({1.5}, 0.01);
    const auto clean = simulate_tdma(MacModel::from_length(Discipline::MD1, 100.0), cfg);
    cfg.corruption_probability = 0.2;
    const auto lossy = simulate_tdma(MacModel::from_length(Discipline::MD1, 100.0), cfg);
    EXPECT_LT(lossy.points[0].throughput, clean.points[0].throughput);
    EXPECT_NEAR(lossy.points[0].throughput, 0.8 / 1.01, 0.01);
}

TEST(Simulator, ConfigValidation) {
    auto cfg = quick({1.0}, 0.0);
    cfg.measured_packets = 100;
    EXPECT_THROW(simulate_tdma(MacModel::from_length(Discipline::MD1, 10.0), cfg), DomainError);
    auto c2 = quick({}, 0.0);
    EXPECT_THROW(c2.validate(), DomainError);
    auto c3 = quick({1.0}, -1.0);
    EXPECT_THROW(c3.validate(), DomainError);
}
