#include "invcrit/mac_capacity.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace invcrit;

TEST(GeometricEntropy, Examples) {
    EXPECT_EQ(geometric_entropy(1.0), 0.0);
    EXPECT_EQ(geometric_entropy(0.5), 2.0);
    const double h = geometric_entropy(0.01);
    const double ref = static_cast<double>(oracle::geometric_entropy_sum(0.01L));
    EXPECT_NEAR(h / ref - 1.0, 0.0, 1e-3);
    EXPECT_NEAR(h / ref - 1.0, 0.0, 1e-12);
}

TEST(GeometricEntropy, MatchesSummationAcrossRange) {
    for (double p : {0.9, 0.5, 0.2, 0.05, 0.001}) {
        const double ref = static_cast<double>(oracle::geometric_entropy_sum(p));
        EXPECT_NEAR(geometric_entropy(p) / ref - 1.0, 0.0, 1e-10) << p;
    }
    EXPECT_THROW(geometric_entropy(0.0), DomainError);
    EXPECT_THROW(geometric_entropy(1.1), DomainError);
}

TEST(Mm1Limits, EntropyTwoExample) {
    // H = 2 at p = 1/2, L = 1000.
    const auto lim = mm1_limits(MacModel::from_length(Discipline::MM1, 1000.0, 0.5));
    EXPECT_NEAR(lim.overhead_infimum, 0.004, 1e-15);
    EXPECT_NEAR(lim.capacity_supremum, 0.996016, 1e-6);
    EXPECT_EQ(lim.entropy_bits.value(), 2.0);
}

TEST(Mm1Limits, LengthMonotonicityAndLimit) {
    const auto a = mm1_limits(MacModel::from_length(Discipline::MM1, 100.0, 0.01));
    const auto b = mm1_limits(MacModel::from_length(Discipline::MM1, 1000.0, 0.01));
    EXPECT_LT(a.capacity_supremum, b.capacity_supremum);
    const auto big = mm1_limits(MacModel::from_length(Discipline::MM1, 1e15, 0.5));
    EXPECT_NEAR(big.capacity_supremum, 1.0, 1e-14);
}

TEST(Md1Limits, Examples) {
    const auto lim = md1_limits(MacModel::from_length(Discipline::MD1, 1000.0));
    EXPECT_NEAR(lim.overhead_infimum, 0.001854, 1e-15);
    EXPECT_NEAR(lim.capacity_supremum, 0.998149, 1e-6);
    EXPECT_FALSE(lim.entropy_bits.has_value());
    const auto half = md1_limits(MacModel::from_length(Discipline::MD1, 1.854));
    EXPECT_DOUBLE_EQ(half.capacity_supremum, 0.5);
}

TEST(Limits, CapacityIdentityForBothDisciplines) {
    for (double len : {2.0, 10.0, 1000.0, 123456.0}) {
        for (auto d : {Discipline::MM1, Discipline::MD1}) {
            const auto lim = limits(MacModel::from_length(d, len));
            EXPECT_EQ(lim.capacity_supremum, 1.0 / (1.0 + lim.overhead_infimum));
        }
    }
}

TEST(Limits, DeterministicBeatsGeometricOnLengthGrid) {
    for (int k = 0; k <= 200; ++k) {
        const double len = 2.0 * std::pow(5e5, k / 200.0);
        const auto mm1 = limits(MacModel::from_length(Discipline::MM1, len));
        const auto md1 = limits(MacModel::from_length(Discipline::MD1, len));
        EXPECT_GT(md1.capacity_supremum, mm1.capacity_supremum) << len;
        EXPECT_GT(mm1.overhead_infimum, md1.overhead_infimum);
    }
}

TEST(MacModel, Validation) {
    EXPECT_THROW(MacModel::from_length(Discipline::MD1, 0.5), DomainError);
    EXPECT_THROW(MacModel::from_length(Discipline::MM1, 10.0, 0.0), DomainError);
    EXPECT_THROW(md1_limits(MacModel::from_length(Discipline::MM1, 10.0)), DomainError);
    EXPECT_THROW(mm1_limits(MacModel::from_length(Discipline::MD1, 10.0)), DomainError);
    const MacModel m{Discipline::MD1, 1e6, 1e-3, std::nullopt};
    EXPECT_DOUBLE_EQ(m.mean_length_bits(), 1000.0);
    EXPECT_DOUBLE_EQ(md1_limits(m).overhead_infimum, 0.001854);
}
