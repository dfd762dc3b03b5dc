#include "invcrit/interference_lab.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

using namespace invcrit;

TEST(CrossCorrelation, WalshPairAndPeak) {
    const auto e = SignalEnsemble::walsh(0, MSequence::generate(5), 8);
    EXPECT_EQ(e.length(), 32u);
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = 0; j < e.size(); ++j)
            EXPECT_EQ(cross_correlation(e.signal(i), e.signal(j), 0), i == j ? 1.0 : 0.0);
}

TEST(CrossCorrelation, MSequenceShiftIsMinusOneOverN) {
    const auto s = MSequence::generate(6);
    const auto e = SignalEnsemble::cyclic_shifts(0, s, 4);
    const double n = static_cast<double>(s.period());
    EXPECT_NEAR(cross_correlation(e.signal(0), e.signal(1), 0), -1.0 / n, 1e-15);
    EXPECT_NEAR(cross_correlation(e.signal(0), e.signal(0), 5), -1.0 / n, 1e-15);
    EXPECT_DOUBLE_EQ(cross_correlation(e.signal(2), e.signal(2), 0), 1.0);
}

TEST(CrossCorrelation, FractionalTimingInterpolatesAndPhaseScales) {
    const auto s = MSequence::generate(5);
    const auto c = s.chips();
    const double k0 = cross_correlation(c, c, 0);
    const double k1 = cross_correlation(c, c, 1);
    EXPECT_NEAR(cross_correlation(c, c, 1, {0.25, 0.0}), 0.75 * k1 + 0.25 * k0, 1e-15);
    EXPECT_NEAR(cross_correlation(c, c, 0, {0.0, 0.7}), std::cos(0.7), 1e-15);
    EXPECT_NEAR(cross_correlation(c, c, 0, {-0.5, 0.0}), 0.5 * k0 + 0.5 * k1, 1e-15);
    EXPECT_THROW(cross_correlation(c, c, c.size()), DomainError);
}

TEST(IntraCell, WalshZeroErrorIsExactlyZero) {
    const auto e = SignalEnsemble::walsh(0, MSequence::generate(6), 16);
    const auto est = intra_cell_interference(e, {0.0, 0.0}, 1000, 3);
    EXPECT_EQ(est.value, 0.0);
    EXPECT_EQ(est.std_error, 0.0);
}

TEST(IntraCell, MonotoneAlongErrorLadder) {
    const auto e = SignalEnsemble::walsh(0, MSequence::generate(6), 16);
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.4, 0.2, 0.1, 0.05, 0.025}) {
        const auto est = intra_cell_interference(e, {eps, eps}, 2000, 17);
        EXPECT_LT(est.value, prev) << eps;
        EXPECT_GT(est.value, 0.0);
        prev = est.value;
    }
}

TEST(IntraCell, GrowsWithEnsembleSize) {
    const auto seq = MSequence::generate(6);
    const SyncErrorModel err{0.1, 0.1};
    const double p8 = intra_cell_interference(SignalEnsemble::walsh(0, seq, 8), err, 2000, 5).value;
    const double p16 = intra_cell_interference(SignalEnsemble::walsh(0, seq, 16), err, 2000, 5).value;
    EXPECT_GT(p16, p8);
}

TEST(InterCell, EmptyLayoutIsZero) {
    const auto cells = build_cell_ensembles(5, 4, 0);
    const auto est = inter_cell_interference(CellLayout{}, cells.own, cells.interferers, {}, 100, 1);
    EXPECT_EQ(est.value, 0.0);
}

TEST(InterCell, DecreasesWithDegree) {
    auto p = [](int n) {
        const auto cells = build_cell_ensembles(n, 4, 1);
        CellLayout layout{0, {InterferingCell{}}};
        return inter_cell_interference(layout, cells.own, cells.interferers, {}, 2000, 9).value;
    };
    EXPECT_LT(p(12), p(8));
}

TEST(InterCell, LinearInCellWeights) {
    const auto cells = build_cell_ensembles(7, 4, 2);
    CellLayout a{0, {{3.0, 1.0}, {3.5, 0.5}}};
    CellLayout b{0, {{3.0, 2.5}, {3.5, 1.25}}};
    const double pa = inter_cell_interference(a, cells.own, cells.interferers, {0.1, 0.1}, 500, 4).value;
    const double pb = inter_cell_interference(b, cells.own, cells.interferers, {0.1, 0.1}, 500, 4).value;
    EXPECT_NEAR(pb / pa, 2.5, 1e-12);
    EXPECT_NEAR(a.mean_path_loss_index(), (3.0 + 0.5 * 3.5) / 1.5, 1e-15);
}

TEST(InterCell, DistinctPolynomialsPerCell) {
    const auto cells = build_cell_ensembles(8, 4, 3);
    std::set<std::uint64_t> polys{cells.own.scrambler_polynomial()};
    for (const auto& c : cells.interferers) polys.insert(c.scrambler_polynomial());
    EXPECT_EQ(polys.size(), 4u);
}

TEST(Estimates, SeedDeterminism) {
    const auto cells = build_cell_ensembles(6, 8, 2);
    CellLayout layout{0, {{}, {}}};
    const SyncErrorModel err{0.2, 0.3};
    const auto a = estimate_link(cells.own, layout, cells.interferers, err, 700, 42);
    const auto b = estimate_link(cells.own, layout, cells.interferers, err, 700, 42);
    const auto c = estimate_link(cells.own, layout, cells.interferers, err, 700, 43);
    EXPECT_EQ(a.intra.value, b.intra.value);
    EXPECT_EQ(a.inter.value, b.inter.value);
    EXPECT_EQ(a.signal.value, b.signal.value);
    EXPECT_EQ(a.intra.std_error, b.intra.std_error);
    EXPECT_NE(a.intra.value, c.intra.value);
}

TEST(SinrSurface, CornerIsNoiseOnlyAndOthersBelow) {
    const auto own = SignalEnsemble::walsh(0, MSequence::generate(5), 8);
    const std::vector<double> tg{0.0, 0.25, 0.5};
    const std::vector<double> pg{0.0, 0.25, 0.5};
    const auto surf = sinr_surface(tg, pg, -113.101, own, CellLayout{}, {}, 1000, 42);
    ASSERT_EQ(surf.size(), 9u);
    EXPECT_NEAR(surf[0].sinr_db, 113.101, 1e-9);
    for (const auto& p : surf) EXPECT_LE(p.sinr_db, surf[0].sinr_db + 1e-12);
    EXPECT_GT(surf[0].sinr_db - surf.back().sinr_db, 3.0);
    // Without timing error only the desired peak degrades, so SINR falls along the phase axis.
    EXPECT_LT(surf[1].sinr_db, surf[0].sinr_db);
    EXPECT_LT(surf[2].sinr_db, surf[1].sinr_db);
}

TEST(SinrSurface, RerunIsBitIdentical) {
    const auto cells = build_cell_ensembles(5, 4, 1);
    CellLayout layout{0, {{}}};
    const std::vector<double> g{0.0, 0.3};
    const auto a = sinr_surface(g, g, -113.101, cells.own, layout, cells.interferers, 300, 42);
    const auto b = sinr_surface(g, g, -113.101, cells.own, layout, cells.interferers, 300, 42);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].sinr_db, b[i].sinr_db);
}

TEST(Ensembles, Validation) {
    const auto s = MSequence::generate(3);
    EXPECT_THROW(SignalEnsemble::walsh(0, s, 9), DomainError);
    EXPECT_THROW(SignalEnsemble::walsh(0, s, 0), DomainError);
    EXPECT_THROW(SignalEnsemble::cyclic_shifts(0, s, 8), DomainError);
    EXPECT_THROW(intra_cell_interference(SignalEnsemble::walsh(0, s, 4), {-1.0, 0.0}, 10, 1), DomainError);
}
