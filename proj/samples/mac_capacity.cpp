// Closed-form MAC limits next to a short simulation run.
#include "invcrit/invcrit.hpp"

#include <cstdio>

int main() {
    using namespace invcrit;
    for (double len : {10.0, 100.0, 1000.0}) {
        const auto mm1 = limits(MacModel::from_length(Discipline::MM1, len));
        const auto md1 = limits(MacModel::from_length(Discipline::MD1, len));
        std::printf("L=%-6g  M/M/1 C_sup=%.6f  M/D/1 C_sup=%.6f\n", len, mm1.capacity_supremum, md1.capacity_supremum);
    }
    SimConfig cfg;
    cfg.offered_load = {0.5, 1.0, 1.5};
    const auto res = simulate_tdma(MacModel::from_length(Discipline::MD1, 1000.0), cfg);
    for (const auto& p : res.points)
        std::printf("G=%.1f  S=%.6f  [%.6f, %.6f]\n", p.offered_load, p.throughput, p.ci_low, p.ci_high);
    std::printf("gap to C_sup: %.3g\n", res.relative_gap);
}
