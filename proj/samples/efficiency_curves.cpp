// Prints c_F(B_s) for a few (m, g) families and the ICPE infimum per alphabet.
#include "invcrit/invcrit.hpp"

#include <cstdio>

int main() {
    using namespace invcrit;
    const CurveFamily families[] = {{2, 1.0}, {8, 0.5}, {8, 1.0}, {8, 2.0}};
    const auto rows = sweep_curves(families, LogAxis{0.1, 100.0, 7}, SerModel::exact());
    std::printf("%4s %6s %10s %12s %12s\n", "m", "g", "B_s", "c_F", "w");
    for (const auto& r : rows) std::printf("%4d %6.2f %10.4g %12.6g %12.6g\n", r.m, r.g, r.signal_base, r.icse, r.icpe);

    std::printf("\nICPE infimum over h in [1e-4, 30]\n");
    for (int m : {2, 4, 8, 16, 32, 64}) {
        const auto r = icpe_infimum(m, LogAxis{1e-4, 30.0, 61}, SerModel::exact());
        std::printf("m=%-3d w_inf=%.8f h*=%.6g %s\n", m, r.icpe, r.h, r.attained ? "" : "(infimum at h -> 0)");
    }
}
