#include "htqc/analytic.hpp"

namespace htqc::analytic {

double invert_dephasing_single(double p_z, double alpha) {
    if (p_z < 0.0 || p_z >= 0.5)
        throw std::invalid_argument("invert_dephasing_single: p_z must be in [0, 1/2)");
    if (p_z == 0.0) return 0.0;
    // dephasing_single is strictly increasing in eta for fixed alpha > 0.
    double lo = 0.0, hi = 1.0 - 1e-15;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = dephasing_single(HybridParams(alpha, mid));
        if (v < p_z)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-16) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace htqc::analytic
