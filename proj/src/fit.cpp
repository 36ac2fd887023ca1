#include <cmath>

#include "opcut/errors.hpp"
#include "opcut/harness.hpp"

namespace opcut {

FitResult fit_rate(const std::vector<std::pair<double, double>>& series,
                   double floor) {
    std::vector<std::pair<double, double>> pts; // (log L, log v)
    for (const auto& [L, v] : series)
        if (std::isfinite(v) && v > floor && L > 0.0)
            pts.emplace_back(std::log(L), std::log(v));
    if (pts.size() < 4)
        throw InsufficientPoints("rate fit needs >= 4 points above the floor, got " +
                                 std::to_string(pts.size()));

    const double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : pts) { sx += x; sy += y; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }

    FitResult out;
    out.points_used = static_cast<int>(pts.size());
    if (sxx == 0.0) {
        out.rho = 0.0;
        out.c = std::exp(my);
        out.r2 = 0.0;
        return out;
    }
    const double slope = sxy / sxx;
    out.rho = -slope;
    out.c = std::exp(my - slope * mx);
    if (syy == 0.0) {
        out.r2 = 1.0; // constant series, perfectly explained by slope 0
    } else {
        const double ss_res = syy - slope * sxy;
        out.r2 = 1.0 - ss_res / syy;
    }
    return out;
}

} // namespace opcut
