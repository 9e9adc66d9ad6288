#include "fiskit/rng.hpp"

#include <cmath>
#include <numbers>

namespace fiskit {

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

ScalarField band_limited_field(const ChartPtr& chart, int kmax, Rng& rng, bool real) {
    const int d = chart->dim();
    std::vector<int> k(d, -kmax);
    std::vector<std::pair<std::vector<int>, cplx>> modes;
    for (;;) {
        modes.emplace_back(k, rng.cnormal());
        int a = d - 1;
        while (a >= 0 && ++k[a] > kmax) k[a--] = -kmax;
        if (a < 0) break;
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index(chart->points()));
    for (std::size_t p = 0; p < chart->points(); ++p) {
        auto x = chart->point_coords(p);
        cplx acc = 0.0;
        for (const auto& [kk, c] : modes) {
            double phase = 0.0;
            for (int a = 0; a < d; ++a)
                phase += 2.0 * std::numbers::pi * double(kk[a]) * x[a] / chart->axis(a).period;
            acc += c * cplx(std::cos(phase), std::sin(phase));
        }
        v(Eigen::Index(p)) = acc;
    }
    ScalarField f(chart, std::move(v));
    if (real) f = (f + f.conjugate()) * cplx(0.5);
    return f;
}

} // namespace fiskit
