#include "fiskit/chart.hpp"

#include <cmath>
#include <numbers>

namespace fiskit {

std::shared_ptr<const Chart> Chart::make(std::vector<CoordAxis> axes) {
    if (axes.empty()) throw Error("chart needs at least one coordinate");
    auto chart = std::shared_ptr<Chart>(new Chart());
    chart->axes_ = std::move(axes);
    for (const auto& ax : chart->axes_) {
        if (ax.period <= 0.0) throw Error("axis " + ax.name + ": period must be positive");
        if (ax.resolution < 4 || ax.resolution % 2 != 0)
            throw Error("axis " + ax.name + ": resolution must be even and >= 4");
    }
    chart->npoints_ = 1;
    for (const auto& ax : chart->axes_) chart->npoints_ *= std::size_t(ax.resolution);
    chart->strides_.assign(chart->axes_.size(), 1);
    for (int a = int(chart->axes_.size()) - 2; a >= 0; --a)
        chart->strides_[a] = chart->strides_[a + 1] * std::size_t(chart->axes_[a + 1].resolution);
    chart->cellvol_ = 1.0;
    for (const auto& ax : chart->axes_) chart->cellvol_ *= ax.period / double(ax.resolution);

    // D = F^{-1} diag(i kappa) F with kappa_r = (2 pi / L) * rtilde,
    // rtilde = r below the half band, r - N above it, and 0 at the half-band
    // mode itself. That makes D real and antisymmetric: derivatives of real
    // fields stay real and vanish exactly at symmetry centers.
    const cplx I(0.0, 1.0);
    for (const auto& ax : chart->axes_) {
        const int N = ax.resolution;
        const double twopi = 2.0 * std::numbers::pi;
        Eigen::VectorXcd kappa(N);
        for (int r = 0; r < N; ++r) {
            int rt = (r < N / 2) ? r : (r == N / 2 ? 0 : r - N);
            kappa(r) = I * (twopi / ax.period) * double(rt);
        }
        Eigen::MatrixXcd D(N, N);
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < N; ++k) {
                cplx sum = 0.0;
                for (int r = 0; r < N; ++r) {
                    double ang = twopi * double(r) * double(j - k) / double(N);
                    sum += kappa(r) * cplx(std::cos(ang), std::sin(ang));
                }
                D(j, k) = sum / double(N);
            }
        }
        chart->deriv_.push_back(std::move(D));
    }
    return chart;
}

std::vector<int> Chart::unflatten(std::size_t p) const {
    std::vector<int> idx(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        idx[a] = int(p / strides_[a]);
        p %= strides_[a];
    }
    return idx;
}

std::size_t Chart::flatten(const std::vector<int>& idx) const {
    std::size_t p = 0;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        int i = idx[a] % axes_[a].resolution;
        if (i < 0) i += axes_[a].resolution;
        p += strides_[a] * std::size_t(i);
    }
    return p;
}

std::vector<double> Chart::point_coords(std::size_t p) const {
    auto idx = unflatten(p);
    std::vector<double> x(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) x[a] = coordinate(int(a), idx[a]);
    return x;
}

int Chart::axis_index(const std::string& name) const {
    for (std::size_t a = 0; a < axes_.size(); ++a)
        if (axes_[a].name == name) return int(a);
    return -1;
}

} // namespace fiskit
