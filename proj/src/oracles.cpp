#include "fiskit/oracles.hpp"

#include <cmath>
#include <numbers>

namespace fiskit::oracle {

int wavenumber(int r, int N) {
    if (r < N / 2) return r;
    if (r == N / 2) return 0;
    return r - N;
}

Eigen::VectorXcd dft(const ScalarField& f) {
    const auto chart = f.chart();
    const auto P = chart->points();
    Eigen::VectorXcd modes = Eigen::VectorXcd::Zero(Eigen::Index(P));
    const double twopi = 2.0 * std::numbers::pi;
    for (std::size_t r = 0; r < P; ++r) {
        auto ridx = chart->unflatten(r);
        cplx acc = 0.0;
        for (std::size_t p = 0; p < P; ++p) {
            auto pidx = chart->unflatten(p);
            double phase = 0.0;
            for (int a = 0; a < chart->dim(); ++a)
                phase += twopi * double(ridx[a]) * double(pidx[a]) /
                         double(chart->axis(a).resolution);
            acc += f(p) * cplx(std::cos(phase), -std::sin(phase));
        }
        modes(Eigen::Index(r)) = acc / double(P);
    }
    return modes;
}

ScalarField idft(const ChartPtr& chart, const Eigen::VectorXcd& modes) {
    const auto P = chart->points();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index(P));
    const double twopi = 2.0 * std::numbers::pi;
    for (std::size_t p = 0; p < P; ++p) {
        auto pidx = chart->unflatten(p);
        cplx acc = 0.0;
        for (std::size_t r = 0; r < P; ++r) {
            auto ridx = chart->unflatten(r);
            double phase = 0.0;
            for (int a = 0; a < chart->dim(); ++a)
                phase += twopi * double(ridx[a]) * double(pidx[a]) /
                         double(chart->axis(a).resolution);
            acc += modes(Eigen::Index(r)) * cplx(std::cos(phase), std::sin(phase));
        }
        v(Eigen::Index(p)) = acc;
    }
    return {chart, std::move(v)};
}

cplx dzbar_symbol(int k1, int k2) { return cplx(0.0, double(k1)) * 0.5 - double(k2) * 0.5; }

std::pair<ScalarField, double> t2_dolbeault_solve(const ScalarField& f) {
    const auto chart = f.chart();
    if (chart->dim() != 2) throw Error("oracle expects a two-dimensional torus");
    const int N1 = chart->axis(0).resolution, N2 = chart->axis(1).resolution;
    Eigen::VectorXcd modes = dft(f);
    Eigen::VectorXcd umodes = Eigen::VectorXcd::Zero(modes.size());
    double dropped2 = 0.0;
    for (std::size_t r = 0; r < chart->points(); ++r) {
        auto ridx = chart->unflatten(r);
        int k1 = wavenumber(ridx[0], N1), k2 = wavenumber(ridx[1], N2);
        // production operator: D_0 = -(d/dzbar) on the coefficient
        cplx sym = -dzbar_symbol(k1, k2);
        if (std::abs(sym) < 1e-14) {
            dropped2 += std::norm(modes(Eigen::Index(r)));
            continue;
        }
        umodes(Eigen::Index(r)) = modes(Eigen::Index(r)) / sym;
    }
    return {idft(chart, umodes), std::sqrt(dropped2)};
}

long long t2_foliation_defect(int res1, int res2, cplx c) {
    // level-0 kernel of f -> X(f) - c f leafwise, X = d/dx1 on leaves
    long long per_leaf = 0;
    for (int r = 0; r < res1; ++r) {
        cplx sym = cplx(0.0, double(wavenumber(r, res1))) - c;
        if (std::abs(sym) < 1e-8) ++per_leaf;
    }
    return per_leaf * res2;
}

long long cr_product_defect(int res12, int res3) {
    long long per_leaf = 0;
    for (int r1 = 0; r1 < res12; ++r1)
        for (int r2 = 0; r2 < res12; ++r2)
            if (std::abs(dzbar_symbol(wavenumber(r1, res12), wavenumber(r2, res12))) < 1e-8)
                ++per_leaf;
    return per_leaf * res3;
}

double mizohata_commutator(double x1) { return -std::cos(x1) / (2.0 + std::sin(x1)); }

double eigenfloor_reference(double t, double delta) {
    if (t >= 1.0) return t;
    return t + 4.0 * (1.0 + delta) / (27.0 * delta) * std::pow(1.0 - t, 3);
}

} // namespace fiskit::oracle
