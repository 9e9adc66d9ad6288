#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fiskit/field.hpp"
#include "fiskit/rng.hpp"

using namespace fiskit;
const double PI = std::numbers::pi;

namespace {

ChartPtr torus(int dim, int res) {
    std::vector<CoordAxis> axes;
    for (int a = 0; a < dim; ++a)
        axes.push_back({"x" + std::to_string(a + 1), 2.0 * PI, res});
    return Chart::make(axes);
}

// Independent oracle: second-order centered finite differences on the same
// periodic grid. Used to pin the spectral derivative under refinement.
ScalarField fd_derivative(const ScalarField& f, int axis) {
    auto chart = f.chart();
    const int N = chart->axis(axis).resolution;
    const double h = chart->axis(axis).period / N;
    Eigen::VectorXcd out(f.data().size());
    for (std::size_t p = 0; p < chart->points(); ++p) {
        auto idx = chart->unflatten(p);
        auto up = idx, dn = idx;
        up[axis] = (idx[axis] + 1) % N;
        dn[axis] = (idx[axis] - 1 + N) % N;
        out(Eigen::Index(p)) =
            (f(chart->flatten(up)) - f(chart->flatten(dn))) / (2.0 * h);
    }
    return {chart, std::move(out)};
}

double max_err(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs(); }

} // namespace

TEST_CASE("partial_derivative: analytic cases") {
    auto chart = torus(2, 16);
    auto x1 = ScalarField::coordinate(chart, 0);
    auto f = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return cplx(std::sin(x[0]), 0.0);
    });
    auto expect = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return cplx(std::cos(x[0]), 0.0);
    });
    CHECK(max_err(partial_derivative(f, 0), expect) < 1e-12);

    auto one = ScalarField::constant(chart, 1.0);
    CHECK(partial_derivative(one, 0).max_abs() < 1e-13);
    CHECK(partial_derivative(one, 1).max_abs() < 1e-13);

    CHECK_THROWS_AS(partial_derivative(f, 2), Error);
}

TEST_CASE("partial_derivative: exp(i 3 x2) against FD refinement oracle") {
    // Spectral derivative of a low mode is exact; the FD oracle converges to
    // the same limit at second order, which pins the frozen value 3i e^{i3x2}.
    auto chart = torus(2, 16);
    auto f = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return std::exp(cplx(0.0, 3.0 * x[1]));
    });
    auto expect = f * cplx(0.0, 3.0);
    CHECK(max_err(partial_derivative(f, 1), expect) < 1e-12);

    double prev_err = -1.0;
    for (int res : {16, 32, 64}) {
        auto c = torus(2, res);
        auto g = ScalarField::sample(c, [](const std::vector<double>& x) {
            return std::exp(cplx(0.0, 3.0 * x[1]));
        });
        double err = max_err(fd_derivative(g, 1), g * cplx(0.0, 3.0));
        if (prev_err > 0.0) CHECK(err < 0.3 * prev_err); // ~4x drop per doubling
        prev_err = err;
    }
}

TEST_CASE("apply_vector") {
    auto chart = torus(2, 16);
    auto sinx1 = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return cplx(std::sin(x[0]), 0.0);
    });
    auto d1 = VectorField::coordinate_direction(chart, 0);
    CHECK(max_err(apply_vector(d1, sinx1),
                  ScalarField::sample(chart, [](const std::vector<double>& x) {
                      return cplx(std::cos(x[0]), 0.0);
                  })) < 1e-12);

    auto i_d2 = VectorField::coordinate_direction(chart, 1, cplx(0, 1));
    CHECK(apply_vector(i_d2, ScalarField::constant(chart, 1.0)).max_abs() < 1e-13);

    // X = d1 + i(2+sin x1) d2 applied to exp(i x2); product-rule oracle gives
    // -(2+sin x1) exp(i x2).
    auto a = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return cplx(0.0, 2.0 + std::sin(x[0]));
    });
    VectorField X(chart, {ScalarField::constant(chart, 1.0), a});
    auto f = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return std::exp(cplx(0.0, x[1]));
    });
    auto expect = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return -(2.0 + std::sin(x[0])) * std::exp(cplx(0.0, x[1]));
    });
    CHECK(max_err(apply_vector(X, f), expect) < 1e-12);
}

TEST_CASE("lie_bracket: analytic and symbolic-oracle cases") {
    auto chart = torus(2, 16);
    auto d1 = VectorField::coordinate_direction(chart, 0);
    auto d2 = VectorField::coordinate_direction(chart, 1);
    auto zero = lie_bracket(d1, d2);
    for (int a = 0; a < 2; ++a) CHECK(zero.component(a).max_abs() < 1e-13);

    auto sinx1 = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return cplx(std::sin(x[0]), 0.0);
    });
    VectorField Y(chart, {ScalarField::constant(chart, 0.0), sinx1});
    auto br = lie_bracket(d1, Y);
    CHECK(br.component(0).max_abs() < 1e-13);
    CHECK(max_err(br.component(1), ScalarField::sample(chart, [](const std::vector<double>& x) {
              return cplx(std::cos(x[0]), 0.0);
          })) < 1e-12);

    // Mizohata-type frame: [X, conj X] = -2i cos(x1) d2 (bracket oracle).
    auto ia = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return cplx(0.0, 2.0 + std::sin(x[0]));
    });
    VectorField X(chart, {ScalarField::constant(chart, 1.0), ia});
    auto c = lie_bracket(X, X.conjugate());
    CHECK(c.component(0).max_abs() < 1e-12);
    CHECK(max_err(c.component(1), ScalarField::sample(chart, [](const std::vector<double>& x) {
              return cplx(0.0, -2.0 * std::cos(x[0]));
          })) < 1e-12);
}

TEST_CASE("integrate") {
    auto chart = torus(2, 16);
    auto one = ScalarField::constant(chart, 1.0);
    CHECK(std::abs(integrate(one) - cplx(4.0 * PI * PI)) < 1e-10);

    auto sinx1 = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return cplx(std::sin(x[0]), 0.0);
    });
    CHECK(std::abs(integrate(sinx1)) < 1e-12);

    auto mod2 = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return std::norm(std::exp(cplx(0.0, x[0])));
    });
    auto zero_w = ScalarField::constant(chart, 0.0);
    CHECK(std::abs(integrate(mod2, &zero_w) - cplx(4.0 * PI * PI)) < 1e-10);
}

TEST_CASE("bump") {
    auto chart = torus(2, 16);
    std::vector<double> center{PI, PI};
    auto b = bump(chart, center, 1.0);
    CHECK(std::abs(b(chart->flatten({8, 8})) - cplx(1.0)) < 1e-14);
    // any point with periodic distance >= radius is exactly zero
    CHECK(std::abs(b(chart->flatten({0, 0}))) == 0.0);
    CHECK(std::abs(b(chart->flatten({8, 0}))) == 0.0);

    // support-mass bracket from the quadrature oracle: 0 < mass < ball volume
    double mass = integrate(b).real();
    CHECK(mass > 0.0);
    CHECK(mass < PI * 1.0 * 1.0);

    CHECK_THROWS_AS(bump(chart, center, PI), Error);
}

TEST_CASE("derivative properties: commutation, periodic total, Jacobi") {
    auto chart = torus(2, 32);
    Rng rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        auto f = band_limited_field(chart, 3, rng);
        auto ab = partial_derivative(partial_derivative(f, 0), 1);
        auto ba = partial_derivative(partial_derivative(f, 1), 0);
        CHECK(max_err(ab, ba) < 1e-12 * std::max(1.0, f.max_abs()));
        CHECK(std::abs(integrate(partial_derivative(f, 0))) < 1e-12);
        CHECK(std::abs(integrate(partial_derivative(f, 1))) < 1e-12);
    }

    // Jacobi identity on band-limited triples
    auto mk = [&](int seed) {
        Rng r(seed);
        std::vector<ScalarField> comps;
        for (int a = 0; a < 2; ++a) comps.push_back(band_limited_field(chart, 2, r));
        return VectorField(chart, comps);
    };
    auto X = mk(1), Y = mk(2), Z = mk(3);
    auto jac = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) +
               lie_bracket(Z, lie_bracket(X, Y));
    double scale = 0.0;
    for (int a = 0; a < 2; ++a)
        scale = std::max({scale, X.component(a).max_abs(), Y.component(a).max_abs(),
                          Z.component(a).max_abs()});
    for (int a = 0; a < 2; ++a)
        CHECK(jac.component(a).max_abs() < 1e-10 * std::max(1.0, scale * scale * scale));

    // antisymmetry
    auto s = lie_bracket(X, Y) + lie_bracket(Y, X);
    for (int a = 0; a < 2; ++a) CHECK(s.component(a).max_abs() < 1e-12);
}

TEST_CASE("derivatives integrate to zero beyond the band limit") {
    // periodicity of the quadrature holds for any grid field, including the
    // non-band-limited bump
    auto chart = torus(2, 16);
    auto b = bump(chart, {PI, PI}, 2.0);
    CHECK(std::abs(integrate(partial_derivative(b, 0))) < 1e-12);
    CHECK(std::abs(integrate(partial_derivative(b, 1))) < 1e-12);
}
