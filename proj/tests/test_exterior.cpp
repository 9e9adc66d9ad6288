#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fiskit/form.hpp"
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

ScalarField sin_axis(const ChartPtr& c, int a) {
    return ScalarField::sample(c, [a](const std::vector<double>& x) {
        return cplx(std::sin(x[a]), 0.0);
    });
}

Form random_form(const ChartPtr& c, int deg, int kmax, Rng& rng) {
    Form f(c, deg);
    for (long long r = 0; r < f.num_components(); ++r)
        f.coeff(r) = band_limited_field(c, kmax, rng);
    return f;
}

} // namespace

TEST_CASE("multi-index machinery") {
    CHECK(mi::choose(4, 2) == 6);
    auto idxs = mi::all(4, 2);
    REQUIRE(idxs.size() == 6);
    for (std::size_t i = 0; i < idxs.size(); ++i) {
        CHECK(mi::rank(idxs[i], 4) == (long long)i);
        CHECK(mi::unrank((long long)i, 4, 2) == idxs[i]);
    }
    // dx1^dx0 = -dx0^dx1
    auto [s, K] = mi::merge({1}, {0});
    CHECK(s == -1);
    CHECK(K == mi::Index{0, 1});
    auto [s2, K2] = mi::merge({0, 2}, {1});
    CHECK(s2 == -1); // moving 1 across 2
    CHECK(K2 == mi::Index{0, 1, 2});
    CHECK(mi::merge({0, 1}, {1}).first == 0);
}

TEST_CASE("wedge basics") {
    auto c = torus(3, 8);
    auto dx1 = Form::coordinate_differential(c, 0);
    auto dx2 = Form::coordinate_differential(c, 1);
    auto dx3 = Form::coordinate_differential(c, 2);

    auto w = wedge(dx1, dx2);
    CHECK((w.coeff(mi::Index{0, 1}) - ScalarField::constant(c, 1.0)).max_abs() < 1e-14);
    CHECK(w.coeff(mi::Index{0, 2}).max_abs() == 0.0);

    // a ^ a = 0 for 1-forms
    Rng rng(3);
    Form a(c, 1);
    for (int nu = 0; nu < 3; ++nu) a.coeff(mi::Index{nu}) = band_limited_field(c, 2, rng);
    CHECK(wedge(a, a).max_abs() < 1e-12);

    // bilinearity oracle: (sin x1 dx1) ^ (dx2 + dx3)
    auto lhs = wedge(dx1 * sin_axis(c, 0), dx2 + dx3);
    auto t1 = wedge(dx1 * sin_axis(c, 0), dx2);
    auto t2 = wedge(dx1 * sin_axis(c, 0), dx3);
    CHECK((lhs - (t1 + t2)).max_abs() < 1e-14);
    CHECK((lhs.coeff(mi::Index{0, 1}) - sin_axis(c, 0)).max_abs() < 1e-14);
    CHECK((lhs.coeff(mi::Index{0, 2}) - sin_axis(c, 0)).max_abs() < 1e-14);

    CHECK_THROWS_AS(wedge(wedge(dx1, dx2), wedge(dx1, dx3)), Error);
}

TEST_CASE("exterior derivative") {
    auto c = torus(2, 16);
    auto dx2 = Form::coordinate_differential(c, 1);
    auto a = dx2 * sin_axis(c, 0); // sin x1 dx2
    auto da = exterior_derivative(a);
    auto cosx1 = ScalarField::sample(c, [](const std::vector<double>& x) {
        return cplx(std::cos(x[0]), 0.0);
    });
    CHECK((da.coeff(mi::Index{0, 1}) - cosx1).max_abs() < 1e-12);

    // d(df) = 0
    Rng rng(7);
    auto f = Form::scalar(band_limited_field(c, 3, rng));
    CHECK(exterior_derivative(exterior_derivative(f)).max_abs() < 1e-10);

    // constant coefficients
    Form k(c, 1);
    k.coeff(mi::Index{0}) = ScalarField::constant(c, cplx(2.0, 1.0));
    CHECK(exterior_derivative(k).max_abs() < 1e-13);

    CHECK_THROWS_AS(exterior_derivative(da), Error); // top degree
}

TEST_CASE("interior product") {
    auto c = torus(3, 8);
    auto dx12 = wedge(Form::coordinate_differential(c, 0), Form::coordinate_differential(c, 1));
    auto d1 = VectorField::coordinate_direction(c, 0);
    auto d3 = VectorField::coordinate_direction(c, 2);

    auto r = interior_product(d1, dx12);
    CHECK((r.coeff(mi::Index{1}) - ScalarField::constant(c, 1.0)).max_abs() < 1e-14);
    CHECK(interior_product(d3, dx12).max_abs() == 0.0);

    Rng rng(9);
    auto f = band_limited_field(c, 2, rng);
    auto g = band_limited_field(c, 2, rng);
    VectorField fX(c, {f, ScalarField::constant(c, 0.0), ScalarField::constant(c, 0.0)});
    auto gdx1 = Form::coordinate_differential(c, 0) * g;
    CHECK((interior_product(fX, gdx1).coeff(mi::Index{}) - f * g).max_abs() < 1e-13);

    CHECK_THROWS_AS(interior_product(d1, Form::scalar(f)), Error);
}

TEST_CASE("graded Leibniz and antiderivation properties") {
    auto c = torus(3, 16);
    Rng rng(21);
    for (int rep = 0; rep < 3; ++rep) {
        auto a = random_form(c, 1, 2, rng);
        auto b = random_form(c, 1, 2, rng);
        auto lhs = exterior_derivative(wedge(a, b));
        auto rhs = wedge(exterior_derivative(a), b) - wedge(a, exterior_derivative(b));
        double scale = std::max(1.0, a.max_abs() * b.max_abs());
        CHECK((lhs - rhs).max_abs() < 1e-10 * scale);

        std::vector<ScalarField> comps;
        for (int nu = 0; nu < 3; ++nu) comps.push_back(band_limited_field(c, 2, rng));
        VectorField X(c, comps);
        auto l2 = interior_product(X, wedge(a, b));
        auto r2 = wedge(interior_product(X, a), b) - wedge(a, interior_product(X, b));
        CHECK((l2 - r2).max_abs() < 1e-10 * scale);
    }
}

TEST_CASE("dual coframe") {
    auto c = torus(2, 16);
    // coordinate frame -> coordinate differentials
    std::vector<VectorField> frame{VectorField::coordinate_direction(c, 0),
                                   VectorField::coordinate_direction(c, 1)};
    auto cf = CoFrame::dual_to(frame, 1);
    CHECK(cf.pairing_residual(frame) < 1e-12);
    CHECK((cf.form(0).coeff(mi::Index{0}) - ScalarField::constant(c, 1.0)).max_abs() < 1e-13);

    // {d1 + i d2, d1 - i d2} -> {(dx1 - i dx2)/2, (dx1 + i dx2)/2}
    std::vector<VectorField> zframe{
        VectorField(c, {ScalarField::constant(c, 1.0), ScalarField::constant(c, cplx(0, 1))}),
        VectorField(c, {ScalarField::constant(c, 1.0), ScalarField::constant(c, cplx(0, -1))})};
    auto zf = CoFrame::dual_to(zframe, 1);
    CHECK((zf.form(0).coeff(mi::Index{0}) - ScalarField::constant(c, 0.5)).max_abs() < 1e-13);
    CHECK((zf.form(0).coeff(mi::Index{1}) - ScalarField::constant(c, cplx(0, -0.5))).max_abs() <
          1e-13);
    CHECK((zf.form(1).coeff(mi::Index{1}) - ScalarField::constant(c, cplx(0, 0.5))).max_abs() <
          1e-13);

    // Mizohata-free frame: pairing identity to 1e-10 (pointwise inverse oracle)
    auto ia = ScalarField::sample(c, [](const std::vector<double>& x) {
        return cplx(0.0, 2.0 + std::sin(x[0]));
    });
    VectorField X(c, {ScalarField::constant(c, 1.0), ia});
    std::vector<VectorField> mf{X, X.conjugate()};
    auto mcf = CoFrame::dual_to(mf, 1);
    CHECK(mcf.pairing_residual(mf) < 1e-10);

    // degenerate frame rejected
    std::vector<VectorField> bad{VectorField::coordinate_direction(c, 0),
                                 VectorField::coordinate_direction(c, 0)};
    CHECK_THROWS_AS(CoFrame::dual_to(bad, 1), FrameDegenerate);
}

TEST_CASE("pointwise rank") {
    auto c = torus(2, 16);
    auto d1 = VectorField::coordinate_direction(c, 0);
    auto d2 = VectorField::coordinate_direction(c, 1);
    CHECK(pointwise_rank({d1, d2}) == std::pair<int, int>(2, 2));

    auto s = sin_axis(c, 0);
    VectorField sd1(c, {s, ScalarField::constant(c, 0.0)});
    CHECK(pointwise_rank({d1, sd1}) == std::pair<int, int>(1, 1));

    auto ia = ScalarField::sample(c, [](const std::vector<double>& x) {
        return cplx(0.0, 2.0 + std::sin(x[0]));
    });
    VectorField X(c, {ScalarField::constant(c, 1.0), ia});
    CHECK(pointwise_rank({X, X.conjugate()}) == std::pair<int, int>(2, 2));
}

TEST_CASE("change of basis round trip") {
    auto c = torus(3, 8);
    auto ia = ScalarField::sample(c, [](const std::vector<double>& x) {
        return cplx(0.0, 2.0 + std::sin(x[0]));
    });
    std::vector<VectorField> frame{
        VectorField(c, {ScalarField::constant(c, 1.0), ia, ScalarField::constant(c, 0.0)}),
        VectorField(c, {ScalarField::constant(c, 1.0), ia.conjugate(),
                        ScalarField::constant(c, 0.0)}),
        VectorField::coordinate_direction(c, 2)};
    auto cf = CoFrame::dual_to(frame, 2);

    // dx1 expressed in the coframe and back
    auto dx1 = Form::coordinate_differential(c, 0);
    auto back1 = to_coordinate_basis(change_basis(dx1, cf));
    CHECK((back1 - dx1).max_abs() < 1e-10);

    Rng rng(5);
    Form f(c, 2);
    for (long long r = 0; r < f.num_components(); ++r) f.coeff(r) = band_limited_field(c, 2, rng);
    auto round = to_coordinate_basis(change_basis(f, cf));
    CHECK((round - f).max_abs() < 1e-10 * std::max(1.0, f.max_abs()));
}

TEST_CASE("coframe component extraction on a normal-form chart") {
    // theta-type top forms align with their own coframe basis entry
    auto c = torus(3, 8);
    auto ia = ScalarField::constant(c, cplx(0, 1));
    // normal frame {dzbar-dual, dz-dual, d3}: build via explicit fields
    VectorField dzbar(c, {ScalarField::constant(c, 0.5), ScalarField::constant(c, cplx(0, 0.5)),
                          ScalarField::constant(c, 0.0)});
    VectorField dzdual(c, {ScalarField::constant(c, 0.5), ScalarField::constant(c, cplx(0, -0.5)),
                           ScalarField::constant(c, 0.0)});
    auto cf = CoFrame::dual_to({dzbar, dzdual, VectorField::coordinate_direction(c, 2)}, 1);
    // theta^1 = dz, theta^2 = dx3; their wedge has unit coefficient on (1,2)
    auto top = wedge(cf.theta(0), cf.theta(1));
    auto in_frame = change_basis(top, cf);
    CHECK((in_frame.coeff(mi::Index{1, 2}) - ScalarField::constant(c, 1.0)).max_abs() < 1e-10);
    CHECK(in_frame.coeff(mi::Index{0, 1}).max_abs() < 1e-10);
    CHECK(in_frame.coeff(mi::Index{0, 2}).max_abs() < 1e-10);
}
