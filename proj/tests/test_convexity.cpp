#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fiskit/convexity.hpp"
#include "fiskit/rng.hpp"
#include "fixtures.hpp"

using namespace fiskit;
using fixtures::PI;

namespace {

std::vector<std::vector<std::vector<ScalarField>>> zero_e(const StructurePtr& S) {
    auto z = ScalarField::constant(S->chart(), 0.0);
    return std::vector<std::vector<std::vector<ScalarField>>>(
        S->n(), std::vector<std::vector<ScalarField>>(S->n(),
                                                      std::vector<ScalarField>(S->n(), z)));
}

ScalarField sample_real(const ChartPtr& c, double (*f)(const std::vector<double>&)) {
    return ScalarField::sample(c, [f](const std::vector<double>& x) { return cplx(f(x), 0.0); });
}

} // namespace

TEST_CASE("critical sets") {
    // V = span{d1} on T^2, phi = sin x1: C = K = the two rows x1 = pi/2, 3pi/2
    auto S = fixtures::essentially_real_t2(16);
    auto phi = sample_real(S->chart(), [](const std::vector<double>& x) { return std::sin(x[0]); });
    auto masks = critical_sets(*S, phi);
    CHECK(masks.C_count == 2 * 16);
    CHECK(masks.K_count == 2 * 16);
    for (std::size_t p = 0; p < S->chart()->points(); ++p) {
        auto idx = S->chart()->unflatten(p);
        bool crit = (idx[0] == 4 || idx[0] == 12);
        CHECK(bool(masks.C[p]) == crit);
        CHECK(masks.C[p] == masks.K[p]);
    }

    // elliptic structure: the bump center is critical
    auto E = fixtures::elliptic_chart(8);
    auto b = bump(E->chart(), {PI, PI, PI}, 1.2);
    auto bm = critical_sets(*E, b);
    CHECK(bm.C[E->chart()->flatten({4, 4, 4})] == 1);

    // Levi flat CR: V cap conj(V) = 0 makes K vacuous (whole chart)
    auto C = fixtures::cr_product(8);
    Rng rng(3);
    auto f = band_limited_field(C->chart(), 2, rng);
    auto phi2 = (f + f.conjugate()) * cplx(0.5);
    auto cm = critical_sets(*C, phi2);
    CHECK(cm.K_count == C->chart()->points());

    // C subset of K always
    auto S3 = fixtures::essentially_real_t3(8);
    auto phi3 = sample_real(S3->chart(), [](const std::vector<double>& x) {
        return std::cos(x[0]) + std::cos(x[1]);
    });
    auto m3 = critical_sets(*S3, phi3);
    for (std::size_t p = 0; p < S3->chart()->points(); ++p)
        if (m3.C[p]) CHECK(m3.K[p] == 1);
}

TEST_CASE("q_form: normal-form second derivatives and tau linearity") {
    // phi = 2(1-cos x1) + 2(1-cos x2) + 2(1-cos x3) has the 2-jet of
    // |z|^2 + t^2 at the origin: eigenvalues {1, 2} on the frame {dzbar, dt}.
    auto S = fixtures::elliptic_chart(16);
    auto phi = sample_real(S->chart(), [](const std::vector<double>& x) {
        return 2.0 * (1.0 - std::cos(x[0])) + 2.0 * (1.0 - std::cos(x[1])) +
               2.0 * (1.0 - std::cos(x[2]));
    });
    auto cc = commutator_coefficients(*S);
    auto Q = q_form(*S, phi, cc.e);
    CHECK(Q.hermitian_residual() < 1e-12);
    auto origin = S->chart()->flatten({0, 0, 0});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Q.at(origin));
    CHECK(es.eigenvalues()(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(es.eigenvalues()(1) == doctest::Approx(2.0).epsilon(1e-10));

    // constant weight: zero field
    auto Q0 = q_form(*S, ScalarField::constant(S->chart(), 3.0), cc.e);
    CHECK(Q0.min_eigenvalue() == doctest::Approx(0.0));

    // tau scaling is exact
    auto h1 = LineBundleMetric::single(S, phi, 1);
    auto h3 = LineBundleMetric::single(S, phi, 3);
    auto Q1 = q_form(h1, cc.e);
    auto Q3 = q_form(h3, cc.e);
    for (std::size_t p : {std::size_t(0), std::size_t(100), origin})
        CHECK((Q3.at(p) - 3.0 * Q1.at(p)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eig stats") {
    CHECK(eig_stats(Eigen::MatrixXcd::Identity(3, 3), 1e-8).positive == 3);
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
    D(0, 0) = 1.0;
    D(1, 1) = -1.0;
    auto s = eig_stats(D, 1e-8);
    CHECK(s.positive == 1);
    CHECK(s.negative == 1);
    CHECK(s.zero == 0);

    // restriction of diag(2,-1) to span{(1,1)/sqrt 2}: single eigenvalue 0.5
    Eigen::MatrixXcd D2 = Eigen::MatrixXcd::Zero(2, 2);
    D2(0, 0) = 2.0;
    D2(1, 1) = -1.0;
    Eigen::MatrixXcd basis(2, 1);
    basis(0, 0) = 1.0;
    basis(1, 0) = 1.0;
    auto r = eig_stats_restricted(D2, basis, 1e-8);
    CHECK(r.positive == 1);
    CHECK(r.zero == 0);
    CHECK(r.negative == 0);
}

TEST_CASE("q-convexity: Morse index reading") {
    // essentially real V = span{d1} on T^2, phi = cos x1: the leafwise
    // maximum (index 1) fails 1-convexity and passes 2-convexity.
    auto S = fixtures::essentially_real_t2(16);
    auto phi = sample_real(S->chart(), [](const std::vector<double>& x) { return std::cos(x[0]); });
    auto e = zero_e(S);
    CHECK(!check_q_convex(*S, phi, 1, e).pass);
    CHECK(check_q_convex(*S, phi, 2, e).pass);

    // constant phi: Q = 0 fails every q <= n, q = n+1 passes, beyond errors
    auto c0 = ScalarField::constant(S->chart(), 1.0);
    CHECK(!check_q_convex(*S, c0, 1, e).pass);
    CHECK(check_q_convex(*S, c0, 2, e).pass);
    CHECK_THROWS_AS(check_q_convex(*S, c0, 3, e), Error);

    // n = 2 fixture: index-k point passes exactly for q >= k+1
    auto T = fixtures::essentially_real_t3(16);
    auto phi3 = sample_real(T->chart(), [](const std::vector<double>& x) {
        return std::cos(x[0]) + std::cos(x[1]);
    });
    auto e3 = zero_e(T);
    struct Probe { int i0, i1, index; };
    for (auto pr : {Probe{8, 8, 0}, Probe{8, 0, 1}, Probe{0, 8, 1}, Probe{0, 0, 2}}) {
        std::vector<std::uint8_t> point_mask(T->chart()->points(), 0);
        point_mask[T->chart()->flatten({pr.i0, pr.i1, 3})] = 1;
        for (int q = 1; q <= 3; ++q) {
            auto v = check_q_convex(*T, phi3, q, e3, 1e-6, &point_mask);
            REQUIRE(v.checked_points.size() == 1);
            CHECK(v.pass == (q >= pr.index + 1));
        }
    }

    // the local-model weight -log(eps^2 - |x|^2), realized through the
    // globally smooth periodic square distance rho^2 = sum 0.2 (1 - cos),
    // is 1-convex on the inner ball around the center.
    auto E = fixtures::elliptic_chart(16);
    const double eps2 = 1.44;
    std::vector<double> center{PI, PI, PI};
    auto rho2 = [center](const std::vector<double>& x) {
        double r2 = 0.0;
        for (int a = 0; a < 3; ++a) r2 += 0.2 * (1.0 - std::cos(x[a] - center[a]));
        return r2; // <= 1.2 < eps^2 everywhere
    };
    auto phiE = ScalarField::sample(E->chart(), [&](const std::vector<double>& x) {
        return cplx(-std::log(eps2 - rho2(x)), 0.0);
    });
    std::vector<std::uint8_t> ball(E->chart()->points(), 0);
    for (std::size_t p = 0; p < E->chart()->points(); ++p)
        ball[p] = rho2(E->chart()->point_coords(p)) < 0.4 ? 1 : 0;
    auto ccE = commutator_coefficients(*E);
    auto vE = check_q_convex(*E, phiE, 1, ccE.e, 1e-6, &ball);
    CHECK(vE.pass);
    CHECK(!vE.checked_points.empty()); // the center is critical
}

TEST_CASE("q-positivity") {
    auto S = fixtures::essentially_real_t3(16);
    auto e = zero_e(S);
    // weight with positive leafwise Hessian at critical points
    auto phi = sample_real(S->chart(), [](const std::vector<double>& x) {
        return -std::cos(x[0]) - std::cos(x[1]);
    });
    // K here is the leafwise critical set; Q = diag(cos x1, cos x2) there.
    // At (0,0): positive definite; at (pi,*): has a negative direction.
    // Restrict attention via a bundle metric to exercise the verdicts:
    auto h = LineBundleMetric::single(S, phi, 1);
    auto v1 = check_q_positive(h, 1, e);
    CHECK(!v1.pass); // the maximum point has negative eigenvalues
    auto v2 = check_q_positive(h, 2, e);
    CHECK(!v2.pass);
    // diag-model with one negative leafwise direction at the saddle:
    // fails q=1 but passes q=2 once only the saddle is considered.
    // Build that by masking through a region-limited convexity check instead:
    std::vector<std::uint8_t> saddle(S->chart()->points(), 0);
    saddle[S->chart()->flatten({8, 0, 2})] = 1; // cos x1 = -1, cos x2 = +1
    auto vq1 = check_q_convex(*S, phi, 1, e, 1e-6, &saddle);
    auto vq2 = check_q_convex(*S, phi, 2, e, 1e-6, &saddle);
    CHECK(!vq1.pass);
    CHECK(vq2.pass);

    // tau-power invariance of the verdict
    auto phi_pos = sample_real(S->chart(), [](const std::vector<double>& x) {
        return std::cos(x[0]) + std::cos(x[1]);
    });
    for (int tau : {1, 2, 5}) {
        auto hp = LineBundleMetric::single(S, phi_pos, tau);
        auto v = check_q_positive(hp, 1, e);
        // K-points include maxima of phi_pos where Q = diag(cos x1, cos x2)
        // evaluated with a sign flip... the verdict must not depend on tau:
        auto v_base = check_q_positive(LineBundleMetric::single(S, phi_pos, 1), 1, e);
        CHECK(v.pass == v_base.pass);
    }
}

TEST_CASE("e-choice independence on K and frame-change sign counts") {
    // essentially real: admissible decompositions differ by (d, e) -> (d+a, e+a)
    auto S = fixtures::essentially_real_t2(16);
    auto phi = sample_real(S->chart(), [](const std::vector<double>& x) { return std::cos(x[0]); });
    auto e0 = zero_e(S);
    auto e1 = zero_e(S);
    Rng rng(9);
    e1[0][0][0] = band_limited_field(S->chart(), 2, rng); // kernel shift
    auto Q0 = q_form(*S, phi, e0);
    auto Q1 = q_form(*S, phi, e1);
    auto masks = critical_sets(*S, phi);
    for (std::size_t p = 0; p < S->chart()->points(); ++p)
        if (masks.K[p])
            CHECK((Q0.at(p) - Q1.at(p)).cwiseAbs().maxCoeff() < 1e-8);

    // frame change: Y = A X with constant invertible A; sign counts at K match
    auto T = fixtures::essentially_real_t3(8);
    auto phi3 = sample_real(T->chart(), [](const std::vector<double>& x) {
        return std::cos(x[0]) + 0.7 * std::cos(x[1]);
    });
    Eigen::Matrix2cd A;
    A << cplx(1.0, 0.2), cplx(0.3, 0.0), cplx(-0.1, 0.0), cplx(1.1, -0.3);
    std::vector<VectorField> yframe;
    for (int j = 0; j < 2; ++j) {
        std::vector<ScalarField> comps;
        for (int nu = 0; nu < 3; ++nu) {
            ScalarField acc = ScalarField::constant(T->chart(), 0.0);
            for (int k = 0; k < 2; ++k) acc = acc + T->X(k).component(nu) * A(j, k);
            comps.push_back(acc);
        }
        yframe.emplace_back(T->chart(), comps);
    }
    auto T2 = FIStructure::make(T->chart(), yframe, {T->P(0)});
    auto ccT = commutator_coefficients(*T);
    auto ccT2 = commutator_coefficients(*T2);
    auto QT = q_form(*T, phi3, ccT.e);
    auto QT2 = q_form(*T2, phi3, ccT2.e);
    auto mT = critical_sets(*T, phi3);
    auto mT2 = critical_sets(*T2, phi3);
    for (std::size_t p = 0; p < T->chart()->points(); ++p) {
        CHECK(mT.K[p] == mT2.K[p]);
        if (!mT.K[p]) continue;
        auto s1 = eig_stats(QT.at(p), 1e-8);
        auto s2 = eig_stats(QT2.at(p), 1e-8);
        CHECK(s1.positive == s2.positive);
        CHECK(s1.negative == s2.negative);
        CHECK(s1.zero == s2.zero);
    }
}

TEST_CASE("compensating coefficients") {
    auto S = fixtures::essentially_real_t2(16);
    auto phi = sample_real(S->chart(), [](const std::vector<double>& x) { return std::sin(x[0]); });
    auto e = zero_e(S);
    std::vector<std::uint8_t> region(S->chart()->points(), 0);
    for (std::size_t p = 0; p < S->chart()->points(); ++p)
        region[p] = std::cos(S->chart()->point_coords(p)[0]) > 0.5 ? 1 : 0;

    auto comp = compensate_e(*S, phi, e, region);
    auto Qp = q_form(*S, phi, comp.e);
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < S->chart()->points(); ++p) {
        if (!region[p]) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Qp.at(p), Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues()(0));
    }
    CHECK(lo >= 1.0 - 1e-6);

    // empty region: nothing changes
    std::vector<std::uint8_t> empty(S->chart()->points(), 0);
    auto comp0 = compensate_e(*S, phi, e, empty);
    CHECK(comp0.psi.max_abs() == 0.0);
    CHECK((comp0.e[0][0][0] - e[0][0][0]).max_abs() == 0.0);

    // CR structure: no real directions at all
    auto C = fixtures::cr_product(8);
    auto phiC = sample_real(C->chart(), [](const std::vector<double>& x) {
        return std::sin(x[0]);
    });
    std::vector<std::uint8_t> all(C->chart()->points(), 1);
    CHECK_THROWS_AS(compensate_e(*C, phiC, zero_e(C), all), NoRealDirection);
}

TEST_CASE("eigenfloor metric") {
    auto chart = fixtures::torus(2, 8);
    auto eta = ScalarField::constant(chart, 1.0);

    HermitianField A(chart, 2);
    for (std::size_t p = 0; p < chart->points(); ++p) A.at(p) = Eigen::Matrix2cd::Identity();
    auto F = eigenfloor_metric(A, eta, 0.25);
    CHECK((F.at(0) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);

    // diag(-1, 2) with delta = 1/4: eigenvalues (theta(-1) >= 4, 2)
    HermitianField B(chart, 2);
    for (std::size_t p = 0; p < chart->points(); ++p) {
        B.at(p) = Eigen::Matrix2cd::Zero();
        B.at(p)(0, 0) = -1.0;
        B.at(p)(1, 1) = 2.0;
    }
    auto FB = eigenfloor_metric(B, eta, 0.25);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(FB.at(0));
    // ascending order: theta(2) = 2 stays, theta(-1) >= |−1|/delta = 4
    CHECK(es.eigenvalues()(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) >= 4.0);
    CHECK(FB.is_positive());

    // scalar blend properties: theta(t) >= |t|/delta for t <= 0, >= t always,
    // = t for t >= 1 (spot checks across the knots)
    for (double d : {0.1, 0.25, 0.49}) {
        for (double t = -3.0; t <= 2.0; t += 0.05) {
            double th = eigenfloor_theta(t, d);
            CHECK(th > 0.0);
            if (t <= 0.0) CHECK(th >= -t / d - 1e-12);
            if (t >= 0.0) CHECK(th >= t - 1e-12);
            if (t >= 1.0) CHECK(th == t);
        }
    }

    // unitary equivariance: eigenfloor(U A U^H) = U eigenfloor(A) U^H
    Rng rng(13);
    HermitianField G(chart, 3);
    for (std::size_t p = 0; p < chart->points(); ++p) {
        Eigen::MatrixXcd M(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) M(i, j) = rng.cnormal();
        G.at(p) = 0.5 * (M + M.adjoint());
    }
    Eigen::MatrixXcd R(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) R(i, j) = rng.cnormal();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(R);
    Eigen::MatrixXcd U = qr.householderQ() * Eigen::MatrixXcd::Identity(3, 3);
    HermitianField GU(chart, 3);
    for (std::size_t p = 0; p < chart->points(); ++p) GU.at(p) = U * G.at(p) * U.adjoint();
    auto FG = eigenfloor_metric(G, eta, 0.2);
    auto FGU = eigenfloor_metric(GU, eta, 0.2);
    double worst = 0.0;
    for (std::size_t p : {std::size_t(0), std::size_t(11), std::size_t(43)})
        worst = std::max(worst,
                         (FGU.at(p) - U * FG.at(p) * U.adjoint()).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-10);
}

TEST_CASE("chi construction") {
    auto S = fixtures::essentially_real_t2(16);
    auto chart = S->chart();
    auto phi = sample_real(chart, [](const std::vector<double>& x) { return std::sin(x[0]); });

    // all demands nonpositive: chi(t) = t is admissible and returned
    EstimateFields f0{ScalarField::constant(chart, 1.0), ScalarField::constant(chart, 0.0),
                      ScalarField::constant(chart, 0.0), ScalarField::constant(chart, 1.0),
                      ScalarField::constant(chart, 1.0)};
    std::vector<double> grid;
    for (int i = 0; i <= 16; ++i) grid.push_back(-1.0 + 2.0 * i / 16.0);
    auto rep0 = construct_chi(*S, phi, f0, grid);
    CHECK(rep0.pass);
    for (double t : {-0.9, 0.0, 0.7})
        CHECK(rep0.chi.value(t) == doctest::Approx(t).epsilon(1e-12));

    // R == c demand with unit floors: chi' = e^{c(t - t0)} (closed-form ODE)
    const double cdem = 0.8;
    auto psi = sample_real(chart, [](const std::vector<double>& x) {
        return std::cos(x[0]) * std::cos(x[0]);
    });
    auto xphi2 = sample_real(chart, [](const std::vector<double>& x) {
        return std::cos(x[0]) * std::cos(x[0]);
    });
    EstimateFields f1;
    f1.Psi = psi;
    f1.mu = psi;
    f1.R = psi * (ScalarField::constant(chart, 1.0) - xphi2 * cdem);
    f1.lambda = ScalarField::constant(chart, 1.0) - psi;
    f1.C_eps = ScalarField::constant(chart, 0.0);
    auto rep1 = construct_chi(*S, phi, f1, grid);
    CHECK(rep1.pass);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(rep1.chi.chip_[i] ==
              doctest::Approx(std::exp(cdem * (grid[i] - grid[0]))).epsilon(1e-10));
}

TEST_CASE("line bundle metrics with cocycles") {
    auto S = fixtures::cr_product(8);
    auto chart = S->chart();
    // basic nonvanishing transition g = exp(0.3 cos x3 + i x3)
    auto g01 = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return std::exp(cplx(0.3 * std::cos(x[2]), x[2]));
    });
    auto g10 = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return std::exp(cplx(-0.3 * std::cos(x[2]), -x[2]));
    });
    auto one = ScalarField::constant(chart, 1.0);
    auto phi0 = sample_real(chart, [](const std::vector<double>& x) {
        return std::sin(x[2]);
    });
    // phi1 = phi0 - log|g01|^2 = phi0 - 0.6 cos x3
    auto phi1 = sample_real(chart, [](const std::vector<double>& x) {
        return std::sin(x[2]) - 0.6 * std::cos(x[2]);
    });
    std::vector<std::vector<ScalarField>> coc{{one, g01}, {g10, one}};
    auto h = LineBundleMetric::with_cocycle(S, {phi0, phi1}, coc, 2);
    CHECK(h.discrepancy < 1e-9);
    CHECK(h.tau == 2);

    // wrong weight pairing violates the discrepancy
    CHECK_THROWS_AS(LineBundleMetric::with_cocycle(S, {phi0, phi0}, coc, 1), Error);

    // non-basic cocycle entries are rejected
    auto bad = ScalarField::sample(chart, [](const std::vector<double>& x) {
        return std::exp(cplx(0.0, x[0]));
    });
    std::vector<std::vector<ScalarField>> cocbad{{one, bad}, {bad.conjugate(), one}};
    auto phib = sample_real(chart, [](const std::vector<double>&) { return 0.0; });
    CHECK_THROWS_AS(LineBundleMetric::with_cocycle(S, {phib, phib}, cocbad, 1), Error);
}
