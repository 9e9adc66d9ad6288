#pragma once

#include "fiskit/structure.hpp"

namespace fiskit {

/// Pointwise Hermitian matrix field on the V-frame indices. Used both for
/// the convexity quadratic form (indefinite in general) and for metrics
/// (positive definite, see is_positive).
class HermitianField {
public:
    HermitianField() = default;
    HermitianField(ChartPtr chart, int n);

    const ChartPtr& chart() const { return chart_; }
    int n() const { return n_; }
    const Eigen::MatrixXcd& at(std::size_t p) const { return mats_.at(p); }
    Eigen::MatrixXcd& at(std::size_t p) { return mats_.at(p); }

    double hermitian_residual() const;
    bool is_positive(double tol = 0.0) const;
    /// Smallest eigenvalue over a mask (whole chart when mask empty).
    double min_eigenvalue(const std::vector<std::uint8_t>* mask = nullptr) const;

private:
    ChartPtr chart_;
    int n_ = 0;
    std::vector<Eigen::MatrixXcd> mats_;
};

/// Chart-local Hermitian metric on a basic line bundle: weights per
/// trivialization with basic transition cocycle and an integer tensor power.
struct LineBundleMetric {
    StructurePtr structure;
    std::vector<ScalarField> weights;      // phi_alpha, real
    std::vector<std::vector<ScalarField>> cocycle; // phi_{ab}, basic, nonvanishing
    int tau = 1;
    double discrepancy = 0.0; // max |phi_a - phi_b - log|phi_ab|^2|

    static LineBundleMetric single(StructurePtr S, ScalarField phi, int tau = 1);
    static LineBundleMetric with_cocycle(StructurePtr S, std::vector<ScalarField> weights,
                                         std::vector<std::vector<ScalarField>> cocycle,
                                         int tau = 1, double tol = 1e-9);
    const ScalarField& weight() const { return weights.at(0); }
};

struct CriticalMasks {
    std::vector<std::uint8_t> K; // first derivatives vanish along V cap conj(V)
    std::vector<std::uint8_t> C; // first derivatives vanish along all of V
    std::size_t K_count = 0, C_count = 0;
};

struct EigStats {
    int positive = 0, zero = 0, negative = 0;
};

struct ConvexityVerdict {
    bool pass = true;
    std::size_t first_failure = 0;   // grid point, valid when !pass
    int required = 0;                // eigenvalue count demanded at the failure
    int found = 0;
    std::vector<std::size_t> checked_points;
};

struct CompensationResult {
    // modified coefficients e'[j][k][l] and the scalar field psi
    std::vector<std::vector<std::vector<ScalarField>>> e;
    ScalarField psi;
    VectorField X;        // the real section of V cap conj(V) used
    ScalarField x_of_phi; // X(phi), real and positive on the region
};

/// Piecewise-exponential convex increasing function built on a sample grid:
/// chi'(t) grows exponentially on each segment, chi is integrated in closed
/// form. Evaluation clamps to linear extension outside the sampled range.
class ChiFunction {
public:
    double value(double t) const;
    double deriv(double t) const;
    double second(double t) const;
    const std::vector<double>& grid() const { return t_; }

    std::vector<double> t_, chi_, chip_, slope_; // slope_[i] on [t_i, t_{i+1}]
};

struct ChiReport {
    ChiFunction chi;
    // max violation of the three inequalities over the grid (negative slack)
    double worst_slack = 0.0;
    bool pass = false;
};

// --- operations -------------------------------------------------------------

CriticalMasks critical_sets(const FIStructure& S, const ScalarField& phi, double tol = 1e-6);

/// Quadratic form entries Re(X_j conj(X_k) phi + sum_l e_jk^l conj(X_l) phi),
/// assembled as the Hermitian matrix whose x^H Q x is that real form.
HermitianField q_form(const FIStructure& S, const ScalarField& phi,
                      const std::vector<std::vector<std::vector<ScalarField>>>& e);
HermitianField q_form(const LineBundleMetric& h,
                      const std::vector<std::vector<std::vector<ScalarField>>>& e);

EigStats eig_stats(const Eigen::MatrixXcd& herm, double tol);
/// Restricted to the span of the given (not necessarily orthonormal) columns.
EigStats eig_stats_restricted(const Eigen::MatrixXcd& herm, const Eigen::MatrixXcd& basis,
                              double tol);

/// q-convexity of a weight: at every K-mask point the restriction of Q to
/// V cap Ker(d phi) needs at least dim - q + 1 positive eigenvalues.
ConvexityVerdict check_q_convex(const FIStructure& S, const ScalarField& phi, int q,
                                const std::vector<std::vector<std::vector<ScalarField>>>& e,
                                double tol = 1e-6,
                                const std::vector<std::uint8_t>* region = nullptr);

/// q-positivity of a line bundle metric: n - q + 1 positive eigenvalues of Q
/// on the whole fiber at every K point.
ConvexityVerdict check_q_positive(const LineBundleMetric& h, int q,
                                  const std::vector<std::vector<std::vector<ScalarField>>>& e,
                                  double tol = 1e-6);

/// Compensating coefficients on a region disjoint from the K mask: a real
/// section X of V cap conj(V) with X(phi) > 0 there scales into e' so that
/// the recomputed Q clears eigenvalue 1 on the region.
CompensationResult compensate_e(const FIStructure& S, const ScalarField& phi,
                                const std::vector<std::vector<std::vector<ScalarField>>>& e,
                                const std::vector<std::uint8_t>& region, double tol = 1e-8);

/// Pointwise eigenvalue floor: A' = eta * theta(A / eta) with the concrete
/// blend theta(t) = t + (4(1+delta)/(27 delta)) (1-t)^3 below 1 and t above.
HermitianField eigenfloor_metric(const HermitianField& A, const ScalarField& eta, double delta);
double eigenfloor_theta(double t, double delta);

/// Estimate fields entering the chi construction (single-chart instance).
struct EstimateFields {
    ScalarField mu;      // lower bound field for the K-minus-C patches
    ScalarField R;       // curvature demand on those patches
    ScalarField Psi;     // partition weight of the K-minus-C patches
    ScalarField lambda;  // positivity margin on the complementary patches
    ScalarField C_eps;   // zero-order constant field
};

/// Build a convex increasing chi with chi' >= max(mu(t), C(t), lambda(t)) and
/// chi''/chi' >= R(t) over sublevel sets sampled on t_grid, then verify the
/// three pointwise inequalities on the grid.
ChiReport construct_chi(const FIStructure& S, const ScalarField& phi,
                        const EstimateFields& fields, const std::vector<double>& t_grid);

/// Projection of grad(phi) onto V: returns the coefficient expansion over the
/// V-frame and the scalar X_phi(phi) = |pi grad phi|^2.
std::pair<VectorField, ScalarField> leafwise_gradient(const FIStructure& S,
                                                      const ScalarField& phi);

} // namespace fiskit
