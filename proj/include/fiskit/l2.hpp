#pragma once

#include <Eigen/Sparse>

#include "fiskit/convexity.hpp"
#include "fiskit/rng.hpp"
#include "fiskit/structure.hpp"

namespace fiskit {

using SparseCd = Eigen::SparseMatrix<cplx>;

/// The discrete weighted complex: sparse matrices D_q on stacked (m,q)
/// coefficient vectors (index a * C(n,q) * P + rank(J) * P + point) and the
/// positive diagonal weights e^{-w} * cell volume per level.
struct DiscreteComplex {
    StructurePtr structure;
    int rank = 1;
    std::vector<SparseCd> D;        // D[q]: level q -> q+1, q = 0..n-1
    std::vector<Eigen::VectorXd> W; // W[q]: level weights
    ScalarField weight_field;       // the exponent w actually used (clipped)
    double assembly_residual = 0.0; // leakage off the Theta indices
    double clip_bound = 40.0;

    int num_indices(int q) const { return int(mi::choose(structure->n(), q)); }
    Eigen::Index level_dim(int q) const {
        return Eigen::Index(rank) * num_indices(q) *
               Eigen::Index(structure->chart()->points());
    }
    Eigen::VectorXcd pack(const MqForm& u) const;
    MqForm unpack(int q, const Eigen::VectorXcd& v) const;
    double wnorm(int q, const Eigen::VectorXcd& v) const;
    cplx wdot(int q, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const;
};

struct SolveReport {
    double residual = 0.0;     // normal-equation residual |D^{*w}(Du - f)|_W
    double obstruction = 0.0;  // |Du - f|_W, the out-of-range component
    double solution_norm = 0.0;
    int iterations = 0;
};

struct BochnerReport {
    double lhs = 0.0;            // |d g|^2 + |delta g|^2
    double q_term = 0.0;         // curvature sum
    double gradient_term = 0.0;  // sum int |X_j g|^2 e^{-phi}
    double remainder = 0.0;      // lhs - q_term - gradient_term
    double gradient_norm = 0.0;  // G(g)
    double g_norm = 0.0;
    double c_hat = 0.0;          // |remainder| / (G(g) |g|)
};

struct AprioriReport {
    int samples = 0;
    int passed = 0;
    double worst_slack = 0.0; // min of |T*g|^2 + |Sg|^2 - |g|^2 over samples
    double pass_rate() const { return samples ? double(passed) / samples : 0.0; }
};

struct LeafwiseReport {
    std::string classification; // "essentially-real" or "levi-flat-cr"
    int q = 0;
    Eigen::Index dim_kernel = 0;
    Eigen::Index rank_in = 0;  // rank of the incoming map
    Eigen::Index rank_out = 0; // rank of the outgoing map
    Eigen::Index defect = 0;   // dim_kernel - rank_in
};

// --- assembly -----------------------------------------------------------------

/// Assemble the matrices of d_{V,theta} on E-valued (m,q) coefficients with
/// weights from e^{-w}. The weight exponent is clipped at +-clip and the
/// resulting complex records the leakage residual of the zero-order terms.
DiscreteComplex assemble(StructurePtr S, const StructureForms& forms, const TwistForm& twist,
                         const BasicBundle& E, const ScalarField& weight,
                         double clip = 40.0);

/// W_q^{-1} D_q^H W_{q+1}: the weighted adjoint as an explicit sparse matrix.
SparseCd adjoint(const DiscreteComplex& C, int q);

/// Quotient complex matrices of d''_theta on Lambda^q V^* coefficients
/// (plain, unweighted); used by the leafwise ranks and the quotient solves.
std::vector<SparseCd> assemble_quotient(StructurePtr S, const TwistForm& twist);

// --- checks ---------------------------------------------------------------------

/// Evaluate both sides of the curvature identity on a compactly supported
/// test form g at level q; e-coefficients must match the assembled weight.
BochnerReport bochner_check(const DiscreteComplex& C, const ScalarField& phi,
                            const std::vector<std::vector<std::vector<ScalarField>>>& e,
                            const MqForm& g);

/// |g|^2 <= |T* g|^2 + |S g|^2 with slack >= -1e-8 on normalized samples
/// drawn as bump-localized band-limited forms at level q.
AprioriReport apriori_check(const DiscreteComplex& C, int q, int samples, Rng& rng,
                            const ScalarField& bump_window, int kmax = 3);

// --- solve ----------------------------------------------------------------------

/// Minimum-W-norm least squares solution of D_{q-1} u = f via CGLS on the
/// symmetrically scaled normal equations with diagonal preconditioning.
std::pair<MqForm, SolveReport> solve(const DiscreteComplex& C, int q, const MqForm& f,
                                     double tol = 1e-13, int max_iter_factor = 10);

/// Same driver for arbitrary sparse maps (used by the quotient solves).
std::pair<Eigen::VectorXcd, SolveReport> solve_least_norm(const SparseCd& D,
                                                          const Eigen::VectorXd& W_dom,
                                                          const Eigen::VectorXd& W_cod,
                                                          const Eigen::VectorXcd& f,
                                                          double tol = 1e-13,
                                                          int max_iter_factor = 10);

/// Numerical ranks of the quotient complex around level q (SVD threshold
/// 1e-8 relative); requires an essentially real or Levi flat CR structure.
LeafwiseReport leafwise_cohomology(StructurePtr S, const TwistForm& twist, int q);

// --- export ---------------------------------------------------------------------

/// Matrix Market files D<q>.mtx (coordinate complex general) and W<q>.mtx
/// (diagonal as coordinate real) under dir with the given prefix.
void export_matrix_market(const DiscreteComplex& C, const std::string& dir,
                          const std::string& prefix);
void write_matrix_market(const SparseCd& M, const std::string& path);

} // namespace fiskit
