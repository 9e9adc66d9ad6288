#pragma once

#include <memory>

#include "fiskit/form.hpp"

namespace fiskit {

struct IntegrabilityReport {
    double residual = 0.0;
    bool pass = false;
    std::size_t worst_point = 0;
};

struct LeviFlatReport {
    int rank_min = 0;
    int rank_max = 0;
    bool pass = false;
};

/// Optional normal-form bookkeeping on a chart: which coordinate pairs form
/// complex variables z = x_re + i x_im, which real axes lie in the span of
/// the structure (t-type) and which are transverse (y-type).
struct NormalForm {
    std::vector<std::pair<int, int>> z_pairs;
    std::vector<int> t_axes;
    std::vector<int> y_axes;
};

/// A formally integrable structure presented by a frame: n vector fields
/// spanning V and m complement fields, with the dual coframe (omegas dual to
/// the V-frame, thetas spanning the annihilator of V).
class FIStructure {
public:
    static std::shared_ptr<const FIStructure> make(ChartPtr chart,
                                                   std::vector<VectorField> v_frame,
                                                   std::vector<VectorField> complement,
                                                   double tol = 1e-8,
                                                   std::optional<NormalForm> nf = {});

    const ChartPtr& chart() const { return chart_; }
    int n() const { return int(v_frame_.size()); }
    int m() const { return int(complement_.size()); }
    const VectorField& X(int j) const { return v_frame_.at(j); }
    const VectorField& P(int l) const { return complement_.at(l); }
    const std::vector<VectorField>& v_frame() const { return v_frame_; }
    const CoFrame& coframe() const { return coframe_; }
    const Form& omega(int j) const { return coframe_.omega(j); }
    const Form& theta(int l) const { return coframe_.theta(l); }
    /// theta^1 ^ ... ^ theta^m (coordinate basis).
    const Form& theta_top() const { return theta_top_; }

    double integrability_residual() const { return integrability_residual_; }
    bool integrable() const { return integrable_; }
    const std::optional<NormalForm>& normal_form() const { return normal_form_; }

private:
    FIStructure() = default;
    ChartPtr chart_;
    std::vector<VectorField> v_frame_, complement_;
    CoFrame coframe_;
    Form theta_top_;
    double integrability_residual_ = 0.0;
    bool integrable_ = false;
    std::optional<NormalForm> normal_form_;
};

using StructurePtr = std::shared_ptr<const FIStructure>;

/// Canonical structure on a normal-form chart: the V-frame is
/// {d/d zbar per complex pair, d/dt per leaf axis} and the complement is
/// {d/dz, d/dy}; thetas come out as the dz's (plus dy's).
StructurePtr normal_structure(ChartPtr chart, NormalForm nf, double tol = 1e-8);

/// m x m matrix of structure 1-forms with d theta^j = sum_l theta_l^j ^ theta^l
/// up to the reported residual; entries are coordinate-basis 1-forms and the
/// trace drives the Xi operator.
struct StructureForms {
    StructurePtr structure;
    std::vector<std::vector<Form>> entries; // entries[j][l] = theta_l^j
    Form trace;                             // sum_l theta_l^l
    double residual = 0.0;
};

/// Twist 1-form with d(theta) == 0 mod span{theta^1..theta^m}.
struct TwistForm {
    Form form; // coordinate basis
    double residual = 0.0;
    bool valid = false;
};

/// Chart-local basic bundle: one or more trivializations over the same chart
/// with basic transition matrices satisfying the cocycle identity.
class BasicBundle {
public:
    /// Single trivialization, identity transition.
    static BasicBundle trivial(StructurePtr S, int rank = 1);
    /// Multiple trivializations over the same chart. transitions[a][b] is the
    /// rank x rank matrix field g_ab, stored row-major as scalar fields.
    static BasicBundle with_transitions(
        StructurePtr S, int rank,
        std::vector<std::vector<std::vector<ScalarField>>> transitions, double tol = 1e-8);

    int rank() const { return rank_; }
    int num_trivializations() const { return num_triv_; }
    double cocycle_residual() const { return cocycle_residual_; }
    double basic_residual() const { return basic_residual_; }
    const std::vector<ScalarField>& transition(int a, int b) const {
        return transitions_.at(a).at(b);
    }

private:
    StructurePtr structure_;
    int rank_ = 1;
    int num_triv_ = 1;
    double cocycle_residual_ = 0.0;
    double basic_residual_ = 0.0;
    std::vector<std::vector<std::vector<ScalarField>>> transitions_;
};

/// Coefficients of an E-valued (m,q)-form: one scalar field per bundle
/// component and increasing omega multi-index, u = sum g_J^a Theta ^ omega^J e_a.
struct MqForm {
    StructurePtr structure;
    int q = 0;
    int rank = 1;
    std::vector<ScalarField> coeffs; // index a * C(n,q) + rank(J)

    static MqForm zero(StructurePtr S, int q, int rank = 1);
    int num_indices() const { return int(mi::choose(structure->n(), q)); }
    ScalarField& coeff(int a, long long jr) { return coeffs.at(a * num_indices() + jr); }
    const ScalarField& coeff(int a, long long jr) const {
        return coeffs.at(a * num_indices() + jr);
    }
    double max_abs() const;
    MqForm operator+(const MqForm& o) const;
    MqForm operator-(const MqForm& o) const;
    MqForm operator*(cplx s) const;
};

/// A section of Lambda^q V^*: coefficients on omega multi-indices only
/// (the quotient complex representation).
struct QuotientForm {
    StructurePtr structure;
    int q = 0;
    std::vector<ScalarField> coeffs;

    static QuotientForm zero(StructurePtr S, int q);
    double max_abs() const;
    QuotientForm operator-(const QuotientForm& o) const;
};

/// Commutator decomposition [X_j, conj X_k] = sum d X_l - sum e conj X_l.
struct CommutatorCoefficients {
    StructurePtr structure;
    // d[j][k][l], e[j][k][l]
    std::vector<std::vector<std::vector<ScalarField>>> d, e;
    double residual = 0.0;     // worst reconstruction defect
    int kernel_dimension = 0;  // pointwise non-uniqueness of the solve
};

// --- diagnostics ------------------------------------------------------------

IntegrabilityReport check_formal_integrability(const FIStructure& S, double tol = 1e-8);
LeviFlatReport check_levi_flat(const FIStructure& S, double tol = 1e-8);

CommutatorCoefficients commutator_coefficients(const FIStructure& S, double tol = 1e-6);

StructureForms structure_forms(StructurePtr S, double tol = 1e-8);

/// The Xi operator: wedge by the trace of the structure forms. The caller
/// asserts (or the normal form certifies) that theta_top is basic.
struct XiOperator {
    Form trace; // coordinate-basis 1-form
    Form apply(const Form& u) const { return wedge(trace, u); }
};
XiOperator xi_operator(const FIStructure& S, const StructureForms& forms,
                       bool theta_basic_asserted = false);

TwistForm check_twist(const FIStructure& S, const Form& theta, double tol = 1e-8);

bool is_basic_scalar(const FIStructure& S, const ScalarField& f, double tol = 1e-8);
/// Requires a normal form on the chart: the form is rewritten in the
/// dz-coframe and both the non-dz components and the V-derivatives of the
/// dz-coefficients must vanish.
bool is_basic_form(const FIStructure& S, const Form& form, double tol = 1e-8);

// --- the twisted complex ----------------------------------------------------

/// d_{V,theta} on E-valued (m,q)-coefficients via the full-form route:
/// (d - Xi - theta^) applied componentwise, then re-expanded over Theta^omega^J.
/// Inputs of degree q = n map to the zero form one level up.
MqForm mnt_operator(const MqForm& u, const StructureForms& forms, const TwistForm& twist);

/// Leakage of the last mnt_operator-style computation outside the
/// Theta-multi-indices. Returned alongside when diagnostics are requested.
MqForm mnt_operator(const MqForm& u, const StructureForms& forms, const TwistForm& twist,
                    double* leakage);

/// Build the full coordinate-basis forms (one per bundle component).
std::vector<Form> mq_to_full(const MqForm& u);
/// Extract (m,q)-coefficients of full forms; *leakage reports components
/// outside Theta ^ omega^J.
MqForm mq_from_full(StructurePtr S, int q, const std::vector<Form>& full,
                    double* leakage = nullptr);

/// Zero-order operator difference between the twisted complexes induced by
/// two trivialization choices related by the frame change f (Prop-2.1-type
/// discrepancy): u maps to (-1)^{q+m} u ^ d(f^{-1}) f.
MqForm bv_difference(const MqForm& u, const std::vector<ScalarField>& f_matrix);

// --- quotient complex -------------------------------------------------------

/// Project a full q-form onto Lambda^q V^* (omega components in the coframe).
QuotientForm quotient_project(StructurePtr S, const Form& u);

/// d''_theta on quotient coefficients: Chevalley-Eilenberg terms plus the
/// bracket expansion through the coframe, minus [theta] ^ u.
QuotientForm mnt_quotient_operator(const QuotientForm& u, const TwistForm& twist);

/// Phi_q: (m,q)-coefficients (K_V^{-1}-valued) to the quotient class,
/// sign (-1)^{qm} on coefficients.
QuotientForm phi_iso(const MqForm& u);

} // namespace fiskit
