#pragma once

#include "fiskit/field.hpp"
#include "fiskit/multiindex.hpp"

namespace fiskit {

class CoFrame;

/// Which 1-form basis the coefficients of a Form refer to.
enum class FormBasis { Coordinate, Frame };

/// A degree-k differential form with one coefficient field per increasing
/// multi-index (lexicographic order). Coefficients refer either to the
/// coordinate differentials or to a coframe; mixing bases is an error.
class Form {
public:
    Form() = default;
    Form(ChartPtr chart, int degree);                       // zero form, coordinate basis
    Form(ChartPtr chart, int degree, const CoFrame* frame); // zero form, frame basis

    static Form scalar(const ScalarField& f);  // degree 0
    static Form coordinate_differential(ChartPtr chart, int axis); // dx_axis

    const ChartPtr& chart() const { return chart_; }
    int degree() const { return degree_; }
    FormBasis basis() const { return basis_; }
    const CoFrame* frame() const { return frame_; }
    int num_components() const { return int(coeffs_.size()); }

    const ScalarField& coeff(long long r) const { return coeffs_.at(std::size_t(r)); }
    ScalarField& coeff(long long r) { return coeffs_.at(std::size_t(r)); }
    const ScalarField& coeff(const mi::Index& I) const {
        return coeffs_.at(std::size_t(mi::rank(I, chart_->dim())));
    }
    ScalarField& coeff(const mi::Index& I) {
        return coeffs_.at(std::size_t(mi::rank(I, chart_->dim())));
    }

    double max_abs() const;
    Form operator+(const Form& o) const;
    Form operator-(const Form& o) const;
    Form operator*(cplx s) const;
    Form operator*(const ScalarField& f) const; // pointwise scaling

private:
    friend Form wedge(const Form&, const Form&);
    ChartPtr chart_;
    int degree_ = 0;
    FormBasis basis_ = FormBasis::Coordinate;
    const CoFrame* frame_ = nullptr; // identity of the frame basis
    std::vector<ScalarField> coeffs_;
};

/// Dual coframe of a pointwise frame of vector fields: n 1-forms paired with
/// the V-frame followed by m 1-forms spanning the annihilator of the V-frame.
class CoFrame {
public:
    static CoFrame dual_to(const std::vector<VectorField>& frame, int n_count,
                           double tol = 1e-8);

    const ChartPtr& chart() const { return chart_; }
    int size() const { return int(forms_.size()); }
    int n_count() const { return n_count_; }
    int m_count() const { return size() - n_count_; }

    /// Coordinate-basis 1-form number j of the coframe (omegas first, thetas after).
    const Form& form(int j) const { return forms_.at(j); }
    const Form& omega(int j) const { return forms_.at(j); }
    const Form& theta(int l) const { return forms_.at(n_count_ + l); }

    /// Pointwise frame component matrix A (A(nu,j) = nu-component of frame j)
    /// and its inverse; rows of the inverse are the coframe coefficients.
    const Eigen::MatrixXcd& frame_matrix(std::size_t p) const { return A_.at(p); }
    const Eigen::MatrixXcd& inverse_matrix(std::size_t p) const { return Ainv_.at(p); }

    /// Largest deviation of <coframe_j, frame_k> from the identity.
    double pairing_residual(const std::vector<VectorField>& frame) const;

private:
    ChartPtr chart_;
    int n_count_ = 0;
    std::vector<Form> forms_;
    std::vector<Eigen::MatrixXcd> A_, Ainv_;
};

// --- operations -----------------------------------------------------------

Form wedge(const Form& a, const Form& b);
Form exterior_derivative(const Form& a);
Form interior_product(const VectorField& X, const Form& a);

/// Re-express a coordinate-basis form in a coframe basis or back.
Form change_basis(const Form& a, const CoFrame& coframe);
Form to_coordinate_basis(const Form& a);

/// (min rank, max rank) over grid points of the span of the given vectors.
std::pair<int, int> pointwise_rank(const std::vector<VectorField>& vectors,
                                   double tol = 1e-8);

} // namespace fiskit
