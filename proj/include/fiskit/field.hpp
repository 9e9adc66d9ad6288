#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "fiskit/chart.hpp"

namespace fiskit {

/// Complex scalar samples on a chart grid. Immutable by convention: every
/// operation returns a fresh field.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(ChartPtr chart, Eigen::VectorXcd samples);

    static ScalarField constant(ChartPtr chart, cplx value);
    static ScalarField coordinate(ChartPtr chart, int axis);
    /// Sample an arbitrary function of the coordinates.
    static ScalarField sample(ChartPtr chart,
                              const std::function<cplx(const std::vector<double>&)>& f);

    const ChartPtr& chart() const { return chart_; }
    const Eigen::VectorXcd& data() const { return data_; }
    Eigen::VectorXcd& data() { return data_; }
    std::size_t size() const { return std::size_t(data_.size()); }
    cplx operator()(std::size_t p) const { return data_(Eigen::Index(p)); }

    double max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : 0.0; }
    double max_imag() const { return data_.size() ? data_.imag().cwiseAbs().maxCoeff() : 0.0; }
    bool finite() const;

    ScalarField conjugate() const { return {chart_, data_.conjugate()}; }
    /// Real part as a real-storage convenience (still complex-valued field).
    ScalarField real_part() const {
        return {chart_, data_.real().cast<cplx>()};
    }

    ScalarField operator+(const ScalarField& o) const;
    ScalarField operator-(const ScalarField& o) const;
    ScalarField operator*(const ScalarField& o) const; // pointwise
    ScalarField operator*(cplx s) const { return {chart_, data_ * s}; }
    ScalarField operator-() const { return {chart_, -data_}; }

private:
    ChartPtr chart_;
    Eigen::VectorXcd data_;
};

/// A complex vector field: one coefficient field per coordinate direction.
class VectorField {
public:
    VectorField() = default;
    VectorField(ChartPtr chart, std::vector<ScalarField> components);

    static VectorField coordinate_direction(ChartPtr chart, int axis, cplx scale = 1.0);

    const ChartPtr& chart() const { return chart_; }
    const ScalarField& component(int a) const { return comps_.at(a); }
    int dim() const { return int(comps_.size()); }

    VectorField conjugate() const;
    VectorField operator+(const VectorField& o) const;
    VectorField operator-(const VectorField& o) const;
    VectorField operator*(cplx s) const;

private:
    ChartPtr chart_;
    std::vector<ScalarField> comps_;
};

// --- operations -----------------------------------------------------------

/// Spectral partial derivative along one axis.
ScalarField partial_derivative(const ScalarField& f, int axis);

/// X(f) = sum_nu X^nu d_nu f.
ScalarField apply_vector(const VectorField& X, const ScalarField& f);

/// [X,Y]^nu = X(Y^nu) - Y(X^nu).
VectorField lie_bracket(const VectorField& X, const VectorField& Y);

/// Quadrature of f e^{-weight} over the chart; the weight must be real.
cplx integrate(const ScalarField& f, const ScalarField* weight = nullptr);

/// Smooth bump: 1 at the center, 0 outside the periodic ball of the given
/// radius, profile exp(1 - 1/(1 - (r/radius)^2)).
ScalarField bump(ChartPtr chart, const std::vector<double>& center, double radius);

/// Throws unless the imaginary part is below tol in max norm.
void require_real(const ScalarField& f, const char* what, double tol = 1e-12);
void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* what);

} // namespace fiskit
