#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "fiskit/errors.hpp"

namespace fiskit {

using cplx = std::complex<double>;

/// One periodic coordinate: uniform grid x_k = period * k / resolution.
struct CoordAxis {
    std::string name;
    double period = 0.0;
    int resolution = 0;
};

/// A single periodic chart. All fields, forms and structures reference one
/// Chart instance; identity of the shared_ptr is what "same chart" means.
///
/// Differentiation is discrete-Fourier: dense derivative matrices are built
/// once per axis at construction. Wavenumbers run over {-N/2+1, ..., N/2}
/// (the half-band mode is kept at +N/2), so the only grid mode annihilated
/// by d/dx is the constant one, and derivatives are exact for trigonometric
/// polynomials below the half band.
class Chart {
public:
    static std::shared_ptr<const Chart> make(std::vector<CoordAxis> axes);

    int dim() const { return static_cast<int>(axes_.size()); }
    const CoordAxis& axis(int a) const { return axes_.at(a); }
    const std::vector<CoordAxis>& axes() const { return axes_; }

    std::size_t points() const { return npoints_; }
    double cell_volume() const { return cellvol_; }

    /// Dense spectral derivative matrix for one axis (resolution x resolution).
    const Eigen::MatrixXcd& deriv_matrix(int a) const { return deriv_.at(a); }

    /// Coordinate value of grid node i along axis a.
    double coordinate(int a, int i) const {
        return axes_[a].period * double(i) / double(axes_[a].resolution);
    }

    /// Multi-index of a flattened point (axis 0 slowest).
    std::vector<int> unflatten(std::size_t p) const;
    std::size_t flatten(const std::vector<int>& idx) const;
    /// Coordinates of a flattened point.
    std::vector<double> point_coords(std::size_t p) const;

    /// Stride of axis a in the flattened layout.
    std::size_t stride(int a) const { return strides_.at(a); }

    int axis_index(const std::string& name) const; // -1 when absent

private:
    Chart() = default;
    std::vector<CoordAxis> axes_;
    std::vector<Eigen::MatrixXcd> deriv_;
    std::vector<std::size_t> strides_;
    std::size_t npoints_ = 1;
    double cellvol_ = 1.0;
};

using ChartPtr = std::shared_ptr<const Chart>;

} // namespace fiskit
