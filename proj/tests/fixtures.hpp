#pragma once

// Shared structure fixtures for the unit and acceptance suites.

#include <cmath>
#include <numbers>

#include "fiskit/structure.hpp"

namespace fixtures {

using namespace fiskit;
inline const double PI = std::numbers::pi;

inline ChartPtr torus(int dim, int res) {
    std::vector<CoordAxis> axes;
    for (int a = 0; a < dim; ++a)
        axes.push_back({"x" + std::to_string(a + 1), 2.0 * PI, res});
    return Chart::make(axes);
}

/// Essentially real structure on T^2: V spanned by d/dx1.
inline StructurePtr essentially_real_t2(int res = 16) {
    auto c = torus(2, res);
    return FIStructure::make(c, {VectorField::coordinate_direction(c, 0)},
                             {VectorField::coordinate_direction(c, 1)});
}

/// Essentially real structure on T^3 with two leaf directions.
inline StructurePtr essentially_real_t3(int res = 8) {
    auto c = torus(3, res);
    return FIStructure::make(c,
                             {VectorField::coordinate_direction(c, 0),
                              VectorField::coordinate_direction(c, 1)},
                             {VectorField::coordinate_direction(c, 2)});
}

/// Complex structure on T^2 (z = x1 + i x2): V spanned by d/dzbar.
inline StructurePtr complex_t2(int res = 16) {
    auto c = torus(2, res);
    NormalForm nf;
    nf.z_pairs = {{0, 1}};
    return normal_structure(c, nf);
}

/// Levi flat structure generated by X = d1 + i(2+sin x1) d2 on T^2.
inline StructurePtr mizohata_free(int res = 16) {
    auto c = torus(2, res);
    auto ia = ScalarField::sample(c, [](const std::vector<double>& x) {
        return cplx(0.0, 2.0 + std::sin(x[0]));
    });
    VectorField X(c, {ScalarField::constant(c, 1.0), ia});
    return FIStructure::make(c, {X}, {VectorField::coordinate_direction(c, 1)});
}

/// Elliptic structure in normal form on T^3: z = x1 + i x2, t = x3.
inline StructurePtr elliptic_chart(int res = 16) {
    auto c = torus(3, res);
    NormalForm nf;
    nf.z_pairs = {{0, 1}};
    nf.t_axes = {2};
    return normal_structure(c, nf);
}

/// Levi flat CR structure on T^2 x S^1: V spanned by d/dzbar, leaves the tori
/// z = x1 + i x2 at fixed x3.
inline StructurePtr cr_product(int res = 8) {
    auto c = torus(3, res);
    NormalForm nf;
    nf.z_pairs = {{0, 1}};
    nf.y_axes = {2};
    return normal_structure(c, nf);
}

inline TwistForm zero_twist(const StructurePtr& S) {
    return check_twist(*S, Form(S->chart(), 1));
}

} // namespace fixtures
