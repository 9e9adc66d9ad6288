#pragma once

#include "fiskit/field.hpp"

namespace fiskit::oracle {

/// Reference computations kept independent of the operator pipeline: direct
/// discrete-Fourier sums and closed forms only. The tests and the `oracle`
/// CLI subcommand compare the production path against these.

/// Effective wavenumber of DFT bin r at resolution N under the symmetric
/// convention (half-band bin carries derivative 0).
int wavenumber(int r, int N);

/// Forward DFT by direct summation: mode coefficients indexed like the grid.
Eigen::VectorXcd dft(const ScalarField& f);
ScalarField idft(const ChartPtr& chart, const Eigen::VectorXcd& modes);

/// Symbol of d/dzbar = (d_1 + i d_2)/2 on mode (k1, k2) of the square torus.
cplx dzbar_symbol(int k1, int k2);

/// Solve -dzbar u = f on T^2 modewise; kernel modes of the symbol are dropped
/// (minimum-norm representative). Returns u and the norm of the dropped part.
std::pair<ScalarField, double> t2_dolbeault_solve(const ScalarField& f);

/// Kernel dimension counts for the leafwise complexes at level 0.
/// Essentially real T^2 foliated along axis 1 with twist [theta](X) = c.
long long t2_foliation_defect(int res1, int res2, cplx c);
/// Levi flat CR product T^2 x S^1: leafwise holomorphic mode count times the
/// number of leaves.
long long cr_product_defect(int res12, int res3);

/// Closed-form commutator coefficient of the Mizohata-type frame
/// X = d1 + i(2 + sin x1) d2: d = e = -cos(x1)/(2 + sin x1).
double mizohata_commutator(double x1);

/// The eigenvalue floor blend evaluated by its closed form (documentation
/// constant for the `oracle` subcommand).
double eigenfloor_reference(double t, double delta);

} // namespace fiskit::oracle
