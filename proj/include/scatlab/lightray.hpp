#ifndef SCATLAB_LIGHTRAY_HPP
#define SCATLAB_LIGHTRAY_HPP

#include "scatlab/geometry.hpp"

#include <vector>

namespace scatlab {

// Composite Simpson on equally spaced values; an odd interval count closes
// with the 3/8 rule on the last three intervals. Needs >= 2 intervals.
double simpson(const std::vector<double>& values, double h);

// Simpson over a uniformly sampled path of sample-wise integrand values.
double path_integral(const GeodesicPath& path,
                     const std::function<double(const PathSample&)>& integrand);

// Lf = int <f, gamma' (x) gamma'> over a lightlike path.
// Throws Error{precondition} when |speed_squared| > lightlike_tol * max(1, |v0|^2).
double light_ray_transform(const SymTwoTensorField& f, const GeodesicPath& path,
                           double lightlike_tol = 1e-8);

// Same integral without the lightlike precondition (X-ray transform along any
// geodesic).
double ray_transform(const SymTwoTensorField& f, const GeodesicPath& path);

// Covariant symmetrized differential (d^s v)_ij = 1/2 (v_i;j + v_j;i).
SymTwoTensorField sym_diff(const CovectorField& v, const MetricField& g);

// <v, gamma'> at the last sample minus at the first.
double endpoint_pairing_difference(const CovectorField& v, const GeodesicPath& path);

// max over rays of |L(d^s v)|. Requires v = 0 at every ray endpoint (to
// endpoint_tol), else Error{precondition}.
double kernel_potential_test(const CovectorField& v, const MetricField& g,
                             const std::vector<GeodesicPath>& rays, double endpoint_tol = 1e-10);

// max over rays of |L(c g)|.
double kernel_conformal_test(const ScalarField& c, const MetricField& g,
                             const std::vector<GeodesicPath>& rays);

// I[f, beta] = int <f, x' (x) x'> + int beta along a unit-speed base path.
// Throws Error{precondition} when | |x'|_h - 1 | > unit_tol at any sample.
double magnetic_linearized_transform(const SymTwoTensorField& f, const CovectorField& beta,
                                     const MetricField& h, const GeodesicPath& path,
                                     double unit_tol = 1e-8);

}  // namespace scatlab

#endif  // SCATLAB_LIGHTRAY_HPP
