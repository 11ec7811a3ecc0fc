#include "scatlab/fields.hpp"

#include <cmath>

namespace scatlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::chart: return "chart error";
    case ErrorKind::singular_metric: return "singular metric";
    case ErrorKind::signature: return "signature mismatch";
    case ErrorKind::truncation: return "left chart domain";
    case ErrorKind::non_terminating: return "step count exceeded";
    case ErrorKind::tangency: return "ray tangent to boundary";
    case ErrorKind::no_lift: return "no lightlike lift";
    case ErrorKind::escape: return "ray escaped";
    case ErrorKind::conjugate_point: return "conjugate point";
    case ErrorKind::no_convergence: return "no convergence";
    case ErrorKind::precondition: return "precondition violated";
    case ErrorKind::normalization: return "zero normalization functional";
    case ErrorKind::not_positive_definite: return "not positive definite";
  }
  return "error";
}

ScalarField constant_scalar(double value) {
  ScalarField f;
  f.eval = [value](const Vec&) { return value; };
  f.gradient = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
  f.positive = value > 0.0;
  return f;
}

CovectorField zero_covector(int dim) {
  CovectorField w;
  w.dim = dim;
  w.eval = [dim](const Vec&) { return Vec(Vec::Zero(dim)); };
  w.jacobian = [dim](const Vec&) { return Mat(Mat::Zero(dim, dim)); };
  return w;
}

SymTwoTensorField zero_tensor(int dim) {
  return {dim, [dim](const Vec&) { return Mat(Mat::Zero(dim, dim)); }};
}

SymTwoTensorField metric_as_tensor(const MetricField& g) { return {g.dim, g.eval}; }

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double rel_step) {
  const double h = rel_step * std::max(1.0, x.norm());
  Vec grad(x.size());
  Vec xp = x, xm = x;
  for (int k = 0; k < x.size(); ++k) {
    xp(k) = x(k) + h;
    xm(k) = x(k) - h;
    grad(k) = (f(xp) - f(xm)) / (2.0 * h);
    xp(k) = xm(k) = x(k);
  }
  return grad;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double rel_step) {
  const double h = rel_step * std::max(1.0, x.norm());
  const int n = static_cast<int>(x.size());
  Mat jac(n, n);
  Vec xp = x, xm = x;
  for (int k = 0; k < n; ++k) {
    xp(k) = x(k) + h;
    xm(k) = x(k) - h;
    jac.row(k) = ((f(xp) - f(xm)) / (2.0 * h)).transpose();
    xp(k) = xm(k) = x(k);
  }
  return jac;
}

}  // namespace scatlab
