#ifndef SCATLAB_FIELDS_HPP
#define SCATLAB_FIELDS_HPP

#include "scatlab/types.hpp"

#include <functional>
#include <optional>

namespace scatlab {

enum class Signature { lorentzian, riemannian };

// Chart-local symmetric metric tensor. `deriv` is optional; when absent the
// Christoffel symbols fall back to central finite differences.
struct MetricField {
  int dim = 0;
  Signature signature = Signature::riemannian;
  std::function<Mat(const Vec&)> eval;
  std::function<MetricDerivative(const Vec&)> deriv;
  // Chart domain; an empty predicate means the whole coordinate space.
  std::function<bool(const Vec&)> domain;

  bool in_domain(const Vec& x) const { return !domain || domain(x); }
  bool has_deriv() const { return static_cast<bool>(deriv); }
};

struct ScalarField {
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> gradient;  // optional
  bool positive = false;                    // declared positive (conformal factors)

  double operator()(const Vec& x) const { return eval(x); }
};

// One-form field. jacobian(x)(k, j) = d_k omega_j, optional.
struct CovectorField {
  int dim = 0;
  std::function<Vec(const Vec&)> eval;
  std::function<Mat(const Vec&)> jacobian;

  Vec operator()(const Vec& x) const { return eval(x); }
};

struct SymTwoTensorField {
  int dim = 0;
  std::function<Mat(const Vec&)> eval;

  Mat operator()(const Vec& x) const { return eval(x); }
};

// Constant-valued helpers used throughout scenarios and tests.
ScalarField constant_scalar(double value);
CovectorField zero_covector(int dim);
SymTwoTensorField zero_tensor(int dim);
SymTwoTensorField metric_as_tensor(const MetricField& g);

// Central-difference gradient of a scalar field, step 1e-5 * max(1, |x|).
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double rel_step = 1e-5);
// Central-difference jacobian J(k, j) = d_k v_j of a covector field.
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double rel_step = 1e-5);

inline Vec gradient_of(const ScalarField& f, const Vec& x) {
  return f.gradient ? f.gradient(x) : fd_gradient(f.eval, x);
}
inline Mat jacobian_of(const CovectorField& w, const Vec& x) {
  return w.jacobian ? w.jacobian(x) : fd_jacobian(w.eval, x);
}

}  // namespace scatlab

#endif  // SCATLAB_FIELDS_HPP
