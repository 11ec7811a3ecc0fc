#ifndef SCATLAB_TYPES_HPP
#define SCATLAB_TYPES_HPP

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace scatlab {

// Spacetime charts are at most 1+3 dimensional. Fixed maximum sizes keep
// every vector and matrix on the stack.
inline constexpr int kMaxDim = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// Coordinate partials of a metric: partials[k](i, j) = d_k g_ij.
struct MetricDerivative {
  std::array<Mat, kMaxDim> partials;
};

// Christoffel symbols of the second kind: symbols[k](i, j) = Gamma^k_ij.
struct Christoffel {
  std::array<Mat, kMaxDim> symbols;
  int dim = 0;
};

enum class ErrorKind {
  chart,
  singular_metric,
  signature,
  truncation,
  non_terminating,
  tangency,
  no_lift,
  escape,
  conjugate_point,
  no_convergence,
  precondition,
  normalization,
  not_positive_definite,
};

const char* to_string(ErrorKind kind);

// All numerical failures of the library surface as this exception; the kind
// lets callers (the CLI in particular) map failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Vec zeros(int dim) { return Vec::Zero(dim); }

inline Vec unit(int dim, int i) {
  Vec e = Vec::Zero(dim);
  e(i) = 1.0;
  return e;
}

}  // namespace scatlab

#endif  // SCATLAB_TYPES_HPP
