#ifndef COLLARLAB_TYPES_HPP
#define COLLARLAB_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace collarlab {

using Real = double;
using Complex = std::complex<Real>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr Real kPi = 3.14159265358979323846264338327950288;

/// Bad chart/point/argument: the input lies outside the operation's domain.
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration: grid sizes, unknown keys, inconsistent options.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical stage failed (non-PD metric, singular solve, ...).
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Coefficient data violates a validation predicate; names the failing sum.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace collarlab

#endif
