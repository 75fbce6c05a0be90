#ifndef COLLARLAB_REPORT_HPP
#define COLLARLAB_REPORT_HPP

#include <json.hpp>

#include "collarlab/metrics.hpp"

namespace collarlab {

/// Full-precision decimal form (17 significant digits), the CSV number format.
std::string g17(Real x);

nlohmann::json complex_json(Complex z);
/// Row-major flattened complex matrix with dimension header.
nlohmann::json matrix_json(const MatrixXcd& m);
/// Index-major flattened curvature tensor with dimension header.
nlohmann::json tensor_json(const CurvatureTensor& t);

}  // namespace collarlab

#endif
