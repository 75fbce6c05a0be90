#include "collarlab/report.hpp"

#include <cstdio>

namespace collarlab {

std::string g17(Real x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json matrix_json(const MatrixXcd& m) {
  nlohmann::json data = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) data.push_back(complex_json(m(i, j)));
  return nlohmann::json{{"dim", m.rows()}, {"data", data}};
}

nlohmann::json tensor_json(const CurvatureTensor& t) {
  nlohmann::json data = nlohmann::json::array();
  for (int idx = 0; idx < t.data.size(); ++idx) data.push_back(complex_json(t.data[idx]));
  return nlohmann::json{{"dim", t.n}, {"data", data}};
}

}  // namespace collarlab
