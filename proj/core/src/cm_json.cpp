#include "gaussent/cm_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gaussent {

using nlohmann::json;

std::string cm_to_json(const CovarianceMatrix& cm, int indent) {
  const Matrix& m = cm.matrix();
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  json doc;
  doc["n_modes"] = cm.n_modes();
  doc["ordering"] = "xpxp";
  doc["matrix"] = std::move(rows);
  return doc.dump(indent);
}

CovarianceMatrix cm_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("covariance matrix document must be a JSON object");
  if (!doc.contains("n_modes") || !doc["n_modes"].is_number_integer()) {
    throw FormatError("missing integer field 'n_modes'");
  }
  if (!doc.contains("ordering") || doc["ordering"] != "xpxp") {
    throw FormatError("field 'ordering' must be \"xpxp\"");
  }
  if (!doc.contains("matrix") || !doc["matrix"].is_array()) {
    throw FormatError("missing array field 'matrix'");
  }
  const auto n_modes = doc["n_modes"].get<long long>();
  if (n_modes < 1) throw FormatError("'n_modes' must be positive");
  const auto dim = static_cast<std::size_t>(2 * n_modes);
  const json& rows = doc["matrix"];
  if (rows.size() != dim) {
    std::ostringstream os;
    os << "'matrix' has " << rows.size() << " rows, expected " << dim;
    throw FormatError(os.str());
  }
  Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != dim) {
      std::ostringstream os;
      os << "row " << i << " of 'matrix' must hold " << dim << " numbers";
      throw FormatError(os.str());
    }
    for (std::size_t j = 0; j < dim; ++j) {
      if (!row[j].is_number()) throw FormatError("'matrix' entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
  }
  return CovarianceMatrix(std::move(m));
}

CovarianceMatrix read_cm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return cm_from_json(buf.str());
}

void write_cm_file(const std::string& path, const CovarianceMatrix& cm) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << cm_to_json(cm, 2) << '\n';
}

}  // namespace gaussent
