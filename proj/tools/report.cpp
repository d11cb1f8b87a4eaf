#include "report.hpp"

#include <array>
#include <cstdio>
#include <stdexcept>

#include <openssl/evp.h>

#include "gaussent/cm_json.hpp"

namespace gaussent::cli {

Json AnalysisReport::to_json() const {
  Json j;
  j["command"] = command;
  j["input_digest"] = input_digest.empty() ? Json(nullptr) : Json(input_digest);
  j["results"] = results;
  j["warnings"] = warnings;
  return j;
}

AnalysisReport AnalysisReport::from_json(const Json& j) {
  AnalysisReport r;
  r.command = j.at("command").get<std::string>();
  if (!j.at("input_digest").is_null()) r.input_digest = j.at("input_digest").get<std::string>();
  r.results = j.at("results");
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string cm_digest(const CovarianceMatrix& cm) { return "sha256:" + sha256_hex(cm_to_json(cm)); }

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json values_json(const std::vector<double>& v) { return Json(v); }

}  // namespace gaussent::cli
