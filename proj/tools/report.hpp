#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gaussent/phasespace.hpp"

namespace gaussent::cli {

using Json = nlohmann::ordered_json;

/// Machine-readable result of one analysis command.
struct AnalysisReport {
  std::string command;
  /// "sha256:<hex>" of the canonical serialization of the input state, empty
  /// for commands that take no state.
  std::string input_digest;
  Json results = Json::object();
  std::vector<std::string> warnings;

  Json to_json() const;
  static AnalysisReport from_json(const Json& j);
};

std::string sha256_hex(const std::string& data);
std::string cm_digest(const CovarianceMatrix& cm);

Json matrix_json(const Matrix& m);
Json values_json(const std::vector<double>& v);

}  // namespace gaussent::cli
