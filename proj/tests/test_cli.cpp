#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "gaussent/cm_json.hpp"
#include "gaussent/multimode.hpp"
#include "gaussent/sharing.hpp"
#include "report.hpp"

using namespace gaussent;
using gaussent::cli::Json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string data_path(const std::string& name) {
  return (std::filesystem::path(GAUSSENT_TEST_DATA_DIR) / name).string();
}

std::string write_file(const std::string& name, const std::string& text) {
  const std::string path = data_path(name);
  std::ofstream(path) << text;
  return path;
}

std::string write_cm(const std::string& name, const CovarianceMatrix& cm) { return write_file(name, cm_to_json(cm)); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("validate") {
  const std::string vac = write_cm("vacuum.json", CovarianceMatrix::vacuum(2));
  const auto ok = run({"validate", vac});
  CHECK(ok.code == 0);
  const Json j = Json::parse(ok.out);
  CHECK(j["command"] == "validate");
  CHECK(j["results"]["physical"] == true);
  CHECK(j["input_digest"].get<std::string>().rfind("sha256:", 0) == 0);

  const std::string bad = write_file("unphysical.json", R"({"n_modes":1,"ordering":"xpxp","matrix":[[0.5,0],[0,0.5]]})");
  const auto no = run({"validate", bad});
  CHECK(no.code == 1);
  CHECK(Json::parse(no.out)["results"]["physical"] == false);
  CHECK(no.err.rfind("Unphysical:", 0) == 0);
}

TEST_CASE("exit codes and error names") {
  SUBCASE("domain errors exit 1 with the error name") {
    const auto purities = run({"classify", "--mu1", "1.5", "--mu2", "0.5", "--mu", "0.45"});
    CHECK(purities.code == 1);
    CHECK(purities.err.rfind("UnphysicalPurities:", 0) == 0);
    const std::string ghz = write_cm("ghz3.json", ghz_type_state({3, 0.5, 1.0}));
    const auto focus = run({"contangle", ghz, "--focus", "7"});
    CHECK(focus.code == 1);
    CHECK(focus.err.rfind("IndexOutOfRange:", 0) == 0);
    const std::string bad = write_file("unphysical.json", R"({"n_modes":1,"ordering":"xpxp","matrix":[[0.5,0],[0,0.5]]})");
    const auto spectrum = run({"spectrum", bad});
    CHECK(spectrum.code == 1);
    CHECK(spectrum.err.rfind("Unphysical:", 0) == 0);
  }
  SUBCASE("malformed input exits 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"classify", "--mu1", "abc", "--mu2", "0.5", "--mu", "0.4"}).code == 2);
    CHECK(run({"classify", "--mu1", "0.5"}).code == 2);
    const auto missing = run({"validate", data_path("does-not-exist.json")});
    CHECK(missing.code == 2);
    CHECK(missing.err.rfind("MalformedInput:", 0) == 0);
    const std::string broken = write_file("broken.json", R"({"n_modes":1,"ordering":"xpxp","matrix":[[1,0],[0)");
    CHECK(run({"spectrum", broken}).code == 2);
    const std::string wrong_order = write_file("order.json", R"({"n_modes":1,"ordering":"xxpp","matrix":[[1,0],[0,1]]})");
    CHECK(run({"spectrum", wrong_order}).code == 2);
  }
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("classify") {
  const auto o = run({"classify", "--mu1", "0.5", "--mu2", "0.5", "--mu", "0.45"});
  CHECK(o.code == 0);
  const Json j = Json::parse(o.out);
  CHECK(j["results"]["class"] == "Entangled");
  CHECK(j["results"]["thresholds"]["separable"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(Json::parse(run({"classify", "--mu1", "0.5", "--mu2", "0.5", "--mu", "0.3"}).out)["results"]["class"] ==
        "Separable");
}

TEST_CASE("teleport commands") {
  const auto o = run({"teleport", "optimize", "--parties", "3", "--rbar", "1", "--noise", "1"});
  CHECK(o.code == 0);
  const Json j = Json::parse(o.out);
  CHECK(j["results"]["fidelity"].get<double>() > 0.5);
  CHECK(j["results"]["converged"] == true);

  const auto sweep = run({"teleport", "sweep", "--parties-max", "5", "--rbar", "0.5"});
  CHECK(sweep.code == 0);
  const auto rows = lines(sweep.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "N,F_opt,E_T");
  CHECK(rows[1].rfind("2,", 0) == 0);
  CHECK(run({"teleport", "optimize", "--parties", "1", "--rbar", "1"}).code == 1);
}

TEST_CASE("CSV sweeps have fixed headers") {
  const auto block = run({"block-scan", "--modes", "6", "--squeezing", "0.5"});
  CHECK(block.code == 0);
  const auto rows = lines(block.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "k,log_negativity");
  const auto prom = run({"promiscuity-scan", "--steps", "3"});
  CHECK(prom.code == 0);
  CHECK(lines(prom.out).at(0) == "b,pairwise,residual");
}

TEST_CASE("make writes a state the other commands read") {
  const std::string path = data_path("made.json");
  const auto made = run({"make", "ghz", "--modes", "4", "--mixedness", "1.5", "-o", path});
  CHECK(made.code == 0);
  const auto loc = run({"localize", path, "--split", "2"});
  CHECK(loc.code == 0);
  const auto mono = run({"monogamy", path});
  CHECK(mono.code == 0);
  for (const auto& f : Json::parse(mono.out)["results"]["per_focus"]) CHECK(f["residual"].get<double>() >= -1e-6);
}

TEST_CASE("reports are deterministic and round-trip") {
  const std::string mixed = write_cm("traced.json", traced_ghz_state(3, 1, 0.6));
  const std::vector<std::vector<std::string>> commands{
      {"spectrum", mixed, "--transpose", "0"},
      {"analyze-two-mode", write_cm("pair.json", partial_trace(ghz_type_state({3, 0.6, 1.0}), {0, 1}))},
      {"contangle", mixed, "--focus", "1", "--seed", "11"},
      {"monogamy", mixed, "--seed", "5"},
      {"extremal", "--mu1", "0.6", "--mu2", "0.7", "--mu", "0.5"},
  };
  for (const auto& args : commands) {
    CAPTURE(args[0]);
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const Json j = Json::parse(a.out);
    CHECK(cli::AnalysisReport::from_json(j).to_json().dump(2) == j.dump(2));
  }
}

TEST_CASE("report numbers survive serialization exactly") {
  cli::AnalysisReport r;
  r.command = "test";
  r.results["third"] = 1.0 / 3.0;
  r.results["tiny"] = 5e-324;
  r.warnings.push_back("note");
  const Json again = Json::parse(r.to_json().dump());
  const auto back = cli::AnalysisReport::from_json(again);
  CHECK(back.results["third"].get<double>() == 1.0 / 3.0);
  CHECK(back.results["tiny"].get<double>() == 5e-324);
  CHECK(back.warnings == std::vector<std::string>{"note"});
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
