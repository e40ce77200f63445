#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "interpnet/cli.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = INTERPNET_TEST_DATA;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "interpnet");
  std::vector<const char*> argv;
  for (const std::string& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out;
  std::ostringstream err;
  const int code = interpnet::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "interpnet_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("fit and explain the four-point SQANN") {
  const fs::path model = scratch() / "four.json";
  const fs::path trace = scratch() / "trace.csv";
  const Run fit = run({"fit", "--model", "sqann", "--data", (kData / "four_points.csv").string(), "--out",
                       model.string(), "--trace", trace.string()});
  REQUIRE(fit.code == 0);
  CHECK(fit.err.find("2 layers, 4 nodes") != std::string::npos);
  std::ifstream in(trace);
  std::string header;
  std::getline(in, header);
  CHECK(header == "kind,sample_index,layer,step,destroyed_layers,returned_indices");

  const Run strong = run({"explain", "--model-file", model.string(), "--input", "-1.25,-1"});
  REQUIRE(strong.code == 0);
  CHECK(strong.out.find("prediction: 0\n") == 0);
  CHECK(strong.out.find("strong activation: layer 2, node 2, sample 4, α=0") != std::string::npos);

  const Run interp = run({"explain", "--model-file", model.string(), "--input", "1.25,1.25"});
  REQUIRE(interp.code == 0);
  CHECK(interp.out.find("interpolated (ood suspect):") != std::string::npos);

  const Run pred = run({"predict", "--model-file", model.string(), "--input", "1,1.2", "--input", "-1.2,-1.2"});
  CHECK(pred.code == 0);
  CHECK(pred.out == "1\n0\n");
}

TEST_CASE("fit and predict the staircase TNN") {
  const fs::path model = scratch() / "steps.json";
  const Run fit = run({"fit", "--model", "tnn", "--data", (kData / "three_steps.csv").string(), "--a", "5",
                       "--out", model.string()});
  REQUIRE(fit.code == 0);
  CHECK(fit.err.find("error bound 0.0803142") != std::string::npos);
  const Run pred = run({"predict", "--model-file", model.string(), "--input", "0.75"});
  CHECK(pred.code == 0);
  CHECK(std::stod(pred.out) == doctest::Approx(1.50004539169).epsilon(1e-10));
  const Run expl = run({"explain", "--model-file", model.string(), "--input", "0.75"});
  CHECK(expl.code == 0);
  CHECK(expl.out.find("activation pattern: on on half") != std::string::npos);
}

TEST_CASE("absorb via the command line writes a report") {
  const fs::path report = scratch() / "report.csv";
  const fs::path model = scratch() / "absorbed.json";
  const Run r = run({"absorb", "--data", (kData / "four_points.csv").string(), "--model", "sqann", "--external",
                     (kData / "four_points.csv").string(), "--epsilon", "0.1", "--report", report.string(), "--out",
                     model.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(report));
  CHECK(fs::exists(model));
}

TEST_CASE("exit codes") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"fit", "--model", "tnn"}).code == 1);
  CHECK(run({"fit", "--model", "mlp", "--data", "x.csv"}).code == 1);
  CHECK(run({"fit", "--model", "tnn", "--data", (kData / "missing.csv").string()}).code == 2);
  // Two dimensional input cannot be put on a line.
  const Run dim = run({"fit", "--model", "tnn", "--data", (kData / "four_points.csv").string(), "--out",
                       (scratch() / "bad.json").string()});
  CHECK(dim.code == 2);
  CHECK(dim.err.find("data error") == 0);

  const fs::path clash = scratch() / "clash.csv";
  std::ofstream(clash) << "x,y\n0,1\n0,2\n";
  const Run sq = run({"fit", "--model", "sqann", "--data", clash.string(), "--out", (scratch() / "c.json").string()});
  CHECK(sq.code == 3);
  CHECK(sq.err.find("construction error") == 0);

  CHECK(run({"predict", "--model-file", (scratch() / "nope.json").string(), "--input", "1"}).code == 2);
  CHECK(run({"experiment", "--spec", (scratch() / "nope.json").string()}).code == 2);
}
