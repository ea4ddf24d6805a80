#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "rlab/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rigidity-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rlab::cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "rlab_cli_unit";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == rlab::cli::kUsageError);
  CHECK(run({"bogus"}).code == rlab::cli::kUsageError);
  CHECK(run({"bracket", "--f", "sin(2pi*(q))"}).code == rlab::cli::kUsageError);
  const Result bad = run({"bracket", "--f", "sin(2pi*(q)", "--g", "q"});
  CHECK(bad.code == rlab::cli::kUsageError);
  CHECK(bad.err.find("parse error") != std::string::npos);
  CHECK(run({"--help"}).code == rlab::cli::kOk);
}

TEST_CASE("bracket from a field file") {
  const fs::path dir = scratch_dir();
  rlab::write_text_file(dir / "pair.txt", "F = sin(2pi*(q))\nG = sin(2pi*(p))\n");
  const std::string file = (dir / "pair.txt").string();
  const Result r = run({"bracket", "--f", file + ":F", "--g", file + ":G", "--n", "32", "--out",
                        (dir / "b.csv").string(), "--svg", (dir / "b.svg").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("max 39.478417604") != std::string::npos);
  const rlab::CsvTable t = rlab::parse_csv(rlab::read_text_file(dir / "b.csv"));
  CHECK(t.rows.size() == 32 * 32);
  CHECK(run({"plot", "--in", (dir / "b.csv").string(), "--out", (dir / "h.svg").string(), "--kind", "heatmap"}).code ==
        0);
  CHECK(run({"bracket", "--f", file + ":H", "--g", file}).code == rlab::cli::kUsageError);
}

TEST_CASE("flow exit codes") {
  const fs::path dir = scratch_dir();
  rlab::write_text_file(dir / "pts.csv", "q,p\n0.1,0.2\n");
  const std::string pts = (dir / "pts.csv").string();
  CHECK(run({"flow", "--h", "sin(2pi*(p))", "--points", pts, "--t", "0.5"}).code == 0);
  CHECK(run({"flow", "--h", "sin(2pi*(p))", "--points", pts, "--dt", "0.5"}).code == rlab::cli::kUsageError);
  const Result stiff = run({"flow", "--h", "50*sin(2pi*(8*q + 8*p))", "--points", pts, "--t", "0.1", "--dt", "1e-2",
                            "--stages", "1", "--fp-max-iters", "10"});
  CHECK(stiff.code == rlab::cli::kNumericError);
  CHECK(run({"flow", "--h", "q", "--points", (dir / "missing.csv").string()}).code == rlab::cli::kUsageError);
}

TEST_CASE("outputs are byte identical across runs") {
  const fs::path dir = scratch_dir();
  auto once = [&](const std::string& tag) {
    const Result r = run({"perturb-search", "--f", "sin(2pi*(q))", "--g", "sin(2pi*(p))", "--delta", "0.05",
                          "--budget", "100", "--seed", "5", "--out", (dir / (tag + ".csv")).string(), "--svg",
                          (dir / (tag + ".svg")).string()});
    REQUIRE(r.code == 0);
    return rlab::read_text_file(dir / (tag + ".csv")) + rlab::read_text_file(dir / (tag + ".svg"));
  };
  CHECK(once("a") == once("b"));
}
