#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

using namespace reegeom;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using json = cli::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ree_geom");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "ree_geom_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_state(const std::string& name, const Matrix4c& m) {
  const fs::path path = scratch_dir() / name;
  std::ofstream(path) << cli::complex_matrix(m).dump();
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text, std::string* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(cell == "mu" ? 0.0 : cell == "nu" ? 1.0 : std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("decompose", "[cli]") {
  SECTION("Bell state") {
    const Run r = run({"decompose", write_state("bell.json", bell_state(1).matrix())});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK_THAT(j["g"][0][0].get<double>(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(j["g"][1][1].get<double>(), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(j["g"][2][2].get<double>(), WithinAbs(1.0, 1e-15));
    CHECK(j["ppt"] == false);
    CHECK(j["manifest"]["subcommand"] == "decompose");
  }
  SECTION("maximally mixed state") {
    const Run r = run({"decompose", write_state("mixed.json", Matrix4c::Identity() / 4.0)});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    for (int i = 0; i < 3; ++i) {
      CHECK(j["r"][i].get<double>() == 0.0);
      for (int k = 0; k < 3; ++k) CHECK(j["g"][i][k].get<double>() == 0.0);
    }
    CHECK_THAT(j["concurrence"].get<double>(), WithinAbs(0.0, 1e-15));
  }
  SECTION("round trip through reconstruct") {
    Rng rng(31);
    const DensityMatrix rho = random_state(rng);
    const std::string pauli = (scratch_dir() / "pauli.json").string();
    REQUIRE(run({"decompose", write_state("random.json", rho.matrix()), "--out", pauli}).code == 0);
    const Run r = run({"reconstruct", pauli});
    REQUIRE(r.code == 0);
    CHECK(max_abs(cli::matrix_from_json(json::parse(r.out)) - rho.matrix()) < 1e-12);
  }
  SECTION("invalid state") {
    const Run r = run({"decompose", write_state("bad.json", Matrix4c::Identity() * 0.3)});
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("trace") && ContainsSubstring("magnitude"));
  }
  SECTION("malformed file") {
    const fs::path path = scratch_dir() / "malformed.json";
    std::ofstream(path) << R"({"re": [[1, 0], [0, 0]]})";
    CHECK(run({"decompose", path.string()}).code == 2);
    CHECK(run({"decompose", (scratch_dir() / "missing.json").string()}).code == 2);
  }
}

TEST_CASE("css subcommand", "[cli]") {
  SECTION("VP state") {
    const Run r = run({"css", write_state("vp.json", vp_state(Vector3(0.5, 0.3, 0.2)).matrix())});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    const Matrix4c css = cli::matrix_from_json(j["css"]);
    CHECK_THAT(css(0, 0).real(), WithinAbs(0.55, 1e-12));
    CHECK_THAT(css(3, 3).real(), WithinAbs(0.45, 1e-12));
    CHECK(j["family"] == "GeneralizedVP");
    CHECK_THAT(j["ree"].get<double>(), WithinAbs(0.13130852860516207, 1e-12));
    CHECK(j["residuals"]["recovery_gap"].get<double>() < 1e-9);
  }
  SECTION("bits") {
    const Run r = run({"css", write_state("bell1.json", bell_state(1).matrix()), "--bits"});
    REQUIRE(r.code == 0);
    CHECK_THAT(json::parse(r.out)["ree"].get<double>(), WithinAbs(1.0, 1e-12));
  }
  SECTION("separable Horodecki state") {
    const Run r = run({"css", write_state("hsep.json", horodecki_state(Vector3(0.2, 0.4, 0.4)).matrix())});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["status"] == "separable");
    CHECK(j["ree"].get<double>() == 0.0);
  }
  SECTION("geometric method on a state outside the families") {
    Rng rng(4);
    DensityMatrix rho;
    do rho = random_state(rng, 2);
    while (is_ppt(rho));
    const std::string path = write_state("other.json", rho.matrix());
    CHECK(run({"css", path, "--method", "geometric"}).code == 3);
    const Run numeric = run({"css", path, "--method", "numeric"});
    REQUIRE(numeric.code == 0);
    CHECK(json::parse(numeric.out)["geometric"] == false);
  }
  SECTION("unknown method") {
    CHECK(run({"css", write_state("bell2.json", bell_state(1).matrix()), "--method", "magic"}).code == 2);
  }
}

TEST_CASE("surface subcommand", "[cli]") {
  const std::string a = (scratch_dir() / "mesh_a.csv").string(), b = (scratch_dir() / "mesh_b.csv").string();
  REQUIRE(run({"surface", "--body", "L", "--r", "0", "--s", "0", "--n", "12", "--out", a}).code == 0);
  REQUIRE(run({"surface", "--body", "L", "--r", "0", "--s", "0", "--n", "12", "--out", b}).code == 0);
  CHECK(slurp(a) == slurp(b));
  std::string header;
  const auto rows = csv_rows(slurp(a), &header);
  CHECK(header == "q1,q2,q3,sheet");
  REQUIRE_FALSE(rows.empty());
  for (const auto& row : rows) CHECK_THAT(std::abs(row[0]) + std::abs(row[1]) + std::abs(row[2]), WithinAbs(1.0, 1e-8));
  const json manifest = json::parse(slurp(a + ".manifest.json"));
  CHECK(manifest["subcommand"] == "surface");
  CHECK(manifest["flags"]["body"] == "L");

  CHECK(run({"surface", "--body", "T", "--r", "0.3", "--s", "0.3", "--n", "8", "--out", a}).code == 0);
  CHECK(run({"surface", "--body", "L", "--r", "0.5", "--s", "-0.5", "--n", "8", "--out", a}).code == 0);
  CHECK(run({"surface", "--body", "Q", "--r", "0", "--s", "0", "--out", a}).code == 2);
  CHECK(run({"surface", "--body", "T", "--r", "1.5", "--s", "0", "--out", a}).code == 2);
  CHECK(run({"surface", "--body", "T", "--r", "0", "--s", "0", "--n", "1", "--out", a}).code == 2);
}

TEST_CASE("sweep subcommand", "[cli]") {
  const std::string a = (scratch_dir() / "sweep_a.csv").string(), b = (scratch_dir() / "sweep_b.csv").string();
  SECTION("Bell-diagonal lines pass through (1, 1, -1)") {
    REQUIRE(run({"sweep", "--r", "0", "--s", "0", "--families", "4", "--xsteps", "6", "--seed", "7", "--out", a}).code == 0);
    std::string header;
    const auto rows = csv_rows(slurp(a), &header);
    CHECK(header == "family_id,x,t1,t2,t3,tau1,tau2,tau3,r,s");
    REQUIRE_FALSE(rows.empty());
    for (const auto& row : rows) {
      const Vector3 t(row[2], row[3], row[4]), tau(row[5], row[6], row[7]);
      CHECK((t - tau).cross(Vector3(1, 1, -1) - tau).norm() < 1e-8);
    }
  }
  SECTION("deterministic for a fixed seed") {
    REQUIRE(run({"sweep", "--r", "0.3", "--s", "0.3", "--families", "5", "--xsteps", "7", "--seed", "2", "--out", a}).code == 0);
    REQUIRE(run({"sweep", "--r", "0.3", "--s", "0.3", "--families", "5", "--xsteps", "7", "--seed", "2", "--out", b}).code == 0);
    CHECK(slurp(a) == slurp(b));
  }
  SECTION("no families gives a header-only file") {
    REQUIRE(run({"sweep", "--r", "0.3", "--s", "0.3", "--families", "0", "--out", a}).code == 0);
    CHECK(slurp(a) == "family_id,x,t1,t2,t3,tau1,tau2,tau3,r,s\n");
  }
}

TEST_CASE("verify subcommand", "[cli]") {
  const std::string report = (scratch_dir() / "report.json").string();
  const Run ok = run({"verify", "--suite", "revmap", "--seed", "3", "--out", report});
  CHECK(ok.code == 0);
  CHECK_THAT(ok.out, ContainsSubstring("[PASS] criterion 5"));
  CHECK(json::parse(slurp(report))["pass"] == true);

  const Run starved = run({"verify", "--suite", "oracle", "--iterations", "1", "--count", "1"});
  CHECK(starved.code == 1);
  CHECK_THAT(starved.out, ContainsSubstring("NotConverged"));

  CHECK(run({"verify", "--suite", "nope"}).code == 2);
}

TEST_CASE("help and usage errors", "[cli]") {
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK_THAT(help.out, ContainsSubstring("Exit codes"));
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}
