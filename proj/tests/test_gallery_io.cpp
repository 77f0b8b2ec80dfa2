#include "oracles.hpp"

#include "degen/problem_io.hpp"
#include "degen/regularity.hpp"
#include "degen/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace degen;

namespace {

bool in_region(Complex z, double alpha, double c) {
  return z.real() >= -c * std::pow(std::abs(z.imag()) + 1.0, alpha);
}

std::string tmp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "degen_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = R"({
  "dim": 1,
  "M": [[1, 0]],
  "L": [[-1, 0]],
  "norm": "l2",
  "T": 1,
  "u0": [[1, 0]],
  "f": {"kind": "polynomial", "coefficients": [[[1, 0]]], "mu": 1}
})";

}  // namespace

TEST_CASE("gallery names and errors") {
  CHECK(gallery_names().size() == 4);
  CHECK_THROWS_AS(build_gallery("no-such-problem"), UnknownEntry);
  CHECK_THROWS_AS(build_gallery("analytic-diag-1"), InvalidArgument);
  CHECK_THROWS_AS(build_gallery("degenerate-heat-x"), Error);
}

TEST_CASE("singular-mass-2 matrices") {
  const auto e = build_gallery("singular-mass-2");
  Matrix M = Matrix::Zero(2, 2), L = Matrix::Zero(2, 2);
  M(0, 0) = 1.0;
  L(0, 0) = -1.0;
  L(1, 1) = -2.0;
  CHECK((e.problem.pair.M() - M).norm() == 0.0);
  CHECK((e.problem.pair.L() - L).norm() == 0.0);
  const auto& fx = oracle::fixture("singular-mass-2");
  CHECK(std::abs(fx.cert.beta - 1.0) <= 0.05);
}

TEST_CASE("builders are deterministic and entries valid") {
  for (const auto& name : gallery_names()) {
    const auto a = build_gallery(name);
    const auto b = build_gallery(name);
    CHECK((a.problem.pair.M() - b.problem.pair.M()).norm() == 0.0);
    CHECK((a.problem.pair.L() - b.problem.pair.L()).norm() == 0.0);
    CHECK_NOTHROW(a.problem.validate());
    CHECK(a.problem.has_consistency());
    CHECK(a.expected.has_value());
  }
}

TEST_CASE("analytic-diag-4: beta one and A e^{tA} ~ 1/(et)") {
  const auto e = build_gallery("analytic-diag-4");
  const auto cert = oracle::certify_default(e.problem.pair);
  CHECK(std::abs(cert.beta - 1.0) <= 0.05);
  // sup_k k e^{-kt} over k = 1..4 equals 1/(et) for t in [1/4, 1].
  const auto fit = blowup_fit(e.problem.pair, cert, 1, std::nullopt, 0.3, 0.9, 8);
  CHECK(std::abs(fit.exponent + 1.0) <= 0.1);
}

TEST_CASE("heat-16 pencil is solvable on the probe grid of a thin region") {
  const auto e = build_gallery("degenerate-heat-16");
  const oracle::PencilEigen eig(e.problem.pair.M(), e.problem.pair.L());
  for (Complex mu : eig.finite_eigenvalues()) CHECK_FALSE(in_region(mu, 1.0, 0.05));
  CHECK_NOTHROW(probe_resolvent_norms(e.problem.pair, RegionProbePlan{}, 1.0, 0.05));
}

TEST_CASE("certified regions exclude the pencil spectrum") {
  for (const auto& name : gallery_names()) {
    const auto& fx = oracle::fixture(name);
    const oracle::PencilEigen eig(fx.entry.problem.pair.M(), fx.entry.problem.pair.L());
    for (Complex mu : eig.finite_eigenvalues()) CHECK_FALSE(in_region(mu, fx.cert.alpha, fx.cert.c));
    REQUIRE(fx.entry.expected);
    CHECK(std::abs(fx.cert.alpha - fx.entry.expected->alpha) <= 0.05);
    CHECK(std::abs(fx.cert.beta - fx.entry.expected->beta) <= 0.05);
  }
}

TEST_CASE("heat: certificates agree across two resolutions") {
  const auto& a = oracle::fixture("degenerate-heat-16");
  const auto& b = oracle::fixture("degenerate-heat-32");
  CHECK(std::abs(a.cert.beta - b.cert.beta) <= 0.05);
}

TEST_CASE("minimal problem file loads and solves") {
  const auto prob = problem_from_json(kMinimal);
  CHECK(prob.pair.dim() == 1);
  const auto cert = oracle::certify_default(prob.pair);
  const auto tr = solve(prob, cert, {0.0, 0.5, 1.0}, false);
  // Mv = e^{-t} + (1 - e^{-t}) = 1.
  CHECK(std::abs(tr.Mv[2](0) - 1.0) < 1e-7);
}

TEST_CASE("file with u0 outside the range of M") {
  const std::string text = R"({"dim": 2, "M": [[1,0],[0,0],[0,0],[0,0]], "L": [[-1,0],[0,0],[0,0],[-2,0]],
    "norm": "l2", "T": 1, "u0": [[1,0],[1,0]], "f": {"kind": "polynomial", "coefficients": [[[0,0],[0,0]]], "mu": 1}})";
  try {
    problem_from_json(text);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("u0") != std::string::npos);
  }
}

TEST_CASE("parse errors carry a location") {
  try {
    problem_from_json("{\n  \"dim\": 1,\n  \"M\": [[1, 0]\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.where().find("line") != std::string::npos);
  }
  try {
    problem_from_json(R"({"dim": 1, "M": [[1, 0]], "L": [["x", 0]], "norm": "l2", "T": 1, "u0": [[1,0]],
      "f": {"kind": "polynomial", "coefficients": [], "mu": 1}})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.where().find("L") != std::string::npos);
  }
  CHECK_THROWS_AS(load_problem(tmp_path("missing.json")), ParseError);
}

TEST_CASE("gallery save/load round trip is bit-identical") {
  for (const auto& name : gallery_names()) {
    const auto e = build_gallery(name);
    const auto path = tmp_path(name + ".json");
    save_problem(path, e.problem);
    const auto back = load_problem(path);
    CHECK((back.pair.M() - e.problem.pair.M()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.pair.L() - e.problem.pair.L()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.u0 - e.problem.u0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.T == e.problem.T);
    CHECK(back.f.mu() == e.problem.f.mu());
    REQUIRE(back.v0.has_value() == e.problem.v0.has_value());
    // A second save reproduces the file byte for byte.
    const auto path2 = tmp_path(name + ".2.json");
    save_problem(path2, back);
    CHECK(slurp(path) == slurp(path2));
  }
}

TEST_CASE("sampled forcing round trip") {
  const auto base = problem_from_json(kMinimal);
  std::vector<Vector> vals{Vector::Constant(1, 0.1), Vector::Constant(1, 1.0 / 3.0)};
  ProblemInstance p{base.pair, Forcing::samples({0.0, 0.7}, vals, 0.5), base.u0, 0.7, {}, {}};
  const auto back = problem_from_json(problem_to_json(p));
  CHECK(back.f.kind() == Forcing::Kind::Samples);
  CHECK(back.f.sample_times() == p.f.sample_times());
  CHECK(back.f.sample_values()[1](0) == p.f.sample_values()[1](0));
}

TEST_CASE("CSV and record formatting") {
  CsvTable t({"a", "b,c"});
  t.row().cell(0.1).cell("x\"y");
  t.row().cell(3).cell(1e-300);
  CHECK(t.str() == "a,\"b,c\"\n0.10000000000000001,\"x\"\"y\"\n3,1e-300\n");
  CsvTable short_row({"a", "b"});
  short_row.row().cell(1);
  CHECK_THROWS_AS(short_row.str(), InvalidArgument);
  Record r;
  r.add("k", 2).add("v", 0.5);
  CHECK(r.str() == "k: 2\nv: 0.5\n");
  const auto path = tmp_path("report.txt");
  save_report(path, "a\nb\n");
  CHECK(slurp(path) == "a\nb\n");
}
