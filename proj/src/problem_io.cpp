#include "degen/problem_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace degen {

using nlohmann::json;

namespace {

json complex_list(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}

json matrix_rows(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back({m(r, c).real(), m(r, c).imag()});
  return a;
}

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw ParseError(origin_ + ":" + field, what);
  }

  const json& member(const json& obj, const std::string& key, const std::string& field) const {
    if (!obj.is_object()) fail(field, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(field.empty() ? key : field + "." + key, "missing field");
    return *it;
  }

  double real(const json& j, const std::string& field) const {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
  }

  Complex complex(const json& j, const std::string& field) const {
    if (!j.is_array() || j.size() != 2) fail(field, "expected a [re, im] pair");
    return {real(j[0], field + "[0]"), real(j[1], field + "[1]")};
  }

  Vector vector(const json& j, int n, const std::string& field) const {
    if (!j.is_array()) fail(field, "expected an array of [re, im] pairs");
    if (static_cast<int>(j.size()) != n)
      fail(field, "expected " + std::to_string(n) + " entries, found " + std::to_string(j.size()));
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = complex(j[i], field + "[" + std::to_string(i) + "]");
    return v;
  }

  Matrix matrix(const json& j, int n, const std::string& field) const {
    if (!j.is_array() || static_cast<long>(j.size()) != static_cast<long>(n) * n)
      fail(field, "expected " + std::to_string(n * n) + " row-major [re, im] pairs");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m(r, c) = complex(j[r * n + c], field + "[" + std::to_string(r * n + c) + "]");
    return m;
  }

 private:
  std::string origin_;
};

ProblemInstance parse(const std::string& text, const std::string& origin, const RunConfig& cfg) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
    const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
    throw ParseError(origin + ":line " + std::to_string(line), e.what());
  }
  const Reader rd(origin);
  if (!j.is_object()) rd.fail("", "problem file must be a JSON object");
  const json& jd = rd.member(j, "dim", "");
  if (!jd.is_number_integer() || jd.get<long>() < 1 || jd.get<long>() > 100000)
    rd.fail("dim", "expected a positive integer");
  const int n = jd.get<int>();

  Matrix M = rd.matrix(rd.member(j, "M", ""), n, "M");
  Matrix L = rd.matrix(rd.member(j, "L", ""), n, "L");
  NormKind norm = NormKind::L2;
  if (j.contains("norm")) {
    const json& jn = j.at("norm");
    if (jn == "l2") norm = NormKind::L2;
    else if (jn == "linf") norm = NormKind::LInf;
    else rd.fail("norm", "expected \"l2\" or \"linf\"");
  }
  const double T = rd.real(rd.member(j, "T", ""), "T");
  Vector u0 = rd.vector(rd.member(j, "u0", ""), n, "u0");
  std::optional<Vector> v0, g0;
  if (j.contains("v0")) v0 = rd.vector(j.at("v0"), n, "v0");
  if (j.contains("g0")) g0 = rd.vector(j.at("g0"), n, "g0");

  const json& jf = rd.member(j, "f", "");
  const double mu = rd.real(rd.member(jf, "mu", "f"), "f.mu");
  const json& kind = rd.member(jf, "kind", "f");
  std::optional<Forcing> f;
  try {
    if (kind == "polynomial") {
      const json& jc = rd.member(jf, "coefficients", "f");
      if (!jc.is_array() || jc.empty()) rd.fail("f.coefficients", "expected a nonempty array");
      std::vector<Vector> coeffs;
      for (std::size_t k = 0; k < jc.size(); ++k)
        coeffs.push_back(rd.vector(jc[k], n, "f.coefficients[" + std::to_string(k) + "]"));
      f = Forcing::polynomial(std::move(coeffs), mu);
    } else if (kind == "samples") {
      const json& jt = rd.member(jf, "times", "f");
      const json& jv = rd.member(jf, "values", "f");
      if (!jt.is_array() || !jv.is_array() || jt.size() != jv.size())
        rd.fail("f", "times and values must be arrays of equal length");
      std::vector<double> times;
      std::vector<Vector> values;
      for (std::size_t k = 0; k < jt.size(); ++k) {
        times.push_back(rd.real(jt[k], "f.times[" + std::to_string(k) + "]"));
        values.push_back(rd.vector(jv[k], n, "f.values[" + std::to_string(k) + "]"));
      }
      f = Forcing::samples(std::move(times), std::move(values), mu);
    } else {
      rd.fail("f.kind", "expected \"polynomial\" or \"samples\"");
    }
  } catch (const InvalidArgument& e) {
    rd.fail("f", e.what());
  }

  std::optional<OperatorPair> pair;
  try {
    pair.emplace(std::move(M), std::move(L), norm, cfg);
  } catch (const InvalidArgument& e) {
    throw ValidationError(std::string("operator pair: ") + e.what());
  }
  ProblemInstance p{std::move(*pair), std::move(*f), std::move(u0), T, std::move(v0), std::move(g0)};
  p.validate(cfg);
  return p;
}

}  // namespace

ProblemInstance problem_from_json(const std::string& text, const RunConfig& cfg) {
  return parse(text, "<string>", cfg);
}

std::string problem_to_json(const ProblemInstance& prob) {
  const OperatorPair& pair = prob.pair;
  json j;
  j["dim"] = pair.dim();
  j["M"] = matrix_rows(pair.M());
  j["L"] = matrix_rows(pair.L());
  j["norm"] = pair.norm() == NormKind::L2 ? "l2" : "linf";
  j["T"] = prob.T;
  j["u0"] = complex_list(prob.u0);
  if (prob.v0) j["v0"] = complex_list(*prob.v0);
  if (prob.g0) j["g0"] = complex_list(*prob.g0);
  json f;
  if (prob.f.kind() == Forcing::Kind::Polynomial) {
    f["kind"] = "polynomial";
    json c = json::array();
    for (const auto& v : prob.f.poly_coeffs()) c.push_back(complex_list(v));
    f["coefficients"] = c;
  } else {
    f["kind"] = "samples";
    f["times"] = prob.f.sample_times();
    json v = json::array();
    for (const auto& x : prob.f.sample_values()) v.push_back(complex_list(x));
    f["values"] = v;
  }
  f["mu"] = prob.f.mu();
  j["f"] = f;
  return j.dump(1) + "\n";
}

ProblemInstance load_problem(const std::string& path, const RunConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open problem file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path, cfg);
}

void save_problem(const std::string& path, const ProblemInstance& prob) {
  save_report(path, problem_to_json(prob));
}

void save_report(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
  if (!out) throw InvalidArgument("write failed for " + path);
}

}  // namespace degen
