#include "ar3/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ar3 {

using nlohmann::json;

namespace {

json vec_to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vec_from_json(const json& a) {
  if (!a.is_array()) throw std::invalid_argument("json: expected array");
  Vector v(static_cast<int>(a.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = a.at(i).get<double>();
  return v;
}

json mat_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix mat_from_json(const json& a) {
  if (!a.is_array() || a.empty()) throw std::invalid_argument("json: expected matrix");
  const int r = static_cast<int>(a.size());
  const int c = static_cast<int>(a.at(0).size());
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    const json& row = a.at(i);
    if (static_cast<int>(row.size()) != c)
      throw std::invalid_argument("json: ragged matrix");
    for (int j = 0; j < c; ++j) m(i, j) = row.at(j).get<double>();
  }
  return m;
}

json tensor_to_json(const SymTensor3& t) {
  json j;
  switch (t.kind()) {
    case SymTensor3::Kind::zero:
      j["kind"] = "zero";
      break;
    case SymTensor3::Kind::diagonal:
      j["kind"] = "diagonal";
      j["t"] = vec_to_json(t.diag());
      break;
    case SymTensor3::Kind::lowrank: {
      j["kind"] = "lowrank";
      json fac = json::array();
      for (int k = 0; k < t.factors().cols(); ++k)
        fac.push_back(vec_to_json(t.factors().col(k)));
      j["factors"] = std::move(fac);
      break;
    }
    case SymTensor3::Kind::dense:
      j["kind"] = "dense";
      j["entries"] = t.entries();
      break;
  }
  return j;
}

SymTensor3 tensor_from_json(const json& j, int n) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return SymTensor3::zero(n);
  if (kind == "diagonal") return SymTensor3::diagonal(vec_from_json(j.at("t")));
  if (kind == "lowrank") {
    const json& fac = j.at("factors");
    if (!fac.is_array() || fac.empty())
      throw std::invalid_argument("json: lowrank needs factors");
    Matrix f(n, static_cast<int>(fac.size()));
    for (int k = 0; k < f.cols(); ++k) f.col(k) = vec_from_json(fac.at(k));
    return SymTensor3::lowrank(std::move(f));
  }
  if (kind == "dense")
    return SymTensor3::dense(n, j.at("entries").get<std::vector<double>>());
  throw std::invalid_argument("json: unknown tensor kind " + kind);
}

json metric_to_json(const Metric& w) {
  if (w.is_identity()) return json("identity");
  return mat_to_json(w.matrix());
}

Metric metric_from_json(const json& j, int n) {
  if (j.is_string()) {
    if (j.get<std::string>() == "identity") return Metric::identity(n);
    throw std::invalid_argument("json: unknown metric " + j.get<std::string>());
  }
  return Metric(mat_from_json(j));
}

std::string dump(const json& j, int indent) {
  return indent > 0 ? j.dump(indent) : j.dump();
}

}  // namespace

std::string to_json(const QuarticModel& m, int indent) {
  json j;
  j["n"] = m.dim();
  j["f0"] = m.f0;
  j["g"] = vec_to_json(m.g);
  j["H"] = mat_to_json(m.H);
  j["tensor"] = tensor_to_json(m.T);
  j["sigma"] = m.sigma;
  j["W"] = metric_to_json(m.W);
  return dump(j, indent);
}

QuarticModel model_from_json(const std::string& text) {
  json j = json::parse(text);
  const int n = j.at("n").get<int>();
  QuarticModel m{j.at("f0").get<double>(), vec_from_json(j.at("g")),
                 mat_from_json(j.at("H")), tensor_from_json(j.at("tensor"), n),
                 j.at("sigma").get<double>(), metric_from_json(j.at("W"), n)};
  m.validate();
  if (m.dim() != n) throw std::invalid_argument("json: n mismatch");
  return m;
}

std::string to_json(const SqrModel& m, int indent) {
  json j;
  j["n"] = static_cast<int>(m.g.size());
  j["f0"] = m.f0;
  j["g"] = vec_to_json(m.g);
  j["H"] = mat_to_json(m.H);
  j["t"] = vec_to_json(m.t);
  j["sig"] = vec_to_json(m.sig);
  return dump(j, indent);
}

SqrModel sqr_from_json(const std::string& text) {
  json j = json::parse(text);
  SqrModel m{j.at("f0").get<double>(), vec_from_json(j.at("g")),
             mat_from_json(j.at("H")), vec_from_json(j.at("t")),
             vec_from_json(j.at("sig"))};
  m.validate();
  return m;
}

std::string to_json(const OptimalityReport& r, int indent) {
  json j;
  j["first_order_residual"] = r.first_order_residual;
  j["local2_min_eig"] = r.local2_min_eig;
  j["necessary_min_eig"] = r.necessary_min_eig;
  j["sufficient_min_eig"] = r.sufficient_min_eig;
  j["lambda_w_used"] = r.lambda_w_used;
  j["tol"] = r.tol;
  j["first_order_ok"] = r.first_order_ok;
  j["local2_ok"] = r.local2_ok;
  j["necessary_ok"] = r.necessary_ok;
  j["sufficient_ok"] = r.sufficient_ok;
  return dump(j, indent);
}

std::string point_to_json(const Vector& s, int indent) {
  json j;
  j["s"] = vec_to_json(s);
  return dump(j, indent);
}

Vector point_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.is_array()) return vec_from_json(j);
  return vec_from_json(j.at("s"));
}

std::string to_json(const DtmResult& r, int indent) {
  json j;
  j["s"] = vec_to_json(r.s);
  j["value"] = r.value;
  j["grad_norm"] = r.grad_norm;
  j["status"] = r.status == DtmStatusKind::converged ? "converged" : "max_iterations";
  j["iterations_successful"] = r.trace.successful;
  j["iterations_total"] = r.trace.total;
  j["function_evals"] = r.trace.function_evals;
  j["derivative_evals"] = r.trace.derivative_evals;
  j["cholesky_count"] = r.trace.cholesky_count;
  j["safeguards"] = r.trace.safeguards;
  json iters = json::array();
  for (const DtmIterRecord& it : r.trace.iterations) {
    json ji;
    ji["index"] = it.index;
    ji["d"] = it.d;
    ji["sigma_d"] = it.sigma_d;
    ji["rho"] = std::isfinite(it.rho) ? it.rho : -1e308;
    ji["beta"] = it.beta;
    ji["step_norm"] = it.step_norm;
    ji["tag"] = it.tag == IterTag::very_successful ? "very_successful"
                : it.tag == IterTag::successful    ? "successful"
                                                   : "unsuccessful";
    ji["terminal"] = it.terminal;
    ji["decrease"] = it.decrease;
    ji["used_safeguard"] = it.used_safeguard;
    ji["secular_status"] = it.secular_status;
    ji["secular_lambda"] = it.secular_lambda;
    ji["secular_residual"] = it.secular_residual;
    ji["lambda_gap"] = it.lambda_gap;
    ji["local2_min_eig"] = it.local2_min_eig;
    iters.push_back(std::move(ji));
  }
  j["trace"] = std::move(iters);
  return dump(j, indent);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out.flush()) throw std::runtime_error("write failed for " + path);
}

}  // namespace ar3
