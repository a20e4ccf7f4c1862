#include "cpl/body_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "cpl/errors.hpp"
#include "json.hpp"

namespace cpl {

using nlohmann::json;

namespace {

json matrix_to_json(const Mat& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const json& j, int expect_cols = -1) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::ParseError, "expected matrix");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  if (expect_cols >= 0 && cols != expect_cols)
    fail(ErrorCode::ParseError, "matrix width mismatch");
  Mat M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols)
      fail(ErrorCode::ParseError, "ragged matrix");
    for (int c = 0; c < cols; ++c) M(i, c) = j[i][c].get<double>();
  }
  return M;
}

Vec vector_from_json(const json& j) {
  Vec v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string body_to_json(const ConvexBody& K) {
  json j;
  j["dim"] = K.dim();
  switch (K.kind()) {
    case RepKind::VPolytope:
      j["type"] = "vpolytope";
      j["data"]["vertices"] = matrix_to_json(K.vrep().vertices);
      break;
    case RepKind::HPolytope: {
      j["type"] = "hpolytope";
      json hs = json::array();
      const auto& h = K.hrep();
      for (int i = 0; i < h.normals.rows(); ++i) {
        json row;
        json a = json::array();
        for (int c = 0; c < h.normals.cols(); ++c) a.push_back(h.normals(i, c));
        row["a"] = std::move(a);
        row["b"] = h.offsets[i];
        hs.push_back(std::move(row));
      }
      j["data"]["halfspaces"] = std::move(hs);
      break;
    }
    case RepKind::Ellipsoid: {
      j["type"] = "ellipsoid";
      json c = json::array();
      for (int i = 0; i < K.dim(); ++i) c.push_back(K.erep().center[i]);
      j["data"]["center"] = std::move(c);
      j["data"]["shape"] = matrix_to_json(K.erep().shape);
      break;
    }
    case RepKind::BallCylinder:
      j["type"] = "ball_cylinder";
      j["data"]["ball_dim"] = K.crep().ball_dim;
      j["data"]["half_length"] = K.crep().half_length;
      break;
  }
  return j.dump(2) + "\n";
}

ConvexBody body_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("type") || !j.contains("data"))
    fail(ErrorCode::ParseError, "body file needs dim/type/data");
  const int dim = j["dim"].get<int>();
  const std::string type = j["type"].get<std::string>();
  const json& d = j["data"];
  try {
    if (type == "vpolytope") {
      return ConvexBody::vpolytope(matrix_from_json(d.at("vertices"), dim));
    }
    if (type == "hpolytope") {
      const json& hs = d.at("halfspaces");
      Mat A(static_cast<int>(hs.size()), dim);
      Vec b(static_cast<int>(hs.size()));
      for (size_t i = 0; i < hs.size(); ++i) {
        const Vec a = vector_from_json(hs[i].at("a"));
        if (a.size() != dim) fail(ErrorCode::ParseError, "halfspace width mismatch");
        A.row(static_cast<int>(i)) = a.transpose();
        b[static_cast<int>(i)] = hs[i].at("b").get<double>();
      }
      return ConvexBody::hpolytope(A, b);
    }
    if (type == "ellipsoid") {
      const Vec c = vector_from_json(d.at("center"));
      if (c.size() != dim) fail(ErrorCode::ParseError, "center width mismatch");
      return ConvexBody::ellipsoid(c, matrix_from_json(d.at("shape"), dim));
    }
    if (type == "ball_cylinder") {
      return ConvexBody::ball_cylinder(d.at("ball_dim").get<int>(),
                                       d.at("half_length").get<double>());
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("body schema: ") + e.what());
  }
  fail(ErrorCode::ParseError, "unknown body type: " + type);
}

ConvexBody load_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return body_from_json(ss.str());
}

void save_body(const ConvexBody& K, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ParseError, "cannot write " + path);
  out << body_to_json(K);
}

}  // namespace cpl
