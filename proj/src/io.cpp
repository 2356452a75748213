#include "qguess/io.hpp"

#include <fstream>
#include <sstream>

namespace qguess::io {

namespace {

Labels labels_from(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) fail(ErrorCode::ParseError, std::string("missing array '") + key + "'");
  Labels out;
  for (const auto& v : j.at(key)) {
    if (!v.is_string()) fail(ErrorCode::ParseError, std::string("labels in '") + key + "' must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

double number_from(const Json& v) {
  if (!v.is_number()) fail(ErrorCode::ParseError, "expected a number");
  return v.get<double>();
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, path + ": " + e.what());
  }
}

Pmf pmf_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::ParseError, "pmf must be an object");
  Labels labels = labels_from(j, "labels");
  if (!j.contains("probs") || !j.at("probs").is_array()) fail(ErrorCode::ParseError, "missing array 'probs'");
  std::vector<double> probs;
  for (const auto& v : j.at("probs")) probs.push_back(number_from(v));
  return validate_pmf<double>(std::move(labels), std::span<const double>(probs));
}

JointPmf joint_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::ParseError, "joint pmf must be an object");
  Labels xs = labels_from(j, "x_labels");
  Labels ys = labels_from(j, "y_labels");
  if (!j.contains("probs") || !j.at("probs").is_array()) fail(ErrorCode::ParseError, "missing array 'probs'");
  const auto& rows = j.at("probs");
  if (rows.size() != ys.size()) fail(ErrorCode::ParseError, "probs must have one row per y label");
  Matrix<double> w(static_cast<Eigen::Index>(ys.size()), static_cast<Eigen::Index>(xs.size()));
  for (std::size_t y = 0; y < rows.size(); ++y) {
    if (!rows[y].is_array() || rows[y].size() != xs.size())
      fail(ErrorCode::ParseError, "each probs row must have one entry per x label");
    for (std::size_t x = 0; x < xs.size(); ++x)
      w(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = number_from(rows[y][x]);
  }
  return validate_joint<double>(std::move(xs), std::move(ys), w);
}

bool is_joint_document(const Json& j) { return j.is_object() && j.contains("x_labels"); }

JointPmf source_from_json(const Json& j) {
  return is_joint_document(j) ? joint_from_json(j) : as_joint(pmf_from_json(j));
}

GuessingStrategy strategy_from_json(const Json& j, const Labels& x_labels) {
  if (!j.is_object() || !j.contains("ranks") || !j.at("ranks").is_array())
    fail(ErrorCode::ParseError, "strategy needs a 'ranks' array");
  Labels xs = j.contains("x_labels") ? labels_from(j, "x_labels") : x_labels;
  Labels ys = j.contains("y_labels") ? labels_from(j, "y_labels") : Labels{"_"};
  const auto& rows = j.at("ranks");
  if (rows.size() != ys.size()) fail(ErrorCode::ParseError, "ranks must have one row per y label");
  RankMatrix ranks(static_cast<Eigen::Index>(ys.size()), static_cast<Eigen::Index>(xs.size()));
  for (std::size_t y = 0; y < rows.size(); ++y) {
    if (!rows[y].is_array() || rows[y].size() != xs.size())
      fail(ErrorCode::ParseError, "each ranks row must have one entry per x label");
    for (std::size_t x = 0; x < xs.size(); ++x) {
      if (!rows[y][x].is_number_integer()) fail(ErrorCode::ParseError, "ranks must be integers");
      ranks(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = rows[y][x].get<int>();
    }
  }
  return GuessingStrategy(std::move(xs), std::move(ys), std::move(ranks));
}

SourceFamily family_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("members") || !j.at("members").is_array())
    fail(ErrorCode::ParseError, "family needs a 'members' array");
  std::vector<JointPmf> members;
  for (const auto& m : j.at("members")) members.push_back(source_from_json(m));
  return SourceFamily(std::move(members));
}

Json to_json(const Pmf& p) {
  Json j;
  j["labels"] = p.labels();
  j["probs"] = std::vector<double>(p.probs().begin(), p.probs().end());
  return j;
}

Json to_json(const JointPmf& jp) {
  Json j;
  j["x_labels"] = jp.x_labels();
  j["y_labels"] = jp.y_labels();
  Json rows = Json::array();
  for (Eigen::Index y = 0; y < jp.y_size(); ++y) {
    std::vector<double> row(jp.probs().row(y).begin(), jp.probs().row(y).end());
    rows.push_back(row);
  }
  j["probs"] = rows;
  return j;
}

Json to_json(const GuessingStrategy& g) {
  Json j;
  j["x_labels"] = g.x_labels();
  j["y_labels"] = g.y_labels();
  Json rows = Json::array();
  for (Eigen::Index y = 0; y < g.y_size(); ++y) {
    std::vector<int> row(g.ranks().row(y).begin(), g.ranks().row(y).end());
    rows.push_back(row);
  }
  j["ranks"] = rows;
  return j;
}

Json to_json(const MinimaxResult& r) {
  Json j;
  j["q_star"] = to_json(r.q_star);
  j["c_value"] = r.c_value;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["certificate_gap"] = r.certificate_gap;
  return j;
}

}  // namespace qguess::io
