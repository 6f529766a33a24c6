#include "mmr/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mmr::io {

namespace {

std::vector<double> numbers(const json& j, std::size_t expected, std::string_view what) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be an array");
  if (expected != 0 && j.size() != expected) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " needs " + std::to_string(expected) + " entries, got " +
                                                std::to_string(j.size()));
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " has a non-numeric entry");
    out.push_back(x.get<double>());
  }
  return out;
}

Eigen::Matrix3d matrix_from(const std::vector<double>& v) {
  Eigen::Matrix3d a;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) a(r, c) = v[static_cast<std::size_t>(3 * r + c)];
  }
  return a;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::InvalidArgument, "failed writing '" + path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json to_json(const Mask& mask) {
  return {{"first_index", mask.first_index()},
          {"coeffs", std::vector<double>(mask.coeffs().begin(), mask.coeffs().end())}};
}

Mask mask_from_json(const json& j) {
  return Mask(j.at("first_index").get<int>(), numbers(j.at("coeffs"), 0, "mask coefficients"));
}

json to_json(const DecimationMasks& m) {
  return {{"gamma", to_json(m.solution.gamma)},
          {"support_radius", m.solution.support_radius},
          {"decay_C", m.solution.decay_C},
          {"decay_lambda", m.solution.decay_lambda},
          {"residual", m.solution.residual},
          {"truncated", to_json(m.truncated)},
          {"zeta", to_json(m.zeta)},
          {"eta", m.eta}};
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }
json vector_json(const Eigen::Vector3d& v) { return std::vector<double>{v[0], v[1], v[2]}; }

json vector_json(const Eigen::Matrix3d& v) {
  std::vector<double> out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out.push_back(v(r, c));
  }
  return out;
}

Eigen::VectorXd point_from_json(const Euclidean& m, const json& j) {
  const auto v = numbers(j, static_cast<std::size_t>(m.dim()), "euclidean point");
  Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  m.validate(p);
  return p;
}

Eigen::Vector3d point_from_json(const Sphere& m, const json& j) {
  const auto v = numbers(j, 3, "S2 point");
  Eigen::Vector3d p(v[0], v[1], v[2]);
  m.validate(p);
  return p;
}

Eigen::Matrix3d point_from_json(const Spd3& m, const json& j) {
  const Eigen::Matrix3d p = matrix_from(numbers(j, 9, "SPD point"));
  m.validate(p);
  return p;
}

Eigen::VectorXd tangent_from_json(const Euclidean& m, const json& j) {
  const auto v = numbers(j, static_cast<std::size_t>(m.dim()), "euclidean vector");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::Vector3d tangent_from_json(const Sphere&, const json& j) {
  const auto v = numbers(j, 3, "S2 tangent vector");
  return {v[0], v[1], v[2]};
}

Eigen::Matrix3d tangent_from_json(const Spd3&, const json& j) {
  const Eigen::Matrix3d v = matrix_from(numbers(j, 9, "SPD tangent vector"));
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, v.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::InvalidArgument, "SPD tangent vector is not symmetric");
  }
  return v;
}

std::vector<std::vector<double>> parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string_view::npos) comma = line.size();
      std::string_view field = line.substr(pos, comma - pos);
      while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
      while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
      if (!field.empty() && field.front() == '+') field.remove_prefix(1);
      double x = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": cannot parse '" +
                                                    std::string(field) + "' as a number");
      }
      row.push_back(x);
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                                                  " columns, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const LinearPyramid& p) {
  return {{"format_version", kFormatVersion}, {"manifold", "linear"}, {"coarse", p.coarse}, {"details", p.details}};
}

LinearPyramid linear_pyramid_from_json(const json& j) {
  LinearPyramid p;
  p.coarse = numbers(j.at("coarse"), 0, "coarse");
  for (const auto& row : j.at("details")) p.details.push_back(numbers(row, 0, "detail layer"));
  return p;
}

}  // namespace mmr::io
