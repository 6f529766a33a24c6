#pragma once

#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "mmr/decimation.hpp"
#include "mmr/linear_pyramid.hpp"
#include "mmr/manifold.hpp"
#include "mmr/manifold_pyramid.hpp"

namespace mmr::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

std::string read_file(const std::string& path);
/// Writes atomically enough for our purposes: truncate then write.
void write_file(const std::string& path, std::string_view contents);

/// Fixed, locale-independent rendering; equal inputs give equal bytes.
std::string dump(const json& j);

json to_json(const Mask& mask);
Mask mask_from_json(const json& j);

json to_json(const DecimationMasks& masks);

// Points and tangent vectors: flat arrays, SPD matrices row-major.
json vector_json(const Eigen::VectorXd& v);
json vector_json(const Eigen::Vector3d& v);
json vector_json(const Eigen::Matrix3d& v);

Eigen::VectorXd point_from_json(const Euclidean& m, const json& j);
Eigen::Vector3d point_from_json(const Sphere& m, const json& j);
Eigen::Matrix3d point_from_json(const Spd3& m, const json& j);

Eigen::VectorXd tangent_from_json(const Euclidean& m, const json& j);
Eigen::Vector3d tangent_from_json(const Sphere& m, const json& j);
Eigen::Matrix3d tangent_from_json(const Spd3& m, const json& j);

/// Rows of numbers, one point per row. Lines starting with '#' are skipped.
std::vector<std::vector<double>> parse_csv(std::string_view text);

json to_json(const LinearPyramid& p);
LinearPyramid linear_pyramid_from_json(const json& j);

template <Manifold M>
json sequence_json(const ManifoldSequence<M>& c) {
  json pts = json::array();
  for (const auto& p : c) pts.push_back(vector_json(p));
  return {{"format_version", kFormatVersion}, {"manifold", std::string(M::name)}, {"points", pts}};
}

/// Accepts {"points": [...]} objects and bare arrays.
template <Manifold M>
ManifoldSequence<M> sequence_from_json(const M& m, const json& j) {
  const json& pts = j.is_object() ? j.at("points") : j;
  if (j.is_object() && j.contains("manifold") && j.at("manifold").get<std::string>() != M::name) {
    throw Error(ErrorCode::InvalidArgument, "sequence is on manifold '" + j.at("manifold").get<std::string>() +
                                                "', expected '" + std::string(M::name) + "'");
  }
  if (!pts.is_array()) throw Error(ErrorCode::InvalidArgument, "points must be an array");
  ManifoldSequence<M> out;
  out.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    try {
      out.push_back(point_from_json(m, pts[k]));
    } catch (const Error& e) {
      throw e.with_context("point " + std::to_string(k));
    }
  }
  return out;
}

template <Manifold M>
ManifoldSequence<M> sequence_from_rows(const M& m, const std::vector<std::vector<double>>& rows) {
  ManifoldSequence<M> out;
  out.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    try {
      out.push_back(point_from_json(m, json(rows[k])));
    } catch (const Error& e) {
      throw e.with_context("row " + std::to_string(k + 1));
    }
  }
  return out;
}

template <Manifold M>
json to_json(const ManifoldPyramid<M>& p) {
  json coarse = json::array();
  for (const auto& c : p.coarse) coarse.push_back(vector_json(c));
  json details = json::array();
  for (const auto& layer : p.details) {
    json row = json::array();
    for (const auto& d : layer) row.push_back({{"base", vector_json(d.base)}, {"vec", vector_json(d.vec)}});
    details.push_back(std::move(row));
  }
  return {{"format_version", kFormatVersion},
          {"manifold", std::string(M::name)},
          {"coarse", std::move(coarse)},
          {"details", std::move(details)}};
}

template <Manifold M>
ManifoldPyramid<M> pyramid_from_json(const M& m, const json& j) {
  if (j.at("manifold").get<std::string>() != M::name) {
    throw Error(ErrorCode::InvalidArgument, "pyramid is on manifold '" + j.at("manifold").get<std::string>() +
                                                "', expected '" + std::string(M::name) + "'");
  }
  ManifoldPyramid<M> p;
  p.coarse = sequence_from_json(m, j.at("coarse"));
  std::size_t expected = p.coarse.size();
  for (const auto& row : j.at("details")) {
    expected *= 2;
    if (row.size() != expected) {
      throw Error(ErrorCode::ShapeMismatch, "detail layer " + std::to_string(p.details.size() + 1) + " has length " +
                                                std::to_string(row.size()) + ", expected " + std::to_string(expected));
    }
    auto& layer = p.details.emplace_back();
    for (const auto& d : row) layer.push_back({point_from_json(m, d.at("base")), tangent_from_json(m, d.at("vec"))});
  }
  return p;
}

}  // namespace mmr::io
