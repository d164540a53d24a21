#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <json.hpp>

namespace seer {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using json = nlohmann::json;

// Matrices travel as row-major arrays of arrays.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                        std::string_view what);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j, Eigen::Index size, std::string_view what);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Canonical serialization used for every artifact file: two-space indent,
/// trailing newline, doubles at round-trip precision.
std::string dump_json(const json& j);

}  // namespace seer
