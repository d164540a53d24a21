#include "seer/json_util.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "seer/error.hpp"

namespace seer {

namespace {

double finite_number(const json& j, std::string_view what) {
  if (!j.is_number()) {
    throw Error(ErrorCode::BadModelFile, std::string(what) + ": expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::BadModelFile, std::string(what) + ": non-finite entry");
  }
  return v;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                        std::string_view what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw Error(ErrorCode::BadModelFile,
                std::string(what) + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::BadModelFile,
                  std::string(what) + ": row " + std::to_string(r) + " must have " +
                      std::to_string(cols) + " columns");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = finite_number(row[static_cast<std::size_t>(c)], what);
    }
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& j, Eigen::Index size, std::string_view what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
    throw Error(ErrorCode::BadModelFile,
                std::string(what) + ": expected " + std::to_string(size) + " entries");
  }
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    v[i] = finite_number(j[static_cast<std::size_t>(i)], what);
  }
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::Io, "short write to " + path.string());
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace seer
