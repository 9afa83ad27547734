#pragma once

#include "glrr/clustering.hpp"
#include "glrr/manifold.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace glrr::io {

// Binary containers. All integers are 64-bit little-endian unsigned, all reals
// 64-bit little-endian IEEE-754, independent of the host byte order.
//
//   GPTS: "GPTS" N d p, then N*d*p reals, point-major, column-major per point.
//   GRAM: "GRAM" N, then N*N reals, row-major.

void write_gpts(std::ostream& out, const GrassmannSet& set);
GrassmannSet read_gpts(std::istream& in);
void write_gpts(const std::filesystem::path& path, const GrassmannSet& set);
GrassmannSet read_gpts(const std::filesystem::path& path);

void write_gram(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_gram(std::istream& in);
void write_gram(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_gram(const std::filesystem::path& path);

/// Full matrix, one row per line, 17 significant digits.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(std::istream& in);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Square matrix in whichever format the extension selects: ".csv" is text,
/// anything else the GRAM container.
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

/// "index,label" per line.
void write_labels_csv(std::ostream& out, const std::vector<int>& labels);
std::vector<int> read_labels_csv(std::istream& in);
void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels);
std::vector<int> read_labels_csv(const std::filesystem::path& path);

}  // namespace glrr::io
