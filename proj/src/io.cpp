#include "glrr/io.hpp"

#include "glrr/error.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace glrr::io {

namespace {

constexpr std::array<char, 4> kGptsMagic = {'G', 'P', 'T', 'S'};
constexpr std::array<char, 4> kGramMagic = {'G', 'R', 'A', 'M'};

// Guards against absurd headers allocating before the truncation check fires.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 34;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFFu);
  out.write(reinterpret_cast<const char*>(b.data()), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
 public:
  Reader(std::istream& in, const char* what) : in_(in), what_(what) {}

  void magic(const std::array<char, 4>& expected) {
    std::array<char, 4> got{};
    read_bytes(got.data(), 4);
    if (got != expected) {
      throw FormatError(std::string(what_) + ": bad magic at offset 0, expected \"" +
                        std::string(expected.data(), 4) + "\"");
    }
  }

  std::uint64_t u64() {
    std::array<unsigned char, 8> b{};
    read_bytes(reinterpret_cast<char*>(b.data()), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::uint64_t offset() const { return offset_; }

  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw FormatError(std::string(what_) + ": trailing bytes after offset " +
                        std::to_string(offset_));
    }
  }

 private:
  void read_bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw FormatError(std::string(what_) + ": truncated at offset " +
                        std::to_string(offset_ + static_cast<std::uint64_t>(in_.gcount())));
    }
    offset_ += n;
  }

  std::istream& in_;
  const char* what_;
  std::uint64_t offset_ = 0;
};

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_gpts(std::ostream& out, const GrassmannSet& set) {
  out.write(kGptsMagic.data(), 4);
  put_u64(out, set.size());
  put_u64(out, static_cast<std::uint64_t>(set.ambient_dim()));
  put_u64(out, static_cast<std::uint64_t>(set.subspace_dim()));
  for (const auto& pt : set) {
    const Eigen::MatrixXd& b = pt.basis();
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      for (Eigen::Index r = 0; r < b.rows(); ++r) put_f64(out, b(r, c));
    }
  }
  if (!out) throw InputError("failed writing GPTS stream");
}

GrassmannSet read_gpts(std::istream& in) {
  Reader rd(in, "GPTS");
  rd.magic(kGptsMagic);
  const std::uint64_t n = rd.u64();
  const std::uint64_t d = rd.u64();
  const std::uint64_t p = rd.u64();
  if (n == 0 || d == 0 || p == 0 || p > d) {
    throw FormatError("GPTS: invalid header N=" + std::to_string(n) + " d=" + std::to_string(d) +
                      " p=" + std::to_string(p) + " at offset 4");
  }
  if (d * p > kMaxElements || n > kMaxElements / (d * p)) {
    throw FormatError("GPTS: header sizes too large at offset 4");
  }
  std::vector<GrassmannPoint> points;
  points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t start = rd.offset();
    Eigen::MatrixXd b(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(p));
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      for (Eigen::Index r = 0; r < b.rows(); ++r) b(r, c) = rd.f64();
    }
    try {
      points.emplace_back(std::move(b));
    } catch (const Error& e) {
      throw FormatError("GPTS: point " + std::to_string(i) + " at offset " +
                        std::to_string(start) + " is invalid: " + e.what());
    }
  }
  rd.expect_end();
  return GrassmannSet(std::move(points));
}

void write_gpts(const std::filesystem::path& path, const GrassmannSet& set) {
  auto out = open_out(path, true);
  write_gpts(out, set);
}

GrassmannSet read_gpts(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  return read_gpts(in);
}

void write_gram(std::ostream& out, const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InputError("GRAM container needs a square matrix");
  out.write(kGramMagic.data(), 4);
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) put_f64(out, m(r, c));
  }
  if (!out) throw InputError("failed writing GRAM stream");
}

Eigen::MatrixXd read_gram(std::istream& in) {
  Reader rd(in, "GRAM");
  rd.magic(kGramMagic);
  const std::uint64_t n = rd.u64();
  if (n == 0 || n > (std::uint64_t{1} << 20)) {
    throw FormatError("GRAM: invalid size N=" + std::to_string(n) + " at offset 4");
  }
  const auto sn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(sn, sn);
  for (Eigen::Index r = 0; r < sn; ++r) {
    for (Eigen::Index c = 0; c < sn; ++c) m(r, c) = rd.f64();
  }
  rd.expect_end();
  return m;
}

void write_gram(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path, true);
  write_gram(out, m);
}

Eigen::MatrixXd read_gram(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  return read_gram(in);
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        throw FormatError("CSV: unparsable value \"" + cell + "\" on line " +
                          std::to_string(line_no));
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError("CSV: line " + std::to_string(line_no) + " has " +
                        std::to_string(row.size()) + " columns, expected " +
                        std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("CSV: no data");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path, false);
  write_matrix_csv(out, m);
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_in(path, false);
  return read_matrix_csv(in);
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  if (path.extension() == ".csv") {
    write_matrix_csv(path, m);
  } else {
    write_gram(path, m);
  }
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  Eigen::MatrixXd m = path.extension() == ".csv" ? read_matrix_csv(path) : read_gram(path);
  if (m.rows() != m.cols()) throw FormatError(path.string() + ": matrix is not square");
  return m;
}

void write_labels_csv(std::ostream& out, const std::vector<int>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

std::vector<int> read_labels_csv(std::istream& in) {
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    long idx = -1;
    long lab = -1;
    char extra = 0;
    if (std::sscanf(line.c_str(), "%ld,%ld%c", &idx, &lab, &extra) != 2) {
      throw FormatError("labels CSV: malformed line " + std::to_string(line_no));
    }
    if (idx != static_cast<long>(labels.size())) {
      throw FormatError("labels CSV: expected index " + std::to_string(labels.size()) +
                        " on line " + std::to_string(line_no));
    }
    labels.push_back(static_cast<int>(lab));
  }
  return labels;
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels) {
  auto out = open_out(path, false);
  write_labels_csv(out, labels);
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
  auto in = open_in(path, false);
  return read_labels_csv(in);
}

}  // namespace glrr::io
