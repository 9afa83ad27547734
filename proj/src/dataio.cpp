#include "glrr/dataio.hpp"

#include "glrr/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <string>

namespace glrr {

namespace {

class BigEndianReader {
 public:
  BigEndianReader(std::istream& in, std::string what) : in_(in), what_(std::move(what)) {}

  std::uint32_t u32() {
    std::array<unsigned char, 4> b{};
    read(reinterpret_cast<char*>(b.data()), 4);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
           (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
  }

  void read(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(in_.gcount());
    if (got != n) {
      throw FormatError(what_ + ": truncated at offset " + std::to_string(offset_ + got) +
                        " (needed " + std::to_string(n) + " more bytes)");
    }
    offset_ += n;
  }

  std::size_t offset() const { return offset_; }
  const std::string& what() const { return what_; }

 private:
  std::istream& in_;
  std::string what_;
  std::size_t offset_ = 0;
};

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (qr.matrixQR()(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = normal(rng);
  }
  return m;
}

}  // namespace

ImageDataset load_idx(std::istream& images, std::istream& labels) {
  BigEndianReader img(images, "IDX images");
  const std::uint32_t img_magic = img.u32();
  if (img_magic != kIdxImagesMagic) {
    throw FormatError("IDX images: bad magic " + std::to_string(img_magic) +
                      " at offset 0, expected " + std::to_string(kIdxImagesMagic));
  }
  const std::uint32_t count = img.u32();
  const std::uint32_t rows = img.u32();
  const std::uint32_t cols = img.u32();
  if (rows == 0 || cols == 0 || rows > 4096 || cols > 4096) {
    throw FormatError("IDX images: implausible image size " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " at offset 8");
  }

  BigEndianReader lab(labels, "IDX labels");
  const std::uint32_t lab_magic = lab.u32();
  if (lab_magic != kIdxLabelsMagic) {
    throw FormatError("IDX labels: bad magic " + std::to_string(lab_magic) +
                      " at offset 0, expected " + std::to_string(kIdxLabelsMagic));
  }
  const std::uint32_t lab_count = lab.u32();
  if (lab_count != count) {
    throw FormatError("IDX labels: count " + std::to_string(lab_count) +
                      " at offset 4 does not match image count " + std::to_string(count));
  }

  ImageDataset out;
  out.count = count;
  out.rows = static_cast<int>(rows);
  out.cols = static_cast<int>(cols);
  const std::size_t per = out.pixels_per_image();
  out.pixels.resize(per * count);
  std::vector<unsigned char> buf(per);
  for (std::size_t i = 0; i < count; ++i) {
    img.read(reinterpret_cast<char*>(buf.data()), per);
    for (std::size_t j = 0; j < per; ++j) out.pixels[i * per + j] = buf[j] / 255.0;
  }
  std::vector<unsigned char> lb(count);
  lab.read(reinterpret_cast<char*>(lb.data()), count);
  out.labels.assign(lb.begin(), lb.end());
  return out;
}

ImageDataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  std::ifstream fi(images, std::ios::binary);
  if (!fi) throw InputError("cannot open " + images.string());
  std::ifstream fl(labels, std::ios::binary);
  if (!fl) throw InputError("cannot open " + labels.string());
  return load_idx(fi, fl);
}

std::vector<ImageGroup> group_images(const ImageDataset& data, int group_size,
                                     std::uint64_t seed) {
  if (group_size < 1) throw ParameterError("group size must be positive");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.count; ++i) by_class[data.labels[i]].push_back(i);

  std::mt19937_64 rng(seed);
  const auto per = static_cast<Eigen::Index>(data.pixels_per_image());
  const auto gs = static_cast<std::size_t>(group_size);
  std::vector<ImageGroup> groups;
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t n_groups = members.size() / gs;
    for (std::size_t g = 0; g < n_groups; ++g) {
      ImageGroup grp;
      grp.label = label;
      grp.members.assign(members.begin() + static_cast<std::ptrdiff_t>(g * gs),
                         members.begin() + static_cast<std::ptrdiff_t>((g + 1) * gs));
      grp.samples.resize(per, group_size);
      for (int s = 0; s < group_size; ++s) {
        const std::size_t img = grp.members[static_cast<std::size_t>(s)];
        // column-major vectorization: pixel (r, c) -> c * rows + r
        for (int c = 0; c < data.cols; ++c) {
          for (int r = 0; r < data.rows; ++r) {
            grp.samples(static_cast<Eigen::Index>(c) * data.rows + r, s) = data.pixel(img, r, c);
          }
        }
      }
      groups.push_back(std::move(grp));
    }
  }
  return groups;
}

ImageDataset add_noise(const ImageDataset& data, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("noise sigma must be a finite non-negative number");
  }
  ImageDataset out = data;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (double& px : out.pixels) px += normal(rng);
  return out;
}

Eigen::MatrixXd random_orthonormal(Eigen::Index d, Eigen::Index p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return orthonormalize(gaussian_matrix(d, p, rng));
}

SyntheticSet generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.clusters < 1 || spec.per_cluster < 1) {
    throw ParameterError("synthetic spec needs at least one cluster and one point per cluster");
  }
  if (spec.p < 1 || spec.p > spec.d) throw ParameterError("synthetic spec needs 1 <= p <= d");
  if (!(spec.angle >= 0.0) || !std::isfinite(spec.angle)) {
    throw ParameterError("synthetic perturbation angle must be non-negative");
  }
  if (spec.orthogonal_centers && spec.clusters * spec.p > spec.d) {
    throw ParameterError("orthogonal centers need clusters * p <= d");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle_dist(0.0, spec.angle);
  const Eigen::Index d = spec.d;
  const Eigen::Index p = spec.p;

  Eigen::MatrixXd all_centers;
  if (spec.orthogonal_centers) {
    all_centers = orthonormalize(gaussian_matrix(d, p * spec.clusters, rng));
  }

  std::vector<GrassmannPoint> points;
  std::vector<int> labels;
  points.reserve(static_cast<std::size_t>(spec.clusters) * spec.per_cluster);
  for (int c = 0; c < spec.clusters; ++c) {
    const Eigen::MatrixXd center = spec.orthogonal_centers
                                       ? Eigen::MatrixXd(all_centers.middleCols(c * p, p))
                                       : orthonormalize(gaussian_matrix(d, p, rng));
    for (int i = 0; i < spec.per_cluster; ++i) {
      if (spec.angle == 0.0 || d == p) {
        points.emplace_back(center);
      } else {
        Eigen::MatrixXd dirs = gaussian_matrix(d, p, rng);
        dirs -= center * (center.transpose() * dirs);
        Eigen::MatrixXd moved(d, p);
        for (Eigen::Index j = 0; j < p; ++j) {
          const double theta = angle_dist(rng);
          const double nrm = dirs.col(j).norm();
          const Eigen::VectorXd u =
              nrm > 0.0 ? Eigen::VectorXd(dirs.col(j) / nrm) : Eigen::VectorXd::Zero(d);
          moved.col(j) = std::cos(theta) * center.col(j) + std::sin(theta) * u;
        }
        points.emplace_back(orthonormalize(moved));
      }
      labels.push_back(c);
    }
  }
  return SyntheticSet{GrassmannSet(std::move(points)), std::move(labels)};
}

}  // namespace glrr
