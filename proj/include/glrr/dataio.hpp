#pragma once

#include "glrr/manifold.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace glrr {

/// Grayscale images in [0, 1] (before noise), row-major within an image.
struct ImageDataset {
  std::size_t count = 0;
  int rows = 0;
  int cols = 0;
  std::vector<double> pixels;  // count * rows * cols
  std::vector<int> labels;

  std::size_t pixels_per_image() const {
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }
  double pixel(std::size_t image, int r, int c) const {
    return pixels[image * pixels_per_image() + static_cast<std::size_t>(r) * cols + c];
  }
};

inline constexpr std::uint32_t kIdxImagesMagic = 2051;
inline constexpr std::uint32_t kIdxLabelsMagic = 2049;

/// Parses an IDX image/label file pair (big-endian headers). Pixel bytes are
/// divided by 255. Throws FormatError naming the byte offset of the problem.
ImageDataset load_idx(std::istream& images, std::istream& labels);
ImageDataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// A same-class group of images, vectorized column-major into the columns of
/// `samples` (rows*cols x group_size).
struct ImageGroup {
  Eigen::MatrixXd samples;
  int label = 0;
  std::vector<std::size_t> members;  // indices into the source dataset
};

/// Per class (ascending), shuffles that class's images with a generator seeded
/// by `seed`, cuts floor(count / group_size) disjoint groups and drops the
/// remainder. Throws ParameterError for group_size < 1.
std::vector<ImageGroup> group_images(const ImageDataset& data, int group_size,
                                     std::uint64_t seed);

/// Adds i.i.d. N(0, sigma^2) to every pixel without clipping. sigma == 0
/// returns the input unchanged. Throws ParameterError for sigma < 0.
ImageDataset add_noise(const ImageDataset& data, double sigma, std::uint64_t seed);

struct SyntheticSpec {
  int clusters = 3;
  int per_cluster = 10;
  int d = 20;
  int p = 2;
  double angle = 0.1;  // radians, per-basis-vector rotation bound
  bool orthogonal_centers = false;  // centers span mutually orthogonal subspaces
};

struct SyntheticSet {
  GrassmannSet points;
  std::vector<int> labels;
};

/// Clusters of subspaces scattered around random centers. Each point rotates
/// every center basis vector by a uniform angle in [0, angle] toward a random
/// direction orthogonal to the center, then re-orthonormalizes. Throws
/// ParameterError for an invalid spec.
SyntheticSet generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Random d x p matrix with orthonormal columns.
Eigen::MatrixXd random_orthonormal(Eigen::Index d, Eigen::Index p, std::uint64_t seed);

}  // namespace glrr
