#include "glrr/error.hpp"
#include "glrr/io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

namespace glrr {
namespace {

std::string bytes_of(const GrassmannSet& set) {
  std::ostringstream out;
  io::write_gpts(out, set);
  return out.str();
}

std::uint64_t le_u64(const std::string& s, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[at + static_cast<std::size_t>(i)]);
  return v;
}

double le_f64(const std::string& s, std::size_t at) {
  const std::uint64_t u = le_u64(s, at);
  double d = 0.0;
  std::memcpy(&d, &u, 8);
  return d;
}

TEST(Gpts, LayoutIsLittleEndianPointMajorColumnMajor) {
  std::mt19937_64 rng(70);
  const auto set = testing::random_set(3, 4, 2, rng);
  const std::string b = bytes_of(set);
  ASSERT_EQ(b.size(), 4 + 24 + 3 * 4 * 2 * 8u);
  EXPECT_EQ(b.substr(0, 4), "GPTS");
  EXPECT_EQ(le_u64(b, 4), 3u);
  EXPECT_EQ(le_u64(b, 12), 4u);
  EXPECT_EQ(le_u64(b, 20), 2u);
  // point 1, column 1, row 2
  EXPECT_EQ(le_f64(b, 28 + 8 * (8 + 4 + 2)), set[1].basis()(2, 1));
}

TEST(Gpts, RoundTripIsExact) {
  std::mt19937_64 rng(71);
  const auto set = testing::random_set(5, 7, 3, rng);
  std::istringstream in(bytes_of(set));
  const auto back = io::read_gpts(in);
  ASSERT_EQ(back.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(back[i].basis(), set[i].basis());
}

TEST(Gpts, Errors) {
  std::mt19937_64 rng(72);
  const std::string good = bytes_of(testing::random_set(2, 3, 1, rng));

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  std::istringstream a(bad_magic);
  EXPECT_THROW(io::read_gpts(a), FormatError);

  std::istringstream b(good.substr(0, good.size() - 3));
  try {
    io::read_gpts(b);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
  }

  std::istringstream c(good + "x");
  EXPECT_THROW(io::read_gpts(c), FormatError);

  std::string zero_p = good;
  std::memset(zero_p.data() + 20, 0, 8);
  std::istringstream d(zero_p);
  EXPECT_THROW(io::read_gpts(d), FormatError);

  std::string not_orth = good;
  const double two = 2.0;
  std::memcpy(not_orth.data() + 28, &two, 8);
  std::istringstream e(not_orth);
  EXPECT_THROW(io::read_gpts(e), FormatError);
}

TEST(Gram, RoundTripRowMajor) {
  Eigen::MatrixXd m(2, 2);
  m << 1.5, -2.0, 3.25, 4.0;
  std::ostringstream out;
  io::write_gram(out, m);
  const std::string b = out.str();
  ASSERT_EQ(b.size(), 4 + 8 + 32u);
  EXPECT_EQ(b.substr(0, 4), "GRAM");
  EXPECT_EQ(le_f64(b, 12 + 8), -2.0);
  std::istringstream in(b);
  EXPECT_EQ(io::read_gram(in), m);

  std::istringstream trunc(b.substr(0, 20));
  EXPECT_THROW(io::read_gram(trunc), FormatError);
}

TEST(MatrixCsv, RoundTripIsExact) {
  std::mt19937_64 rng(73);
  const Eigen::MatrixXd m = testing::gaussian(4, 3, rng);
  std::stringstream s;
  io::write_matrix_csv(s, m);
  EXPECT_EQ(io::read_matrix_csv(s), m);

  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(io::read_matrix_csv(ragged), FormatError);
  std::istringstream junk("1,abc\n");
  EXPECT_THROW(io::read_matrix_csv(junk), FormatError);
}

TEST(LabelsCsv, RoundTripAndFormat) {
  std::stringstream s;
  io::write_labels_csv(s, {2, 0, 1});
  EXPECT_EQ(s.str(), "0,2\n1,0\n2,1\n");
  EXPECT_EQ(io::read_labels_csv(s), (std::vector<int>{2, 0, 1}));
  std::istringstream gap("0,1\n2,1\n");
  EXPECT_THROW(io::read_labels_csv(gap), FormatError);
}

}  // namespace
}  // namespace glrr
