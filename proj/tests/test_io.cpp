#include <brwp/io.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <brwp/errors.hpp>

namespace {

using brwp::MetricRow;
using brwp::PgmImage;

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

TEST(FormatShortest, RoundTripsExactly) {
  const double cases[] = {0.0,
                          1.0,
                          -1.0,
                          0.1,
                          1.0 / 3.0,
                          6.02214076e23,
                          -2.2250738585072014e-308,
                          std::numeric_limits<double>::max(),
                          std::numeric_limits<double>::epsilon(),
                          123456.789,
                          5e-324};
  for (const double v : cases) {
    const std::string s = brwp::format_shortest(v);
    double back = 0.0;
    const auto [ptr, ec] =
        std::from_chars(s.data(), s.data() + s.size(), back);
    ASSERT_EQ(ec, std::errc{}) << s;
    ASSERT_EQ(ptr, s.data() + s.size()) << s;
    EXPECT_EQ(back, v) << s;
  }
}

TEST(FormatShortest, PrefersShortDecimalForms) {
  EXPECT_EQ(brwp::format_shortest(0.05), "0.05");
  EXPECT_EQ(brwp::format_shortest(2.0), "2");
  EXPECT_EQ(brwp::format_shortest(-30.0), "-30");
}

TEST(MetricCsv, RoundTripsRowsIncludingScalarDims) {
  const std::vector<MetricRow> rows = {
      {0, "kl", 0, 1.5},
      {0, "kl", 19, 0.25},
      {1, "mean_norm", -1, 1.0 / 3.0},
      {400, "variance", 1, 0.9999999999999999},
  };
  std::ostringstream os;
  brwp::write_metric_csv(os, rows);
  std::istringstream is(os.str());
  EXPECT_EQ(brwp::read_metric_csv(is), rows);
}

TEST(MetricCsv, ScalarRowsLeaveDimCellEmpty) {
  std::ostringstream os;
  brwp::write_metric_csv(os, {{3, "psnr", -1, 21.5}});
  EXPECT_EQ(os.str(), "iter,metric,dim,value\n3,psnr,,21.5\n");
}

TEST(MetricCsv, EmptyListWritesHeaderOnly) {
  std::ostringstream os;
  brwp::write_metric_csv(os, {});
  EXPECT_EQ(os.str(), "iter,metric,dim,value\n");
  std::istringstream is(os.str());
  EXPECT_TRUE(brwp::read_metric_csv(is).empty());
}

TEST(MetricCsv, RejectsWrongHeaderAndMalformedRows) {
  std::istringstream bad_header("iteration,metric,dim,value\n");
  EXPECT_THROW(brwp::read_metric_csv(bad_header), brwp::io_error);
  std::istringstream bad_row("iter,metric,dim,value\n1,kl,0\n");
  EXPECT_THROW(brwp::read_metric_csv(bad_row), brwp::io_error);
  std::istringstream bad_value("iter,metric,dim,value\n1,kl,0,abc\n");
  EXPECT_THROW(brwp::read_metric_csv(bad_value), brwp::io_error);
}

TEST(MatrixCsv, RoundTripsArbitraryMatrix) {
  Eigen::MatrixXd m(3, 2);
  m << 1.0, -0.5, 1.0 / 3.0, 0.0, 1e-300, 42.0;
  std::ostringstream os;
  brwp::write_matrix_csv(os, m);
  std::istringstream is(os.str());
  const Eigen::MatrixXd back = brwp::read_matrix_csv(is);
  ASSERT_EQ(back.rows(), 3);
  ASSERT_EQ(back.cols(), 2);
  EXPECT_EQ(back, m);
}

TEST(MatrixCsv, RejectsRaggedRows) {
  std::istringstream is("1,2\n3\n");
  EXPECT_THROW(brwp::read_matrix_csv(is), brwp::io_error);
}

PgmImage gradient_image() {
  PgmImage img;
  img.rows = 5;
  img.cols = 7;
  img.maxval = 65535;
  img.pixels.resize(35);
  for (int i = 0; i < 35; ++i)
    img.pixels[i] = static_cast<std::uint16_t>(i * 1871);
  return img;
}

TEST(Pgm, BinaryWriteReadPreservesPixels) {
  const PgmImage img = gradient_image();
  const auto path = temp_file("brwp_io_test_p5.pgm");
  brwp::write_pgm(img, path.string(), true);
  const PgmImage back = brwp::read_pgm(path.string());
  EXPECT_EQ(back.rows, img.rows);
  EXPECT_EQ(back.cols, img.cols);
  EXPECT_EQ(back.maxval, img.maxval);
  EXPECT_EQ(back.pixels, img.pixels);
  std::filesystem::remove(path);
}

TEST(Pgm, AsciiWriteReadPreservesPixels) {
  const PgmImage img = gradient_image();
  const auto path = temp_file("brwp_io_test_p2.pgm");
  brwp::write_pgm(img, path.string(), false);
  const PgmImage back = brwp::read_pgm(path.string());
  EXPECT_EQ(back.pixels, img.pixels);
  std::filesystem::remove(path);
}

TEST(Pgm, ReaderSkipsComments) {
  const auto path = temp_file("brwp_io_test_comment.pgm");
  {
    std::ofstream os(path);
    os << "P2\n# a comment line\n2 2\n# another\n255\n0 10\n20 30\n";
  }
  const PgmImage img = brwp::read_pgm(path.string());
  EXPECT_EQ(img.rows, 2);
  EXPECT_EQ(img.cols, 2);
  EXPECT_EQ(img.maxval, 255);
  EXPECT_EQ(img.pixels, (std::vector<std::uint16_t>{0, 10, 20, 30}));
  std::filesystem::remove(path);
}

TEST(Pgm, ReadRejectsMissingFileAndBadMagic) {
  EXPECT_THROW(brwp::read_pgm("/nonexistent/rel/path.pgm"), brwp::io_error);
  const auto path = temp_file("brwp_io_test_magic.pgm");
  {
    std::ofstream os(path);
    os << "P6\n2 2\n255\n";
  }
  EXPECT_THROW(brwp::read_pgm(path.string()), brwp::io_error);
  std::filesystem::remove(path);
}

TEST(QuantizeImage, MapsRangeEndpointsAndClamps) {
  Eigen::VectorXd v(4);
  v << 0.0, 1.0, -0.5, 2.0;
  const PgmImage img = brwp::quantize_image(v, 2, 2, 0.0, 1.0);
  EXPECT_EQ(img.maxval, 65535);
  EXPECT_EQ(img.pixels[0], 0);
  EXPECT_EQ(img.pixels[1], 65535);
  EXPECT_EQ(img.pixels[2], 0);      // clamped below
  EXPECT_EQ(img.pixels[3], 65535);  // clamped above
}

TEST(QuantizeImage, MidpointRoundsToNearest) {
  Eigen::VectorXd v(1);
  v << 0.5;
  const PgmImage img = brwp::quantize_image(v, 1, 1, 0.0, 1.0);
  EXPECT_EQ(img.pixels[0], 32768);  // lround(0.5 * 65535) = 32768
}

TEST(QuantizeImage, RejectsShapeMismatchAndEmptyRange) {
  Eigen::VectorXd v(4);
  v.setZero();
  EXPECT_THROW(brwp::quantize_image(v, 3, 2, 0.0, 1.0), brwp::config_error);
  EXPECT_THROW(brwp::quantize_image(v, 2, 2, 1.0, 1.0), brwp::config_error);
}

}  // namespace
