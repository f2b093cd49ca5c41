#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace brwp {

// Shortest decimal string that parses back to exactly v (round-trip safe).
std::string format_shortest(double v);

// One metric sample. dim < 0 marks a scalar metric; the CSV cell stays empty.
struct MetricRow {
  int iter = 0;
  std::string metric;
  int dim = -1;
  double value = 0.0;
  bool operator==(const MetricRow&) const = default;
};

// Schema: header `iter,metric,dim,value`, one row per sample, values in
// shortest round-trip form. An empty row list writes the header only.
// The header/row pair supports streaming a CSV one row at a time.
void write_metric_header(std::ostream& os);
void write_metric_row(std::ostream& os, const MetricRow& row);
void write_metric_csv(std::ostream& os, const std::vector<MetricRow>& rows);
std::vector<MetricRow> read_metric_csv(std::istream& is);

// Plain numeric CSV, one matrix row per line, no header.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(std::istream& is);

// 16-bit grayscale image in PGM convention (row-major, top-left origin).
struct PgmImage {
  int rows = 0;
  int cols = 0;
  int maxval = 65535;
  std::vector<std::uint16_t> pixels;
};

// binary = P5 (big-endian 16-bit samples), otherwise P2 (ASCII).
void write_pgm(const PgmImage& img, const std::string& path,
               bool binary = true);
PgmImage read_pgm(const std::string& path);

// Clamp a flat image to [lo, hi] and scale onto the full 16-bit range.
PgmImage quantize_image(const Eigen::VectorXd& img, int rows, int cols,
                        double lo, double hi);

}  // namespace brwp
