#include <brwp/io.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <brwp/errors.hpp>

namespace brwp {

namespace {

double parse_double(const std::string& s, const char* where) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw io_error(std::string(where) + ": bad numeric field '" + s + "'");
  return v;
}

long parse_long(const std::string& s, const char* where) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw io_error(std::string(where) + ": bad integer field '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw io_error("format_shortest: conversion failed");
  return std::string(buf, ptr);
}

void write_metric_header(std::ostream& os) { os << "iter,metric,dim,value\n"; }

void write_metric_row(std::ostream& os, const MetricRow& r) {
  os << r.iter << ',' << r.metric << ',';
  if (r.dim >= 0) os << r.dim;
  os << ',' << format_shortest(r.value) << '\n';
}

void write_metric_csv(std::ostream& os, const std::vector<MetricRow>& rows) {
  write_metric_header(os);
  for (const MetricRow& r : rows) write_metric_row(os, r);
}

std::vector<MetricRow> read_metric_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "iter,metric,dim,value")
    throw io_error("read_metric_csv: missing or wrong header");
  std::vector<MetricRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 4)
      throw io_error("read_metric_csv: expected 4 fields, got line '" + line +
                     "'");
    MetricRow r;
    r.iter = static_cast<int>(parse_long(f[0], "read_metric_csv"));
    r.metric = f[1];
    r.dim = f[2].empty()
                ? -1
                : static_cast<int>(parse_long(f[2], "read_metric_csv"));
    r.value = parse_double(f[3], "read_metric_csv");
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_shortest(m(i, j));
    }
    os << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    std::vector<double> row;
    row.reserve(f.size());
    for (const std::string& s : f)
      row.push_back(parse_double(s, "read_matrix_csv"));
    if (!rows.empty() && row.size() != rows.front().size())
      throw io_error("read_matrix_csv: ragged rows");
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_pgm(const PgmImage& img, const std::string& path, bool binary) {
  if (img.rows < 1 || img.cols < 1 ||
      img.pixels.size() !=
          static_cast<std::size_t>(img.rows) * static_cast<std::size_t>(img.cols))
    throw config_error("write_pgm: inconsistent image dimensions");
  if (img.maxval < 1 || img.maxval > 65535)
    throw config_error("write_pgm: maxval out of range");
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw io_error("write_pgm: cannot open '" + path + "'");
  os << (binary ? "P5" : "P2") << '\n'
     << img.cols << ' ' << img.rows << '\n'
     << img.maxval << '\n';
  if (binary) {
    for (const std::uint16_t p : img.pixels) {
      const char bytes[2] = {static_cast<char>(p >> 8),
                             static_cast<char>(p & 0xFF)};
      os.write(bytes, 2);
    }
  } else {
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      os << img.pixels[i];
      os << (((i + 1) % static_cast<std::size_t>(img.cols) == 0) ? '\n' : ' ');
    }
  }
  if (!os) throw io_error("write_pgm: write failed for '" + path + "'");
}

namespace {

// Next whitespace-delimited token, skipping '#' comment lines.
std::string next_pgm_token(std::istream& is) {
  std::string tok;
  int c = is.peek();
  while (c != EOF) {
    if (c == '#') {
      std::string comment;
      std::getline(is, comment);
    } else if (std::isspace(c)) {
      is.get();
    } else {
      break;
    }
    c = is.peek();
  }
  is >> tok;
  return tok;
}

}  // namespace

PgmImage read_pgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("read_pgm: cannot open '" + path + "'");
  const std::string magic = next_pgm_token(is);
  if (magic != "P2" && magic != "P5")
    throw io_error("read_pgm: '" + path + "' is not a PGM file");
  PgmImage img;
  img.cols = static_cast<int>(parse_long(next_pgm_token(is), "read_pgm"));
  img.rows = static_cast<int>(parse_long(next_pgm_token(is), "read_pgm"));
  img.maxval = static_cast<int>(parse_long(next_pgm_token(is), "read_pgm"));
  if (img.cols < 1 || img.rows < 1 || img.maxval < 1 || img.maxval > 65535)
    throw io_error("read_pgm: bad header in '" + path + "'");
  const std::size_t n =
      static_cast<std::size_t>(img.rows) * static_cast<std::size_t>(img.cols);
  img.pixels.resize(n);
  if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) {
      const long v = parse_long(next_pgm_token(is), "read_pgm");
      if (v < 0 || v > img.maxval)
        throw io_error("read_pgm: sample out of range in '" + path + "'");
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  } else {
    is.get();  // single whitespace byte after maxval
    const int bytes_per_sample = img.maxval > 255 ? 2 : 1;
    std::vector<char> raw(n * static_cast<std::size_t>(bytes_per_sample));
    is.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (is.gcount() != static_cast<std::streamsize>(raw.size()))
      throw io_error("read_pgm: truncated pixel data in '" + path + "'");
    for (std::size_t i = 0; i < n; ++i) {
      if (bytes_per_sample == 2) {
        const auto hi = static_cast<std::uint8_t>(raw[2 * i]);
        const auto lo = static_cast<std::uint8_t>(raw[2 * i + 1]);
        img.pixels[i] = static_cast<std::uint16_t>((hi << 8) | lo);
      } else {
        img.pixels[i] = static_cast<std::uint8_t>(raw[i]);
      }
    }
  }
  return img;
}

PgmImage quantize_image(const Eigen::VectorXd& img, int rows, int cols,
                        double lo, double hi) {
  if (rows < 1 || cols < 1 ||
      img.size() != static_cast<Eigen::Index>(rows) * cols)
    throw config_error("quantize_image: inconsistent dimensions");
  if (!(hi > lo)) throw config_error("quantize_image: need hi > lo");
  PgmImage out;
  out.rows = rows;
  out.cols = cols;
  out.maxval = 65535;
  out.pixels.resize(static_cast<std::size_t>(rows) *
                    static_cast<std::size_t>(cols));
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const double clamped = std::min(hi, std::max(lo, img(i)));
    const double scaled = (clamped - lo) / (hi - lo) * 65535.0;
    out.pixels[static_cast<std::size_t>(i)] =
        static_cast<std::uint16_t>(std::lround(scaled));
  }
  return out;
}

}  // namespace brwp
