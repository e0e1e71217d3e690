#include "lrt/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrt {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

std::uint64_t read_u64(const char* p) {
  std::uint64_t v;
  std::memcpy(&v, p, sizeof v);
  return to_little(v);
}

void write_u64(std::ostream& os, std::uint64_t v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

PointFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  return (ext == ".f64" || ext == ".bin") ? PointFormat::f64le : PointFormat::csv;
}

PointFormat parse_format(std::string_view name) {
  if (name == "csv") return PointFormat::csv;
  if (name == "f64le") return PointFormat::f64le;
  throw std::invalid_argument("unknown point format: " + std::string(name));
}

Matrix parse_f64le(std::string_view bytes) {
  if (bytes.size() < 16) throw std::runtime_error("f64le: truncated header");
  const std::uint64_t n = read_u64(bytes.data());
  const std::uint64_t d = read_u64(bytes.data() + 8);
  if (n == 0 || d == 0) throw std::runtime_error("f64le: header declares an empty matrix");
  if (d > (bytes.size() - 16) / 8 || n > (bytes.size() - 16) / 8 / d || n * d * 8 != bytes.size() - 16) {
    throw std::runtime_error("f64le: payload length does not match header n*d");
  }
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const char* p = bytes.data() + 16;
  for (std::uint64_t i = 0; i < n * d; ++i) {
    const std::uint64_t bits = read_u64(p + 8 * i);
    m.data()[i] = std::bit_cast<double>(bits);
  }
  return m;
}

PointSet parse_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t cols = 0, rows = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::size_t count = 0;
    while (true) {
      const auto comma = line.find(',');
      const std::string_view field = trim(line.substr(0, comma));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" +
                                 std::string(field) + "'");
      }
      if (!std::isfinite(v)) throw std::runtime_error("csv line " + std::to_string(line_no) + ": non-finite value");
      values.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (rows == 0) cols = count;
    else if (count != cols) throw std::runtime_error("csv line " + std::to_string(line_no) + ": ragged row");
    ++rows;
  }
  if (rows == 0) throw std::runtime_error("csv: no data rows");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::copy(values.begin(), values.end(), m.data());
  return PointSet(std::move(m));
}

PointSet load_points(const std::filesystem::path& path, PointFormat format) {
  const std::string bytes = read_file(path);
  try {
    if (format == PointFormat::f64le) return PointSet(parse_f64le(bytes));
    return parse_csv(bytes);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

PointSet load_points(const std::filesystem::path& path) {
  return load_points(path, format_from_path(path));
}

void save_points(const std::filesystem::path& path, const PointSet& points, PointFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const Matrix& m = points.matrix();
  if (format == PointFormat::f64le) {
    write_u64(out, static_cast<std::uint64_t>(m.rows()));
    write_u64(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) write_u64(out, std::bit_cast<std::uint64_t>(m.data()[i]));
  } else {
    char buf[32];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        // Shortest round-trip representation.
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, m(i, j));
        (void)ec;
        if (j > 0) out << ',';
        out.write(buf, ptr - buf);
      }
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace lrt
