#include "kmcert/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace kmcert {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path, 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  return text;
}

bool parse_cell(std::string_view cell, double& value) {
  cell = trim(cell);
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc{} && ptr == end && std::isfinite(value);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

std::uint32_t read_be32(const unsigned char* bytes) {
  return (static_cast<std::uint32_t>(bytes[0]) << 24) |
         (static_cast<std::uint32_t>(bytes[1]) << 16) |
         (static_cast<std::uint32_t>(bytes[2]) << 8) | static_cast<std::uint32_t>(bytes[3]);
}

constexpr std::uint32_t kIdxImageMagic = 0x00000803u;

std::string hex_magic(std::uint32_t magic) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "0x%08X", magic);
  return buf;
}

}  // namespace

Dataset load_csv(const std::string& path) {
  const std::string text = read_file(path);

  // Split into lines, tolerating CRLF and a trailing newline.
  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    std::string_view line = (nl == std::string_view::npos) ? rest : rest.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("empty file: " + path, 0, 0);

  // A first row with any non-numeric cell is a header.
  std::size_t first_data = 0;
  {
    double ignored;
    for (std::string_view cell : split_fields(lines[0]))
      if (!parse_cell(cell, ignored)) {
        first_data = 1;
        break;
      }
  }
  if (first_data >= lines.size())
    throw ParseError("no data rows after header: " + path, 1, 0);

  const std::size_t n = lines.size() - first_data;
  const std::size_t m = split_fields(lines[first_data]).size();

  Eigen::MatrixXd points(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i) {
    const int row_no = static_cast<int>(first_data + i + 1);  // 1-based for messages
    const auto fields = split_fields(lines[first_data + i]);
    if (fields.size() != m) {
      std::ostringstream msg;
      msg << "row " << row_no << " has " << fields.size() << " fields, expected " << m;
      throw ParseError(msg.str(), row_no, 0);
    }
    for (std::size_t j = 0; j < m; ++j) {
      double value;
      if (!parse_cell(fields[j], value)) {
        std::ostringstream msg;
        msg << "row " << row_no << ", column " << (j + 1) << ": not a finite number: '"
            << std::string(trim(fields[j])) << "'";
        throw ParseError(msg.str(), row_no, static_cast<int>(j + 1));
      }
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    }
  }
  return Dataset(std::move(points));
}

Dataset load_idx(const std::string& path, bool scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path);

  unsigned char header[16];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(header)))
    throw FormatError("truncated header: expected 16 bytes, got " + std::to_string(in.gcount()));

  const std::uint32_t magic = read_be32(header);
  if (magic != kIdxImageMagic)
    throw FormatError("bad magic " + hex_magic(magic) + ", expected " + hex_magic(kIdxImageMagic) +
                      " (IDX3 image file)");

  const std::uint64_t n = read_be32(header + 4);
  const std::uint64_t rows = read_be32(header + 8);
  const std::uint64_t cols = read_be32(header + 12);
  if (n == 0 || rows == 0 || cols == 0)
    throw FormatError("file declares no pixels (n=" + std::to_string(n) + ", rows=" +
                      std::to_string(rows) + ", cols=" + std::to_string(cols) + ")");

  const std::uint64_t expected = n * rows * cols;
  std::vector<unsigned char> payload(expected);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(expected));
  const std::uint64_t actual = static_cast<std::uint64_t>(in.gcount());
  if (actual != expected)
    throw FormatError("truncated payload: expected " + std::to_string(expected) + " bytes, got " +
                      std::to_string(actual));

  const double factor = scale ? 1.0 / 255.0 : 1.0;
  Eigen::MatrixXd points(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rows * cols));
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < rows * cols; ++j)
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          factor * static_cast<double>(payload[i * rows * cols + j]);
  return Dataset(std::move(points));
}

void write_csv(std::ostream& out, const Dataset& data) {
  char buf[64];
  for (Eigen::Index i = 0; i < data.n_points(); ++i) {
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.points()(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void save_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path, 0, 0);
  write_csv(out, data);
  if (!out) throw ParseError("write failed: " + path, 0, 0);
}

bool looks_like_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  unsigned char header[4];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  return in.gcount() == 4 && read_be32(header) == kIdxImageMagic;
}

}  // namespace kmcert
