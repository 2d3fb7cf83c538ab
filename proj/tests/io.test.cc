#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "kmcert/io.hpp"
#include "test_util.hpp"

using namespace kmcert;

namespace {

/** Unique scratch path, removed when the guard goes out of scope. */
class TempFile {
 public:
  explicit TempFile(const std::string& name)
      : path_((std::filesystem::temp_directory_path() / ("kmcert_test_" + name)).string()) {}
  ~TempFile() { std::filesystem::remove(path_); }
  const std::string& path() const { return path_; }

  void write(const std::string& content) const {
    std::ofstream out(path_, std::ios::binary);
    out << content;
  }

  void write_bytes(const std::vector<unsigned char>& bytes) const {
    std::ofstream out(path_, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }

 private:
  std::string path_;
};

/** IDX3 image container: big-endian magic and dimensions, then raw bytes. */
std::vector<unsigned char> idx_bytes(std::uint32_t magic, std::uint32_t n, std::uint32_t rows,
                                     std::uint32_t cols, const std::vector<unsigned char>& pixels) {
  std::vector<unsigned char> bytes;
  for (std::uint32_t word : {magic, n, rows, cols}) {
    bytes.push_back(static_cast<unsigned char>(word >> 24));
    bytes.push_back(static_cast<unsigned char>(word >> 16));
    bytes.push_back(static_cast<unsigned char>(word >> 8));
    bytes.push_back(static_cast<unsigned char>(word));
  }
  bytes.insert(bytes.end(), pixels.begin(), pixels.end());
  return bytes;
}

}  // namespace

TEST_CASE("load_csv reads plain numeric rows") {
  TempFile f("basic.csv");
  f.write("1.5,2\n-3,4e2\n");
  const Dataset data = load_csv(f.path());
  REQUIRE(data.n_points() == 2);
  REQUIRE(data.dim() == 2);
  CHECK(data.points()(0, 0) == 1.5);
  CHECK(data.points()(0, 1) == 2.0);
  CHECK(data.points()(1, 0) == -3.0);
  CHECK(data.points()(1, 1) == 400.0);
}

TEST_CASE("load_csv skips a non-numeric header row") {
  TempFile f("header.csv");
  f.write("x,y\n1,2\n3,4\n");
  const Dataset data = load_csv(f.path());
  REQUIRE(data.n_points() == 2);
  CHECK(data.points()(0, 0) == 1.0);
  CHECK(data.points()(1, 1) == 4.0);
}

TEST_CASE("load_csv tolerates CRLF line endings and a trailing newline") {
  TempFile f("crlf.csv");
  f.write("1,2\r\n3,4\r\n\r\n");
  const Dataset data = load_csv(f.path());
  REQUIRE(data.n_points() == 2);
  CHECK(data.points()(1, 0) == 3.0);
}

TEST_CASE("load_csv reports ragged rows with their location") {
  TempFile f("ragged.csv");
  f.write("1,2\n3,4\n5\n");
  try {
    load_csv(f.path());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 3);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
}

TEST_CASE("load_csv reports non-numeric cells with row and column") {
  TempFile f("cell.csv");
  f.write("1,2\n3,oops\n");
  try {
    load_csv(f.path());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 2);
    CHECK(e.col() == 2);
    CHECK(std::string(e.what()).find("oops") != std::string::npos);
  }
}

TEST_CASE("load_csv rejects empty files, header-only files, and missing files") {
  TempFile f("empty.csv");
  f.write("");
  CHECK_THROWS_AS(load_csv(f.path()), ParseError);
  f.write("x,y\n");
  CHECK_THROWS_AS(load_csv(f.path()), ParseError);
  CHECK_THROWS_AS(load_csv("/nonexistent/kmcert/file.csv"), ParseError);
}

TEST_CASE("load_csv rejects non-finite values") {
  TempFile f("inf.csv");
  f.write("1,inf\n");
  CHECK_THROWS_AS(load_csv(f.path()), ParseError);
  f.write("nan,1\n");
  CHECK_THROWS_AS(load_csv(f.path()), ParseError);
}

TEST_CASE("save_csv and load_csv round-trip doubles bit-for-bit") {
  Eigen::MatrixXd pts(3, 2);
  pts << 1.0 / 3.0, 0.1, -1e-300, 12345.678901234567, 2.2250738585072014e-308, -0.0;
  const Dataset original{pts};
  TempFile f("roundtrip.csv");
  save_csv(f.path(), original);
  const Dataset loaded = load_csv(f.path());
  REQUIRE(loaded.n_points() == 3);
  REQUIRE(loaded.dim() == 2);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) CHECK(loaded.points()(i, j) == original.points()(i, j));
}

TEST_CASE("load_idx parses a minimal image file") {
  TempFile f("mini.idx");
  f.write_bytes(idx_bytes(0x00000803, 2, 1, 2, {0, 255, 128, 7}));
  const Dataset data = load_idx(f.path());
  REQUIRE(data.n_points() == 2);
  REQUIRE(data.dim() == 2);
  CHECK(data.points()(0, 0) == 0.0);
  CHECK(data.points()(0, 1) == 255.0);
  CHECK(data.points()(1, 0) == 128.0);
  CHECK(data.points()(1, 1) == 7.0);

  const Dataset scaled = load_idx(f.path(), /*scale=*/true);
  CHECK(scaled.points()(0, 1) == 1.0);
  CHECK(scaled.points()(1, 0) == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
}

TEST_CASE("load_idx rejects a wrong magic number") {
  TempFile f("magic.idx");
  f.write_bytes(idx_bytes(0x00000801, 1, 1, 1, {42}));
  try {
    load_idx(f.path());
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("magic") != std::string::npos);
  }
}

TEST_CASE("load_idx rejects truncated files with the missing byte counts") {
  TempFile f("trunc.idx");
  f.write_bytes(idx_bytes(0x00000803, 2, 2, 2, {1, 2, 3}));  // 3 of 8 payload bytes
  try {
    load_idx(f.path());
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("8") != std::string::npos);
    CHECK(msg.find("3") != std::string::npos);
  }
  TempFile h("header.idx");
  h.write_bytes({0, 0, 8});  // not even a full header
  CHECK_THROWS_AS(load_idx(h.path()), FormatError);
}

TEST_CASE("load_idx rejects zero-sized dimensions") {
  TempFile f("zero.idx");
  f.write_bytes(idx_bytes(0x00000803, 0, 1, 1, {}));
  CHECK_THROWS_AS(load_idx(f.path()), FormatError);
}

TEST_CASE("looks_like_idx distinguishes the two container formats") {
  TempFile idx("sniff.idx");
  idx.write_bytes(idx_bytes(0x00000803, 1, 1, 1, {9}));
  CHECK(looks_like_idx(idx.path()));
  TempFile csv("sniff.csv");
  csv.write("1,2\n");
  CHECK(!looks_like_idx(csv.path()));
  CHECK(!looks_like_idx("/nonexistent/kmcert/file.idx"));
}
