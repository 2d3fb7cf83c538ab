#pragma once

#include <ostream>
#include <stdexcept>
#include <string>

#include "kmcert/core.hpp"

namespace kmcert {

/** CSV parse failure with 1-based row/column location (0 = not applicable). */
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int row, int col)
      : std::runtime_error(message), row_(row), col_(col) {}
  int row() const { return row_; }
  int col() const { return col_; }

 private:
  int row_;
  int col_;
};

/** Binary (IDX) format failure. */
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& message) : std::runtime_error(message) {}
};

/**
 * Load a CSV of comma-separated finite decimal reals, one point per row.
 * A non-numeric first row is treated as a header and skipped. Ragged rows,
 * non-numeric cells, and empty files raise ParseError with the location.
 */
Dataset load_csv(const std::string& path);

/**
 * Load an IDX3 image file (big-endian magic 0x00000803, then counts n,
 * rows r, cols c, then n*r*c unsigned bytes). Pixels map to reals in
 * [0, 255]; pass scale = true to divide by 255.
 */
Dataset load_idx(const std::string& path, bool scale = false);

/** Write points as CSV with 17 significant digits (bit-exact round-trip). */
void save_csv(const std::string& path, const Dataset& data);

/** Same serialization to an already-open stream. */
void write_csv(std::ostream& out, const Dataset& data);

/** True iff the file starts with the IDX3 image magic. */
bool looks_like_idx(const std::string& path);

}  // namespace kmcert
