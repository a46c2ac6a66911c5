#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "hqrrp/matrix.hpp"

namespace hqrrp::io {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Matrix Market dense array format (`%%MatrixMarket matrix array real
/// general`), values in column-major order.
void write_matrix_market(std::ostream& out, ConstMatrixView a);
Matrix read_matrix_market(std::istream& in);

/// Raw little-endian binary: u64 rows, u64 cols, then rows*cols float64
/// values in column-major order.
void write_binary(std::ostream& out, ConstMatrixView a);
Matrix read_binary(std::istream& in);

/// Dispatches on extension: `.bin` selects the binary format, anything else
/// Matrix Market. Throws FormatError or std::runtime_error on failure.
void save_matrix(const std::filesystem::path& path, ConstMatrixView a);
Matrix load_matrix(const std::filesystem::path& path);

}  // namespace hqrrp::io
