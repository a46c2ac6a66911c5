#include "hqrrp/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hqrrp::io {

namespace {

constexpr const char* kBanner = "%%MatrixMarket matrix array real general";

std::string lower(std::string s) {
  std::ranges::transform(s, s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int k = 0; k < 8; ++k) bytes[static_cast<std::size_t>(k)] = static_cast<char>((v >> (8 * k)) & 0xff);
  out.write(bytes.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), 8);
  if (!in) throw FormatError("binary matrix: truncated header");
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | bytes[static_cast<std::size_t>(k)];
  return v;
}

}  // namespace

void write_matrix_market(std::ostream& out, ConstMatrixView a) {
  out << kBanner << '\n' << a.rows() << ' ' << a.cols() << '\n';
  char buf[32];
  for (Index j = 0; j < a.cols(); ++j) {
    for (double x : a.col(j)) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out << buf << '\n';
    }
  }
}

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("matrix market: empty input");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "array" ||
      lower(field) != "real" || lower(symmetry) != "general") {
    throw FormatError("matrix market: expected '" + std::string(kBanner) + "', got '" + line + "'");
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  long long rows = -1, cols = -1;
  std::istringstream dims(line);
  if (!(dims >> rows >> cols) || rows < 0 || cols < 0)
    throw FormatError("matrix market: bad size line '" + line + "'");
  Matrix a(rows, cols);
  for (double& x : a.data()) {
    if (!(in >> x)) throw FormatError("matrix market: too few values");
  }
  if (!all_finite(a)) throw FormatError("matrix market: non-finite entry");
  return a;
}

void write_binary(std::ostream& out, ConstMatrixView a) {
  static_assert(std::endian::native == std::endian::little, "binary writer assumes little-endian");
  put_u64(out, static_cast<std::uint64_t>(a.rows()));
  put_u64(out, static_cast<std::uint64_t>(a.cols()));
  for (Index j = 0; j < a.cols(); ++j) {
    const auto col = a.col(j);
    out.write(reinterpret_cast<const char*>(col.data()),
              static_cast<std::streamsize>(col.size() * sizeof(double)));
  }
}

Matrix read_binary(std::istream& in) {
  const std::uint64_t rows = get_u64(in);
  const std::uint64_t cols = get_u64(in);
  if (rows > (1ULL << 31) || cols > (1ULL << 31)) throw FormatError("binary matrix: absurd size");
  Matrix a(static_cast<Index>(rows), static_cast<Index>(cols));
  auto data = a.data();
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!in) throw FormatError("binary matrix: truncated payload");
  if (!all_finite(a)) throw FormatError("binary matrix: non-finite entry");
  return a;
}

void save_matrix(const std::filesystem::path& path, ConstMatrixView a) {
  const bool binary = path.extension() == ".bin";
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  if (binary) {
    write_binary(out, a);
  } else {
    write_matrix_market(out, a);
  }
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Matrix load_matrix(const std::filesystem::path& path) {
  const bool binary = path.extension() == ".bin";
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return binary ? read_binary(in) : read_matrix_market(in);
}

}  // namespace hqrrp::io
