#include "misest/chain_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace misest {

namespace {

constexpr std::size_t kHeaderBytes = 16;

std::uint64_t byteswap64(std::uint64_t x) {
  x = ((x & 0x00000000FFFFFFFFull) << 32) | ((x & 0xFFFFFFFF00000000ull) >> 32);
  x = ((x & 0x0000FFFF0000FFFFull) << 16) | ((x & 0xFFFF0000FFFF0000ull) >> 16);
  x = ((x & 0x00FF00FF00FF00FFull) << 8) | ((x & 0xFF00FF00FF00FF00ull) >> 8);
  return x;
}

std::uint64_t to_little(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::little) {
    return x;
  } else {
    return byteswap64(x);
  }
}

void put_u64(std::ostream& out, std::uint64_t v) {
  v = to_little(v);
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.write(buf, 8);
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v;
  std::memcpy(&v, p, 8);
  return to_little(v);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view text, Index row, Index col) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw IoError("cannot parse csv cell at row " + std::to_string(row) + ", column " +
                  std::to_string(col) + ": '" + std::string(text) + "'");
  }
  return v;
}

Chain load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty csv file " + path.string());
  const Index p = static_cast<Index>(split_commas(trim(line)).size());

  std::vector<double> data;
  Index n = 0;
  while (std::getline(in, line)) {
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto cells = split_commas(row);
    if (static_cast<Index>(cells.size()) != p) {
      throw ShapeError("csv row " + std::to_string(n) + " has " + std::to_string(cells.size()) +
                       " fields, header declares " + std::to_string(p));
    }
    for (Index j = 0; j < p; ++j) data.push_back(parse_cell(cells[j], n, j));
    ++n;
  }
  if (n == 0) throw ShapeError("csv file " + path.string() + " has no data rows");
  Matrix<double> values(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) values(i, j) = data[static_cast<std::size_t>(i * p + j)];
  return Chain(std::move(values));
}

Chain load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderBytes) throw ShapeError("binary chain shorter than its 16-byte header");
  const std::uint64_t n = get_u64(bytes.data());
  const std::uint64_t p = get_u64(bytes.data() + 8);
  const std::uint64_t payload = bytes.size() - kHeaderBytes;
  if (n == 0 || p == 0) throw ShapeError("binary header declares an empty chain");
  if (n > std::numeric_limits<std::uint64_t>::max() / p / 8 || payload != n * p * 8) {
    throw ShapeError("binary header declares " + std::to_string(n) + " x " + std::to_string(p) +
                     " doubles but payload holds " + std::to_string(payload) + " bytes");
  }
  Matrix<double> values(static_cast<Index>(n), static_cast<Index>(p));
  const char* cursor = bytes.data() + kHeaderBytes;
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j, cursor += 8) {
      values(i, j) = std::bit_cast<double>(get_u64(cursor));
    }
  }
  return Chain(std::move(values));
}

}  // namespace

ChainFormat parse_chain_format(std::string_view name) {
  if (name == "csv") return ChainFormat::Csv;
  if (name == "bin" || name == "f64le-bin") return ChainFormat::Binary;
  throw Error("unknown chain format '" + std::string(name) + "' (expected csv or bin)");
}

std::string_view to_string(ChainFormat format) {
  return format == ChainFormat::Csv ? "csv" : "bin";
}

ChainFormat format_from_extension(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? ChainFormat::Csv : ChainFormat::Binary;
}

Chain load_chain(const std::filesystem::path& path, ChainFormat format) {
  return format == ChainFormat::Csv ? load_csv(path) : load_binary(path);
}

void save_chain(const Chain& chain, const std::filesystem::path& path, ChainFormat format) {
  const auto& v = chain.values();
  if (format == ChainFormat::Csv) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (Index j = 0; j < chain.p(); ++j) out << (j ? ",c" : "c") << (j + 1);
    out << '\n';
    char buf[64];
    for (Index i = 0; i < chain.n(); ++i) {
      for (Index j = 0; j < chain.p(); ++j) {
        // Shortest representation that parses back to the same double.
        const auto res = std::to_chars(buf, buf + sizeof buf, v(i, j));
        if (j) out << ',';
        out.write(buf, res.ptr - buf);
      }
      out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
    return;
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  put_u64(out, static_cast<std::uint64_t>(chain.n()));
  put_u64(out, static_cast<std::uint64_t>(chain.p()));
  for (Index i = 0; i < chain.n(); ++i)
    for (Index j = 0; j < chain.p(); ++j) put_u64(out, std::bit_cast<std::uint64_t>(v(i, j)));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace misest
