#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "helpers.hpp"
#include "misest/chain_io.hpp"

using namespace misest;
using misest::testing::TempDir;

namespace {

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p);
  out << s;
}

void write_raw(const std::filesystem::path& p, std::uint64_t n, std::uint64_t cols,
               const std::vector<double>& xs) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  for (double x : xs) out.write(reinterpret_cast<const char*>(&x), 8);
}

}  // namespace

TEST_CASE("chain rejects empty shapes and non-finite values") {
  CHECK_THROWS_AS(Chain(Matrix<double>(0, 2)), ShapeError);
  CHECK_THROWS_AS(Chain(Matrix<double>(2, 0)), ShapeError);
  Matrix<double> m = Matrix<double>::Zero(3, 2);
  m(2, 0) = std::numeric_limits<double>::infinity();
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    Chain c(m);
    FAIL("expected NonFiniteEntry");
  } catch (const NonFiniteEntry& e) {
    // earliest sample first
    CHECK(e.row() == 1);
    CHECK(e.col() == 1);
  }
}

TEST_CASE("minimal csv") {
  TempDir dir("io");
  write_text(dir / "a.csv", "c1\n1.0\n2.0\n");
  const Chain c = load_chain(dir / "a.csv", ChainFormat::Csv);
  CHECK(c.n() == 2);
  CHECK(c.p() == 1);
  CHECK(c(0, 0) == 1.0);
  CHECK(c(1, 0) == 2.0);
}

TEST_CASE("csv with nan names the cell") {
  TempDir dir("io");
  write_text(dir / "a.csv", "c1,c2\n1,2\n3,nan\n");
  try {
    load_chain(dir / "a.csv", ChainFormat::Csv);
    FAIL("expected NonFiniteEntry");
  } catch (const NonFiniteEntry& e) {
    CHECK(e.row() == 1);
    CHECK(e.col() == 1);
  }
}

TEST_CASE("csv shape and parse errors") {
  TempDir dir("io");
  write_text(dir / "ragged.csv", "c1,c2\n1,2\n3\n");
  CHECK_THROWS_AS(load_chain(dir / "ragged.csv", ChainFormat::Csv), ShapeError);
  write_text(dir / "junk.csv", "c1\n1\nabc\n");
  CHECK_THROWS_AS(load_chain(dir / "junk.csv", ChainFormat::Csv), IoError);
  write_text(dir / "header_only.csv", "c1\n");
  CHECK_THROWS_AS(load_chain(dir / "header_only.csv", ChainFormat::Csv), ShapeError);
  CHECK_THROWS_AS(load_chain(dir / "missing.csv", ChainFormat::Csv), IoError);
}

TEST_CASE("binary header echoes shape") {
  TempDir dir("io");
  write_raw(dir / "a.bin", 3, 2, {1, 2, 3, 4, 5, 6});
  const Chain c = load_chain(dir / "a.bin", ChainFormat::Binary);
  CHECK(c.n() == 3);
  CHECK(c.p() == 2);
  // row-major payload
  CHECK(c(0, 1) == 2.0);
  CHECK(c(2, 0) == 5.0);
}

TEST_CASE("binary element count must match header") {
  TempDir dir("io");
  write_raw(dir / "short.bin", 3, 2, {1, 2, 3, 4, 5});
  CHECK_THROWS_AS(load_chain(dir / "short.bin", ChainFormat::Binary), ShapeError);
  write_raw(dir / "long.bin", 1, 2, {1, 2, 3});
  CHECK_THROWS_AS(load_chain(dir / "long.bin", ChainFormat::Binary), ShapeError);
  write_raw(dir / "huge.bin", std::numeric_limits<std::uint64_t>::max(), 4, {1});
  CHECK_THROWS_AS(load_chain(dir / "huge.bin", ChainFormat::Binary), ShapeError);
  write_text(dir / "stub.bin", "abc");
  CHECK_THROWS_AS(load_chain(dir / "stub.bin", ChainFormat::Binary), ShapeError);
}

TEST_CASE("binary file size is header plus payload") {
  TempDir dir("io");
  Matrix<double> m(1, 3);
  m << 1, 2, 3;
  save_chain(Chain(m), dir / "a.bin", ChainFormat::Binary);
  CHECK(std::filesystem::file_size(dir / "a.bin") == 16 + 24);
}

TEST_CASE("binary round trip is bit exact") {
  TempDir dir("io");
  Rng rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    Matrix<double> m = misest::testing::gaussian_matrix(rng, 17 + rep, 1 + rep);
    m(0, 0) = -0.0;
    m(1, 0) = std::numeric_limits<double>::denorm_min();
    m(2, 0) = std::numeric_limits<double>::max();
    const Chain c(m);
    save_chain(c, dir / "r.bin", ChainFormat::Binary);
    const Chain back = load_chain(dir / "r.bin", ChainFormat::Binary);
    REQUIRE(back.n() == c.n());
    REQUIRE(back.p() == c.p());
    CHECK(std::memcmp(back.values().data(), c.values().data(),
                      sizeof(double) * static_cast<std::size_t>(c.values().size())) == 0);
  }
}

TEST_CASE("csv round trip") {
  TempDir dir("io");
  Matrix<double> m(2, 1);
  m << 0.1, 2.0 / 3.0;
  const Chain c(m);
  save_chain(c, dir / "r.csv", ChainFormat::Csv);
  std::ifstream in(dir / "r.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "c1");
  const Chain back = load_chain(dir / "r.csv", ChainFormat::Csv);
  CHECK(back == c);

  Rng rng(9);
  const Chain wide(misest::testing::gaussian_matrix(rng, 50, 4));
  save_chain(wide, dir / "w.csv", ChainFormat::Csv);
  CHECK(load_chain(dir / "w.csv", ChainFormat::Csv) == wide);
}

TEST_CASE("format names") {
  CHECK(parse_chain_format("csv") == ChainFormat::Csv);
  CHECK(parse_chain_format("bin") == ChainFormat::Binary);
  CHECK(parse_chain_format("f64le-bin") == ChainFormat::Binary);
  CHECK_THROWS_AS(parse_chain_format("hdf5"), Error);
  CHECK(format_from_extension("x/chain.csv") == ChainFormat::Csv);
  CHECK(format_from_extension("x/chain.bin") == ChainFormat::Binary);
}

TEST_CASE("chain mean uses every row") {
  Matrix<double> m(1000, 2);
  for (Index i = 0; i < 1000; ++i) {
    m(i, 0) = static_cast<double>(i);
    m(i, 1) = 1e8 + 0.1;
  }
  const Vector<double> mu = Chain(m).mean();
  CHECK(mu(0) == 499.5);
  CHECK(mu(1) == doctest::Approx(1e8 + 0.1).epsilon(1e-15));
}
