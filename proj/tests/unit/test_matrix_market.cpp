#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "twosided/matrix_market.hpp"
#include "twosided/random.hpp"

namespace twosided {
namespace {

using test::cplx;

MatrixMarketData parse(const std::string& s) {
  std::istringstream in(s);
  return read_matrix_market(in);
}

TEST(MatrixMarket, ArrayGeneral) {
  const auto d = parse("%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n3\n2\n4\n");
  EXPECT_EQ(d.field, MmField::Real);
  EXPECT_EQ(d.symmetry, MmSymmetry::General);
  EXPECT_EQ(real_part_checked(d), DenseMatrix<double>::from_rows({{1, 2}, {3, 4}}));
}

TEST(MatrixMarket, ArraySymmetricExpandsBothTriangles) {
  const auto d = parse("%%MatrixMarket matrix array real symmetric\n2 2\n4\n2\n3\n");
  EXPECT_EQ(real_part_checked(d), DenseMatrix<double>::from_rows({{4, 2}, {2, 3}}));
}

TEST(MatrixMarket, CoordinateInteger) {
  const auto d = parse("%%MatrixMarket matrix coordinate integer symmetric\n3 3 3\n1 1 5\n3 1 -2\n2 2 7\n");
  EXPECT_EQ(d.field, MmField::Integer);
  const auto m = real_part_checked(d);
  EXPECT_EQ(m(0, 0), 5.0);
  EXPECT_EQ(m(2, 0), -2.0);
  EXPECT_EQ(m(0, 2), -2.0);
  EXPECT_EQ(m(1, 1), 7.0);
  EXPECT_EQ(m(2, 2), 0.0);
}

TEST(MatrixMarket, ComplexHermitian) {
  const auto d = parse("%%MatrixMarket matrix coordinate complex hermitian\n2 2 3\n1 1 2 0\n2 1 1 -1\n2 2 3 0\n");
  EXPECT_TRUE(d.is_complex());
  EXPECT_EQ(d.values(1, 0), cplx(1, -1));
  EXPECT_EQ(d.values(0, 1), cplx(1, 1));
  EXPECT_THROW(real_part_checked(d), MatrixMarketError);
}

TEST(MatrixMarket, CaseInsensitiveBanner) {
  const auto d = parse("%%MatrixMarket MATRIX Array Real General\n1 1\n2.5\n");
  EXPECT_EQ(real_part_checked(d)(0, 0), 2.5);
}

TEST(MatrixMarket, Errors) {
  EXPECT_THROW(parse(""), MatrixMarketError);
  EXPECT_THROW(parse("not a banner\n1 1\n1\n"), MatrixMarketError);
  EXPECT_THROW(parse("%%MatrixMarket matrix array pattern general\n1 1\n"), MatrixMarketError);
  EXPECT_THROW(parse("%%MatrixMarket matrix array real general\n2 2\n1\n2\n"), MatrixMarketError);
  EXPECT_THROW(parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n"), MatrixMarketError);
  EXPECT_THROW(parse("%%MatrixMarket matrix array real symmetric\n2 3\n1\n2\n3\n"), MatrixMarketError);
  EXPECT_THROW(parse("%%MatrixMarket matrix array real general\n1 1\nabc\n"), MatrixMarketError);
  EXPECT_THROW(read_matrix_market_file("/nonexistent/dir/x.mtx"), MatrixMarketError);
}

template <class T>
class MmRoundTrip : public ::testing::Test {};
TYPED_TEST_SUITE(MmRoundTrip, test::Fields);

TYPED_TEST(MmRoundTrip, GeneralAndLowerAreExact) {
  using T = TypeParam;
  const auto m = random_matrix<T>(5, 3, 1);
  std::ostringstream os;
  write_matrix_market(os, m.cview());
  const auto d = parse(os.str());
  for (index_t j = 0; j < 3; ++j)
    for (index_t i = 0; i < 5; ++i) EXPECT_EQ(d.values(i, j), cplx(m(i, j)));

  const auto h = random_hermitian<T>(4, 2);
  std::ostringstream ol;
  write_matrix_market(ol, h.cview(), true);
  EXPECT_NE(ol.str().find(is_complex_v<T> ? "hermitian" : "symmetric"), std::string::npos);
  const auto dh = parse(ol.str());
  for (index_t j = 0; j < 4; ++j)
    for (index_t i = 0; i < 4; ++i) EXPECT_EQ(dh.values(i, j), cplx(h(i, j)));

  const auto path = (std::filesystem::temp_directory_path() / "twosided_mm_roundtrip.mtx").string();
  write_matrix_market_file<T>(path, h.cview(), true);
  const auto df = read_matrix_market_file(path);
  EXPECT_EQ(df.values, dh.values);
  std::filesystem::remove(path);
}

TEST(MatrixMarket, LowerOnlyNeedsSquare) {
  std::ostringstream os;
  EXPECT_THROW(write_matrix_market(os, DenseMatrix<double>(2, 3).cview(), true), InvalidArgument);
}

}  // namespace
}  // namespace twosided
