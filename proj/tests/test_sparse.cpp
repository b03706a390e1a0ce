#include <filesystem>

#include <gtest/gtest.h>

#include "hpfem/sparse.hpp"

namespace hpfem {
namespace {

TEST(SparseMatrix, SumsDuplicates)
{
  const std::vector<Triplet> t{{0, 0, 1.0}, {1, 2, 2.0}, {0, 0, 3.0}, {2, 1, 2.0}, {1, 2, -0.5}};
  const SparseMatrix a(3, t);
  EXPECT_EQ(a.nonzeros(), 3);
  EXPECT_EQ(a.coeff(0, 0), 4.0);
  EXPECT_EQ(a.coeff(1, 2), 1.5);
  EXPECT_EQ(a.coeff(2, 1), 2.0);
  EXPECT_EQ(a.coeff(1, 1), 0.0);
  EXPECT_EQ(a.row_ptr().size(), 4u);
}

TEST(SparseMatrix, ColumnsSortedWithinRows)
{
  const std::vector<Triplet> t{{1, 3, 1.0}, {1, 0, 2.0}, {0, 2, 1.0}, {1, 1, 4.0}, {3, 3, 1.0}};
  const SparseMatrix a(4, t);
  const auto rp = a.row_ptr();
  const auto ci = a.col_index();
  for (int i = 0; i < 4; ++i)
    for (int k = rp[i] + 1; k < rp[i + 1]; ++k)
      EXPECT_LT(ci[k - 1], ci[k]);
  EXPECT_EQ(rp[3] - rp[2], 0);
}

TEST(SparseMatrix, DeterministicBitwise)
{
  std::vector<Triplet> t;
  for (int k = 0; k < 2000; ++k)
    t.push_back({(k * 7) % 50, (k * 13) % 50, 1.0 / (k + 3)});
  const SparseMatrix a(50, t), b(50, t);
  ASSERT_EQ(a.nonzeros(), b.nonzeros());
  for (long long i = 0; i < a.nonzeros(); ++i)
    EXPECT_EQ(a.values()[i], b.values()[i]);
}

TEST(SparseMatrix, MultiplyAndDiagonal)
{
  const std::vector<Triplet> t{{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0}, {2, 2, 5.0}};
  const SparseMatrix a(3, t, true);
  const auto y = a.multiply(std::vector<double>{1.0, 2.0, 3.0});
  EXPECT_EQ(y, (std::vector<double>{0.0, 3.0, 15.0}));
  EXPECT_EQ(a.diagonal(), (std::vector<double>{2.0, 2.0, 5.0}));
  EXPECT_EQ(a.max_asymmetry(), 0.0);
  EXPECT_EQ(a.max_abs(), 5.0);

  const SparseMatrix c = SparseMatrix::linear_combination(2.0, a, 1.0, SparseMatrix(3, std::vector<Triplet>{{0, 2, 1.0}}));
  EXPECT_EQ(c.coeff(0, 0), 4.0);
  EXPECT_EQ(c.coeff(0, 2), 1.0);
  EXPECT_EQ(c.coeff(2, 2), 10.0);
  EXPECT_EQ(c.to_dense()(0, 2), 1.0);
  EXPECT_EQ(c.to_eigen().coeff(1, 0), -2.0);
}

TEST(SparseMatrix, FromUpperMirrors)
{
  const std::vector<Triplet> upper{{0, 0, 1.0}, {0, 2, 0.5}, {1, 1, 2.0}, {0, 2, 0.25}, {2, 2, 3.0}, {1, 2, -1.0}};
  const SparseMatrix a = SparseMatrix::from_upper(3, upper);
  EXPECT_TRUE(a.symmetric());
  EXPECT_EQ(a.nonzeros(), 7);
  EXPECT_EQ(a.coeff(2, 0), 0.75);
  EXPECT_EQ(a.coeff(0, 2), 0.75);
  EXPECT_EQ(a.coeff(2, 1), -1.0);
  EXPECT_EQ(a.max_asymmetry(), 0.0);
  const auto rp = a.row_ptr();
  const auto ci = a.col_index();
  for (int i = 0; i < 3; ++i)
    for (int k = rp[i] + 1; k < rp[i + 1]; ++k)
      EXPECT_LT(ci[k - 1], ci[k]);
  EXPECT_THROW(SparseMatrix::from_upper(3, std::vector<Triplet>{{2, 0, 1.0}}), std::invalid_argument);
}

TEST(MatrixMarket, RoundTrip)
{
  const std::vector<Triplet> t{{0, 0, 1.0 / 3.0}, {0, 2, 0.1}, {2, 0, 0.1}, {1, 1, 2.0}, {2, 2, 1e-17}};
  const auto path = std::filesystem::temp_directory_path() / "hpfem_mm_roundtrip.mtx";
  for (bool sym : {true, false}) {
    const SparseMatrix a(3, t, sym);
    write_matrix_market(a, path);
    const SparseMatrix b = read_matrix_market(path);
    EXPECT_EQ(b.symmetric(), sym);
    ASSERT_EQ(b.nonzeros(), a.nonzeros());
    for (long long i = 0; i < a.nonzeros(); ++i)
      EXPECT_EQ(a.values()[i], b.values()[i]);
  }
  std::filesystem::remove(path);
}

} // namespace
} // namespace hpfem
