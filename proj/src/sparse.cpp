#include "hpfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hpfem {

SparseMatrix::SparseMatrix(int n, std::span<const Triplet> triplets, bool symmetric)
    : n_(n), symmetric_(symmetric)
{
  if (n < 0)
    throw std::invalid_argument("SparseMatrix: negative dimension");

  // counting sort by row keeps insertion order within each row
  std::vector<long long> count(n + 1, 0);
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw std::out_of_range("SparseMatrix: triplet index out of range");
    ++count[t.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<Triplet> bucket(triplets.size());
  {
    std::vector<long long> next(count.begin(), count.end() - 1);
    for (const Triplet& t : triplets)
      bucket[next[t.row]++] = t;
  }

  row_ptr_.assign(n + 1, 0);
  col_.clear();
  values_.clear();
  for (int i = 0; i < n; ++i) {
    const auto first = bucket.begin() + count[i];
    const auto last = bucket.begin() + count[i + 1];
    std::stable_sort(first, last, [](const Triplet& a, const Triplet& b) { return a.col < b.col; });
    for (auto it = first; it != last;) {
      const int c = it->col;
      double sum = 0.0;
      for (; it != last && it->col == c; ++it)
        sum += it->value;
      col_.push_back(c);
      values_.push_back(sum);
    }
    row_ptr_[i + 1] = static_cast<int>(col_.size());
  }
}

SparseMatrix SparseMatrix::from_upper(int n, std::span<const Triplet> upper)
{
  for (const Triplet& t : upper)
    if (t.row > t.col)
      throw std::invalid_argument("SparseMatrix::from_upper: entry below the diagonal");
  const SparseMatrix u(n, upper);

  // row i of the result: transposed entries (c, i) for c < i, then row i of u
  SparseMatrix a;
  a.n_ = n;
  a.symmetric_ = true;
  a.row_ptr_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    for (int p = u.row_ptr_[i]; p < u.row_ptr_[i + 1]; ++p) {
      ++a.row_ptr_[i + 1];
      if (u.col_[p] != i)
        ++a.row_ptr_[u.col_[p] + 1];
    }
  std::partial_sum(a.row_ptr_.begin(), a.row_ptr_.end(), a.row_ptr_.begin());
  a.col_.resize(a.row_ptr_[n]);
  a.values_.resize(a.row_ptr_[n]);
  std::vector<int> next(a.row_ptr_.begin(), a.row_ptr_.end() - 1);
  for (int i = 0; i < n; ++i)
    for (int p = u.row_ptr_[i]; p < u.row_ptr_[i + 1]; ++p) {
      const int c = u.col_[p];
      if (c != i) {
        a.col_[next[c]] = i;
        a.values_[next[c]++] = u.values_[p];
      }
    }
  for (int i = 0; i < n; ++i)
    for (int p = u.row_ptr_[i]; p < u.row_ptr_[i + 1]; ++p) {
      a.col_[next[i]] = u.col_[p];
      a.values_[next[i]++] = u.values_[p];
    }
  return a;
}

double SparseMatrix::coeff(int i, int j) const
{
  const auto first = col_.begin() + row_ptr_[i];
  const auto last = col_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j)
    return 0.0;
  return values_[it - col_.begin()];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
  if (x.size() != static_cast<std::size_t>(n_) || y.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      s += values_[p] * x[col_[p]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const
{
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

std::vector<double> SparseMatrix::diagonal() const
{
  std::vector<double> d(n_);
  for (int i = 0; i < n_; ++i)
    d[i] = coeff(i, i);
  return d;
}

double SparseMatrix::max_asymmetry() const
{
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      worst = std::max(worst, std::abs(values_[p] - coeff(col_[p], i)));
  return worst;
}

double SparseMatrix::max_abs() const
{
  double m = 0.0;
  for (double v : values_)
    m = std::max(m, std::abs(v));
  return m;
}

SparseMatrix SparseMatrix::linear_combination(double alpha, const SparseMatrix& a, double beta,
                                              const SparseMatrix& b)
{
  if (a.n_ != b.n_)
    throw std::invalid_argument("linear_combination: dimension mismatch");
  std::vector<Triplet> t;
  t.reserve(a.values_.size() + b.values_.size());
  for (int i = 0; i < a.n_; ++i) {
    for (int p = a.row_ptr_[i]; p < a.row_ptr_[i + 1]; ++p)
      t.push_back({i, a.col_[p], alpha * a.values_[p]});
    for (int p = b.row_ptr_[i]; p < b.row_ptr_[i + 1]; ++p)
      t.push_back({i, b.col_[p], beta * b.values_[p]});
  }
  return SparseMatrix(a.n_, t, a.symmetric_ && b.symmetric_);
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const
{
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      t.emplace_back(i, col_[p], values_[p]);
  Eigen::SparseMatrix<double> m(n_, n_);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::MatrixXd SparseMatrix::to_dense() const
{
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      d(i, col_[p]) = values_[p];
  return d;
}

void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& file)
{
  std::ofstream out(file);
  if (!out)
    throw std::runtime_error("cannot write " + file.string());
  const auto rp = a.row_ptr();
  const auto ci = a.col_index();
  const auto v = a.values();
  long long count = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int p = rp[i]; p < rp[i + 1]; ++p)
      if (!a.symmetric() || ci[p] <= i)
        ++count;
  out << "%%MatrixMarket matrix coordinate real " << (a.symmetric() ? "symmetric" : "general")
      << '\n';
  out << a.rows() << ' ' << a.cols() << ' ' << count << '\n';
  out << std::setprecision(17);
  for (int i = 0; i < a.rows(); ++i)
    for (int p = rp[i]; p < rp[i + 1]; ++p)
      if (!a.symmetric() || ci[p] <= i)
        out << i + 1 << ' ' << ci[p] + 1 << ' ' << v[p] << '\n';
}

SparseMatrix read_matrix_market(const std::filesystem::path& file)
{
  std::ifstream in(file);
  if (!in)
    throw std::runtime_error("cannot open " + file.string());
  std::string line;
  std::getline(in, line);
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || object != "matrix" || format != "coordinate" || field != "real")
    throw std::runtime_error("unsupported MatrixMarket header in " + file.string());
  const bool symmetric = symmetry == "symmetric";
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream size(line);
  int rows = 0, cols = 0;
  long long nnz = 0;
  size >> rows >> cols >> nnz;
  if (rows != cols)
    throw std::runtime_error("MatrixMarket matrix is not square");
  std::vector<Triplet> t;
  t.reserve(symmetric ? 2 * nnz : nnz);
  for (long long k = 0; k < nnz; ++k) {
    int i, j;
    double v;
    if (!(in >> i >> j >> v))
      throw std::runtime_error("truncated MatrixMarket file " + file.string());
    t.push_back({i - 1, j - 1, v});
    if (symmetric && i != j)
      t.push_back({j - 1, i - 1, v});
  }
  return SparseMatrix(rows, t, symmetric);
}

} // namespace hpfem
