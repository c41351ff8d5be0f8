#ifndef AMALGAM_LINALG_HPP
#define AMALGAM_LINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "amalgam/scalar.hpp"

// Exact linear algebra over the Gaussian rationals.
namespace amalgam::linalg {

class Mat {
public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Mat identity(std::size_t n);
  static Mat from_columns(const std::vector<Vec>& cols, std::size_t rows);
  static Mat from_rows(const std::vector<Vec>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec row(std::size_t r) const;
  Vec col(std::size_t c) const;
  void set_col(std::size_t c, const Vec& v);

  Mat adjoint() const;
  bool is_zero() const;

  friend Mat operator*(const Mat& a, const Mat& b);
  friend Vec operator*(const Mat& a, const Vec& v);
  friend Mat operator+(const Mat& a, const Mat& b);
  friend Mat operator-(const Mat& a, const Mat& b);
  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

Vec zeros(std::size_t n);
Vec unit_vector(std::size_t n, std::size_t k);
bool is_zero(const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Scalar& s, const Vec& v);
void axpy(const Scalar& s, const Vec& x, Vec& y);  // y += s*x
Vec conj(const Vec& v);

/// Row-reduces in place to reduced echelon form; returns pivot columns.
std::vector<std::size_t> rref(Mat& m);

std::size_t rank(Mat m);
std::size_t rank(const std::vector<Vec>& vectors, std::size_t dim);

/// Basis of {x : m x = 0}, one vector per free column.
std::vector<Vec> nullspace(Mat m);

/// Some solution of m x = b, or nullopt when inconsistent.
std::optional<Vec> solve(const Mat& m, const Vec& b);
/// Solutions with free variables set to zero, one per target; nullopt where inconsistent.
std::vector<std::optional<Vec>> solve_many(const Mat& m, const std::vector<Vec>& targets);

Mat kron(const Mat& a, const Mat& b);
Vec kron(const Vec& a, const Vec& b);

/// Subspace of K^n kept as a canonical reduced echelon basis.
class Subspace {
public:
  explicit Subspace(std::size_t ambient = 0) : n_(ambient) {}

  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<Vec>& basis() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Returns true when v was outside the span (and is now included).
  bool insert(const Vec& v);
  bool contains(const Vec& v) const;
  /// v minus its component along the echelon rows (zero at pivot columns).
  Vec reduce(const Vec& v) const;
  /// Coordinates of v (which must lie in the span) against basis().
  Vec coordinates(const Vec& v) const;

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.n_ == b.n_ && a.rows_ == b.rows_; }

private:
  std::size_t n_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

Subspace span_of(const std::vector<Vec>& vectors, std::size_t ambient);
Subspace intersect(const Subspace& a, const Subspace& b);

/// Result of an exact LDL* factorization of a Hermitian matrix with
/// symmetric pivoting.  psd is decided exactly.
struct LdlResult {
  bool hermitian = true;
  bool psd = true;
  std::vector<mpq_class> diagonal;  // nonzero pivots, in elimination order
  std::size_t rank = 0;
};
LdlResult ldl_hermitian(Mat m);

}  // namespace amalgam::linalg

#endif  // AMALGAM_LINALG_HPP
