#pragma once

// Exact rational linear algebra. Every other module in koszulkit sits on top
// of this; nothing here ever rounds.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace koszulkit {

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator. Values whose numerator and denominator fit in 63
/// bits are stored inline; anything larger spills into an mpq_class.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long long value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Scalar(int value) : num_(value) {}        // NOLINT(google-explicit-constructor)
  Scalar(long long numerator, long long denominator);
  explicit Scalar(const mpq_class& value);

  Scalar(const Scalar& other);
  Scalar(Scalar&& other) noexcept = default;
  Scalar& operator=(const Scalar& other);
  Scalar& operator=(Scalar&& other) noexcept = default;
  ~Scalar() = default;

  /// Parses "p", "-p", "p/q". Throws std::invalid_argument on malformed text
  /// or a zero denominator.
  static Scalar parse(std::string_view text);

  [[nodiscard]] bool is_zero() const { return !big_ && num_ == 0; }
  [[nodiscard]] bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  [[nodiscard]] int sign() const;
  [[nodiscard]] bool is_small() const { return !big_; }
  [[nodiscard]] mpq_class to_mpq() const;
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] Scalar inverse() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }
  friend bool operator==(const Scalar& lhs, const Scalar& rhs);
  friend bool operator!=(const Scalar& lhs, const Scalar& rhs) { return !(lhs == rhs); }
  friend bool operator<(const Scalar& lhs, const Scalar& rhs);
  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    return os << s.to_string();
  }

 private:
  void assign_mpq(const mpq_class& value);
  void assign_wide(__int128 numerator, __int128 denominator);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

using Vector = std::vector<Scalar>;

/// Sorted (index, nonzero coefficient) list.
using SparseVector = std::vector<std::pair<std::size_t, Scalar>>;

/// lhs += factor * rhs, keeping the result sorted and free of zeros.
void axpy(SparseVector& lhs, const Scalar& factor, const SparseVector& rhs);
SparseVector to_sparse(const Vector& dense);
Vector to_dense(const SparseVector& sparse, std::size_t size);

/// Dense row-major matrix of Scalars.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> entries);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows);
  static Matrix from_columns(const std::vector<Vector>& columns, std::size_t rows);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  [[nodiscard]] const std::vector<Scalar>& entries() const { return data_; }

  [[nodiscard]] Vector column(std::size_t c) const;
  [[nodiscard]] Vector row(std::size_t r) const;
  void set_column(std::size_t c, const Vector& v);
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] Matrix transpose() const;
  [[nodiscard]] Matrix submatrix(const std::vector<std::size_t>& row_ids,
                                 const std::vector<std::size_t>& col_ids) const;
  [[nodiscard]] Vector apply(const Vector& v) const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(const Scalar& factor);
  friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
  friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
  friend Matrix operator*(Matrix lhs, const Scalar& f) { return lhs *= f; }
  friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);
  friend bool operator==(const Matrix& lhs, const Matrix& rhs);
  friend bool operator!=(const Matrix& lhs, const Matrix& rhs) { return !(lhs == rhs); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// Pivot selection policy for solve(). `first` prefers the lowest-index
/// columns as pivots (free variables set to zero are the trailing ones);
/// `last` prefers the highest-index columns.
enum class PivotOrder { first, last };

struct RowEchelon {
  Matrix reduced;                    // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;   // pivot column of each row of `reduced`
};

RowEchelon rref(const Matrix& m, PivotOrder order = PivotOrder::first);
std::size_t rank(const Matrix& m);

/// Columns form a basis of {v : m v = 0}. Column k has a 1 in its own free
/// coordinate and 0 in every other free coordinate, so the coordinates of a
/// kernel vector in this basis are its entries at free_columns().
Matrix kernel_basis(const Matrix& m);
std::vector<std::size_t> free_columns(const Matrix& m);

/// Exact solution of m x = b (b may have several columns), or nullopt if any
/// column of b lies outside the column space of m.
std::optional<Matrix> solve(const Matrix& m, const Matrix& b, PivotOrder order = PivotOrder::first);

/// Linear span with fast coordinate readout.
///
/// Stores a basis in reduced echelon form; contains() and coordinates() are
/// relative to the original generating vectors that were kept (an independent
/// subset, chosen greedily in input order).
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

  /// Adds v if independent of the current span; returns true if it was added.
  bool add(const Vector& v);
  [[nodiscard]] std::size_t dim() const { return basis_.size(); }
  [[nodiscard]] std::size_t ambient() const { return ambient_; }
  [[nodiscard]] bool contains(const Vector& v) const;
  /// Coordinates of v with respect to basis() (the kept generators);
  /// nullopt when v is outside the span.
  [[nodiscard]] std::optional<Vector> coordinates(const Vector& v) const;
  [[nodiscard]] const std::vector<Vector>& basis() const { return basis_; }

 private:
  // Reduces v against the echelon rows; returns the residue and fills the
  // combination of echelon rows that was subtracted.
  Vector reduce(Vector v, Vector* combination) const;

  std::size_t ambient_ = 0;
  std::vector<Vector> basis_;        // kept generators
  std::vector<Vector> echelon_;      // echelon rows
  std::vector<std::size_t> pivot_;   // pivot column of each echelon row
  std::vector<Vector> transform_;    // echelon_[i] = sum_j transform_[i][j] basis_[j]
};

/// Standard-monomial quotient of k^n by span(rows): pivots at the last
/// coordinates, the remaining coordinates form the quotient basis.
struct LinearQuotient {
  std::vector<std::size_t> kept;       // ambient coordinates kept, increasing
  std::vector<SparseVector> image;     // ambient coordinate -> quotient coordinates
};

LinearQuotient linear_quotient(const std::vector<Vector>& rows, std::size_t n);

}  // namespace koszulkit
