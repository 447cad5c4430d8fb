#include "koszulkit/exactlin.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace koszulkit {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr std::int64_t kSmallMax = std::numeric_limits<std::int64_t>::max();

u128 abs128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class mpz_from_u128(u128 v) {
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  return (hi << 64) + lo;
}

mpz_class mpz_from_i128(i128 v) {
  mpz_class m = mpz_from_u128(abs128(v));
  return v < 0 ? mpz_class(-m) : m;
}

bool fits_small(const mpz_class& z) {
  return mpz_fits_slong_p(z.get_mpz_t()) != 0 && z != std::numeric_limits<long>::min();
}

}  // namespace

Scalar::Scalar(long long numerator, long long denominator) {
  if (denominator == 0) throw std::invalid_argument("Scalar: zero denominator");
  assign_wide(numerator, denominator);
}

Scalar::Scalar(const mpq_class& value) { assign_mpq(value); }

Scalar::Scalar(const Scalar& other)
    : num_(other.num_),
      den_(other.den_),
      big_(other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr) {}

Scalar& Scalar::operator=(const Scalar& other) {
  if (this == &other) return *this;
  num_ = other.num_;
  den_ = other.den_;
  if (other.big_) {
    big_ = std::make_unique<mpq_class>(*other.big_);
  } else {
    big_.reset();
  }
  return *this;
}

Scalar Scalar::parse(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw std::invalid_argument("Scalar::parse: empty string");
  auto valid_int = [](const std::string& part) {
    std::size_t start = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (start >= part.size()) return false;
    return std::all_of(part.begin() + static_cast<long>(start), part.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den)) {
    throw std::invalid_argument("Scalar::parse: malformed rational '" + std::string(text) + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  mpz_class n(num), d(den);
  if (d == 0) throw std::invalid_argument("Scalar::parse: zero denominator");
  mpq_class q(n, d);
  q.canonicalize();
  return Scalar(q);
}

void Scalar::assign_mpq(const mpq_class& value) {
  mpq_class q(value);
  q.canonicalize();
  if (fits_small(q.get_num()) && fits_small(q.get_den())) {
    num_ = q.get_num().get_si();
    den_ = q.get_den().get_si();
    big_.reset();
  } else {
    num_ = 0;
    den_ = 1;
    big_ = std::make_unique<mpq_class>(std::move(q));
  }
}

void Scalar::assign_wide(i128 numerator, i128 denominator) {
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  u128 g = gcd128(abs128(numerator), static_cast<u128>(denominator));
  if (g > 1) {
    numerator /= static_cast<i128>(g);
    denominator /= static_cast<i128>(g);
  }
  if (abs128(numerator) <= static_cast<u128>(kSmallMax) &&
      static_cast<u128>(denominator) <= static_cast<u128>(kSmallMax)) {
    num_ = static_cast<std::int64_t>(numerator);
    den_ = static_cast<std::int64_t>(denominator);
    big_.reset();
    return;
  }
  mpq_class q(mpz_from_i128(numerator), mpz_from_i128(denominator));
  num_ = 0;
  den_ = 1;
  big_ = std::make_unique<mpq_class>(std::move(q));
}

int Scalar::sign() const {
  if (big_) return sgn(*big_);
  return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
}

mpq_class Scalar::to_mpq() const {
  if (big_) return *big_;
  return {mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_))};
}

std::string Scalar::to_string() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("Scalar::inverse of zero");
  if (big_) return Scalar(mpq_class(1) / *big_);
  Scalar r;
  r.assign_wide(den_, num_);
  return r;
}

Scalar Scalar::operator-() const {
  if (big_) return Scalar(mpq_class(-*big_));
  Scalar r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  if (rhs.is_zero()) return *this;
  if (!big_ && !rhs.big_) {
    if (den_ == 1 && rhs.den_ == 1) {
      assign_wide(static_cast<i128>(num_) + rhs.num_, 1);
    } else {
      assign_wide(static_cast<i128>(num_) * rhs.den_ + static_cast<i128>(rhs.num_) * den_,
                  static_cast<i128>(den_) * rhs.den_);
    }
    return *this;
  }
  assign_mpq(to_mpq() + rhs.to_mpq());
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  if (rhs.is_zero()) return *this;
  if (!big_ && !rhs.big_) {
    assign_wide(static_cast<i128>(num_) * rhs.den_ - static_cast<i128>(rhs.num_) * den_,
                static_cast<i128>(den_) * rhs.den_);
    return *this;
  }
  assign_mpq(to_mpq() - rhs.to_mpq());
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  if (is_zero()) return *this;
  if (rhs.is_zero()) {
    *this = Scalar();
    return *this;
  }
  if (!big_ && !rhs.big_) {
    assign_wide(static_cast<i128>(num_) * rhs.num_, static_cast<i128>(den_) * rhs.den_);
    return *this;
  }
  assign_mpq(to_mpq() * rhs.to_mpq());
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (rhs.is_zero()) throw std::domain_error("Scalar: division by zero");
  if (!big_ && !rhs.big_) {
    assign_wide(static_cast<i128>(num_) * rhs.den_, static_cast<i128>(den_) * rhs.num_);
    return *this;
  }
  assign_mpq(to_mpq() / rhs.to_mpq());
  return *this;
}

bool operator==(const Scalar& lhs, const Scalar& rhs) {
  // Both representations are canonical, and a value that fits inline is never
  // stored as big.
  if (static_cast<bool>(lhs.big_) != static_cast<bool>(rhs.big_)) return false;
  if (lhs.big_) return *lhs.big_ == *rhs.big_;
  return lhs.num_ == rhs.num_ && lhs.den_ == rhs.den_;
}

bool operator<(const Scalar& lhs, const Scalar& rhs) {
  if (!lhs.big_ && !rhs.big_) {
    return static_cast<i128>(lhs.num_) * rhs.den_ < static_cast<i128>(rhs.num_) * lhs.den_;
  }
  return lhs.to_mpq() < rhs.to_mpq();
}

// ---------------------------------------------------------------------------

void axpy(SparseVector& lhs, const Scalar& factor, const SparseVector& rhs) {
  if (factor.is_zero() || rhs.empty()) return;
  SparseVector out;
  out.reserve(lhs.size() + rhs.size());
  std::size_t i = 0, j = 0;
  while (i < lhs.size() || j < rhs.size()) {
    if (j == rhs.size() || (i < lhs.size() && lhs[i].first < rhs[j].first)) {
      out.push_back(std::move(lhs[i++]));
    } else if (i == lhs.size() || rhs[j].first < lhs[i].first) {
      out.emplace_back(rhs[j].first, factor * rhs[j].second);
      ++j;
    } else {
      Scalar v = lhs[i].second + factor * rhs[j].second;
      if (!v.is_zero()) out.emplace_back(lhs[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  lhs = std::move(out);
}

SparseVector to_sparse(const Vector& dense) {
  SparseVector out;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (!dense[i].is_zero()) out.emplace_back(i, dense[i]);
  }
  return out;
}

Vector to_dense(const SparseVector& sparse, std::size_t size) {
  Vector out(size);
  for (const auto& [i, v] : sparse) out.at(i) = v;
  return out;
}

// ---------------------------------------------------------------------------

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("Matrix: entry count does not match rows*cols");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw std::invalid_argument("Matrix::from_rows: ragged rows");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vector Matrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<long>(r * cols_),
          data_.begin() + static_cast<long>((r + 1) * cols_)};
}

void Matrix::set_column(std::size_t c, const Vector& v) {
  if (v.size() != rows_) throw std::invalid_argument("Matrix::set_column: size mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Matrix Matrix::submatrix(const std::vector<std::size_t>& row_ids,
                         const std::vector<std::size_t>& col_ids) const {
  Matrix s(row_ids.size(), col_ids.size());
  for (std::size_t r = 0; r < row_ids.size(); ++r) {
    for (std::size_t c = 0; c < col_ids.size(); ++c) s(r, c) = (*this)(row_ids[r], col_ids[c]);
  }
  return s;
}

Vector Matrix::apply(const Vector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
  Vector out(rows_);
  for (std::size_t c = 0; c < cols_; ++c) {
    if (v[c].is_zero()) continue;
    for (std::size_t r = 0; r < rows_; ++r) {
      const Scalar& a = (*this)(r, c);
      if (!a.is_zero()) out[r] += a * v[c];
    }
  }
  return out;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("Matrix +: shape");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!rhs.data_[i].is_zero()) data_[i] += rhs.data_[i];
  }
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("Matrix -: shape");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!rhs.data_[i].is_zero()) data_[i] -= rhs.data_[i];
  }
  return *this;
}

Matrix& Matrix::operator*=(const Scalar& factor) {
  for (auto& x : data_) {
    if (!x.is_zero()) x *= factor;
  }
  return *this;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols_ != rhs.rows_) throw std::invalid_argument("Matrix *: shape mismatch");
  Matrix out(lhs.rows_, rhs.cols_);
  for (std::size_t i = 0; i < lhs.rows_; ++i) {
    for (std::size_t k = 0; k < lhs.cols_; ++k) {
      const Scalar& a = lhs(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        const Scalar& b = rhs(k, j);
        if (!b.is_zero()) out(i, j) += a * b;
      }
    }
  }
  return out;
}

bool operator==(const Matrix& lhs, const Matrix& rhs) {
  return lhs.rows_ == rhs.rows_ && lhs.cols_ == rhs.cols_ && lhs.data_ == rhs.data_;
}

// ---------------------------------------------------------------------------

namespace {

// In-place reduced row echelon form over the column visiting order `cols`.
// Returns pivot columns in row order.
std::vector<std::size_t> eliminate(std::vector<Vector>& rows, const std::vector<std::size_t>& cols) {
  std::vector<std::size_t> pivots;
  std::size_t next = 0;
  for (std::size_t c : cols) {
    std::size_t p = next;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[next]);
    Vector& prow = rows[next];
    Scalar inv = prow[c].inverse();
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < prow.size(); ++j) {
      if (!prow[j].is_zero()) {
        prow[j] *= inv;
        support.push_back(j);
      }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == next || rows[r][c].is_zero()) continue;
      Scalar f = rows[r][c];
      for (std::size_t j : support) rows[r][j] -= f * prow[j];
    }
    pivots.push_back(c);
    ++next;
    if (next == rows.size()) break;
  }
  rows.resize(next);
  return pivots;
}

std::vector<std::size_t> column_order(std::size_t n, PivotOrder order) {
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i < n; ++i) cols[i] = order == PivotOrder::first ? i : n - 1 - i;
  return cols;
}

}  // namespace

RowEchelon rref(const Matrix& m, PivotOrder order) {
  std::vector<Vector> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Vector row = m.row(r);
    if (std::any_of(row.begin(), row.end(), [](const Scalar& s) { return !s.is_zero(); })) {
      rows.push_back(std::move(row));
    }
  }
  auto pivots = eliminate(rows, column_order(m.cols(), order));
  Matrix reduced(rows.size(), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) reduced(r, c) = std::move(rows[r][c]);
  }
  return {std::move(reduced), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::vector<std::size_t> free_columns(const Matrix& m) {
  auto pivots = rref(m).pivots;
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (!is_pivot[c]) out.push_back(c);
  }
  return out;
}

Matrix kernel_basis(const Matrix& m) {
  auto ech = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : ech.pivots) is_pivot[p] = true;
  std::vector<std::size_t> frees;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (!is_pivot[c]) frees.push_back(c);
  }
  Matrix k(m.cols(), frees.size());
  for (std::size_t j = 0; j < frees.size(); ++j) {
    k(frees[j], j) = 1;
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
      const Scalar& v = ech.reduced(r, frees[j]);
      if (!v.is_zero()) k(ech.pivots[r], j) = -v;
    }
  }
  return k;
}

std::optional<Matrix> solve(const Matrix& m, const Matrix& b, PivotOrder order) {
  if (m.rows() != b.rows()) throw std::invalid_argument("solve: row counts differ");
  // Row-reduce [m | b] over the columns of m only.
  std::vector<Vector> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Vector row = m.row(r);
    Vector rb = b.row(r);
    row.insert(row.end(), rb.begin(), rb.end());
    rows.push_back(std::move(row));
  }
  // Keep zero rows: a zero row of m with nonzero b is an inconsistency.
  std::vector<std::size_t> pivots;
  std::size_t next = 0;
  for (std::size_t c : column_order(m.cols(), order)) {
    std::size_t p = next;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[next]);
    Vector& prow = rows[next];
    Scalar inv = prow[c].inverse();
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < prow.size(); ++j) {
      if (!prow[j].is_zero()) {
        prow[j] *= inv;
        support.push_back(j);
      }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == next || rows[r][c].is_zero()) continue;
      Scalar f = rows[r][c];
      for (std::size_t j : support) rows[r][j] -= f * prow[j];
    }
    pivots.push_back(c);
    ++next;
  }
  for (std::size_t r = next; r < rows.size(); ++r) {
    for (std::size_t j = m.cols(); j < rows[r].size(); ++j) {
      if (!rows[r][j].is_zero()) return std::nullopt;
    }
  }
  Matrix x(m.cols(), b.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    for (std::size_t j = 0; j < b.cols(); ++j) x(pivots[r], j) = rows[r][m.cols() + j];
  }
  return x;
}

// ---------------------------------------------------------------------------

Vector Subspace::reduce(Vector v, Vector* combination) const {
  if (combination) combination->assign(echelon_.size(), Scalar());
  for (std::size_t i = 0; i < echelon_.size(); ++i) {
    const Scalar& f = v[pivot_[i]];
    if (f.is_zero()) continue;
    Scalar factor = f;
    if (combination) (*combination)[i] = factor;
    const Vector& row = echelon_[i];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_zero()) v[j] -= factor * row[j];
    }
  }
  return v;
}

bool Subspace::add(const Vector& v) {
  if (v.size() != ambient_) throw std::invalid_argument("Subspace::add: size mismatch");
  Vector comb;
  Vector residue = reduce(v, &comb);
  std::size_t p = 0;
  while (p < residue.size() && residue[p].is_zero()) ++p;
  if (p == residue.size()) return false;
  // residue = v - sum comb[i] echelon_[i]; express in kept generators.
  std::size_t k = basis_.size();
  Vector t(k + 1);
  t[k] = 1;
  for (std::size_t i = 0; i < echelon_.size(); ++i) {
    if (comb[i].is_zero()) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (!transform_[i][j].is_zero()) t[j] -= comb[i] * transform_[i][j];
    }
  }
  Scalar inv = residue[p].inverse();
  for (auto& x : residue) {
    if (!x.is_zero()) x *= inv;
  }
  for (auto& x : t) {
    if (!x.is_zero()) x *= inv;
  }
  // Keep echelon rows reduced at the new pivot.
  for (std::size_t i = 0; i < echelon_.size(); ++i) {
    Scalar f = echelon_[i][p];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < ambient_; ++j) {
      if (!residue[j].is_zero()) echelon_[i][j] -= f * residue[j];
    }
    transform_[i].resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
      if (!t[j].is_zero()) transform_[i][j] -= f * t[j];
    }
  }
  for (auto& tr : transform_) tr.resize(k + 1);
  basis_.push_back(v);
  echelon_.push_back(std::move(residue));
  pivot_.push_back(p);
  transform_.push_back(std::move(t));
  return true;
}

bool Subspace::contains(const Vector& v) const {
  Vector residue = reduce(v, nullptr);
  return std::all_of(residue.begin(), residue.end(), [](const Scalar& s) { return s.is_zero(); });
}

std::optional<Vector> Subspace::coordinates(const Vector& v) const {
  if (v.size() != ambient_) throw std::invalid_argument("Subspace::coordinates: size mismatch");
  Vector comb;
  Vector residue = reduce(v, &comb);
  if (!std::all_of(residue.begin(), residue.end(), [](const Scalar& s) { return s.is_zero(); })) {
    return std::nullopt;
  }
  Vector out(basis_.size());
  for (std::size_t i = 0; i < echelon_.size(); ++i) {
    if (comb[i].is_zero()) continue;
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      if (!transform_[i][j].is_zero()) out[j] += comb[i] * transform_[i][j];
    }
  }
  return out;
}

LinearQuotient linear_quotient(const std::vector<Vector>& rows, std::size_t n) {
  Matrix m(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
  }
  RowEchelon e = rref(m, PivotOrder::last);
  std::vector<long> pivot_row(n, -1);
  for (std::size_t r = 0; r < e.pivots.size(); ++r) pivot_row[e.pivots[r]] = static_cast<long>(r);
  LinearQuotient out;
  std::vector<long> position(n, -1);
  for (std::size_t c = 0; c < n; ++c) {
    if (pivot_row[c] < 0) {
      position[c] = static_cast<long>(out.kept.size());
      out.kept.push_back(c);
    }
  }
  out.image.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (pivot_row[c] < 0) {
      out.image[c] = {{static_cast<std::size_t>(position[c]), Scalar(1)}};
      continue;
    }
    const auto row = static_cast<std::size_t>(pivot_row[c]);
    for (std::size_t k : out.kept) {
      const Scalar& v = e.reduced(row, k);
      if (!v.is_zero()) out.image[c].emplace_back(static_cast<std::size_t>(position[k]), -v);
    }
  }
  return out;
}

}  // namespace koszulkit
