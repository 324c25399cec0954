#include <sstream>

#include "phimod/exactfield.hpp"

namespace phimod {

MatrixF::MatrixF(FieldSpec field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), a_(rows * cols, CoeffElem(field)) {}

MatrixF::MatrixF(FieldSpec field, std::size_t rows, std::size_t cols, std::vector<CoeffElem> entries)
    : field_(field), rows_(rows), cols_(cols), a_(std::move(entries)) {
  require(a_.size() == rows * cols, ErrorKind::DimensionMismatch, "entry count does not match shape");
  for (const auto& x : a_) require(x.field() == field_, ErrorKind::IncompatibleTower, "entry from another field");
}

MatrixF MatrixF::identity(FieldSpec field, std::size_t n) {
  MatrixF m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = CoeffElem::one(field);
  return m;
}

MatrixF MatrixF::from_rationals(FieldSpec field, const std::vector<std::vector<Rational>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.front().size() : 0;
  MatrixF m(field, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    require(rows[i].size() == c, ErrorKind::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = CoeffElem(field, rows[i][j]);
  }
  return m;
}

MatrixF MatrixF::from_columns(FieldSpec field, std::size_t rows, const std::vector<std::vector<CoeffElem>>& cols) {
  MatrixF m(field, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    require(cols[j].size() == rows, ErrorKind::DimensionMismatch, "column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

MatrixF MatrixF::diagonal(FieldSpec field, std::span<const CoeffElem> diag) {
  MatrixF m(field, diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

std::vector<CoeffElem> MatrixF::column(std::size_t j) const {
  std::vector<CoeffElem> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
  return out;
}

MatrixF MatrixF::columns(std::size_t first, std::size_t count) const {
  require(first + count <= cols_, ErrorKind::DimensionMismatch, "column range out of bounds");
  MatrixF out(field_, rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  return out;
}

MatrixF MatrixF::select_columns(std::span<const std::size_t> idx) const {
  MatrixF out(field_, rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = (*this)(i, idx[j]);
  return out;
}

MatrixF MatrixF::select_rows(std::span<const std::size_t> idx) const {
  MatrixF out(field_, idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(idx[i], j);
  return out;
}

MatrixF MatrixF::transpose() const {
  MatrixF out(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

MatrixF operator*(const MatrixF& a, const MatrixF& b) {
  require(a.cols_ == b.rows_, ErrorKind::DimensionMismatch, "product shape mismatch");
  MatrixF out(a.field_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const CoeffElem& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) out(i, j) += x * b(k, j);
    }
  return out;
}

MatrixF operator+(const MatrixF& a, const MatrixF& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorKind::DimensionMismatch, "sum shape mismatch");
  MatrixF out = a;
  for (std::size_t k = 0; k < out.a_.size(); ++k) out.a_[k] += b.a_[k];
  return out;
}

MatrixF operator-(const MatrixF& a, const MatrixF& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorKind::DimensionMismatch, "difference shape mismatch");
  MatrixF out = a;
  for (std::size_t k = 0; k < out.a_.size(); ++k) out.a_[k] -= b.a_[k];
  return out;
}

MatrixF MatrixF::scaled(const CoeffElem& s) const {
  MatrixF out = *this;
  for (auto& x : out.a_) x = x * s;
  return out;
}

bool MatrixF::operator==(const MatrixF& other) const {
  return field_ == other.field_ && rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_;
}

bool MatrixF::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

std::string MatrixF::to_string() const {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    out << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? ", " : "") << (*this)(i, j).to_string();
  }
  out << "]";
  return out.str();
}

MatrixF hcat(const MatrixF& a, const MatrixF& b) {
  require(a.rows() == b.rows(), ErrorKind::DimensionMismatch, "hcat row mismatch");
  MatrixF out(a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

Echelon row_reduce(const MatrixF& m) {
  Echelon e{m, {}};
  MatrixF& a = e.reduced;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    while (piv < a.rows() && a(piv, col).is_zero()) ++piv;
    if (piv == a.rows()) continue;
    if (piv != row)
      for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a(piv, k), a(row, k));
    const CoeffElem inv = a(row, col).inverse();
    for (std::size_t k = col; k < a.cols(); ++k)
      if (!a(row, k).is_zero()) a(row, k) = a(row, k) * inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col).is_zero()) continue;
      const CoeffElem factor = a(r, col);
      for (std::size_t k = col; k < a.cols(); ++k)
        if (!a(row, k).is_zero()) a(r, k) -= factor * a(row, k);
    }
    e.pivots.push_back(col);
    ++row;
  }
  return e;
}

std::size_t rank(const MatrixF& m) {
  if (m.empty()) return 0;
  return row_reduce(m).pivots.size();
}

CoeffElem determinant(const MatrixF& m) {
  require(m.rows() == m.cols(), ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  MatrixF a = m;
  const std::size_t n = a.rows();
  CoeffElem det = CoeffElem::one(m.field());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col).is_zero()) ++piv;
    if (piv == n) return CoeffElem::zero(m.field());
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(piv, k), a(col, k));
      det = -det;
    }
    det *= a(col, col);
    const CoeffElem inv = a(col, col).inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col).is_zero()) continue;
      const CoeffElem factor = a(r, col) * inv;
      for (std::size_t k = col; k < n; ++k)
        if (!a(col, k).is_zero()) a(r, k) -= factor * a(col, k);
    }
  }
  return det;
}

MatrixF kernel(const MatrixF& m) {
  const Echelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  MatrixF out(m.field(), m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t fc = free_cols[k];
    out(fc, k) = CoeffElem::one(m.field());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) out(e.pivots[r], k) = -e.reduced(r, fc);
  }
  return out;
}

MatrixF image(const MatrixF& m) {
  if (m.cols() == 0) return m;
  const Echelon e = row_reduce(m);
  return m.select_columns(e.pivots);
}

MatrixF solve(const MatrixF& a, const MatrixF& b) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch, "solve needs a square system");
  require(a.rows() == b.rows(), ErrorKind::DimensionMismatch, "solve right-hand side mismatch");
  const std::size_t n = a.rows();
  const Echelon e = row_reduce(hcat(a, b));
  require(e.pivots.size() >= n && (n == 0 || e.pivots[n - 1] == n - 1), ErrorKind::SingularMatrix,
          "system matrix is singular");
  return e.reduced.columns(n, b.cols()).select_rows([n] {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
  }());
}

MatrixF inverse(const MatrixF& m) { return solve(m, MatrixF::identity(m.field(), m.rows())); }

std::optional<MatrixF> coordinates(const MatrixF& basis, const MatrixF& target) {
  require(basis.rows() == target.rows(), ErrorKind::DimensionMismatch, "coordinates row mismatch");
  const std::size_t k = basis.cols();
  const Echelon e = row_reduce(hcat(basis, target));
  for (auto p : e.pivots)
    if (p >= k) return std::nullopt;
  require(e.pivots.size() == k, ErrorKind::PreconditionViolated, "basis columns are dependent");
  MatrixF out(basis.field(), k, target.cols());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < target.cols(); ++j) out(i, j) = e.reduced(i, k + j);
  return out;
}

MatrixF span_basis(const MatrixF& m) { return image(m); }

MatrixF subspace_sum(const MatrixF& a, const MatrixF& b) { return image(hcat(a, b)); }

MatrixF subspace_intersection(const MatrixF& a, const MatrixF& b) {
  require(a.rows() == b.rows(), ErrorKind::DimensionMismatch, "intersection ambient mismatch");
  const MatrixF ab = image(a);
  const MatrixF bb = image(b);
  if (ab.cols() == 0 || bb.cols() == 0) return MatrixF(a.field(), a.rows(), 0);
  const MatrixF k = kernel(hcat(ab, bb));
  if (k.cols() == 0) return MatrixF(a.field(), a.rows(), 0);
  std::vector<std::size_t> top(ab.cols());
  for (std::size_t i = 0; i < top.size(); ++i) top[i] = i;
  return image(ab * k.select_rows(top));
}

std::size_t intersection_dim(const MatrixF& a, const MatrixF& b) {
  require(a.rows() == b.rows(), ErrorKind::DimensionMismatch, "intersection ambient mismatch");
  return rank(a) + rank(b) - rank(hcat(a, b));
}

bool subspace_contains(const MatrixF& outer, const MatrixF& inner) {
  require(outer.rows() == inner.rows(), ErrorKind::DimensionMismatch, "containment ambient mismatch");
  return rank(hcat(outer, inner)) == rank(outer);
}

bool same_span(const MatrixF& a, const MatrixF& b) {
  return subspace_contains(a, b) && subspace_contains(b, a);
}

MatrixF complete_basis(const MatrixF& basis) {
  const std::size_t n = basis.rows();
  MatrixF cur = basis;
  std::size_t r = rank(cur);
  require(r == basis.cols(), ErrorKind::PreconditionViolated, "basis columns are dependent");
  for (std::size_t i = 0; i < n && r < n; ++i) {
    MatrixF e(basis.field(), n, 1);
    e(i, 0) = CoeffElem::one(basis.field());
    MatrixF next = hcat(cur, e);
    if (rank(next) > r) {
      cur = std::move(next);
      ++r;
    }
  }
  return cur;
}

std::vector<CoeffElem> characteristic_coefficients(const MatrixF& a) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch, "characteristic polynomial of non-square matrix");
  const std::size_t n = a.rows();
  const auto& field = a.field();
  std::vector<CoeffElem> coef(n + 1, CoeffElem::zero(field));
  coef[0] = CoeffElem::one(field);
  MatrixF mk(field, n, n);
  const MatrixF id = MatrixF::identity(field, n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = a * mk + id.scaled(coef[k - 1]);
    const MatrixF amk = a * mk;
    CoeffElem trace = CoeffElem::zero(field);
    for (std::size_t i = 0; i < n; ++i) trace += amk(i, i);
    coef[k] = -(trace * CoeffElem(field, frac(1, static_cast<long>(k))));
  }
  return {coef.begin() + 1, coef.end()};
}

MatrixF extend_scalars(const MatrixF& m, const FieldSpec& target) {
  std::vector<CoeffElem> entries;
  entries.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) entries.push_back(extend_scalars(m(i, j), target));
  return MatrixF(target, m.rows(), m.cols(), std::move(entries));
}

}  // namespace phimod
