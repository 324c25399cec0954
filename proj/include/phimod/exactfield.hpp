#pragma once

// Exact arithmetic in F = Q(pi), pi^m = p, with the additive p-adic valuation
// normalised by v(p) = 1, plus dense linear algebra over F.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phimod/error.hpp"

namespace phimod {

using Rational = mpq_class;

inline Rational frac(long num, long den) {
  Rational q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// p-adic valuation of a nonzero rational.
long padic_valuation(const Rational& q, long p);

bool is_prime(long n);

struct FieldSpec {
  int m = 1;
  long p = 2;

  FieldSpec() = default;
  FieldSpec(int ramification, long prime);

  bool operator==(const FieldSpec&) const = default;
};

// An additive valuation: a rational or +infinity.
class Val {
 public:
  Val() : infinite_(true) {}
  explicit Val(Rational v) : infinite_(false), value_(std::move(v)) {}
  static Val infinity() { return Val(); }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  const Rational& value() const;

  friend bool operator==(const Val& a, const Val& b);
  friend std::strong_ordering operator<=>(const Val& a, const Val& b);
  friend Val operator+(const Val& a, const Val& b);

  std::string to_string() const;
  static Val parse(std::string_view text);

 private:
  bool infinite_;
  Rational value_;
};

class CoeffElem {
 public:
  explicit CoeffElem(FieldSpec field = FieldSpec());
  CoeffElem(FieldSpec field, const Rational& q);
  CoeffElem(FieldSpec field, std::vector<Rational> coefficients);

  static CoeffElem zero(FieldSpec field) { return CoeffElem(field); }
  static CoeffElem one(FieldSpec field) { return CoeffElem(field, Rational(1)); }
  static CoeffElem pi(FieldSpec field);
  // unit * pi^(m * valuation); m * valuation must be an integer (any sign).
  static CoeffElem monomial(FieldSpec field, const Rational& unit, const Rational& valuation);

  const FieldSpec& field() const { return field_; }
  const Rational& coefficient(int j) const { return c_[static_cast<std::size_t>(j)]; }
  const std::vector<Rational>& coefficients() const { return c_; }

  bool is_zero() const;
  // True when only the constant coefficient may be nonzero.
  bool is_rational() const;

  CoeffElem inverse() const;

  CoeffElem& operator+=(const CoeffElem& b);
  CoeffElem& operator-=(const CoeffElem& b);
  CoeffElem& operator*=(const CoeffElem& b);
  CoeffElem& operator/=(const CoeffElem& b);
  friend CoeffElem operator+(CoeffElem a, const CoeffElem& b) { return a += b; }
  friend CoeffElem operator-(CoeffElem a, const CoeffElem& b) { return a -= b; }
  friend CoeffElem operator*(const CoeffElem& a, const CoeffElem& b);
  friend CoeffElem operator/(CoeffElem a, const CoeffElem& b) { return a /= b; }
  CoeffElem operator-() const;

  bool operator==(const CoeffElem& other) const;

  // "c0 + c1*pi + c2*pi^2"; zero terms omitted, "0" for zero.
  std::string to_string() const;
  static CoeffElem parse(std::string_view text, FieldSpec field);

 private:
  FieldSpec field_;
  std::vector<Rational> c_;
};

Val valuation(const CoeffElem& a);

// pi -> pi'^(m'/m).  Requires m | m' and equal p.
CoeffElem extend_scalars(const CoeffElem& a, const FieldSpec& target);

// Elementary symmetric polynomials e_0..e_n of the given values.
std::vector<CoeffElem> elementary_symmetric(std::span<const CoeffElem> values, const FieldSpec& field);

class MatrixF {
 public:
  MatrixF() = default;
  MatrixF(FieldSpec field, std::size_t rows, std::size_t cols);
  MatrixF(FieldSpec field, std::size_t rows, std::size_t cols, std::vector<CoeffElem> entries);

  static MatrixF identity(FieldSpec field, std::size_t n);
  static MatrixF from_rationals(FieldSpec field, const std::vector<std::vector<Rational>>& rows);
  static MatrixF from_columns(FieldSpec field, std::size_t rows, const std::vector<std::vector<CoeffElem>>& cols);
  static MatrixF diagonal(FieldSpec field, std::span<const CoeffElem> diag);

  const FieldSpec& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  CoeffElem& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const CoeffElem& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<CoeffElem> column(std::size_t j) const;
  MatrixF columns(std::size_t first, std::size_t count) const;
  MatrixF select_columns(std::span<const std::size_t> idx) const;
  MatrixF select_rows(std::span<const std::size_t> idx) const;
  MatrixF transpose() const;

  friend MatrixF operator*(const MatrixF& a, const MatrixF& b);
  friend MatrixF operator+(const MatrixF& a, const MatrixF& b);
  friend MatrixF operator-(const MatrixF& a, const MatrixF& b);
  MatrixF scaled(const CoeffElem& s) const;

  bool operator==(const MatrixF& other) const;

  bool is_zero() const;
  std::string to_string() const;

 private:
  FieldSpec field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<CoeffElem> a_;
};

// [A | B] side by side; row counts must agree.
MatrixF hcat(const MatrixF& a, const MatrixF& b);

struct Echelon {
  MatrixF reduced;                   // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

Echelon row_reduce(const MatrixF& m);
std::size_t rank(const MatrixF& m);
CoeffElem determinant(const MatrixF& m);
MatrixF kernel(const MatrixF& m);  // basis as columns (cols x nullity)
MatrixF image(const MatrixF& m);   // independent columns of m spanning its column space
MatrixF inverse(const MatrixF& m);
// Solves A X = B for square invertible A.
MatrixF solve(const MatrixF& a, const MatrixF& b);
// Coordinates X with basis * X = target; nullopt when some column of target is
// outside the span.  basis must have independent columns.
std::optional<MatrixF> coordinates(const MatrixF& basis, const MatrixF& target);

// Subspaces are represented by column matrices; the zero subspace of F^n is an
// n x 0 matrix.
MatrixF span_basis(const MatrixF& m);
MatrixF subspace_sum(const MatrixF& a, const MatrixF& b);
MatrixF subspace_intersection(const MatrixF& a, const MatrixF& b);
std::size_t intersection_dim(const MatrixF& a, const MatrixF& b);
bool subspace_contains(const MatrixF& outer, const MatrixF& inner);
bool same_span(const MatrixF& a, const MatrixF& b);
// Extends the columns of basis (independent) to a basis of F^n by appending
// standard vectors.
MatrixF complete_basis(const MatrixF& basis);

// Characteristic polynomial coefficients (c_1, ..., c_d) of
// T^d + c_1 T^{d-1} + ... + c_d, by Faddeev-LeVerrier.
std::vector<CoeffElem> characteristic_coefficients(const MatrixF& m);

MatrixF extend_scalars(const MatrixF& m, const FieldSpec& target);

}  // namespace phimod
