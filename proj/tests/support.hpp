#pragma once

// Shared builders for the test executables.

#include <random>
#include <vector>

#include "phimod/thmlab.hpp"

namespace phimod::testing {

inline FieldSpec q5() { return FieldSpec(1, 5); }

inline CoeffElem num(const FieldSpec& field, long a, long b = 1) { return CoeffElem(field, frac(a, b)); }

inline MatrixF cols(const FieldSpec& field, const std::vector<std::vector<long>>& columns) {
  std::vector<std::vector<CoeffElem>> c;
  for (const auto& col : columns) {
    std::vector<CoeffElem> v;
    for (long x : col) v.push_back(num(field, x));
    c.push_back(std::move(v));
  }
  return MatrixF::from_columns(field, columns.front().size(), c);
}

// Diagonal Frobenius with eigenvalues units[i] * p^valuations[i].
inline FrobeniusSpec diag_spec(const FieldSpec& field, const std::vector<long>& valuations, int f = 1,
                               std::vector<long> units = {}) {
  std::vector<IsotypicPiece> pieces;
  for (std::size_t i = 0; i < valuations.size(); ++i) {
    const long u = i < units.size() ? units[i] : 1;
    pieces.push_back({CoeffElem::monomial(field, Rational(u), valuations[i]), JordanBlock{1}});
  }
  return FrobeniusSpec(field, f, std::move(pieces));
}

inline FiltrationType full_flag_type3() { return FiltrationType::uniform(3, 1, 1, {{2, 1}, {1, 2}, {0, 3}}); }

inline MatrixF random_matrix(const FieldSpec& field, std::size_t rows, std::size_t columns, long box,
                             std::mt19937_64& rng) {
  std::uniform_int_distribution<long> entry(-box, box);
  MatrixF m(field, rows, columns);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < columns; ++j) m(i, j) = num(field, entry(rng));
  return m;
}

inline MatrixF random_invertible(const FieldSpec& field, std::size_t d, long box, std::mt19937_64& rng) {
  while (true) {
    MatrixF g = random_matrix(field, d, d, box, rng);
    if (rank(g) == d) return g;
  }
}

// A random filtration type: per embedding, random strictly decreasing jumps
// with random strictly increasing ranks ending at d.
inline FiltrationType random_type(int d, int e, int f, std::mt19937_64& rng, bool nonzero_tail = false) {
  std::vector<std::vector<Jump>> embs;
  for (int psi = 0; psi < e * f; ++psi) {
    std::vector<int> ranks;
    for (int r = 1; r < d; ++r)
      if (std::bernoulli_distribution(0.5)(rng)) ranks.push_back(r);
    ranks.push_back(d);
    long x = std::uniform_int_distribution<long>(-2, 2)(rng);
    if (nonzero_tail && x == 0) x = 1;
    std::vector<Jump> js(ranks.size());
    for (std::size_t k = ranks.size(); k-- > 0;) {
      js[k] = {x, ranks[k]};
      x += std::uniform_int_distribution<long>(1, 3)(rng);
    }
    embs.push_back(std::move(js));
  }
  return FiltrationType(d, e, f, std::move(embs));
}

inline std::vector<Flag> random_flags(const FiltrationType& nu, const FieldSpec& field, std::mt19937_64& rng) {
  std::vector<Flag> flags;
  for (int psi = 0; psi < nu.embedding_count(); ++psi)
    flags.push_back(Flag::from_matrix(psi, nu.jumps(psi), random_invertible(field, static_cast<std::size_t>(nu.d()), 3, rng)));
  return flags;
}

// Random single-block-class Frobenius: distinct eigenvalues u * p^v, block
// sizes summing to d.
inline FrobeniusSpec random_chain_spec(const FieldSpec& field, int d, int f, std::mt19937_64& rng,
                                       bool basis_change = false) {
  std::vector<IsotypicPiece> pieces;
  int left = d;
  long unit = 1;
  while (left > 0) {
    const int size = std::uniform_int_distribution<int>(1, left)(rng);
    const long v = std::uniform_int_distribution<long>(-1, 3)(rng);
    pieces.push_back({CoeffElem::monomial(field, Rational(unit), v), JordanBlock{static_cast<std::size_t>(size)}});
    unit = unit % field.p == field.p - 1 ? unit + 2 : unit + 1;
    left -= size;
  }
  std::optional<MatrixF> p;
  if (basis_change) p = random_invertible(field, static_cast<std::size_t>(d), 2, rng);
  return FrobeniusSpec(field, f, std::move(pieces), std::move(p));
}

}  // namespace phimod::testing

namespace phimod::testing {

// Filtration degree of span(w) computed from raw intersection dimensions with
// F^{x_j} = first n_j columns of g[psi]; normalised by 1/(ef).
inline Rational raw_degree(const FiltrationType& nu, const std::vector<MatrixF>& g, const MatrixF& w) {
  Rational total = 0;
  for (int psi = 0; psi < nu.embedding_count(); ++psi) {
    std::size_t prev = 0;
    for (const Jump& j : nu.jumps(psi)) {
      const std::size_t dim = intersection_dim(g[static_cast<std::size_t>(psi)].columns(0, static_cast<std::size_t>(j.rank)), w);
      total += Rational(j.x) * Rational(static_cast<long>(dim - prev));
      prev = dim;
    }
  }
  return total / (nu.e() * nu.f());
}

struct GenericMinimum {
  Rational minimum;
  bool attained_by_all = true;  // every sample produced the same value
};

// Minimum of raw_degree over random flags and random rank-i subspaces.
inline GenericMinimum sampled_generic_minimum(const FiltrationType& nu, int i, int samples, std::mt19937_64& rng) {
  const FieldSpec field = q5();
  const auto d = static_cast<std::size_t>(nu.d());
  GenericMinimum out;
  for (int s = 0; s < samples; ++s) {
    std::vector<MatrixF> g;
    for (int psi = 0; psi < nu.embedding_count(); ++psi) g.push_back(random_invertible(field, d, 5, rng));
    MatrixF w = random_matrix(field, d, static_cast<std::size_t>(i), 5, rng);
    while (rank(w) < static_cast<std::size_t>(i)) w = random_matrix(field, d, static_cast<std::size_t>(i), 5, rng);
    const Rational deg = raw_degree(nu, g, w);
    if (s == 0) {
      out.minimum = deg;
    } else if (deg != out.minimum) {
      out.attained_by_all = false;
      if (deg < out.minimum) out.minimum = deg;
    }
  }
  return out;
}

}  // namespace phimod::testing

namespace phimod::testing {

// Basis of {X : X * m = m2 * X} for m (d x d) and m2 (d2 x d2), each element a
// d2 x d matrix; X is vectorised column by column.
inline std::vector<MatrixF> intertwiner_basis(const MatrixF& m, const MatrixF& m2) {
  const std::size_t d = m.rows(), d2 = m2.rows();
  const FieldSpec field = m.field();
  MatrixF sys(field, d2 * d, d2 * d);
  for (std::size_t r = 0; r < d2; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      // Column of the unknown X(r, c).
      const std::size_t var = c * d2 + r;
      // (X m)(r, j) gets X(r, c) * m(c, j).
      for (std::size_t j = 0; j < d; ++j) sys(j * d2 + r, var) += m(c, j);
      // (m2 X)(i, c) gets m2(i, r) * X(r, c).
      for (std::size_t i = 0; i < d2; ++i) sys(c * d2 + i, var) -= m2(i, r);
    }
  const MatrixF k = kernel(sys);
  std::vector<MatrixF> out;
  for (std::size_t t = 0; t < k.cols(); ++t) {
    MatrixF x(field, d2, d);
    for (std::size_t r = 0; r < d2; ++r)
      for (std::size_t c = 0; c < d; ++c) x(r, c) = k(c * d2 + r, t);
    out.push_back(std::move(x));
  }
  return out;
}

inline MatrixF random_combination(const std::vector<MatrixF>& basis, std::size_t rows, std::size_t columns,
                                  const FieldSpec& field, std::mt19937_64& rng) {
  MatrixF x(field, rows, columns);
  std::uniform_int_distribution<long> coef(-3, 3);
  for (const auto& b : basis) x = x + b.scaled(num(field, coef(rng)));
  return x;
}

}  // namespace phimod::testing

namespace phimod::testing {

// A spec whose eigenvalue valuations sum to f * l_d, so the determinant
// condition holds; blocks and units are random, eigenvalues distinct.
inline FrobeniusSpec balanced_spec(const FiltrationType& nu, std::mt19937_64& rng, bool basis_change) {
  const FieldSpec field(nu.e(), 5);
  const Rational target = Rational(nu.f()) * total_degree(nu);
  std::vector<IsotypicPiece> pieces;
  std::size_t left = static_cast<std::size_t>(nu.d());
  Rational used = 0;
  long unit = 1;
  while (left > 0) {
    const std::size_t size = std::uniform_int_distribution<std::size_t>(1, left)(rng);
    left -= size;
    Rational v;
    if (left == 0) {
      v = (target - used) / Rational(static_cast<long>(size));
      // Valuations must lie in (1/e) Z; redraw otherwise.
      if (mpz_class(v * nu.e()).get_si() != v * nu.e()) return balanced_spec(nu, rng, basis_change);
    } else {
      v = frac(std::uniform_int_distribution<long>(-2, 6)(rng), nu.e());
    }
    used += v * Rational(static_cast<long>(size));
    pieces.push_back({CoeffElem::monomial(field, Rational(unit), v), JordanBlock{size}});
    ++unit;
  }
  std::optional<MatrixF> p;
  if (basis_change) p = random_invertible(field, static_cast<std::size_t>(nu.d()), 2, rng);
  return FrobeniusSpec(field, nu.f(), std::move(pieces), std::move(p));
}

struct RandomObject {
  FilteredIsocrystal x;
  std::vector<MatrixF> g;  // flag matrices, F^{x_j} = first n_j columns
};

inline RandomObject random_object(const FiltrationType& nu, const FrobeniusSpec& phi, std::mt19937_64& rng) {
  std::vector<MatrixF> g;
  std::vector<Flag> flags;
  for (int psi = 0; psi < nu.embedding_count(); ++psi) {
    g.push_back(random_invertible(phi.field(), phi.d(), 2, rng));
    flags.push_back(Flag::from_matrix(psi, nu.jumps(psi), g.back()));
  }
  return {FilteredIsocrystal(phi, nu, std::move(flags)), std::move(g)};
}

}  // namespace phimod::testing
