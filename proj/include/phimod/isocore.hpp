#pragma once

// Isocrystals with coefficients in standard form.  Only the matrix M of Phi^f
// on the distinguished component is materialised; the other f - 1 component
// maps are the identity, so a Phi-stable subobject is determined by an
// M-stable subspace U of F^d.

#include <optional>
#include <variant>
#include <vector>

#include "phimod/exactfield.hpp"

namespace phimod {

struct JordanBlock {
  std::size_t size = 1;
  bool operator==(const JordanBlock&) const = default;
};

struct Semisimple {
  std::size_t multiplicity = 1;
  bool operator==(const Semisimple&) const = default;
};

using PieceMode = std::variant<JordanBlock, Semisimple>;

struct IsotypicPiece {
  CoeffElem eigenvalue;
  PieceMode mode;

  std::size_t dim() const;
  // A piece whose invariant subspaces form a single chain.
  bool is_chain() const;
  bool operator==(const IsotypicPiece&) const = default;
};

class FrobeniusSpec {
 public:
  FrobeniusSpec() = default;
  FrobeniusSpec(FieldSpec field, int f, std::vector<IsotypicPiece> pieces,
                std::optional<MatrixF> basis_change = std::nullopt);

  const FieldSpec& field() const { return field_; }
  std::size_t d() const { return d_; }
  int f() const { return f_; }
  const std::vector<IsotypicPiece>& pieces() const { return pieces_; }
  const std::optional<MatrixF>& basis_change() const { return basis_change_; }

  const MatrixF& matrix() const { return matrix_; }  // M = P J P^{-1}
  const MatrixF& jordan() const { return jordan_; }
  const MatrixF& eigenbasis() const { return eigenbasis_; }  // P, or the identity
  const MatrixF& eigenbasis_inverse() const { return eigenbasis_inv_; }

  std::size_t offset(std::size_t piece) const { return offsets_.at(piece); }
  // Columns of P spanning the generalised eigenspace of one piece.  For a
  // Jordan block the columns are ordered g_1, g_2, ... with (M - lambda) g_1 = 0.
  MatrixF piece_basis(std::size_t piece) const;
  // v(lambda) / f.
  Rational piece_slope(std::size_t piece) const;

  // Every isotypic piece is a single chain: finitely many stable subspaces.
  bool single_block_class() const;

  bool operator==(const FrobeniusSpec& other) const;

 private:
  FieldSpec field_;
  int f_ = 1;
  std::size_t d_ = 0;
  std::vector<IsotypicPiece> pieces_;
  std::optional<MatrixF> basis_change_;
  std::vector<std::size_t> offsets_;
  MatrixF jordan_, eigenbasis_, eigenbasis_inv_, matrix_;
};

using DimensionVector = std::vector<std::size_t>;

struct StableSubspace {
  MatrixF basis;        // d x rank, independent columns
  DimensionVector dims;  // dim(U ∩ E_k) per isotypic piece

  std::size_t rank() const { return basis.cols(); }
};

// Validates M-stability (NotStable) and records the dimension vector.
StableSubspace make_stable(const FrobeniusSpec& phi, const MatrixF& basis);

// The matrix C with M * B = B * C for a stable span B (independent columns).
MatrixF restriction(const MatrixF& m, const MatrixF& basis);

// Matrix of the map induced by m on span(sup) / span(sub), sub ⊆ sup, both
// m-stable.
MatrixF induced_quotient_matrix(const MatrixF& m, const MatrixF& sub, const MatrixF& sup);

Rational newton_number(const FrobeniusSpec& phi, const StableSubspace& u);
Rational newton_slope(const FrobeniusSpec& phi, const StableSubspace& u);

struct SlopePiece {
  Rational slope;
  StableSubspace subspace;
};

std::vector<SlopePiece> slope_decomposition(const FrobeniusSpec& phi);

// One dimension vector of stable subspaces.  When no semisimple piece is
// partially chosen the family is a single subspace.
struct StableFamily {
  DimensionVector dims;
  std::vector<std::size_t> free_pieces;  // semisimple pieces with 0 < k < multiplicity
  std::optional<StableSubspace> subspace;
  std::size_t rank() const;
};

struct StableEnumeration {
  bool finite = true;
  std::vector<StableFamily> families;  // canonical order: rank, then dims lexicographic

  std::vector<StableSubspace> subspaces() const;  // the determined members
};

StableEnumeration enumerate_stable(const FrobeniusSpec& phi);

// The stable subspace with the given dimension vector; chain pieces take their
// prefix, semisimple pieces take `choices[k]` (columns inside E_k) or, when
// k is 0 or the full multiplicity, nothing / all of E_k.
StableSubspace assemble_stable(const FrobeniusSpec& phi, const DimensionVector& dims,
                               const std::vector<std::optional<MatrixF>>& choices = {});

// Quotient of a single-block-class isocrystal by a stable subspace, in the
// basis given by the images of the remaining generalised eigenvectors.
struct SpecQuotient {
  FrobeniusSpec spec;
  MatrixF projection;  // d' x d
  MatrixF lift;        // d x d', projection * lift = id
};

SpecQuotient quotient(const FrobeniusSpec& phi, const StableSubspace& u);

// f_map is d' x d with f_map * M = M' * f_map; reports whether every slope
// piece lands in the piece of the same slope.
bool morphism_slope_check(const MatrixF& f_map, const FrobeniusSpec& source, const FrobeniusSpec& target);

FrobeniusSpec extend_scalars(const FrobeniusSpec& phi, const FieldSpec& target);

}  // namespace phimod
