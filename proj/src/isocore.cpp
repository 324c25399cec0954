#include "phimod/isocore.hpp"

#include <algorithm>
#include <map>

namespace phimod {

std::size_t IsotypicPiece::dim() const {
  return std::visit(
      [](const auto& m) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, JordanBlock>)
          return m.size;
        else
          return m.multiplicity;
      },
      mode);
}

bool IsotypicPiece::is_chain() const { return std::holds_alternative<JordanBlock>(mode) || dim() == 1; }

FrobeniusSpec::FrobeniusSpec(FieldSpec field, int f, std::vector<IsotypicPiece> pieces,
                             std::optional<MatrixF> basis_change)
    : field_(field), f_(f), pieces_(std::move(pieces)), basis_change_(std::move(basis_change)) {
  require(f_ >= 1, ErrorKind::ValidationError, "f must be >= 1");
  require(!pieces_.empty(), ErrorKind::ValidationError, "Frobenius needs at least one isotypic piece");
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const auto& piece = pieces_[k];
    require(piece.eigenvalue.field() == field_, ErrorKind::IncompatibleTower, "eigenvalue from another field");
    require(!piece.eigenvalue.is_zero(), ErrorKind::ValidationError, "eigenvalues must be nonzero");
    require(piece.dim() >= 1, ErrorKind::ValidationError, "piece sizes must be >= 1");
    for (std::size_t l = 0; l < k; ++l)
      require(!(pieces_[l].eigenvalue == piece.eigenvalue), ErrorKind::UnsupportedFrobenius,
              "eigenvalue " + piece.eigenvalue.to_string() +
                  " occurs in two pieces; mixed derogatory isotypic pieces are not supported");
    offsets_.push_back(d_);
    d_ += piece.dim();
  }

  jordan_ = MatrixF(field_, d_, d_);
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const auto& piece = pieces_[k];
    const std::size_t o = offsets_[k];
    for (std::size_t i = 0; i < piece.dim(); ++i) {
      jordan_(o + i, o + i) = piece.eigenvalue;
      if (std::holds_alternative<JordanBlock>(piece.mode) && i + 1 < piece.dim())
        jordan_(o + i, o + i + 1) = CoeffElem::one(field_);
    }
  }

  if (basis_change_) {
    const auto& p = *basis_change_;
    require(p.rows() == d_ && p.cols() == d_, ErrorKind::ValidationError,
            "basis_change must be " + std::to_string(d_) + "x" + std::to_string(d_));
    require(p.field() == field_, ErrorKind::IncompatibleTower, "basis_change from another field");
    require(rank(p) == d_, ErrorKind::ValidationError, "basis_change must be invertible");
    eigenbasis_ = p;
    eigenbasis_inv_ = inverse(p);
    matrix_ = eigenbasis_ * jordan_ * eigenbasis_inv_;
  } else {
    eigenbasis_ = MatrixF::identity(field_, d_);
    eigenbasis_inv_ = eigenbasis_;
    matrix_ = jordan_;
  }
}

MatrixF FrobeniusSpec::piece_basis(std::size_t piece) const {
  return eigenbasis_.columns(offsets_.at(piece), pieces_.at(piece).dim());
}

Rational FrobeniusSpec::piece_slope(std::size_t piece) const {
  return valuation(pieces_.at(piece).eigenvalue).value() / f_;
}

bool FrobeniusSpec::single_block_class() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const IsotypicPiece& p) { return p.is_chain(); });
}

bool FrobeniusSpec::operator==(const FrobeniusSpec& other) const {
  return field_ == other.field_ && f_ == other.f_ && pieces_ == other.pieces_ &&
         basis_change_ == other.basis_change_;
}

StableSubspace make_stable(const FrobeniusSpec& phi, const MatrixF& basis) {
  require(basis.rows() == phi.d(), ErrorKind::DimensionMismatch, "subspace lives in the wrong ambient space");
  require(rank(basis) == basis.cols(), ErrorKind::ValidationError, "subspace basis columns are dependent");
  require(subspace_contains(basis, phi.matrix() * basis), ErrorKind::NotStable, "subspace is not M-stable");
  StableSubspace u{basis, {}};
  for (std::size_t k = 0; k < phi.pieces().size(); ++k) u.dims.push_back(intersection_dim(basis, phi.piece_basis(k)));
  return u;
}

MatrixF restriction(const MatrixF& m, const MatrixF& basis) {
  auto c = coordinates(basis, m * basis);
  require(c.has_value(), ErrorKind::NotStable, "subspace is not stable");
  return *c;
}

MatrixF induced_quotient_matrix(const MatrixF& m, const MatrixF& sub, const MatrixF& sup) {
  require(subspace_contains(sup, sub), ErrorKind::NotNested, "sub is not contained in sup");
  MatrixF full = span_basis(sub);
  const std::size_t k = full.cols();
  for (std::size_t j = 0; j < sup.cols(); ++j) {
    MatrixF next = hcat(full, sup.columns(j, 1));
    if (rank(next) > full.cols()) full = std::move(next);
  }
  const std::size_t q = full.cols() - k;
  const MatrixF complement = full.columns(k, q);
  auto coords = coordinates(full, m * complement);
  require(coords.has_value(), ErrorKind::NotStable, "sup is not stable");
  std::vector<std::size_t> bottom(q);
  for (std::size_t i = 0; i < q; ++i) bottom[i] = k + i;
  return coords->select_rows(bottom);
}

Rational newton_number(const FrobeniusSpec& phi, const StableSubspace& u) {
  if (u.rank() == 0) return 0;
  const CoeffElem det = determinant(restriction(phi.matrix(), u.basis));
  return valuation(det).value() / phi.f();
}

Rational newton_slope(const FrobeniusSpec& phi, const StableSubspace& u) {
  require(u.rank() > 0, ErrorKind::ZeroSubspace, "slope of the zero subspace");
  return newton_number(phi, u) / static_cast<long>(u.rank());
}

std::vector<SlopePiece> slope_decomposition(const FrobeniusSpec& phi) {
  std::map<Rational, std::vector<std::size_t>> by_slope;
  for (std::size_t k = 0; k < phi.pieces().size(); ++k) by_slope[phi.piece_slope(k)].push_back(k);
  std::vector<SlopePiece> out;
  for (auto& [slope, members] : by_slope) {
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return phi.pieces()[a].eigenvalue.to_string() < phi.pieces()[b].eigenvalue.to_string();
    });
    MatrixF basis(phi.field(), phi.d(), 0);
    for (auto k : members) basis = hcat(basis, phi.piece_basis(k));
    out.push_back({slope, make_stable(phi, basis)});
  }
  return out;
}

std::size_t StableFamily::rank() const {
  std::size_t r = 0;
  for (auto k : dims) r += k;
  return r;
}

std::vector<StableSubspace> StableEnumeration::subspaces() const {
  std::vector<StableSubspace> out;
  for (const auto& fam : families)
    if (fam.subspace) out.push_back(*fam.subspace);
  return out;
}

StableEnumeration enumerate_stable(const FrobeniusSpec& phi) {
  const auto& pieces = phi.pieces();
  StableEnumeration out;
  DimensionVector dims(pieces.size(), 0);
  while (true) {
    StableFamily fam{dims, {}, std::nullopt};
    for (std::size_t k = 0; k < pieces.size(); ++k)
      if (!pieces[k].is_chain() && dims[k] > 0 && dims[k] < pieces[k].dim()) fam.free_pieces.push_back(k);
    if (fam.free_pieces.empty())
      fam.subspace = assemble_stable(phi, dims);
    else
      out.finite = false;
    out.families.push_back(std::move(fam));

    std::size_t k = 0;
    while (k < pieces.size() && dims[k] == pieces[k].dim()) dims[k++] = 0;
    if (k == pieces.size()) break;
    ++dims[k];
  }
  std::stable_sort(out.families.begin(), out.families.end(), [](const StableFamily& a, const StableFamily& b) {
    if (a.rank() != b.rank()) return a.rank() < b.rank();
    return a.dims < b.dims;
  });
  return out;
}

StableSubspace assemble_stable(const FrobeniusSpec& phi, const DimensionVector& dims,
                               const std::vector<std::optional<MatrixF>>& choices) {
  const auto& pieces = phi.pieces();
  require(dims.size() == pieces.size(), ErrorKind::DimensionMismatch, "dimension vector length");
  MatrixF basis(phi.field(), phi.d(), 0);
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const std::size_t n = pieces[k].dim();
    require(dims[k] <= n, ErrorKind::IndexOutOfRange, "dimension exceeds piece size");
    if (dims[k] == 0) continue;
    if (pieces[k].is_chain() || dims[k] == n) {
      basis = hcat(basis, phi.piece_basis(k).columns(0, dims[k]));
      continue;
    }
    require(k < choices.size() && choices[k].has_value(), ErrorKind::PreconditionViolated,
            "semisimple piece " + std::to_string(k + 1) + " needs an explicit subspace");
    const MatrixF& w = *choices[k];
    require(w.cols() == dims[k] && rank(w) == dims[k], ErrorKind::PreconditionViolated,
            "chosen subspace has the wrong dimension");
    require(subspace_contains(phi.piece_basis(k), w), ErrorKind::NotStable, "chosen subspace leaves its eigenspace");
    basis = hcat(basis, w);
  }
  StableSubspace u{basis, dims};
  return u;
}

SpecQuotient quotient(const FrobeniusSpec& phi, const StableSubspace& u) {
  require(phi.single_block_class(), ErrorKind::UnsupportedFrobenius,
          "quotients are only available for the single-block class");
  std::vector<std::size_t> keep;
  std::vector<IsotypicPiece> pieces;
  for (std::size_t k = 0; k < phi.pieces().size(); ++k) {
    const auto& piece = phi.pieces()[k];
    const std::size_t n = piece.dim();
    const std::size_t taken = u.dims.at(k);
    for (std::size_t i = taken; i < n; ++i) keep.push_back(phi.offset(k) + i);
    if (taken == n) continue;
    IsotypicPiece rest = piece;
    if (std::holds_alternative<JordanBlock>(rest.mode)) rest.mode = JordanBlock{n - taken};
    pieces.push_back(std::move(rest));
  }
  require(!pieces.empty(), ErrorKind::ZeroSubspace, "quotient by the whole space");
  return SpecQuotient{FrobeniusSpec(phi.field(), phi.f(), std::move(pieces)),
                      phi.eigenbasis_inverse().select_rows(keep), phi.eigenbasis().select_columns(keep)};
}

bool morphism_slope_check(const MatrixF& f_map, const FrobeniusSpec& source, const FrobeniusSpec& target) {
  require(f_map.rows() == target.d() && f_map.cols() == source.d(), ErrorKind::DimensionMismatch,
          "morphism has the wrong shape");
  require(f_map * source.matrix() == target.matrix() * f_map, ErrorKind::NotIntertwining,
          "map does not intertwine the Frobenius matrices");
  const auto target_pieces = slope_decomposition(target);
  for (const auto& piece : slope_decomposition(source)) {
    const MatrixF img = f_map * piece.subspace.basis;
    auto it = std::find_if(target_pieces.begin(), target_pieces.end(),
                           [&](const SlopePiece& t) { return t.slope == piece.slope; });
    if (it == target_pieces.end()) {
      if (!img.is_zero()) return false;
    } else if (!subspace_contains(it->subspace.basis, img)) {
      return false;
    }
  }
  return true;
}

FrobeniusSpec extend_scalars(const FrobeniusSpec& phi, const FieldSpec& target) {
  std::vector<IsotypicPiece> pieces;
  for (const auto& piece : phi.pieces()) pieces.push_back({extend_scalars(piece.eigenvalue, target), piece.mode});
  std::optional<MatrixF> p;
  if (phi.basis_change()) p = extend_scalars(*phi.basis_change(), target);
  return FrobeniusSpec(target, phi.f(), std::move(pieces), std::move(p));
}

}  // namespace phimod
