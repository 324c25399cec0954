#pragma once

// Filtered isocrystals in standard form: one descending flag per embedding on
// F^d, filtration degrees, additive slopes, the weak-admissibility decision
// and Harder-Narasimhan filtrations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phimod/filtype.hpp"
#include "phimod/isocore.hpp"

namespace phimod {

struct FlagStep {
  long jump = 0;
  MatrixF basis;  // spans F^jump

  bool operator==(const FlagStep&) const = default;
};

class Flag {
 public:
  Flag() = default;
  // Steps ordered by strictly decreasing jump with strictly increasing,
  // nested spans; the last step must be the whole space.
  Flag(int embedding, std::vector<FlagStep> steps);

  // F^{jumps[j]} = first ranks[j] columns of the invertible matrix g.
  static Flag from_matrix(int embedding, const std::vector<Jump>& jumps, const MatrixF& g);
  // Weakly nested spans by decreasing jump; zero steps and steps that add
  // nothing to the previous one are dropped.  The last span must be F^d.
  static Flag from_spans(int embedding, const std::vector<FlagStep>& spans);

  int embedding() const { return embedding_; }
  const std::vector<FlagStep>& steps() const { return steps_; }
  std::size_t d() const { return steps_.back().basis.rows(); }
  const FieldSpec& field() const { return steps_.back().basis.field(); }
  std::vector<Jump> type() const;

  // F^x for an arbitrary integer x.
  MatrixF at(long x) const;

  bool operator==(const Flag&) const = default;

 private:
  int embedding_ = 0;
  std::vector<FlagStep> steps_;
};

// sum_j x_j * (dim(F^{x_j} ∩ U) - dim(F^{x_{j-1}} ∩ U)) for one flag, without
// the 1/(ef) normalisation.
Rational flag_degree(const Flag& flag, const MatrixF& u);

// Greedy maximum of flag_degree over k-dimensional subspaces of span(e):
// sum_{j<r} (x_j - x_{j+1}) * min(k, dim(F^{x_j} ∩ E)) + x_r * k.
Rational greedy_max_degree(const Flag& flag, const MatrixF& e, std::size_t k);

// The first k vectors of a basis of span(e) adapted to the chain
// F^{x_1} ∩ E ⊆ F^{x_2} ∩ E ⊆ ...; a maximiser for greedy_max_degree.
MatrixF adapted_subspace(const Flag& flag, const MatrixF& e, std::size_t k);

class FilteredIsocrystal {
 public:
  FilteredIsocrystal() = default;
  FilteredIsocrystal(FrobeniusSpec phi, FiltrationType nu, std::vector<Flag> flags);

  const FrobeniusSpec& phi() const { return phi_; }
  const FiltrationType& nu() const { return nu_; }
  const std::vector<Flag>& flags() const { return flags_; }
  std::size_t d() const { return phi_.d(); }

  bool operator==(const FilteredIsocrystal&) const = default;

 private:
  FrobeniusSpec phi_;
  FiltrationType nu_;
  std::vector<Flag> flags_;
};

// Degree of the induced (intersection) filtration on a stable U.
Rational filtration_degree(const FilteredIsocrystal& x, const StableSubspace& u);
// Same, for any subspace given by independent columns; no stability check.
Rational subspace_degree(const FilteredIsocrystal& x, const MatrixF& u);

// (filtration_degree - t_N) / rank.
Rational additive_slope(const FilteredIsocrystal& x, const StableSubspace& u);

enum class WaStatus { Admissible, Inadmissible, Undecided };
std::string status_name(WaStatus s);

struct WaCertificate {
  StableSubspace subspace;
  Rational degree;
  Rational newton;
};

// One dimension vector of the scan.  `degree` is the exact maximum when
// `exact`, otherwise an upper bound.
struct WaRow {
  DimensionVector dims;
  Rational degree;
  Rational newton;
  bool exact = true;
};

struct WaVerdict {
  WaStatus status = WaStatus::Undecided;
  std::optional<WaCertificate> certificate;
  std::vector<WaRow> rows;
  Rational total_degree;   // filtration degree of the whole space
  Rational total_newton;   // v(det M) / f
};

struct WaOptions {
  std::uint64_t seed = 0;
  int samples = 32;  // random members tried per undecided family
};

WaVerdict is_weakly_admissible(const FilteredIsocrystal& x, const WaOptions& opts = {});

struct HNFiltration {
  std::vector<StableSubspace> chain;  // U_1 ⊂ ... ⊂ U_r = F^d
  std::vector<Rational> slopes;       // strictly decreasing
};

HNFiltration hn_filtration(const FilteredIsocrystal& x);

// Quotient filtered isocrystal by a stable U (single-block class), with the
// image filtration; projection maps F^d onto the quotient coordinates.
struct FilteredQuotient {
  FilteredIsocrystal object;
  MatrixF projection;
  MatrixF lift;
};

FilteredQuotient quotient(const FilteredIsocrystal& x, const StableSubspace& u);

// Degree and Newton number of span(sup)/span(sub) with the image filtration,
// computed in an explicit complement basis.
struct QuotientNumbers {
  Rational degree;
  Rational newton;
};
QuotientNumbers quotient_numbers(const FilteredIsocrystal& x, const StableSubspace& sub, const StableSubspace& sup);

// deg(U') = deg(U) + deg(U'/U) and t_N(U') = t_N(U) + t_N(U'/U).
bool ses_degree_additivity(const FilteredIsocrystal& x, const StableSubspace& u, const StableSubspace& u_prime);

struct CoimImReport {
  Rational coim_degree;  // image of the source filtration on D / ker f
  Rational im_degree;    // target filtration intersected with f(D)
  Rational newton;       // common Newton number
  bool holds = false;    // coim_degree <= im_degree
};

// f_map is d' x d, intertwines the Frobenii and maps F^x into F'^x for every
// x and embedding; NotMorphism otherwise.
CoimImReport coim_im_check(const MatrixF& f_map, const FilteredIsocrystal& source, const FilteredIsocrystal& target);

// f_map sends every HN step of the source into the largest HN step of the
// target whose graded slopes are all >= the last slope of the source step.
bool hn_morphism_compatible(const MatrixF& f_map, const FilteredIsocrystal& source, const FilteredIsocrystal& target);

Flag extend_scalars(const Flag& flag, const FieldSpec& target);
FilteredIsocrystal extend_scalars(const FilteredIsocrystal& x, const FieldSpec& target);

}  // namespace phimod
