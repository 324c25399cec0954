#pragma once

// Coweight combinatorics of GL_d and Newton strata of the adjoint quotient A/W.
// Points of A/W are stored through the valuations v(c_1), ..., v(c_d) of the
// characteristic coefficients; the Kottwitz vector d_c is their negative.

#include <vector>

#include "phimod/exactfield.hpp"

namespace phimod {

class DominantCoweight {
 public:
  DominantCoweight() = default;
  // Throws NotDominant unless entries are weakly decreasing.
  explicit DominantCoweight(std::vector<Rational> entries);
  static DominantCoweight from_partial_sums(const std::vector<Rational>& omega_pairings);

  std::size_t d() const { return entries_.size(); }
  const std::vector<Rational>& entries() const { return entries_; }
  // <omega_i, mu> = mu_1 + ... + mu_i, for 0 <= i <= d.
  Rational omega_pairing(std::size_t i) const;
  // <alpha_i, mu> = mu_i - mu_{i+1}, for 1 <= i < d.
  Rational alpha_pairing(std::size_t i) const;

  bool operator==(const DominantCoweight&) const = default;

 private:
  std::vector<Rational> entries_;
};

class AdjointPoint {
 public:
  AdjointPoint() = default;
  // Throws InfiniteConstantTerm when v(c_d) is infinite, MalformedPoint when empty.
  explicit AdjointPoint(std::vector<Val> coeff_vals);

  std::size_t d() const { return vals_.size(); }
  const std::vector<Val>& coeff_vals() const { return vals_; }
  const Val& coeff_val(std::size_t i) const { return vals_.at(i - 1); }  // 1-based

  bool operator==(const AdjointPoint&) const = default;

 private:
  std::vector<Val> vals_;
};

// Ascending slopes of the lower Newton polygon through (0,0), (i, v(c_i)), (d, v(c_d)),
// each repeated with its horizontal length.
std::vector<Rational> newton_slopes(const AdjointPoint& c);

// r(d_c): the dominant coweight (-sigma_1, ..., -sigma_d).
DominantCoweight newton_retraction(const AdjointPoint& c);

bool dominance_leq(const DominantCoweight& lhs, const DominantCoweight& rhs);

// Thresholds -<omega_i, mu> for i = 1..d.
std::vector<Rational> stratum_thresholds(const DominantCoweight& mu);

// closed: membership in (A/W)_{<= mu}; otherwise in the Newton stratum (A/W)_mu.
bool stratum_member(const AdjointPoint& c, const DominantCoweight& mu, bool closed);

}  // namespace phimod
