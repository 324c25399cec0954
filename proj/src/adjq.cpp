#include "phimod/adjq.hpp"

namespace phimod {

DominantCoweight::DominantCoweight(std::vector<Rational> entries) : entries_(std::move(entries)) {
  require(!entries_.empty(), ErrorKind::ValidationError, "coweight must have d >= 1 entries");
  for (std::size_t i = 0; i + 1 < entries_.size(); ++i)
    require(entries_[i] >= entries_[i + 1], ErrorKind::NotDominant,
            "entry " + std::to_string(i + 1) + " < entry " + std::to_string(i + 2));
}

DominantCoweight DominantCoweight::from_partial_sums(const std::vector<Rational>& omega_pairings) {
  std::vector<Rational> e;
  Rational prev = 0;
  for (const auto& s : omega_pairings) {
    e.push_back(s - prev);
    prev = s;
  }
  return DominantCoweight(std::move(e));
}

Rational DominantCoweight::omega_pairing(std::size_t i) const {
  require(i <= entries_.size(), ErrorKind::IndexOutOfRange, "omega index " + std::to_string(i));
  Rational s = 0;
  for (std::size_t k = 0; k < i; ++k) s += entries_[k];
  return s;
}

Rational DominantCoweight::alpha_pairing(std::size_t i) const {
  require(i >= 1 && i < entries_.size(), ErrorKind::IndexOutOfRange, "alpha index " + std::to_string(i));
  return entries_[i - 1] - entries_[i];
}

AdjointPoint::AdjointPoint(std::vector<Val> coeff_vals) : vals_(std::move(coeff_vals)) {
  require(!vals_.empty(), ErrorKind::MalformedPoint, "adjoint point needs d >= 1 coefficients");
  require(vals_.back().is_finite(), ErrorKind::InfiniteConstantTerm, "v(c_d) must be finite");
}

std::vector<Rational> newton_slopes(const AdjointPoint& c) {
  struct Pt {
    long x;
    Rational y;
  };
  std::vector<Pt> pts{{0, Rational(0)}};
  for (std::size_t i = 1; i <= c.d(); ++i)
    if (c.coeff_val(i).is_finite()) pts.push_back({static_cast<long>(i), c.coeff_val(i).value()});

  // Lower hull, monotone chain; collinear points are dropped.
  std::vector<Pt> hull;
  auto turn = [](const Pt& o, const Pt& a, const Pt& b) -> Rational {
    return Rational(a.x - o.x) * (b.y - o.y) - (a.y - o.y) * Rational(b.x - o.x);
  };
  for (const auto& p : pts) {
    while (hull.size() >= 2 && turn(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
    hull.push_back(p);
  }

  std::vector<Rational> slopes;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const long dx = hull[k + 1].x - hull[k].x;
    const Rational s = (hull[k + 1].y - hull[k].y) / Rational(dx);
    for (long t = 0; t < dx; ++t) slopes.push_back(s);
  }
  return slopes;
}

DominantCoweight newton_retraction(const AdjointPoint& c) {
  std::vector<Rational> mu;
  for (const auto& s : newton_slopes(c)) mu.push_back(-s);
  return DominantCoweight(std::move(mu));
}

bool dominance_leq(const DominantCoweight& lhs, const DominantCoweight& rhs) {
  require(lhs.d() == rhs.d(), ErrorKind::DimensionMismatch, "coweights of different rank");
  const std::size_t d = lhs.d();
  for (std::size_t i = 1; i < d; ++i)
    if (lhs.omega_pairing(i) > rhs.omega_pairing(i)) return false;
  return lhs.omega_pairing(d) == rhs.omega_pairing(d);
}

std::vector<Rational> stratum_thresholds(const DominantCoweight& mu) {
  std::vector<Rational> t;
  for (std::size_t i = 1; i <= mu.d(); ++i) t.push_back(-mu.omega_pairing(i));
  return t;
}

bool stratum_member(const AdjointPoint& c, const DominantCoweight& mu, bool closed) {
  require(c.d() == mu.d(), ErrorKind::DimensionMismatch, "point and coweight of different rank");
  const std::size_t d = c.d();
  const auto thresholds = stratum_thresholds(mu);
  for (std::size_t i = 1; i <= d; ++i) {
    const Val bound(thresholds[i - 1]);
    const Val& v = c.coeff_val(i);
    // i = d never lies in I_mu: the determinant clause is always an equality.
    const bool inequality = i < d && (closed || mu.alpha_pairing(i) == 0);
    if (inequality ? !(v >= bound) : !(v == bound)) return false;
  }
  return true;
}

}  // namespace phimod
