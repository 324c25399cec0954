#include "phimod/filtcore.hpp"

#include <algorithm>
#include <random>

namespace phimod {

Flag::Flag(int embedding, std::vector<FlagStep> steps) : embedding_(embedding), steps_(std::move(steps)) {
  require(embedding_ >= 0, ErrorKind::ValidationError, "embedding index must be >= 0");
  require(!steps_.empty(), ErrorKind::ValidationError, "flag needs at least one step");
  const std::size_t d = steps_.front().basis.rows();
  for (std::size_t j = 0; j < steps_.size(); ++j) {
    const auto& b = steps_[j].basis;
    const std::string where = "flag " + std::to_string(embedding_) + " step " + std::to_string(j + 1) + ": ";
    require(b.rows() == d, ErrorKind::DimensionMismatch, where + "wrong ambient dimension");
    require(b.field() == steps_.front().basis.field(), ErrorKind::IncompatibleTower, where + "mixed fields");
    require(b.cols() >= 1 && rank(b) == b.cols(), ErrorKind::ValidationError,
            where + "basis must be nonempty with independent columns");
    if (j == 0) continue;
    require(steps_[j - 1].jump > steps_[j].jump, ErrorKind::ValidationError, where + "jumps must strictly decrease");
    require(steps_[j - 1].basis.cols() < b.cols(), ErrorKind::ValidationError, where + "ranks must strictly increase");
    require(subspace_contains(b, steps_[j - 1].basis), ErrorKind::NotNested, where + "does not contain the previous step");
  }
  require(steps_.back().basis.cols() == d, ErrorKind::ValidationError, "last flag step must be the whole space");
}

Flag Flag::from_matrix(int embedding, const std::vector<Jump>& jumps, const MatrixF& g) {
  std::vector<FlagStep> steps;
  for (const auto& j : jumps) steps.push_back({j.x, g.columns(0, static_cast<std::size_t>(j.rank))});
  return Flag(embedding, std::move(steps));
}

Flag Flag::from_spans(int embedding, const std::vector<FlagStep>& spans) {
  std::vector<FlagStep> steps;
  for (const auto& s : spans) {
    MatrixF b = span_basis(s.basis);
    if (b.cols() == 0) continue;
    if (!steps.empty()) {
      require(subspace_contains(b, steps.back().basis), ErrorKind::NotNested, "flag spans are not nested");
      if (b.cols() == steps.back().basis.cols()) continue;
    }
    steps.push_back({s.jump, std::move(b)});
  }
  return Flag(embedding, std::move(steps));
}

std::vector<Jump> Flag::type() const {
  std::vector<Jump> out;
  for (const auto& s : steps_) out.push_back({s.jump, static_cast<int>(s.basis.cols())});
  return out;
}

MatrixF Flag::at(long x) const {
  const MatrixF* found = nullptr;
  for (const auto& s : steps_)
    if (s.jump >= x) found = &s.basis;
  return found ? *found : MatrixF(field(), d(), 0);
}

Rational flag_degree(const Flag& flag, const MatrixF& u) {
  Rational total = 0;
  std::size_t prev = 0;
  for (const auto& s : flag.steps()) {
    const std::size_t k = intersection_dim(s.basis, u);
    total += Rational(s.jump) * static_cast<long>(k - prev);
    prev = k;
  }
  return total;
}

namespace {

// Chain G_j = (F^{x_j} + s) ∩ E inside span(e); returns the greedy gain over
// k-dimensional W ⊆ E on top of s, and the first k adapted vectors.
struct ChainGreedy {
  Rational gain;
  MatrixF vectors;
};

ChainGreedy chain_greedy(const Flag& flag, const MatrixF& s, const MatrixF& e, std::size_t k) {
  const auto& steps = flag.steps();
  MatrixF adapted(e.field(), e.rows(), 0);
  Rational gain = 0;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const MatrixF g = j + 1 == steps.size() ? e : subspace_intersection(subspace_sum(steps[j].basis, s), e);
    for (std::size_t c = 0; c < g.cols() && adapted.cols() < k; ++c) {
      MatrixF next = hcat(adapted, g.columns(c, 1));
      if (rank(next) > adapted.cols()) adapted = std::move(next);
    }
    const long cap = static_cast<long>(std::min(k, g.cols()));
    if (j + 1 < steps.size())
      gain += Rational(steps[j].jump - steps[j + 1].jump) * cap;
    else
      gain += Rational(steps[j].jump) * static_cast<long>(k);
  }
  return {gain, adapted.columns(0, std::min(k, adapted.cols()))};
}

MatrixF zero_subspace(const FieldSpec& field, std::size_t d) { return MatrixF(field, d, 0); }

}  // namespace

Rational greedy_max_degree(const Flag& flag, const MatrixF& e, std::size_t k) {
  require(k <= rank(e), ErrorKind::IndexOutOfRange, "k exceeds dim E");
  return chain_greedy(flag, zero_subspace(e.field(), e.rows()), e, k).gain;
}

MatrixF adapted_subspace(const Flag& flag, const MatrixF& e, std::size_t k) {
  require(k <= rank(e), ErrorKind::IndexOutOfRange, "k exceeds dim E");
  return chain_greedy(flag, zero_subspace(e.field(), e.rows()), e, k).vectors;
}

FilteredIsocrystal::FilteredIsocrystal(FrobeniusSpec phi, FiltrationType nu, std::vector<Flag> flags)
    : phi_(std::move(phi)), nu_(std::move(nu)), flags_(std::move(flags)) {
  require(static_cast<std::size_t>(nu_.d()) == phi_.d(), ErrorKind::ValidationError,
          "filtration type rank differs from the Frobenius rank");
  require(nu_.f() == phi_.f(), ErrorKind::ValidationError, "filtration type f differs from the Frobenius f");
  require(flags_.size() == static_cast<std::size_t>(nu_.embedding_count()), ErrorKind::ValidationError,
          "expected one flag per embedding (" + std::to_string(nu_.embedding_count()) + ")");
  for (std::size_t psi = 0; psi < flags_.size(); ++psi) {
    const auto& fl = flags_[psi];
    const std::string where = "flag " + std::to_string(psi) + ": ";
    require(fl.embedding() == static_cast<int>(psi), ErrorKind::ValidationError, where + "embedding index out of order");
    require(fl.field() == phi_.field(), ErrorKind::IncompatibleTower, where + "field differs from the Frobenius field");
    require(fl.d() == phi_.d(), ErrorKind::DimensionMismatch, where + "wrong ambient dimension");
    require(fl.type() == nu_.jumps(static_cast<int>(psi)), ErrorKind::ValidationError,
            where + "jumps and ranks do not realise the filtration type");
  }
}

Rational subspace_degree(const FilteredIsocrystal& x, const MatrixF& u) {
  Rational total = 0;
  for (const auto& fl : x.flags()) total += flag_degree(fl, u);
  return total / x.nu().embedding_count();
}

Rational filtration_degree(const FilteredIsocrystal& x, const StableSubspace& u) {
  require(subspace_contains(u.basis, x.phi().matrix() * u.basis), ErrorKind::NotStable, "subspace is not stable");
  return subspace_degree(x, u.basis);
}

Rational additive_slope(const FilteredIsocrystal& x, const StableSubspace& u) {
  require(u.rank() > 0, ErrorKind::ZeroSubspace, "slope of the zero subspace");
  return (filtration_degree(x, u) - newton_number(x.phi(), u)) / static_cast<long>(u.rank());
}

std::string status_name(WaStatus s) {
  switch (s) {
    case WaStatus::Admissible: return "Admissible";
    case WaStatus::Inadmissible: return "Inadmissible";
    case WaStatus::Undecided: return "Undecided";
  }
  return "?";
}

namespace {

Rational family_newton(const FrobeniusSpec& phi, const DimensionVector& dims) {
  Rational t = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) t += phi.piece_slope(k) * static_cast<long>(dims[k]);
  return t;
}

MatrixF fixed_part(const FrobeniusSpec& phi, const StableFamily& fam) {
  DimensionVector fixed = fam.dims;
  for (auto k : fam.free_pieces) fixed[k] = 0;
  return assemble_stable(phi, fixed).basis;
}

MatrixF random_subspace(const MatrixF& e, std::size_t k, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> coeff(-3, 3);
  while (true) {
    MatrixF c(e.field(), e.cols(), k);
    for (std::size_t i = 0; i < e.cols(); ++i)
      for (std::size_t j = 0; j < k; ++j) c(i, j) = CoeffElem(e.field(), Rational(coeff(rng)));
    MatrixF w = e * c;
    if (rank(w) == k) return w;
  }
}

}  // namespace

WaVerdict is_weakly_admissible(const FilteredIsocrystal& x, const WaOptions& opts) {
  const auto& phi = x.phi();
  const std::size_t d = phi.d();
  WaVerdict out;
  DimensionVector full;
  for (const auto& piece : phi.pieces()) full.push_back(piece.dim());
  const StableSubspace whole{MatrixF::identity(phi.field(), d), full};
  out.total_degree = subspace_degree(x, whole.basis);
  out.total_newton = newton_number(phi, whole);
  if (out.total_degree != out.total_newton) {
    out.status = WaStatus::Inadmissible;
    out.rows.push_back({full, out.total_degree, out.total_newton, true});
    out.certificate = WaCertificate{whole, out.total_degree, out.total_newton};
    return out;
  }

  const auto violation = [&](const StableSubspace& u, const Rational& deg, const Rational& t) {
    out.status = WaStatus::Inadmissible;
    out.certificate = WaCertificate{u, deg, t};
    return out;
  };

  const int ef = x.nu().embedding_count();
  const auto enumeration = enumerate_stable(phi);
  bool undecided = false;
  for (std::size_t fi = 0; fi < enumeration.families.size(); ++fi) {
    const auto& fam = enumeration.families[fi];
    if (fam.rank() == 0) continue;
    const Rational t = family_newton(phi, fam.dims);

    if (fam.subspace) {
      const Rational deg = subspace_degree(x, fam.subspace->basis);
      out.rows.push_back({fam.dims, deg, t, true});
      if (deg > t) return violation(*fam.subspace, deg, t);
      continue;
    }

    const MatrixF s = fixed_part(phi, fam);
    if (fam.free_pieces.size() == 1 && ef == 1) {
      const std::size_t k = fam.free_pieces.front();
      const auto greedy = chain_greedy(x.flags().front(), s, phi.piece_basis(k), fam.dims[k]);
      const StableSubspace u{hcat(s, greedy.vectors), fam.dims};
      const Rational deg = subspace_degree(x, u.basis);
      out.rows.push_back({fam.dims, deg, t, true});
      if (deg > t) return violation(u, deg, t);
      continue;
    }

    // Relaxation: any subspace of the free eigenspaces of the right total
    // dimension, maximised separately per embedding.
    MatrixF free_space(phi.field(), d, 0);
    std::size_t kappa = 0;
    for (auto k : fam.free_pieces) {
      free_space = hcat(free_space, phi.piece_basis(k));
      kappa += fam.dims[k];
    }
    Rational bound = 0;
    for (const auto& fl : x.flags()) bound += flag_degree(fl, s) + chain_greedy(fl, s, free_space, kappa).gain;
    bound /= ef;
    out.rows.push_back({fam.dims, bound, t, false});
    if (bound <= t) continue;

    std::vector<MatrixF> candidates;
    for (const auto& fl : x.flags()) {
      MatrixF acc = s;
      for (auto k : fam.free_pieces) acc = hcat(acc, chain_greedy(fl, acc, phi.piece_basis(k), fam.dims[k]).vectors);
      candidates.push_back(std::move(acc));
    }
    std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ULL + fi);
    for (int sample = 0; sample < opts.samples; ++sample) {
      MatrixF acc = s;
      for (auto k : fam.free_pieces) acc = hcat(acc, random_subspace(phi.piece_basis(k), fam.dims[k], rng));
      candidates.push_back(std::move(acc));
    }
    for (const auto& c : candidates) {
      const Rational deg = subspace_degree(x, c);
      if (deg > t) return violation(StableSubspace{c, fam.dims}, deg, t);
    }
    undecided = true;
  }
  out.status = undecided ? WaStatus::Undecided : WaStatus::Admissible;
  return out;
}

FilteredQuotient quotient(const FilteredIsocrystal& x, const StableSubspace& u) {
  SpecQuotient q = quotient(x.phi(), u);
  std::vector<Flag> flags;
  std::vector<std::vector<Jump>> types;
  for (const auto& fl : x.flags()) {
    std::vector<FlagStep> spans;
    for (const auto& s : fl.steps()) spans.push_back({s.jump, q.projection * s.basis});
    flags.push_back(Flag::from_spans(fl.embedding(), spans));
    types.push_back(flags.back().type());
  }
  FiltrationType nu(static_cast<int>(q.spec.d()), x.nu().e(), x.nu().f(), std::move(types));
  return FilteredQuotient{FilteredIsocrystal(q.spec, std::move(nu), std::move(flags)), std::move(q.projection),
                          std::move(q.lift)};
}

HNFiltration hn_filtration(const FilteredIsocrystal& x) {
  require(x.phi().single_block_class(), ErrorKind::UnsupportedFrobenius,
          "Harder-Narasimhan filtrations need the single-block class");
  const auto& phi = x.phi();
  HNFiltration hn;
  FilteredIsocrystal cur = x;
  MatrixF lift = MatrixF::identity(phi.field(), phi.d());
  MatrixF below(phi.field(), phi.d(), 0);
  while (true) {
    std::optional<Rational> best;
    MatrixF join(phi.field(), cur.d(), 0);
    for (const auto& u : enumerate_stable(cur.phi()).subspaces()) {
      if (u.rank() == 0) continue;
      const Rational s = (subspace_degree(cur, u.basis) - newton_number(cur.phi(), u)) / static_cast<long>(u.rank());
      if (!best || s > *best) {
        best = s;
        join = u.basis;
      } else if (s == *best) {
        join = subspace_sum(join, u.basis);
      }
    }
    const StableSubspace top = make_stable(cur.phi(), span_basis(join));
    below = span_basis(subspace_sum(below, lift * top.basis));
    hn.chain.push_back(make_stable(phi, below));
    hn.slopes.push_back(*best);
    if (top.rank() == cur.d()) break;
    FilteredQuotient q = quotient(cur, top);
    lift = lift * q.lift;
    cur = std::move(q.object);
  }
  return hn;
}

QuotientNumbers quotient_numbers(const FilteredIsocrystal& x, const StableSubspace& sub, const StableSubspace& sup) {
  require(subspace_contains(sup.basis, sub.basis), ErrorKind::NotNested, "sub is not contained in sup");
  MatrixF full = span_basis(sub.basis);
  const std::size_t k = full.cols();
  for (std::size_t j = 0; j < sup.basis.cols(); ++j) {
    MatrixF next = hcat(full, sup.basis.columns(j, 1));
    if (rank(next) > full.cols()) full = std::move(next);
  }
  const std::size_t q = full.cols() - k;
  std::vector<std::size_t> bottom(q);
  for (std::size_t i = 0; i < q; ++i) bottom[i] = k + i;

  QuotientNumbers out;
  Rational deg = 0;
  for (const auto& fl : x.flags()) {
    std::size_t prev = 0;
    for (const auto& s : fl.steps()) {
      const MatrixF inter = subspace_intersection(s.basis, sup.basis);
      const auto coords = coordinates(full, inter);
      const std::size_t r = inter.cols() == 0 ? 0 : rank(coords->select_rows(bottom));
      deg += Rational(s.jump) * static_cast<long>(r - prev);
      prev = r;
    }
  }
  out.degree = deg / x.nu().embedding_count();
  if (q == 0) {
    out.newton = 0;
  } else {
    const CoeffElem det = determinant(induced_quotient_matrix(x.phi().matrix(), sub.basis, sup.basis));
    out.newton = valuation(det).value() / x.phi().f();
  }
  return out;
}

bool ses_degree_additivity(const FilteredIsocrystal& x, const StableSubspace& u, const StableSubspace& u_prime) {
  const QuotientNumbers q = quotient_numbers(x, u, u_prime);
  return filtration_degree(x, u_prime) == filtration_degree(x, u) + q.degree &&
         newton_number(x.phi(), u_prime) == newton_number(x.phi(), u) + q.newton;
}

namespace {

void require_morphism(const MatrixF& f_map, const FilteredIsocrystal& source, const FilteredIsocrystal& target) {
  require(f_map.rows() == target.d() && f_map.cols() == source.d(), ErrorKind::NotMorphism,
          "map has the wrong shape");
  require(source.nu().embedding_count() == target.nu().embedding_count() && source.phi().f() == target.phi().f(),
          ErrorKind::NotMorphism, "source and target have different embeddings");
  require(f_map * source.phi().matrix() == target.phi().matrix() * f_map, ErrorKind::NotMorphism,
          "map does not intertwine the Frobenii");
  for (std::size_t psi = 0; psi < source.flags().size(); ++psi)
    for (const auto& s : source.flags()[psi].steps())
      require(subspace_contains(target.flags()[psi].at(s.jump), f_map * s.basis), ErrorKind::NotMorphism,
              "map does not respect the filtrations");
}

}  // namespace

CoimImReport coim_im_check(const MatrixF& f_map, const FilteredIsocrystal& source, const FilteredIsocrystal& target) {
  require_morphism(f_map, source, target);
  CoimImReport out;
  Rational coim = 0;
  for (const auto& fl : source.flags()) {
    std::size_t prev = 0;
    for (const auto& s : fl.steps()) {
      const std::size_t r = rank(f_map * s.basis);
      coim += Rational(s.jump) * static_cast<long>(r - prev);
      prev = r;
    }
  }
  out.coim_degree = coim / source.nu().embedding_count();
  const MatrixF im = span_basis(f_map);
  out.im_degree = subspace_degree(target, im);
  out.newton = im.cols() == 0 ? Rational(0) : newton_number(target.phi(), make_stable(target.phi(), im));
  out.holds = out.coim_degree <= out.im_degree;
  return out;
}

bool hn_morphism_compatible(const MatrixF& f_map, const FilteredIsocrystal& source, const FilteredIsocrystal& target) {
  require_morphism(f_map, source, target);
  const HNFiltration hs = hn_filtration(source);
  const HNFiltration ht = hn_filtration(target);
  for (std::size_t i = 0; i < hs.chain.size(); ++i) {
    MatrixF dest(target.phi().field(), target.d(), 0);
    for (std::size_t j = 0; j < ht.chain.size() && ht.slopes[j] >= hs.slopes[i]; ++j) dest = ht.chain[j].basis;
    if (!subspace_contains(dest, f_map * hs.chain[i].basis)) return false;
  }
  return true;
}

Flag extend_scalars(const Flag& flag, const FieldSpec& target) {
  std::vector<FlagStep> steps;
  for (const auto& s : flag.steps()) steps.push_back({s.jump, extend_scalars(s.basis, target)});
  return Flag(flag.embedding(), std::move(steps));
}

FilteredIsocrystal extend_scalars(const FilteredIsocrystal& x, const FieldSpec& target) {
  std::vector<Flag> flags;
  for (const auto& fl : x.flags()) flags.push_back(extend_scalars(fl, target));
  return FilteredIsocrystal(extend_scalars(x.phi(), target), x.nu(), std::move(flags));
}

}  // namespace phimod
