#include "phimod/thmlab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace phimod {

AdjointPoint adjoint_image(const FrobeniusSpec& phi) {
  std::vector<Val> vals;
  for (const auto& c : characteristic_coefficients(phi.matrix())) vals.push_back(valuation(c));
  return AdjointPoint(std::move(vals));
}

std::vector<Rational> expand_roots(const std::vector<RootClass>& roots) {
  std::vector<Rational> out;
  for (const auto& r : roots) out.insert(out.end(), r.multiplicity, r.valuation);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RootClass> group_roots(std::vector<Rational> valuations) {
  std::sort(valuations.begin(), valuations.end());
  std::vector<RootClass> out;
  for (const auto& v : valuations) {
    if (!out.empty() && out.back().valuation == v)
      ++out.back().multiplicity;
    else
      out.push_back({v, 1});
  }
  return out;
}

int ramification_for(const std::vector<RootClass>& roots) {
  long m = 1;
  for (const auto& r : roots) m = std::lcm(m, r.valuation.get_den().get_si());
  return static_cast<int>(m);
}

FrobeniusSpec jordan_construction(const std::vector<RootClass>& roots, int f, long p) {
  const auto grouped = group_roots(expand_roots(roots));
  require(!grouped.empty(), ErrorKind::MalformedPoint, "no roots given");
  const FieldSpec field(ramification_for(grouped), p);
  std::vector<IsotypicPiece> pieces;
  long unit = 0;
  for (const auto& r : grouped) {
    do ++unit;
    while (unit % p == 0);
    pieces.push_back({CoeffElem::monomial(field, Rational(unit), r.valuation), JordanBlock{r.multiplicity}});
  }
  return FrobeniusSpec(field, f, std::move(pieces));
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

MatrixF random_invertible(const FieldSpec& field, std::size_t d, long box, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> entry(-box, box);
  while (true) {
    MatrixF g(field, d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) g(i, j) = CoeffElem(field, Rational(entry(rng)));
    if (rank(g) == d) return g;
  }
}

}  // namespace

std::vector<Flag> sample_flags(const FiltrationType& nu, const FieldSpec& field, std::uint64_t seed,
                               std::uint64_t index) {
  std::vector<Flag> flags;
  const long box = 1 + static_cast<long>(index / 4);
  for (int psi = 0; psi < nu.embedding_count(); ++psi) {
    std::mt19937_64 rng(mix(mix(seed) ^ mix(index + 1) ^ mix(0x100 + static_cast<std::uint64_t>(psi))));
    const MatrixF g = random_invertible(field, static_cast<std::size_t>(nu.d()), box, rng);
    flags.push_back(Flag::from_matrix(psi, nu.jumps(psi), g));
  }
  return flags;
}

namespace {

std::optional<Obstruction> find_obstruction(const std::vector<Rational>& sorted_roots, const FiltrationType& nu) {
  const int d = nu.d();
  const Rational f(nu.f());
  Rational total = 0;
  for (const auto& v : sorted_roots) total += v;
  std::vector<std::size_t> all(static_cast<std::size_t>(d));
  std::iota(all.begin(), all.end(), std::size_t{1});
  if (total / f != l_value(nu, d)) return Obstruction{ObstructionKind::Determinant, all, total / f, l_value(nu, d)};
  Rational partial = 0;
  for (int i = 1; i < d; ++i) {
    partial += sorted_roots[static_cast<std::size_t>(i - 1)];
    const Rational l = l_value(nu, i);
    if (partial / f < l)
      return Obstruction{ObstructionKind::Prefix, std::vector<std::size_t>(all.begin(), all.begin() + i), partial / f, l};
  }
  return std::nullopt;
}

}  // namespace

ExistenceReport wa_exists(const FiltrationType& nu, const std::vector<RootClass>& roots, const ExistenceOptions& opts) {
  require(opts.budget >= 1, ErrorKind::ValidationError, "seed budget must be >= 1");
  const FrobeniusSpec phi = jordan_construction(roots, nu.f(), opts.p);
  require(phi.d() == static_cast<std::size_t>(nu.d()), ErrorKind::DimensionMismatch,
          "number of roots differs from the rank of the filtration type");
  ExistenceReport rep;
  rep.point = adjoint_image(phi);
  rep.mu = mu_of_nu(nu);
  rep.predicted = stratum_member(rep.point, rep.mu, true);
  if (rep.predicted) {
    for (std::uint64_t s = 0; s < opts.budget; ++s) {
      rep.seeds_tried = s + 1;
      FilteredIsocrystal x(phi, nu, sample_flags(nu, phi.field(), opts.seed, s));
      if (is_weakly_admissible(x, {opts.seed, 32}).status == WaStatus::Admissible) {
        rep.witness = std::move(x);
        break;
      }
    }
    rep.anomaly = !rep.witness.has_value();
  } else {
    rep.obstruction = find_obstruction(expand_roots(roots), nu);
    rep.anomaly = !rep.obstruction.has_value();
  }
  return rep;
}

std::vector<RootClass> roots_from_point(const AdjointPoint& c) { return group_roots(newton_slopes(c)); }

StableSubspace obstruction_subspace(const FrobeniusSpec& phi, std::size_t count) {
  require(phi.single_block_class(), ErrorKind::UnsupportedFrobenius, "needs the single-block class");
  require(count <= phi.d(), ErrorKind::IndexOutOfRange, "more roots than the rank");
  std::vector<std::size_t> order(phi.pieces().size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return phi.piece_slope(a) < phi.piece_slope(b); });
  DimensionVector dims(order.size(), 0);
  std::size_t left = count;
  for (auto k : order) {
    dims[k] = std::min(left, phi.pieces()[k].dim());
    left -= dims[k];
  }
  return assemble_stable(phi, dims);
}

namespace {

const FieldSpec kExampleField(1, 5);

CoeffElem rat(long v) { return CoeffElem(kExampleField, Rational(v)); }

MatrixF columns_of(const std::vector<std::vector<long>>& cols) {
  std::vector<std::vector<CoeffElem>> c;
  for (const auto& col : cols) {
    std::vector<CoeffElem> v;
    for (long x : col) v.push_back(rat(x));
    c.push_back(std::move(v));
  }
  return MatrixF::from_columns(kExampleField, cols.front().size(), c);
}

FrobeniusSpec diagonal_spec(const std::vector<long>& valuations) {
  std::vector<IsotypicPiece> pieces;
  for (long v : valuations) {
    pieces.push_back({CoeffElem::monomial(kExampleField, 1, v), JordanBlock{1}});
  }
  return FrobeniusSpec(kExampleField, 1, std::move(pieces));
}

long nonzero(std::mt19937_64& rng, long box) {
  std::uniform_int_distribution<long> pick(1, box);
  std::bernoulli_distribution sign(0.5);
  const long v = pick(rng);
  return sign(rng) ? v : -v;
}

long any(std::mt19937_64& rng, long box) { return std::uniform_int_distribution<long>(-box, box)(rng); }

std::string summary(const ExampleCheck& c) {
  std::ostringstream os;
  os << c.agreements << "/" << c.trials;
  return os.str();
}

}  // namespace

ExampleCheck example_full_flag_open_cell(std::size_t samples, std::uint64_t seed) {
  ExampleCheck out{"diag(1,p,p^2) full flags: admissible iff F1 ∩ V1 = 0 and F2 not in V12", false, 0, 0, ""};
  const FrobeniusSpec phi = diagonal_spec({0, 1, 2});
  const FiltrationType nu = FiltrationType::uniform(3, 1, 1, {{2, 1}, {1, 2}, {0, 3}});
  const MatrixF v1 = columns_of({{1, 0, 0}});
  const MatrixF v12 = columns_of({{1, 0, 0}, {0, 1, 0}});
  std::mt19937_64 rng(mix(seed ^ 0x46));
  std::size_t single_violations = 0;
  for (std::size_t t = 0; t < samples; ++t) {
    MatrixF g;
    switch (t % 4) {
      case 1: {  // e1 in F1, F2 outside V12
        g = columns_of({{any(rng, 3), any(rng, 3), nonzero(rng, 3)}, {1, 0, 0}, {0, 1, 0}});
        break;
      }
      case 3: {  // F2 inside V12 but not V1, F1 meets V1 trivially
        g = columns_of({{any(rng, 3), nonzero(rng, 3), 0}, {any(rng, 3), any(rng, 3), nonzero(rng, 3)}, {1, 0, 0}});
        if (rank(g) < 3) g = columns_of({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
        break;
      }
      default:
        g = sample_flags(nu, kExampleField, seed, t).front().steps().back().basis;
        break;
    }
    const Flag flag = Flag::from_matrix(0, nu.jumps(0), g);
    const FilteredIsocrystal x(phi, nu, {flag});
    const bool cond1 = intersection_dim(flag.at(1), v1) == 0;
    const bool cond2 = !subspace_contains(v12, flag.at(2));
    if (cond1 != cond2) ++single_violations;
    const bool admissible = is_weakly_admissible(x).status == WaStatus::Admissible;
    ++out.trials;
    if (admissible == (cond1 && cond2)) ++out.agreements;
  }
  out.passed = out.trials == samples && out.agreements == out.trials && (samples < 40 || single_violations >= 10);
  out.detail = summary(out) + " agree; " + std::to_string(single_violations) + " flags violate exactly one condition";
  return out;
}

ExampleCheck example_empty_locus(std::size_t samples, std::uint64_t seed) {
  ExampleCheck out{"diag(1,1,p^3) full flags: never admissible, certificate line in F1 ∩ V12", false, 0, 0, ""};
  const FrobeniusSpec phi(kExampleField, 1,
                          {{rat(1), Semisimple{2}}, {CoeffElem::monomial(kExampleField, 1, 3), JordanBlock{1}}});
  const FiltrationType nu = FiltrationType::uniform(3, 1, 1, {{2, 1}, {1, 2}, {0, 3}});
  const MatrixF v12 = columns_of({{1, 0, 0}, {0, 1, 0}});
  for (std::size_t t = 0; t < samples; ++t) {
    MatrixF g = sample_flags(nu, kExampleField, seed, t).front().steps().back().basis;
    if (t % 10 == 1) g = columns_of({{1, 1, 0}, {0, 0, 1}, {0, 1, 0}});  // F2 inside V12
    if (t % 10 == 3) g = columns_of({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});  // F2 the p^3 line
    const Flag flag = Flag::from_matrix(0, nu.jumps(0), g);
    const WaVerdict v = is_weakly_admissible(FilteredIsocrystal(phi, nu, {flag}));
    ++out.trials;
    const bool ok = v.status == WaStatus::Inadmissible && v.certificate && v.certificate->subspace.rank() == 1 &&
                    subspace_contains(subspace_intersection(flag.at(1), v12), v.certificate->subspace.basis);
    if (ok) ++out.agreements;
  }
  out.passed = out.trials == samples && out.agreements == out.trials;
  out.detail = summary(out) + " inadmissible with a certificate line in F1 ∩ V12";
  return out;
}

ExampleCheck example_two_embeddings(std::size_t samples, std::uint64_t seed) {
  ExampleCheck out{"diag(1,p), two embeddings: admissible iff no F1 equals the eigenvalue-1 line", false, 0, 0, ""};
  const FrobeniusSpec phi = diagonal_spec({0, 1});
  const FiltrationType nu = FiltrationType::uniform(2, 2, 1, {{1, 1}, {0, 2}});
  const MatrixF line1 = columns_of({{1, 0}});
  const MatrixF special = columns_of({{1, 0}, {0, 1}});
  const MatrixF other = columns_of({{0, 1}, {1, 0}});
  std::size_t patterns = 0;
  for (std::size_t t = 0; t < samples; ++t) {
    auto random = sample_flags(nu, kExampleField, seed, t);
    std::vector<MatrixF> g{random[0].steps().back().basis, random[1].steps().back().basis};
    switch (t % 8) {
      case 0: g = {special, special}; break;
      case 1: g[0] = special; break;
      case 2: g[1] = special; break;
      case 3: g = {other, other}; break;
      default: break;
    }
    if (t % 8 < 4) ++patterns;
    std::vector<Flag> flags{Flag::from_matrix(0, nu.jumps(0), g[0]), Flag::from_matrix(1, nu.jumps(1), g[1])};
    const bool predicate = !same_span(flags[0].at(1), line1) && !same_span(flags[1].at(1), line1);
    const bool admissible = is_weakly_admissible(FilteredIsocrystal(phi, nu, flags)).status == WaStatus::Admissible;
    ++out.trials;
    if (admissible == predicate) ++out.agreements;
  }
  out.passed = out.trials == samples && out.agreements == out.trials && (samples < 4 || patterns >= 4);
  out.detail = summary(out) + " agree; " + std::to_string(patterns) + " boundary-pattern flags";
  return out;
}

ExampleCheck example_l_values() {
  ExampleCheck out{"l-values of the two closing filtration types", false, 0, 0, ""};
  const auto nu1 = FiltrationType::uniform(3, 1, 1, {{2, 1}, {1, 2}, {0, 3}});
  const auto nu2 = FiltrationType::uniform(3, 1, 1, {{1, 2}, {0, 3}});
  const std::vector<Rational> want1{0, 0, 1, 3}, want2{0, 0, 1, 2};
  out.trials = 2;
  out.agreements = (l_vector(nu1) == want1) + (l_vector(nu2) == want2);
  out.passed = out.agreements == 2;
  out.detail = summary(out) + " l-vectors match (0,1,3) and (0,1,2)";
  return out;
}

std::vector<ExampleCheck> example_suite(std::uint64_t seed) {
  return {example_full_flag_open_cell(50, seed), example_empty_locus(50, seed), example_two_embeddings(50, seed),
          example_l_values()};
}

namespace {

std::vector<FiltrationType> sweep_types(int d, int e, int f) {
  const int ef = e * f;
  std::vector<std::vector<Jump>> per;
  if (d == 2) {
    per = {{{1, 1}, {0, 2}}, {{2, 1}, {0, 2}}, {{3, 1}, {0, 2}}, {{2, 1}, {1, 2}}, {{1, 1}, {-1, 2}}};
  } else if (d == 3) {
    per = {{{2, 1}, {1, 2}, {0, 3}}, {{1, 2}, {0, 3}}, {{1, 1}, {0, 3}}, {{3, 1}, {1, 3}}};
  } else {
    std::vector<Jump> full;
    for (int i = 1; i <= d; ++i) full.push_back({d - i, i});
    per = {full, {{1, d - 1}, {0, d}}, {{1, 1}, {0, d}}};
  }
  std::vector<FiltrationType> out;
  for (const auto& js : per) out.push_back(FiltrationType::uniform(d, e, f, js));
  if (ef > 1) {
    // One embedding carries the full type, the others a single step.
    std::vector<std::vector<Jump>> mixed(static_cast<std::size_t>(ef), per[1]);
    mixed[0] = per[0];
    out.emplace_back(d, e, f, mixed);
  }
  return out;
}

std::vector<Rational> grid_values(const Rational& lo, const Rational& hi, int max_den) {
  std::vector<Rational> out;
  for (int q = 1; q <= max_den; ++q) {
    mpz_class a = lo.get_num() * q / lo.get_den();  // floor toward zero, corrected below
    for (mpz_class k = a - 1;; ++k) {
      Rational v(k, mpz_class(q));
      v.canonicalize();
      if (v > hi) break;
      if (v >= lo) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool on_grid(const Rational& v, int max_den) { return v.get_den() <= max_den; }

// Sorted d-tuples from the grid with the given sum.
void tuples_with_sum(const std::vector<Rational>& grid, int d, const Rational& sum, int max_den,
                     std::vector<Rational>& prefix, std::vector<std::vector<Rational>>& out) {
  if (static_cast<int>(prefix.size()) == d - 1) {
    Rational used = 0;
    for (const auto& v : prefix) used += v;
    const Rational last = sum - used;
    if (on_grid(last, max_den) && (prefix.empty() || last >= prefix.back()) && last <= grid.back()) {
      auto t = prefix;
      t.push_back(last);
      out.push_back(std::move(t));
    }
    return;
  }
  for (const auto& v : grid) {
    if (!prefix.empty() && v < prefix.back()) continue;
    Rational used = v;
    for (const auto& u : prefix) used += u;
    // Remaining entries are >= v.
    if (used + v * (d - 1 - static_cast<int>(prefix.size())) > sum) break;
    prefix.push_back(v);
    tuples_with_sum(grid, d, sum, max_den, prefix, out);
    prefix.pop_back();
  }
}

SweepCell make_cell(std::string key, const FiltrationType& nu, std::vector<Rational> roots) {
  SweepCell c;
  c.key = std::move(key);
  c.nu = nu;
  c.roots = std::move(roots);
  return c;
}

std::string tuple_key(const std::vector<Rational>& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + to_string(t[i]);
  return s + "]";
}

}  // namespace

std::vector<SweepCell> sweep_cells(const SweepConfig& config) {
  require(config.d >= 1 && config.e >= 1 && config.f >= 1 && config.max_denominator >= 1, ErrorKind::ValidationError,
          "sweep parameters must be positive");
  const auto types = sweep_types(config.d, config.e, config.f);
  std::vector<SweepCell> cells;
  for (int spread = 1;; ++spread) {
    cells.clear();
    for (std::size_t ti = 0; ti < types.size(); ++ti) {
      const auto& nu = types[ti];
      const Rational target = Rational(config.f) * l_value(nu, config.d);
      const Rational lo = Rational(config.f) * l_value(nu, 1) - spread;
      const Rational hi = target - lo * (config.d - 1);
      const auto grid = grid_values(lo, hi, config.max_denominator);
      std::vector<std::vector<Rational>> on;
      std::vector<Rational> prefix;
      tuples_with_sum(grid, config.d, target, config.max_denominator, prefix, on);
      const std::string base = "d" + std::to_string(config.d) + "-e" + std::to_string(config.e) + "-f" +
                               std::to_string(config.f) + "-nu" + std::to_string(ti);
      for (std::size_t k = 0; k < on.size(); ++k) {
        cells.push_back(make_cell(base + "-" + tuple_key(on[k]), nu, on[k]));
        // Off the determinant plane: shift the largest root by +-1.
        if (k % 2 == 0) {
          auto off = on[k];
          off.back() += (k % 4 == 0) ? 1 : -1;
          std::sort(off.begin(), off.end());
          cells.push_back(make_cell(base + "-" + tuple_key(off), nu, off));
        }
      }
    }
    std::sort(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) { return a.key < b.key; });
    cells.erase(std::unique(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) { return a.key == b.key; }),
                cells.end());
    if (cells.size() >= config.min_cells || spread >= 16) break;
  }
  return cells;
}

namespace {

SweepCell evaluate_cell(SweepCell cell, const SweepConfig& config) {
  const auto roots = group_roots(cell.roots);
  const ExistenceReport rep = wa_exists(cell.nu, roots, {config.seed, config.budget, config.p});
  cell.predicted = rep.predicted;
  cell.seeds_tried = rep.seeds_tried;
  if (rep.predicted) {
    cell.witness_found = rep.witness.has_value();
    if (!cell.witness_found) {
      cell.anomaly = true;
      cell.anomaly_detail = "no admissible flag within the seed budget";
    }
    return cell;
  }
  cell.obstruction = rep.obstruction;
  if (!rep.obstruction) {
    cell.anomaly = true;
    cell.anomaly_detail = "predicted false but no obstruction";
    return cell;
  }
  const Obstruction& ob = *rep.obstruction;
  const bool valid = ob.kind == ObstructionKind::Determinant ? ob.lhs != ob.rhs : ob.lhs < ob.rhs;
  const FrobeniusSpec phi = jordan_construction(roots, config.f, config.p);
  const std::optional<StableSubspace> u =
      ob.kind == ObstructionKind::Prefix ? std::optional(obstruction_subspace(phi, ob.indices.size())) : std::nullopt;
  for (std::size_t s = 0; s < config.false_samples; ++s) {
    const FilteredIsocrystal x(phi, cell.nu, sample_flags(cell.nu, phi.field(), config.seed, s));
    ++cell.samples;
    if (is_weakly_admissible(x).status == WaStatus::Inadmissible) ++cell.samples_inadmissible;
    if (u) {
      const Rational deg = subspace_degree(x, u->basis);
      if (!(deg >= ob.rhs && ob.rhs > newton_number(phi, *u))) cell.obstruction_realised = false;
    }
  }
  if (!valid || cell.samples_inadmissible != cell.samples || !cell.obstruction_realised) {
    cell.anomaly = true;
    cell.anomaly_detail = !valid ? "obstruction inequality does not hold"
                          : !cell.obstruction_realised ? "obstruction subspace not destabilising"
                                                       : "admissible sample in a predicted-false cell";
  }
  return cell;
}

}  // namespace

SweepCell run_cell(SweepCell cell, const SweepConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SweepCell out = evaluate_cell(std::move(cell), config);
  out.elapsed_us =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SweepReport theorem_sweep(const SweepConfig& config) {
  SweepReport rep;
  rep.config = config;
  auto cells = sweep_cells(config);
  std::vector<SweepCell> done(cells.size());
  std::atomic<std::size_t> next{0};
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, cells.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) {
        try {
          done[i] = run_cell(cells[i], config);
        } catch (const std::exception& err) {
          done[i] = cells[i];
          done[i].anomaly = true;
          done[i].anomaly_detail = err.what();
        }
      }
    });
  for (auto& t : pool) t.join();
  rep.cells = std::move(done);
  for (const auto& c : rep.cells) {
    (c.predicted ? rep.predicted_true : rep.predicted_false)++;
    if (c.anomaly) ++rep.anomalies;
  }
  return rep;
}

}  // namespace phimod
