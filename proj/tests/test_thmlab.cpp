#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "phimod/thmlab.hpp"
#include "support.hpp"

using namespace phimod;
using namespace phimod::testing;

namespace {

std::vector<RootClass> roots_of(std::initializer_list<Rational> vals) {
  return group_roots(std::vector<Rational>(vals));
}

std::vector<Val> as_vals(const std::vector<Rational>& xs) {
  std::vector<Val> out;
  for (const auto& x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("adjoint image fixtures") {
  CHECK(adjoint_image(diag_spec(q5(), {0, 1, 2})).coeff_vals() == as_vals({0, 1, 3}));
  const FieldSpec field = q5();
  const FrobeniusSpec block(field, 1, {{num(field, 5), JordanBlock{2}}});
  CHECK(adjoint_image(block).coeff_vals() == as_vals({1, 2}));
}

TEST_CASE("retraction of the adjoint image lists the negated eigenvalue valuations") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 100; ++t) {
    const FieldSpec field(1 + t % 2, 5);
    const auto phi = random_chain_spec(field, 1 + t % 4, 1 + t % 3, rng, t % 2 == 0);
    std::vector<Rational> expected;
    for (const auto& p : phi.pieces())
      for (std::size_t k = 0; k < p.dim(); ++k) expected.push_back(-valuation(p.eigenvalue).value());
    std::sort(expected.begin(), expected.end(), std::greater<>());
    CHECK(newton_retraction(adjoint_image(phi)).entries() == expected);
  }
}

TEST_CASE("root bookkeeping") {
  const auto roots = roots_of({frac(1, 2), 0, frac(1, 2), frac(2, 3)});
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == RootClass{0, 1});
  CHECK(roots[1] == RootClass{frac(1, 2), 2});
  CHECK(expand_roots(roots) == std::vector<Rational>{0, frac(1, 2), frac(1, 2), frac(2, 3)});
  CHECK(ramification_for(roots) == 6);
  CHECK(ramification_for(roots_of({0, 3})) == 1);
}

TEST_CASE("Jordan construction round-trips the root valuations") {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 60; ++t) {
    std::vector<Rational> vals;
    const int d = 1 + t % 4;
    for (int i = 0; i < d; ++i) vals.push_back(frac(std::uniform_int_distribution<long>(-6, 8)(rng), 1 + t % 4));
    const auto roots = group_roots(vals);
    const int f = 1 + t % 2;
    const auto phi = jordan_construction(roots, f);
    CHECK(phi.single_block_class());
    CHECK(phi.pieces().size() == roots.size());
    CHECK(roots_from_point(adjoint_image(phi)) == roots);
  }
}

TEST_CASE("existence: full-flag type over the diagonal roots 0, 1, 2") {
  const auto nu = full_flag_type3();
  const auto rep = wa_exists(nu, roots_of({0, 1, 2}));
  CHECK(rep.predicted);
  REQUIRE(rep.witness.has_value());
  CHECK(!rep.anomaly);
  CHECK(rep.seeds_tried >= 1);
  CHECK(is_weakly_admissible(*rep.witness).status == WaStatus::Admissible);
  CHECK(rep.point.coeff_vals() == as_vals({0, 1, 3}));
}

TEST_CASE("existence: roots 0, 0, 3 are obstructed by the first two") {
  const auto rep = wa_exists(full_flag_type3(), roots_of({0, 0, 3}));
  CHECK(!rep.predicted);
  CHECK(!rep.witness.has_value());
  REQUIRE(rep.obstruction.has_value());
  CHECK(rep.obstruction->kind == ObstructionKind::Prefix);
  CHECK(rep.obstruction->indices == std::vector<std::size_t>{1, 2});
  CHECK(rep.obstruction->lhs == 0);
  CHECK(rep.obstruction->rhs == 1);
}

TEST_CASE("existence: determinant obstruction") {
  const auto rep = wa_exists(full_flag_type3(), roots_of({0, 1, 1}));
  CHECK(!rep.predicted);
  REQUIRE(rep.obstruction.has_value());
  CHECK(rep.obstruction->kind == ObstructionKind::Determinant);
  CHECK(rep.obstruction->lhs == 2);
  CHECK(rep.obstruction->rhs == 3);
}

TEST_CASE("existence: trivial type needs unit roots") {
  const auto nu = FiltrationType::uniform(2, 1, 1, {{0, 2}});
  const auto yes = wa_exists(nu, roots_of({0, 0}));
  CHECK(yes.predicted);
  REQUIRE(yes.witness.has_value());
  CHECK(is_weakly_admissible(*yes.witness).status == WaStatus::Admissible);
  // Determinant valuation zero is not enough: the smaller root breaks l_1 = 0.
  const auto split = wa_exists(nu, roots_of({-1, 1}));
  CHECK(!split.predicted);
  REQUIRE(split.obstruction.has_value());
  CHECK(split.obstruction->kind == ObstructionKind::Prefix);
  CHECK(split.obstruction->indices == std::vector<std::size_t>{1});
  CHECK(wa_exists(nu, roots_of({0, 1})).obstruction->kind == ObstructionKind::Determinant);
}

TEST_CASE("existence reports are deterministic in the seed") {
  const auto nu = FiltrationType::uniform(3, 2, 1, {{1, 1}, {0, 3}});
  ExistenceOptions opts;
  opts.seed = 77;
  const auto roots = roots_of({frac(1, 4), frac(1, 4), frac(1, 2)});
  const auto a = wa_exists(nu, roots, opts), b = wa_exists(nu, roots, opts);
  CHECK(a.predicted == b.predicted);
  CHECK(a.seeds_tried == b.seeds_tried);
  CHECK(a.witness == b.witness);
  const auto f1 = sample_flags(nu, FieldSpec(4, 5), 9, 3), f2 = sample_flags(nu, FieldSpec(4, 5), 9, 3);
  CHECK(f1 == f2);
  CHECK(f1 != sample_flags(nu, FieldSpec(4, 5), 9, 4));
  for (int psi = 0; psi < nu.embedding_count(); ++psi) CHECK(f1[static_cast<std::size_t>(psi)].type() == nu.jumps(psi));
}

TEST_CASE("rank two, one jump: the predicted set is the classical segment") {
  const auto nu = FiltrationType::uniform(2, 1, 1, {{1, 1}, {0, 2}});
  for (long a = -8; a <= 8; ++a)
    for (long b = a; b <= 8; ++b) {
      const Rational v1 = frac(a, 4), v2 = frac(b, 4);
      const bool expected = v1 + v2 == 1 && v1 >= 0;
      const auto rep = wa_exists(nu, roots_of({v1, v2}));
      CHECK(rep.predicted == expected);
      CHECK(rep.witness.has_value() == expected);
      CHECK(rep.obstruction.has_value() == !expected);
    }
}

TEST_CASE("obstruction subspaces exceed their Newton number on every sampled flag") {
  std::mt19937_64 rng(53);
  int prefix_cases = 0;
  for (int t = 0; t < 60; ++t) {
    const int d = 2 + t % 2, e = 1 + t % 2;
    const auto nu = random_type(d, e, 1, rng);
    // Valuations summing to l_d with a spread that often breaks a prefix bound.
    std::vector<Rational> vals;
    Rational rest = total_degree(nu);
    for (int i = 0; i + 1 < d; ++i) {
      vals.push_back(frac(std::uniform_int_distribution<long>(-4, 4)(rng), e));
      rest -= vals.back();
    }
    vals.push_back(rest);
    const auto roots = group_roots(vals);
    const auto rep = wa_exists(nu, roots);
    if (rep.predicted || rep.obstruction->kind != ObstructionKind::Prefix) continue;
    ++prefix_cases;
    const auto& ob = *rep.obstruction;
    CHECK(ob.lhs < ob.rhs);
    CHECK(ob.rhs == l_value(nu, static_cast<int>(ob.indices.size())));
    const auto phi = jordan_construction(roots, nu.f());
    const auto u = obstruction_subspace(phi, ob.indices.size());
    CHECK(newton_number(phi, u) == ob.lhs);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const FilteredIsocrystal x(phi, nu, sample_flags(nu, phi.field(), s, s));
      CHECK(filtration_degree(x, u) >= ob.rhs);
      CHECK(is_weakly_admissible(x).status == WaStatus::Inadmissible);
    }
  }
  CHECK(prefix_cases > 10);
}

TEST_CASE("worked examples pass") {
  for (const auto& check : example_suite(0)) {
    INFO(check.name << ": " << check.detail);
    CHECK(check.passed);
    CHECK(check.agreements == check.trials);
  }
}

TEST_CASE("a small sweep has no anomalies and deterministic cells") {
  SweepConfig config;
  config.d = 2;
  config.min_cells = 40;
  config.false_samples = 5;
  config.threads = 2;
  const auto cells = sweep_cells(config);
  CHECK(cells.size() >= 40);
  for (std::size_t i = 1; i < cells.size(); ++i) CHECK(cells[i - 1].key < cells[i].key);
  const auto again = sweep_cells(config);
  REQUIRE(again.size() == cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) CHECK(again[i].key == cells[i].key);

  const auto report = theorem_sweep(config);
  CHECK(report.anomalies == 0);
  CHECK(report.predicted_true > 0);
  CHECK(report.predicted_false > 0);
  CHECK(report.predicted_true + report.predicted_false == report.cells.size());
  for (const auto& cell : report.cells) {
    if (cell.predicted) {
      CHECK(cell.witness_found);
    } else {
      CHECK(cell.obstruction.has_value());
      CHECK(cell.samples_inadmissible == cell.samples);
      CHECK(cell.obstruction_realised);
    }
  }
}
