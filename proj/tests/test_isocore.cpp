#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "phimod/isocore.hpp"
#include "support.hpp"

using namespace phimod;
using namespace phimod::testing;

namespace {

StableSubspace span_of(const FrobeniusSpec& phi, const std::vector<std::vector<long>>& columns) {
  return make_stable(phi, cols(phi.field(), columns));
}

// Every subspace spanned by one or two vectors with entries in {-1, 0, 1},
// taken in the eigenbasis coordinates and mapped through P.
std::vector<MatrixF> small_subspaces(const FrobeniusSpec& phi) {
  const std::size_t d = phi.d();
  const FieldSpec field = phi.field();
  std::vector<MatrixF> vecs;
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= 3;
  for (std::size_t code = 1; code < total; ++code) {
    MatrixF v(field, d, 1);
    std::size_t c = code;
    for (std::size_t i = 0; i < d; ++i, c /= 3) v(i, 0) = num(field, static_cast<long>(c % 3) - 1);
    vecs.push_back(phi.eigenbasis() * v);
  }
  std::vector<MatrixF> out;
  for (std::size_t a = 0; a < vecs.size(); ++a) {
    out.push_back(vecs[a]);
    for (std::size_t b = a + 1; b < vecs.size(); ++b) {
      const MatrixF pair = hcat(vecs[a], vecs[b]);
      if (rank(pair) == 2) out.push_back(pair);
    }
  }
  return out;
}

bool is_stable(const MatrixF& m, const MatrixF& u) { return subspace_contains(u, m * u); }

}  // namespace

TEST_CASE("spec validation") {
  const FieldSpec field = q5();
  try {
    FrobeniusSpec(field, 1, {{num(field, 1), JordanBlock{1}}, {num(field, 1), JordanBlock{2}}});
    FAIL("expected UnsupportedFrobenius");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedFrobenius);
  }
  CHECK_THROWS_AS(FrobeniusSpec(field, 1, {{num(field, 0), JordanBlock{1}}}), Error);
  CHECK_THROWS_AS(FrobeniusSpec(field, 0, {{num(field, 1), JordanBlock{1}}}), Error);
  CHECK_THROWS_AS(FrobeniusSpec(field, 1, {{num(field, 1), JordanBlock{2}}}, cols(field, {{1, 2}, {2, 4}})), Error);
}

TEST_CASE("newton numbers and slopes of a diagonal spec") {
  const auto phi = diag_spec(q5(), {0, 1, 2});
  CHECK(newton_slope(phi, span_of(phi, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == 1);
  CHECK(newton_slope(phi, span_of(phi, {{0, 0, 1}})) == 2);
  CHECK(newton_number(phi, span_of(phi, {{1, 0, 0}, {0, 1, 0}})) == 1);
  const StableSubspace zero = make_stable(phi, MatrixF(q5(), 3, 0));
  CHECK(newton_number(phi, zero) == 0);
  try {
    (void)newton_slope(phi, zero);
    FAIL("expected ZeroSubspace");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroSubspace);
  }
  try {
    (void)span_of(phi, {{1, 1, 0}});
    FAIL("expected NotStable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotStable);
  }
}

TEST_CASE("slope with f = 2 divides by f") {
  const auto phi = diag_spec(q5(), {1}, 2);
  CHECK(newton_slope(phi, span_of(phi, {{1}})) == frac(1, 2));
}

TEST_CASE("the invariant line of a Jordan block") {
  const FieldSpec field = q5();
  const FrobeniusSpec phi(field, 1, {{num(field, 5), JordanBlock{2}}});
  const auto en = enumerate_stable(phi);
  REQUIRE(en.finite);
  REQUIRE(en.families.size() == 3);
  const auto line = *en.families[1].subspace;
  CHECK(same_span(line.basis, cols(field, {{1, 0}})));
  CHECK(newton_number(phi, line) == 1);
}

TEST_CASE("slope decomposition") {
  const FieldSpec field = q5();
  const auto phi = diag_spec(field, {0, 1, 1}, 1, {1, 1, 2});
  const auto pieces = slope_decomposition(phi);
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[0].slope == 0);
  CHECK(same_span(pieces[0].subspace.basis, cols(field, {{1, 0, 0}})));
  CHECK(pieces[1].slope == 1);
  CHECK(same_span(pieces[1].subspace.basis, cols(field, {{0, 1, 0}, {0, 0, 1}})));

  const FrobeniusSpec block(field, 1, {{num(field, 25), JordanBlock{3}}});
  CHECK(slope_decomposition(block).size() == 1);
  CHECK(slope_decomposition(diag_spec(field, {0, 1, 2})).size() == 3);
}

TEST_CASE("slope decomposition ignores piece order") {
  const FieldSpec field = q5();
  const FrobeniusSpec a(field, 1, {{num(field, 5), JordanBlock{1}}, {num(field, 10), JordanBlock{1}}, {num(field, 1), JordanBlock{1}}});
  const FrobeniusSpec b(field, 1, {{num(field, 1), JordanBlock{1}}, {num(field, 10), JordanBlock{1}}, {num(field, 5), JordanBlock{1}}});
  const auto pa = slope_decomposition(a), pb = slope_decomposition(b);
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].slope == pb[i].slope);
    CHECK(pa[i].subspace.rank() == pb[i].subspace.rank());
  }
}

TEST_CASE("enumeration of the diagonal spec matches a brute-force stability search") {
  const auto phi = diag_spec(q5(), {0, 1, 2});
  const auto en = enumerate_stable(phi);
  REQUIRE(en.finite);
  const auto subs = en.subspaces();
  CHECK(subs.size() == 8);
  for (const auto& u : subs) CHECK(is_stable(phi.matrix(), u.basis));
  for (const auto& w : small_subspaces(phi)) {
    if (!is_stable(phi.matrix(), w)) continue;
    bool found = false;
    for (const auto& u : subs) found = found || same_span(u.basis, w);
    CHECK(found);
  }
}

TEST_CASE("random chain specs: count, stability and completeness") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    const int d = 1 + t % 3;
    const auto phi = random_chain_spec(q5(), d, 1 + t % 2, rng, t % 2 == 0);
    const auto en = enumerate_stable(phi);
    REQUIRE(en.finite);
    std::size_t expected = 1;
    for (const auto& p : phi.pieces()) expected *= p.dim() + 1;
    const auto subs = en.subspaces();
    CHECK(subs.size() == expected);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      CHECK(is_stable(phi.matrix(), subs[i].basis));
      for (std::size_t j = i + 1; j < subs.size(); ++j) CHECK(!same_span(subs[i].basis, subs[j].basis));
      if (i > 0) CHECK(subs[i - 1].rank() <= subs[i].rank());
    }
    for (const auto& w : small_subspaces(phi)) {
      if (!is_stable(phi.matrix(), w)) continue;
      bool found = false;
      for (const auto& u : subs) found = found || same_span(u.basis, w);
      CHECK(found);
    }
  }
}

TEST_CASE("semisimple pieces give families by dimension vector") {
  const FieldSpec field = q5();
  const FrobeniusSpec phi(field, 1, {{num(field, 1), Semisimple{2}}, {num(field, 125), JordanBlock{1}}});
  const auto en = enumerate_stable(phi);
  CHECK(!en.finite);
  CHECK(en.families.size() == 6);
  std::size_t free_families = 0;
  for (const auto& fam : en.families) {
    CHECK(fam.dims[0] <= 2);
    CHECK(fam.dims[1] <= 1);
    if (!fam.free_pieces.empty()) {
      ++free_families;
      CHECK(!fam.subspace.has_value());
    }
  }
  CHECK(free_families == 2);
  const auto u = assemble_stable(phi, {1, 1}, {cols(field, {{1, 1, 0}}), std::nullopt});
  CHECK(u.rank() == 2);
  CHECK(is_stable(phi.matrix(), u.basis));
}

TEST_CASE("newton number is additive along nested stable pairs") {
  std::mt19937_64 rng(32);
  int checked = 0;
  for (int t = 0; checked < 200; ++t) {
    const auto phi = random_chain_spec(q5(), 2 + t % 3, 1 + t % 2, rng, true);
    const auto subs = enumerate_stable(phi).subspaces();
    for (const auto& u : subs)
      for (const auto& u2 : subs) {
        if (!subspace_contains(u2.basis, u.basis) || checked >= 200) continue;
        const MatrixF q = induced_quotient_matrix(phi.matrix(), u.basis, u2.basis);
        const Rational tq = q.rows() == 0 ? Rational(0) : valuation(determinant(q)).value() / phi.f();
        CHECK(newton_number(phi, u2) == newton_number(phi, u) + tq);
        ++checked;
      }
  }
}

TEST_CASE("induced quotient requires nesting") {
  const auto phi = diag_spec(q5(), {0, 1});
  try {
    (void)induced_quotient_matrix(phi.matrix(), cols(q5(), {{1, 0}}), cols(q5(), {{0, 1}}));
    FAIL("expected NotNested");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotNested);
  }
}

TEST_CASE("quotient spec intertwines with the projection") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 30; ++t) {
    const auto phi = random_chain_spec(q5(), 2 + t % 3, 1, rng, t % 2 == 1);
    for (const auto& u : enumerate_stable(phi).subspaces()) {
      if (u.rank() == 0 || u.rank() == phi.d()) continue;
      const auto q = quotient(phi, u);
      CHECK(q.spec.d() == phi.d() - u.rank());
      CHECK(q.projection * phi.matrix() == q.spec.matrix() * q.projection);
      CHECK((q.projection * u.basis).is_zero());
      CHECK(q.projection * q.lift == MatrixF::identity(phi.field(), q.spec.d()));
      CHECK(newton_number(phi, u) + newton_number(q.spec, make_stable(q.spec, MatrixF::identity(phi.field(), q.spec.d()))) ==
            newton_number(phi, make_stable(phi, MatrixF::identity(phi.field(), phi.d()))));
    }
  }
}

TEST_CASE("slopes are invariant under scalar extension") {
  std::mt19937_64 rng(34);
  const FieldSpec small(1, 5), big(2, 5);
  for (int t = 0; t < 20; ++t) {
    const auto phi = random_chain_spec(small, 1 + t % 3, 1 + t % 2, rng, true);
    const auto ext = extend_scalars(phi, big);
    const auto a = enumerate_stable(phi).subspaces(), b = enumerate_stable(ext).subspaces();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(same_span(extend_scalars(a[i].basis, big), b[i].basis));
      CHECK(newton_number(phi, a[i]) == newton_number(ext, b[i]));
    }
  }
}

TEST_CASE("morphisms preserve slope pieces") {
  const FieldSpec field = q5();
  const auto phi = diag_spec(field, {0, 1});
  CHECK(morphism_slope_check(MatrixF::identity(field, 2), phi, phi));
  CHECK(morphism_slope_check(MatrixF(field, 2, 2), phi, phi));
  const auto swapped = diag_spec(field, {1, 0});
  CHECK(morphism_slope_check(cols(field, {{0, 1}, {1, 0}}), phi, swapped));
  try {
    (void)morphism_slope_check(MatrixF::identity(field, 2), phi, swapped);
    FAIL("expected NotIntertwining");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotIntertwining);
  }
}

TEST_CASE("random intertwiners preserve slope pieces") {
  std::mt19937_64 rng(35);
  const FieldSpec field = q5();
  int nontrivial = 0;
  for (int t = 0; t < 40; ++t) {
    // Shared eigenvalues make nonzero intertwiners likely.
    const auto a = diag_spec(field, {0, 1, static_cast<long>(t % 3)}, 1, {1, 1, 2});
    const auto b = random_chain_spec(field, 2 + t % 2, 1, rng, true);
    const auto basis = intertwiner_basis(a.matrix(), b.matrix());
    const MatrixF x = random_combination(basis, b.d(), a.d(), field, rng);
    if (!x.is_zero()) ++nontrivial;
    CHECK(morphism_slope_check(x, a, b));
  }
  CHECK(nontrivial > 0);
}
