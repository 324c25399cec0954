#pragma once

// Checks of the existence criterion for weakly admissible filtrations: the
// characteristic-polynomial map to A/W, witness search over seeded flags,
// obstructions, the worked examples and a parameter sweep.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phimod/filtcore.hpp"

namespace phimod {

AdjointPoint adjoint_image(const FrobeniusSpec& phi);

// Eigenvalue valuations with multiplicities.
struct RootClass {
  Rational valuation;
  std::size_t multiplicity = 1;

  bool operator==(const RootClass&) const = default;
};

// Sorted ascending, multiplicities expanded.
std::vector<Rational> expand_roots(const std::vector<RootClass>& roots);
// Groups equal valuations of a list of roots.
std::vector<RootClass> group_roots(std::vector<Rational> valuations);

// Smallest m with m * v integral for every root valuation.
int ramification_for(const std::vector<RootClass>& roots);

// One Jordan block per distinct valuation, eigenvalue u_j * pi^(m v_j) with
// distinct p-adic units u_j; roots are grouped first.
FrobeniusSpec jordan_construction(const std::vector<RootClass>& roots, int f, long p = 5);

// Seeded flags of the given type: F^{x_j} = first n_j columns of an invertible
// integer matrix whose entry box grows with `index`.
std::vector<Flag> sample_flags(const FiltrationType& nu, const FieldSpec& field, std::uint64_t seed,
                               std::uint64_t index);

enum class ObstructionKind { Determinant, Prefix };

// Either the determinant equality fails, or the |I| smallest roots I satisfy
// sum_{j in I} v(lambda_j) / f < l_{|I|}.
struct Obstruction {
  ObstructionKind kind = ObstructionKind::Prefix;
  std::vector<std::size_t> indices;  // 1-based positions in the sorted root list
  Rational lhs;                      // sum of v(lambda_j) / f over I
  Rational rhs;                      // l_{|I|}
};

struct ExistenceReport {
  AdjointPoint point;
  DominantCoweight mu;
  bool predicted = false;
  std::optional<FilteredIsocrystal> witness;
  std::optional<Obstruction> obstruction;
  std::uint64_t seeds_tried = 0;
  // predicted, but no witness within the seed budget.
  bool anomaly = false;
};

struct ExistenceOptions {
  std::uint64_t seed = 0;
  std::uint64_t budget = 64;
  long p = 5;
};

ExistenceReport wa_exists(const FiltrationType& nu, const std::vector<RootClass>& roots,
                          const ExistenceOptions& opts = {});

// Root valuations read off the Newton polygon of the point.
std::vector<RootClass> roots_from_point(const AdjointPoint& c);

// The stable subspace spanned by the generalised eigenvectors of the
// |I| smallest roots in a Jordan construction.
StableSubspace obstruction_subspace(const FrobeniusSpec& phi, std::size_t count);

struct ExampleCheck {
  std::string name;
  bool passed = false;
  std::size_t trials = 0;
  std::size_t agreements = 0;
  std::string detail;
};

ExampleCheck example_full_flag_open_cell(std::size_t samples, std::uint64_t seed);
ExampleCheck example_empty_locus(std::size_t samples, std::uint64_t seed);
ExampleCheck example_two_embeddings(std::size_t samples, std::uint64_t seed);
ExampleCheck example_l_values();

std::vector<ExampleCheck> example_suite(std::uint64_t seed = 0);

struct SweepConfig {
  int d = 2;
  int e = 1;
  int f = 1;
  int max_denominator = 4;
  std::size_t min_cells = 200;
  std::size_t false_samples = 20;
  std::uint64_t seed = 0;
  std::uint64_t budget = 64;
  long p = 5;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepCell {
  std::string key;
  FiltrationType nu;
  std::vector<Rational> roots;  // sorted valuations
  bool predicted = false;
  bool witness_found = false;
  std::uint64_t seeds_tried = 0;
  std::optional<Obstruction> obstruction;
  std::size_t samples = 0;           // inadmissible samples checked
  std::size_t samples_inadmissible = 0;
  bool obstruction_realised = true;  // deg(U_I) >= l_|I| > t_N(U_I) on every sample
  bool anomaly = false;
  std::string anomaly_detail;
  std::int64_t elapsed_us = 0;
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepCell> cells;
  std::size_t predicted_true = 0;
  std::size_t predicted_false = 0;
  std::size_t anomalies = 0;
};

// Cells for one configuration, in deterministic key order.
std::vector<SweepCell> sweep_cells(const SweepConfig& config);
SweepCell run_cell(SweepCell cell, const SweepConfig& config);
SweepReport theorem_sweep(const SweepConfig& config);

}  // namespace phimod
