#pragma once

// Filtration types: per-embedding jumps and ranks of a dominant cocharacter,
// the threshold numbers l_i and the coweight mu(nu).

#include <optional>
#include <string>
#include <vector>

#include "phimod/adjq.hpp"

namespace phimod {

struct Jump {
  long x = 0;     // filtration index
  int rank = 0;   // rank of F^x

  bool operator==(const Jump&) const = default;
};

class FiltrationType {
 public:
  FiltrationType() = default;
  // embeddings.size() must equal e * f; each list has strictly decreasing jumps
  // and strictly increasing ranks ending at d.
  FiltrationType(int d, int e, int f, std::vector<std::vector<Jump>> embeddings);

  // Same jump data on all e * f embeddings.
  static FiltrationType uniform(int d, int e, int f, const std::vector<Jump>& jumps);

  int d() const { return d_; }
  int e() const { return e_; }
  int f() const { return f_; }
  int embedding_count() const { return e_ * f_; }
  const std::vector<Jump>& jumps(int psi) const { return embeddings_.at(static_cast<std::size_t>(psi)); }
  const std::vector<std::vector<Jump>>& embeddings() const { return embeddings_; }

  bool operator==(const FiltrationType&) const = default;

 private:
  int d_ = 0;
  int e_ = 1;
  int f_ = 1;
  std::vector<std::vector<Jump>> embeddings_;
};

// Minimal filtration degree of a rank-i subspace in generic position,
// 0 <= i <= d.
Rational l_value(const FiltrationType& nu, int i);
std::vector<Rational> l_vector(const FiltrationType& nu);  // l_0, ..., l_d

// The variant whose last term is x_{psi,r} * d instead of x_{psi,r} * i.
// Kept only to document where it diverges from the generic minimum.
Rational l_value_full_rank_tail(const FiltrationType& nu, int i);

// Non-empty when some embedding has a nonzero lowest jump, i.e. where the two
// readings of the tail term differ.
std::optional<std::string> tail_term_warning(const FiltrationType& nu);

// The dominant coweight with <omega_i, mu(nu)> = -f * l_i.
DominantCoweight mu_of_nu(const FiltrationType& nu);

Rational total_degree(const FiltrationType& nu);

// Given s1 >= l_i and s1 + j1*s2 >= l_{i+j1}, reports whether
// s1 + j2*s2 >= l_{i+j2}.  Throws PreconditionViolated if the hypotheses fail.
bool convexity_lemma_check(const Rational& s1, const Rational& s2, int j1, int j2, int i,
                           const FiltrationType& nu);

}  // namespace phimod
