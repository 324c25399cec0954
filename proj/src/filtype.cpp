#include "phimod/filtype.hpp"

#include <algorithm>

namespace phimod {

FiltrationType::FiltrationType(int d, int e, int f, std::vector<std::vector<Jump>> embeddings)
    : d_(d), e_(e), f_(f), embeddings_(std::move(embeddings)) {
  require(d_ >= 1, ErrorKind::ValidationError, "rank d must be >= 1");
  require(e_ >= 1 && f_ >= 1, ErrorKind::ValidationError, "e and f must be >= 1");
  require(embeddings_.size() == static_cast<std::size_t>(e_ * f_), ErrorKind::ValidationError,
          "expected e*f = " + std::to_string(e_ * f_) + " embeddings, got " + std::to_string(embeddings_.size()));
  for (std::size_t psi = 0; psi < embeddings_.size(); ++psi) {
    const auto& js = embeddings_[psi];
    const std::string where = "embedding " + std::to_string(psi + 1) + ": ";
    require(!js.empty(), ErrorKind::ValidationError, where + "needs at least one jump");
    for (std::size_t j = 0; j + 1 < js.size(); ++j) {
      require(js[j].x > js[j + 1].x, ErrorKind::ValidationError, where + "jumps must be strictly decreasing");
      require(js[j].rank < js[j + 1].rank, ErrorKind::ValidationError, where + "ranks must be strictly increasing");
    }
    require(js.front().rank >= 1, ErrorKind::ValidationError, where + "ranks must be positive");
    require(js.back().rank == d_, ErrorKind::ValidationError, where + "last rank must equal d");
  }
}

FiltrationType FiltrationType::uniform(int d, int e, int f, const std::vector<Jump>& jumps) {
  return FiltrationType(d, e, f, std::vector<std::vector<Jump>>(static_cast<std::size_t>(e * f), jumps));
}

namespace {

Rational l_value_with_tail(const FiltrationType& nu, int i, bool full_rank_tail) {
  require(i >= 0 && i <= nu.d(), ErrorKind::IndexOutOfRange, "l index " + std::to_string(i));
  const int d = nu.d();
  Rational total = 0;
  for (const auto& js : nu.embeddings()) {
    Rational s = 0;
    for (std::size_t j = 0; j + 1 < js.size(); ++j)
      s += Rational(js[j].x - js[j + 1].x) * std::max(0, js[j].rank + i - d);
    s += Rational(js.back().x) * (full_rank_tail ? d : i);
    total += s;
  }
  return total / nu.embedding_count();
}

}  // namespace

Rational l_value(const FiltrationType& nu, int i) { return l_value_with_tail(nu, i, false); }

Rational l_value_full_rank_tail(const FiltrationType& nu, int i) { return l_value_with_tail(nu, i, true); }

std::vector<Rational> l_vector(const FiltrationType& nu) {
  std::vector<Rational> l;
  for (int i = 0; i <= nu.d(); ++i) l.push_back(l_value(nu, i));
  return l;
}

std::optional<std::string> tail_term_warning(const FiltrationType& nu) {
  for (std::size_t psi = 0; psi < nu.embeddings().size(); ++psi) {
    const auto& last = nu.embeddings()[psi].back();
    if (last.x != 0)
      return "embedding " + std::to_string(psi + 1) + " has lowest jump " + std::to_string(last.x) +
             " != 0; l_i uses the generic-position tail x_r * i, which differs from the x_r * d reading for i < d";
  }
  return std::nullopt;
}

DominantCoweight mu_of_nu(const FiltrationType& nu) {
  std::vector<Rational> sums;
  for (int i = 1; i <= nu.d(); ++i) sums.push_back(-Rational(nu.f()) * l_value(nu, i));
  try {
    return DominantCoweight::from_partial_sums(sums);
  } catch (const Error& err) {
    fail(ErrorKind::NonDominantResult, std::string("mu(nu) not dominant: ") + err.what());
  }
}

Rational total_degree(const FiltrationType& nu) {
  Rational total = 0;
  for (const auto& js : nu.embeddings()) {
    int prev = 0;
    for (const auto& j : js) {
      total += Rational(j.x) * (j.rank - prev);
      prev = j.rank;
    }
  }
  return total / nu.embedding_count();
}

bool convexity_lemma_check(const Rational& s1, const Rational& s2, int j1, int j2, int i,
                           const FiltrationType& nu) {
  require(j1 >= j2 && j2 >= 0, ErrorKind::PreconditionViolated, "need j1 >= j2 >= 0");
  require(i >= 1 && i <= nu.d() - j1, ErrorKind::PreconditionViolated, "need 1 <= i <= d - j1");
  require(s1 >= l_value(nu, i), ErrorKind::PreconditionViolated, "need s1 >= l_i");
  require(s1 + j1 * s2 >= l_value(nu, i + j1), ErrorKind::PreconditionViolated, "need s1 + j1*s2 >= l_{i+j1}");
  return s1 + j2 * s2 >= l_value(nu, i + j2);
}

}  // namespace phimod
