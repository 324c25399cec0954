#pragma once

// JSON forms of the public types.  Rationals are strings "a/b" (integers may
// also be given as JSON integers on input); valuations use "inf" for +infinity;
// matrices are arrays of columns.  Objects with unknown keys are rejected.

#include <json.hpp>

#include "phimod/thmlab.hpp"

namespace phimod {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json emit(const Rational& q);
Json emit(const Val& v);
Json emit(const FieldSpec& field);
Json emit(const CoeffElem& a);
Json emit(const MatrixF& m);  // columns
Json emit(const DominantCoweight& mu);
Json emit(const AdjointPoint& c);
Json emit(const FiltrationType& nu);
Json emit(const FrobeniusSpec& phi);
Json emit(const StableSubspace& u);
Json emit(const Flag& flag);
Json emit(const FilteredIsocrystal& x);
Json emit(const WaVerdict& v);
Json emit(const HNFiltration& hn);
Json emit(const Obstruction& ob);
Json emit(const ExistenceReport& rep);
Json emit(const RootClass& r);
Json emit(const SweepCell& cell);

Rational parse_rational(const Json& j, const std::string& where);
Val parse_val(const Json& j, const std::string& where);
FieldSpec parse_field(const Json& j, const std::string& where = "field");
CoeffElem parse_coeff(const Json& j, const FieldSpec& field, const std::string& where);
MatrixF parse_matrix(const Json& j, const FieldSpec& field, std::size_t rows, const std::string& where);
DominantCoweight parse_coweight(const Json& j, const std::string& where = "mu");
AdjointPoint parse_point(const Json& j, const std::string& where = "point");
FiltrationType parse_type(const Json& j, const std::string& where = "type");
FrobeniusSpec parse_frobenius(const Json& j, const std::string& where = "frobenius");
StableSubspace parse_subspace(const Json& j, const FrobeniusSpec& phi, const std::string& where);
Flag parse_flag(const Json& j, const FieldSpec& field, std::size_t d, const std::string& where);
// {frobenius, type, flags}; extra allowed keys are ignored by the key check.
FilteredIsocrystal parse_filtered(const Json& j, const std::vector<std::string>& extra_keys = {});
WaVerdict parse_verdict(const Json& j, const FrobeniusSpec& phi);
HNFiltration parse_hn(const Json& j, const FrobeniusSpec& phi);
Obstruction parse_obstruction(const Json& j);
RootClass parse_root(const Json& j, const std::string& where);
ExistenceReport parse_existence(const Json& j);
SweepCell parse_sweep_cell(const Json& j);

// Throws ParseError naming the first key of j outside `allowed`.
void check_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where);
// Parses text (ParseError with line/column) and checks {"schema": 1}.
Json parse_document(const std::string& text);

}  // namespace phimod
