#include "phimod/serialize.hpp"

#include <algorithm>

namespace phimod {

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  fail(ErrorKind::ParseError, where + ": " + what);
}

const Json& field_of(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(where, "missing field '" + key + "'");
  return *it;
}

const Json& array_of(const Json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array");
  return j;
}

long integer_of(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) parse_fail(where, "expected an integer");
  return j.get<long>();
}

bool bool_of(const Json& j, const std::string& where) {
  if (!j.is_boolean()) parse_fail(where, "expected a boolean");
  return j.get<bool>();
}

std::string string_of(const Json& j, const std::string& where) {
  if (!j.is_string()) parse_fail(where, "expected a string");
  return j.get<std::string>();
}

std::size_t size_of(const Json& j, const std::string& where) {
  const long v = integer_of(j, where);
  if (v < 0) parse_fail(where, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& where, const std::string& key) { return where + "." + key; }

Json emit_dims(const DimensionVector& dims) {
  Json a = Json::array();
  for (auto k : dims) a.push_back(k);
  return a;
}

DimensionVector parse_dims(const Json& j, const std::string& where) {
  DimensionVector out;
  const auto& a = array_of(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(size_of(a[i], at(where, i)));
  return out;
}

Json emit_rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(emit(q));
  return a;
}

std::vector<Rational> parse_rationals(const Json& j, const std::string& where) {
  std::vector<Rational> out;
  const auto& a = array_of(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(parse_rational(a[i], at(where, i)));
  return out;
}

}  // namespace

void check_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) parse_fail(where, "unknown field '" + key + "'");
  }
}

Json parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& err) {
    fail(ErrorKind::ParseError, std::string("malformed JSON: ") + err.what());
  }
  const Json& schema = field_of(j, "schema", "document");
  if (integer_of(schema, "document.schema") != kSchemaVersion)
    parse_fail("document.schema", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  return j;
}

// ---------------------------------------------------------------- scalars

Json emit(const Rational& q) { return to_string(q); }

Rational parse_rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) parse_fail(where, "expected a rational string \"a/b\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& err) {
    parse_fail(where, err.what());
  }
}

Json emit(const Val& v) { return v.to_string(); }

Val parse_val(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Val(Rational(j.get<long>()));
  if (!j.is_string()) parse_fail(where, "expected a valuation string");
  try {
    return Val::parse(j.get<std::string>());
  } catch (const Error& err) {
    parse_fail(where, err.what());
  }
}

Json emit(const FieldSpec& field) { return Json{{"p", field.p}, {"m", field.m}}; }

FieldSpec parse_field(const Json& j, const std::string& where) {
  check_keys(j, {"p", "m"}, where);
  const long p = integer_of(field_of(j, "p", where), dot(where, "p"));
  const long m = j.contains("m") ? integer_of(j["m"], dot(where, "m")) : 1;
  try {
    return FieldSpec(static_cast<int>(m), p);
  } catch (const Error& err) {
    fail(ErrorKind::ValidationError, where + ": " + err.what());
  }
}

Json emit(const CoeffElem& a) {
  if (a.is_rational()) return emit(a.coefficient(0));
  return emit_rationals(a.coefficients());
}

CoeffElem parse_coeff(const Json& j, const FieldSpec& field, const std::string& where) {
  if (j.is_number_integer()) return CoeffElem(field, Rational(j.get<long>()));
  if (j.is_string()) {
    try {
      return CoeffElem::parse(j.get<std::string>(), field);
    } catch (const Error& err) {
      parse_fail(where, err.what());
    }
  }
  if (j.is_array()) {
    auto c = parse_rationals(j, where);
    if (c.size() != static_cast<std::size_t>(field.m))
      parse_fail(where, "expected " + std::to_string(field.m) + " coefficients");
    return CoeffElem(field, std::move(c));
  }
  parse_fail(where, "expected a field element (string, integer or coefficient array)");
}

Json emit(const MatrixF& m) {
  Json cols = Json::array();
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Json col = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) col.push_back(emit(m(i, j)));
    cols.push_back(std::move(col));
  }
  return cols;
}

MatrixF parse_matrix(const Json& j, const FieldSpec& field, std::size_t rows, const std::string& where) {
  const auto& a = array_of(j, where);
  MatrixF m(field, rows, a.size());
  for (std::size_t c = 0; c < a.size(); ++c) {
    const auto& col = array_of(a[c], at(where, c));
    if (col.size() != rows)
      fail(ErrorKind::ValidationError, at(where, c) + ": expected " + std::to_string(rows) + " entries");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = parse_coeff(col[r], field, at(at(where, c), r));
  }
  return m;
}

// ---------------------------------------------------------------- adjq, filtype

Json emit(const DominantCoweight& mu) { return Json{{"entries", emit_rationals(mu.entries())}}; }

DominantCoweight parse_coweight(const Json& j, const std::string& where) {
  check_keys(j, {"entries"}, where);
  return DominantCoweight(parse_rationals(field_of(j, "entries", where), dot(where, "entries")));
}

Json emit(const AdjointPoint& c) {
  Json a = Json::array();
  for (const auto& v : c.coeff_vals()) a.push_back(emit(v));
  return Json{{"coeff_vals", a}};
}

AdjointPoint parse_point(const Json& j, const std::string& where) {
  check_keys(j, {"coeff_vals"}, where);
  const std::string w = dot(where, "coeff_vals");
  const auto& a = array_of(field_of(j, "coeff_vals", where), w);
  std::vector<Val> vals;
  for (std::size_t i = 0; i < a.size(); ++i) vals.push_back(parse_val(a[i], at(w, i)));
  return AdjointPoint(std::move(vals));
}

Json emit(const FiltrationType& nu) {
  Json embs = Json::array();
  for (const auto& js : nu.embeddings()) {
    Json list = Json::array();
    for (const auto& jump : js) list.push_back(Json::array({jump.x, jump.rank}));
    embs.push_back(std::move(list));
  }
  return Json{{"d", nu.d()}, {"e", nu.e()}, {"f", nu.f()}, {"embeddings", embs}};
}

FiltrationType parse_type(const Json& j, const std::string& where) {
  check_keys(j, {"d", "e", "f", "embeddings"}, where);
  const int d = static_cast<int>(integer_of(field_of(j, "d", where), dot(where, "d")));
  const int e = j.contains("e") ? static_cast<int>(integer_of(j["e"], dot(where, "e"))) : 1;
  const int f = j.contains("f") ? static_cast<int>(integer_of(j["f"], dot(where, "f"))) : 1;
  const std::string w = dot(where, "embeddings");
  const auto& embs = array_of(field_of(j, "embeddings", where), w);
  std::vector<std::vector<Jump>> out;
  for (std::size_t psi = 0; psi < embs.size(); ++psi) {
    const auto& list = array_of(embs[psi], at(w, psi));
    std::vector<Jump> js;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string wk = at(at(w, psi), k);
      const auto& pair = array_of(list[k], wk);
      if (pair.size() != 2) parse_fail(wk, "expected [jump, rank]");
      js.push_back({integer_of(pair[0], wk + "[0]"), static_cast<int>(integer_of(pair[1], wk + "[1]"))});
    }
    out.push_back(std::move(js));
  }
  return FiltrationType(d, e, f, std::move(out));
}

// ---------------------------------------------------------------- isocore

Json emit(const FrobeniusSpec& phi) {
  Json pieces = Json::array();
  for (const auto& piece : phi.pieces()) {
    Json mode = std::holds_alternative<JordanBlock>(piece.mode) ? Json{{"block", piece.dim()}} : Json{{"ss", piece.dim()}};
    pieces.push_back(Json{{"lambda", emit(piece.eigenvalue)}, {"mode", mode}});
  }
  Json j{{"field", emit(phi.field())}, {"d", phi.d()}, {"f", phi.f()}, {"pieces", pieces}};
  if (phi.basis_change()) j["basis_change"] = emit(*phi.basis_change());
  return j;
}

FrobeniusSpec parse_frobenius(const Json& j, const std::string& where) {
  check_keys(j, {"field", "d", "f", "pieces", "basis_change"}, where);
  const FieldSpec field = parse_field(field_of(j, "field", where), dot(where, "field"));
  const int f = j.contains("f") ? static_cast<int>(integer_of(j["f"], dot(where, "f"))) : 1;
  const std::string w = dot(where, "pieces");
  const auto& a = array_of(field_of(j, "pieces", where), w);
  std::vector<IsotypicPiece> pieces;
  std::size_t d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::string wk = at(w, k);
    check_keys(a[k], {"lambda", "mode"}, wk);
    const CoeffElem lambda = parse_coeff(field_of(a[k], "lambda", wk), field, dot(wk, "lambda"));
    const auto& mode = field_of(a[k], "mode", wk);
    check_keys(mode, {"block", "ss"}, dot(wk, "mode"));
    if (mode.size() != 1) parse_fail(dot(wk, "mode"), "expected exactly one of 'block' or 'ss'");
    PieceMode pm;
    if (mode.contains("block"))
      pm = JordanBlock{size_of(mode["block"], dot(wk, "mode.block"))};
    else
      pm = Semisimple{size_of(mode["ss"], dot(wk, "mode.ss"))};
    pieces.push_back({lambda, pm});
    d += pieces.back().dim();
  }
  if (j.contains("d") && size_of(j["d"], dot(where, "d")) != d)
    fail(ErrorKind::ValidationError, dot(where, "d") + ": does not match the sum of piece sizes");
  std::optional<MatrixF> p;
  if (j.contains("basis_change")) p = parse_matrix(j["basis_change"], field, d, dot(where, "basis_change"));
  return FrobeniusSpec(field, f, std::move(pieces), std::move(p));
}

Json emit(const StableSubspace& u) { return Json{{"dims", emit_dims(u.dims)}, {"basis", emit(u.basis)}}; }

StableSubspace parse_subspace(const Json& j, const FrobeniusSpec& phi, const std::string& where) {
  check_keys(j, {"dims", "basis"}, where);
  const MatrixF basis = parse_matrix(field_of(j, "basis", where), phi.field(), phi.d(), dot(where, "basis"));
  StableSubspace u = make_stable(phi, basis);
  if (j.contains("dims") && parse_dims(j["dims"], dot(where, "dims")) != u.dims)
    fail(ErrorKind::ValidationError, dot(where, "dims") + ": does not match the subspace");
  return u;
}

// ---------------------------------------------------------------- filtcore

Json emit(const Flag& flag) {
  Json steps = Json::array();
  for (const auto& s : flag.steps()) steps.push_back(Json{{"jump", s.jump}, {"basis", emit(s.basis)}});
  return Json{{"embedding", flag.embedding()}, {"steps", steps}};
}

Flag parse_flag(const Json& j, const FieldSpec& field, std::size_t d, const std::string& where) {
  check_keys(j, {"embedding", "steps"}, where);
  const int emb = static_cast<int>(integer_of(field_of(j, "embedding", where), dot(where, "embedding")));
  const std::string w = dot(where, "steps");
  const auto& a = array_of(field_of(j, "steps", where), w);
  std::vector<FlagStep> steps;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::string wk = at(w, k);
    check_keys(a[k], {"jump", "basis"}, wk);
    steps.push_back({integer_of(field_of(a[k], "jump", wk), dot(wk, "jump")),
                     parse_matrix(field_of(a[k], "basis", wk), field, d, dot(wk, "basis"))});
  }
  return Flag(emb, std::move(steps));
}

Json emit(const FilteredIsocrystal& x) {
  Json flags = Json::array();
  for (const auto& fl : x.flags()) flags.push_back(emit(fl));
  return Json{{"frobenius", emit(x.phi())}, {"type", emit(x.nu())}, {"flags", flags}};
}

FilteredIsocrystal parse_filtered(const Json& j, const std::vector<std::string>& extra_keys) {
  std::vector<std::string> allowed{"frobenius", "type", "flags"};
  allowed.insert(allowed.end(), extra_keys.begin(), extra_keys.end());
  check_keys(j, allowed, "document");
  FrobeniusSpec phi = parse_frobenius(field_of(j, "frobenius", "document"));
  FiltrationType nu = parse_type(field_of(j, "type", "document"));
  const auto& a = array_of(field_of(j, "flags", "document"), "flags");
  std::vector<Flag> flags;
  for (std::size_t k = 0; k < a.size(); ++k) flags.push_back(parse_flag(a[k], phi.field(), phi.d(), at("flags", k)));
  return FilteredIsocrystal(std::move(phi), std::move(nu), std::move(flags));
}

Json emit(const WaVerdict& v) {
  Json rows = Json::array();
  for (const auto& r : v.rows)
    rows.push_back(Json{{"dims", emit_dims(r.dims)},
                        {"degree", emit(r.degree)},
                        {"newton", emit(r.newton)},
                        {"exact", r.exact}});
  Json j{{"status", status_name(v.status)},
         {"total_degree", emit(v.total_degree)},
         {"total_newton", emit(v.total_newton)},
         {"rows", rows}};
  if (v.certificate) {
    j["certificate"] = Json{{"subspace", emit(v.certificate->subspace)},
                            {"degree", emit(v.certificate->degree)},
                            {"newton", emit(v.certificate->newton)}};
  }
  return j;
}

WaVerdict parse_verdict(const Json& j, const FrobeniusSpec& phi) {
  check_keys(j, {"status", "total_degree", "total_newton", "rows", "certificate"}, "verdict");
  WaVerdict v;
  const std::string status = string_of(field_of(j, "status", "verdict"), "verdict.status");
  if (status == "Admissible")
    v.status = WaStatus::Admissible;
  else if (status == "Inadmissible")
    v.status = WaStatus::Inadmissible;
  else if (status == "Undecided")
    v.status = WaStatus::Undecided;
  else
    parse_fail("verdict.status", "unknown status '" + status + "'");
  v.total_degree = parse_rational(field_of(j, "total_degree", "verdict"), "verdict.total_degree");
  v.total_newton = parse_rational(field_of(j, "total_newton", "verdict"), "verdict.total_newton");
  const auto& rows = array_of(field_of(j, "rows", "verdict"), "verdict.rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string w = at("verdict.rows", i);
    check_keys(rows[i], {"dims", "degree", "newton", "exact"}, w);
    v.rows.push_back({parse_dims(field_of(rows[i], "dims", w), dot(w, "dims")),
                      parse_rational(field_of(rows[i], "degree", w), dot(w, "degree")),
                      parse_rational(field_of(rows[i], "newton", w), dot(w, "newton")),
                      bool_of(field_of(rows[i], "exact", w), dot(w, "exact"))});
  }
  if (j.contains("certificate")) {
    const auto& c = j["certificate"];
    check_keys(c, {"subspace", "degree", "newton"}, "verdict.certificate");
    const auto& s = field_of(c, "subspace", "verdict.certificate");
    v.certificate = WaCertificate{parse_subspace(s, phi, "verdict.certificate.subspace"),
                                  parse_rational(field_of(c, "degree", "verdict.certificate"), "verdict.certificate.degree"),
                                  parse_rational(field_of(c, "newton", "verdict.certificate"), "verdict.certificate.newton")};
  }
  return v;
}

Json emit(const HNFiltration& hn) {
  Json chain = Json::array();
  for (const auto& u : hn.chain) chain.push_back(emit(u));
  return Json{{"chain", chain}, {"slopes", emit_rationals(hn.slopes)}};
}

HNFiltration parse_hn(const Json& j, const FrobeniusSpec& phi) {
  check_keys(j, {"chain", "slopes"}, "hn");
  HNFiltration hn;
  const auto& chain = array_of(field_of(j, "chain", "hn"), "hn.chain");
  for (std::size_t i = 0; i < chain.size(); ++i) hn.chain.push_back(parse_subspace(chain[i], phi, at("hn.chain", i)));
  hn.slopes = parse_rationals(field_of(j, "slopes", "hn"), "hn.slopes");
  return hn;
}

// ---------------------------------------------------------------- thmlab

Json emit(const Obstruction& ob) {
  Json idx = Json::array();
  for (auto i : ob.indices) idx.push_back(i);
  return Json{{"kind", ob.kind == ObstructionKind::Determinant ? "determinant" : "prefix"},
              {"indices", idx},
              {"lhs", emit(ob.lhs)},
              {"rhs", emit(ob.rhs)}};
}

Obstruction parse_obstruction(const Json& j) {
  check_keys(j, {"kind", "indices", "lhs", "rhs"}, "obstruction");
  Obstruction ob;
  const std::string kind = string_of(field_of(j, "kind", "obstruction"), "obstruction.kind");
  if (kind == "determinant")
    ob.kind = ObstructionKind::Determinant;
  else if (kind == "prefix")
    ob.kind = ObstructionKind::Prefix;
  else
    parse_fail("obstruction.kind", "unknown kind '" + kind + "'");
  ob.indices = parse_dims(field_of(j, "indices", "obstruction"), "obstruction.indices");
  ob.lhs = parse_rational(field_of(j, "lhs", "obstruction"), "obstruction.lhs");
  ob.rhs = parse_rational(field_of(j, "rhs", "obstruction"), "obstruction.rhs");
  return ob;
}

Json emit(const RootClass& r) { return Json{{"valuation", emit(r.valuation)}, {"multiplicity", r.multiplicity}}; }

RootClass parse_root(const Json& j, const std::string& where) {
  check_keys(j, {"valuation", "multiplicity"}, where);
  RootClass r;
  r.valuation = parse_rational(field_of(j, "valuation", where), dot(where, "valuation"));
  r.multiplicity = j.contains("multiplicity") ? size_of(j["multiplicity"], dot(where, "multiplicity")) : 1;
  if (r.multiplicity == 0) fail(ErrorKind::ValidationError, dot(where, "multiplicity") + ": must be >= 1");
  return r;
}

Json emit(const ExistenceReport& rep) {
  Json j{{"point", emit(rep.point)},
         {"mu", emit(rep.mu)},
         {"predicted", rep.predicted},
         {"seeds_tried", rep.seeds_tried},
         {"anomaly", rep.anomaly}};
  if (rep.witness) j["witness"] = emit(*rep.witness);
  if (rep.obstruction) j["obstruction"] = emit(*rep.obstruction);
  return j;
}

ExistenceReport parse_existence(const Json& j) {
  check_keys(j, {"point", "mu", "predicted", "seeds_tried", "anomaly", "witness", "obstruction"}, "report");
  ExistenceReport rep;
  rep.point = parse_point(field_of(j, "point", "report"), "report.point");
  rep.mu = parse_coweight(field_of(j, "mu", "report"), "report.mu");
  rep.predicted = bool_of(field_of(j, "predicted", "report"), "report.predicted");
  rep.seeds_tried = size_of(field_of(j, "seeds_tried", "report"), "report.seeds_tried");
  rep.anomaly = bool_of(field_of(j, "anomaly", "report"), "report.anomaly");
  if (j.contains("witness")) rep.witness = parse_filtered(j["witness"]);
  if (j.contains("obstruction")) rep.obstruction = parse_obstruction(j["obstruction"]);
  return rep;
}

Json emit(const SweepCell& cell) {
  Json j{{"key", cell.key},
         {"type", emit(cell.nu)},
         {"roots", emit_rationals(cell.roots)},
         {"predicted", cell.predicted},
         {"witness_found", cell.witness_found},
         {"seeds_tried", cell.seeds_tried},
         {"samples", cell.samples},
         {"samples_inadmissible", cell.samples_inadmissible},
         {"obstruction_realised", cell.obstruction_realised},
         {"anomaly", cell.anomaly},
         {"elapsed_us", cell.elapsed_us}};
  if (cell.obstruction) j["obstruction"] = emit(*cell.obstruction);
  if (cell.anomaly) j["anomaly_detail"] = cell.anomaly_detail;
  return j;
}

SweepCell parse_sweep_cell(const Json& j) {
  check_keys(j,
             {"key", "type", "roots", "predicted", "witness_found", "seeds_tried", "samples", "samples_inadmissible",
              "obstruction_realised", "anomaly", "elapsed_us", "obstruction", "anomaly_detail"},
             "cell");
  SweepCell c;
  c.key = string_of(field_of(j, "key", "cell"), "cell.key");
  c.nu = parse_type(field_of(j, "type", "cell"), "cell.type");
  c.roots = parse_rationals(field_of(j, "roots", "cell"), "cell.roots");
  c.predicted = bool_of(field_of(j, "predicted", "cell"), "cell.predicted");
  c.witness_found = bool_of(field_of(j, "witness_found", "cell"), "cell.witness_found");
  c.seeds_tried = size_of(field_of(j, "seeds_tried", "cell"), "cell.seeds_tried");
  c.samples = size_of(field_of(j, "samples", "cell"), "cell.samples");
  c.samples_inadmissible = size_of(field_of(j, "samples_inadmissible", "cell"), "cell.samples_inadmissible");
  c.obstruction_realised = bool_of(field_of(j, "obstruction_realised", "cell"), "cell.obstruction_realised");
  c.anomaly = bool_of(field_of(j, "anomaly", "cell"), "cell.anomaly");
  if (j.contains("obstruction")) c.obstruction = parse_obstruction(j["obstruction"]);
  if (j.contains("elapsed_us")) c.elapsed_us = integer_of(j["elapsed_us"], "cell.elapsed_us");
  if (j.contains("anomaly_detail")) c.anomaly_detail = string_of(j["anomaly_detail"], "cell.anomaly_detail");
  return c;
}

}  // namespace phimod
