#include "phimod/cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "phimod/serialize.hpp"

namespace phimod {

namespace {

struct Stage {
  bool parsing = true;
};

std::string join(const std::vector<Rational>& v, const std::string& sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + to_string(v[i]);
  return s;
}

std::string join_dims(const DimensionVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string read_input(const std::string& input) {
  if (input.empty()) fail(ErrorKind::ParseError, "this command needs --input");
  if (input.front() == '{') return input;
  if (input == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(input);
  if (!in) fail(ErrorKind::ParseError, "cannot read input file '" + input + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Json header(const JobSpec& job) { return Json{{"schema", kSchemaVersion}, {"command", job.command}}; }

void add_warnings(const FiltrationType& nu, Json& doc, std::string& err) {
  Json w = Json::array();
  if (auto msg = tail_term_warning(nu)) {
    w.push_back(*msg);
    err += "warning: " + *msg + "\n";
  }
  doc["warnings"] = w;
}

std::string thresholds_text(const DominantCoweight& mu, bool closed) {
  const auto t = stratum_thresholds(mu);
  std::string s;
  for (std::size_t i = 1; i <= t.size(); ++i) {
    const bool eq = i == t.size() || (!closed && mu.alpha_pairing(i) != 0);
    s += (i > 1 ? ", " : "") + std::string("v(c_") + std::to_string(i) + ") " + (eq ? "= " : ">= ") + to_string(t[i - 1]);
  }
  return s;
}

int verdict_exit(WaStatus s) {
  switch (s) {
    case WaStatus::Admissible: return kExitOk;
    case WaStatus::Inadmissible: return kExitNegative;
    case WaStatus::Undecided: return kExitUndecided;
  }
  return kExitMath;
}

RunResult finish(const JobSpec& job, Json doc, const std::string& human, int code, std::string err = {}) {
  RunResult r;
  r.exit_code = code;
  r.err = std::move(err);
  r.out = job.json ? doc.dump(2) + "\n" : human;
  return r;
}

RunResult cmd_mu_of_nu(const JobSpec& job, Stage& stage) {
  const Json in = parse_document(read_input(job.input));
  check_keys(in, {"schema", "type"}, "document");
  const FiltrationType nu = parse_type(in.contains("type") ? in["type"] : Json(), "type");
  stage.parsing = false;
  const auto l = l_vector(nu);
  const DominantCoweight mu = mu_of_nu(nu);
  Json doc = header(job);
  doc["l"] = Json::array();
  for (const auto& q : l) doc["l"].push_back(emit(q));
  doc["mu"] = emit(mu);
  doc["thresholds"] = Json::array();
  for (const auto& q : stratum_thresholds(mu)) doc["thresholds"].push_back(emit(q));
  doc["total_degree"] = emit(total_degree(nu));
  std::string err;
  add_warnings(nu, doc, err);
  std::ostringstream os;
  os << "l_0..l_d: " << join(l) << "\n"
     << "mu(nu): (" << join(mu.entries(), ", ") << ")\n"
     << "thresholds: (" << join(stratum_thresholds(mu), ", ") << ")\n"
     << "closed stratum: " << thresholds_text(mu, true) << "\n";
  return finish(job, doc, os.str(), kExitOk, err);
}

RunResult cmd_stratum(const JobSpec& job, Stage& stage) {
  const Json in = parse_document(read_input(job.input));
  check_keys(in, {"schema", "point", "mu", "type"}, "document");
  const AdjointPoint c = parse_point(in.contains("point") ? in["point"] : Json(), "point");
  std::optional<FiltrationType> nu;
  DominantCoweight mu;
  if (in.contains("type") == in.contains("mu"))
    fail(ErrorKind::ParseError, "document: give exactly one of 'mu' or 'type'");
  if (in.contains("type")) {
    nu = parse_type(in["type"], "type");
    mu = mu_of_nu(*nu);
  } else {
    mu = parse_coweight(in["mu"], "mu");
  }
  stage.parsing = false;
  const bool member = stratum_member(c, mu, job.closed);
  Json doc = header(job);
  doc["closed"] = job.closed;
  doc["member"] = member;
  doc["mu"] = emit(mu);
  doc["thresholds"] = Json::array();
  for (const auto& q : stratum_thresholds(mu)) doc["thresholds"].push_back(emit(q));
  doc["retraction"] = emit(newton_retraction(c));
  std::string err;
  if (nu) add_warnings(*nu, doc, err);
  std::ostringstream os;
  os << (job.closed ? "closed stratum: " : "open stratum: ") << thresholds_text(mu, job.closed) << "\n"
     << "member: " << (member ? "yes" : "no") << "\n";
  return finish(job, doc, os.str(), member ? kExitOk : kExitNegative, err);
}

RunResult cmd_newton_polygon(const JobSpec& job, Stage& stage) {
  const Json in = parse_document(read_input(job.input));
  check_keys(in, {"schema", "point"}, "document");
  const AdjointPoint c = parse_point(in.contains("point") ? in["point"] : Json(), "point");
  stage.parsing = false;
  const auto slopes = newton_slopes(c);
  const auto mu = newton_retraction(c);
  Json doc = header(job);
  doc["slopes"] = Json::array();
  for (const auto& q : slopes) doc["slopes"].push_back(emit(q));
  doc["retraction"] = emit(mu);
  std::ostringstream os;
  os << "slopes: " << join(slopes) << "\nretraction: (" << join(mu.entries(), ", ") << ")\n";
  return finish(job, doc, os.str(), kExitOk);
}

RunResult cmd_adjoint_image(const JobSpec& job, Stage& stage) {
  const Json in = parse_document(read_input(job.input));
  check_keys(in, {"schema", "frobenius"}, "document");
  const FrobeniusSpec phi = parse_frobenius(in.contains("frobenius") ? in["frobenius"] : Json());
  stage.parsing = false;
  const AdjointPoint c = adjoint_image(phi);
  Json doc = header(job);
  doc["point"] = emit(c);
  doc["retraction"] = emit(newton_retraction(c));
  std::ostringstream os;
  os << "v(c_i):";
  for (const auto& v : c.coeff_vals()) os << " " << v.to_string();
  os << "\nretraction: (" << join(newton_retraction(c).entries(), ", ") << ")\n";
  return finish(job, doc, os.str(), kExitOk);
}

RunResult cmd_slope_decomp(const JobSpec& job, Stage& stage) {
  const Json in = parse_document(read_input(job.input));
  check_keys(in, {"schema", "frobenius"}, "document");
  const FrobeniusSpec phi = parse_frobenius(in.contains("frobenius") ? in["frobenius"] : Json());
  stage.parsing = false;
  Json doc = header(job);
  doc["pieces"] = Json::array();
  std::ostringstream os;
  for (const auto& piece : slope_decomposition(phi)) {
    doc["pieces"].push_back(Json{{"slope", emit(piece.slope)}, {"subspace", emit(piece.subspace)}});
    os << "slope " << to_string(piece.slope) << ": rank " << piece.subspace.rank() << ", dims "
       << join_dims(piece.subspace.dims) << "\n";
  }
  return finish(job, doc, os.str(), kExitOk);
}

RunResult cmd_check_wa(const JobSpec& job, Stage& stage) {
  const Json in = parse_document(read_input(job.input));
  const FilteredIsocrystal x = parse_filtered(in, {"schema"});
  stage.parsing = false;
  const WaVerdict v = is_weakly_admissible(x, {job.seed, 32});
  Json doc = header(job);
  doc["verdict"] = emit(v);
  std::string err;
  add_warnings(x.nu(), doc, err);
  std::ostringstream os;
  os << "status: " << status_name(v.status) << "\n"
     << "total degree " << to_string(v.total_degree) << ", v(det)/f " << to_string(v.total_newton) << "\n";
  for (const auto& r : v.rows)
    os << "  dims " << join_dims(r.dims) << ": " << (r.exact ? "max deg " : "deg bound ") << to_string(r.degree)
       << ", t_N " << to_string(r.newton) << "\n";
  if (v.certificate)
    os << "certificate: rank " << v.certificate->subspace.rank() << " subspace, degree "
       << to_string(v.certificate->degree) << " > t_N " << to_string(v.certificate->newton) << "\n"
       << v.certificate->subspace.basis.to_string() << "\n";
  return finish(job, doc, os.str(), verdict_exit(v.status), err);
}

RunResult cmd_hn(const JobSpec& job, Stage& stage) {
  const Json in = parse_document(read_input(job.input));
  const FilteredIsocrystal x = parse_filtered(in, {"schema"});
  stage.parsing = false;
  const HNFiltration hn = hn_filtration(x);
  Json doc = header(job);
  doc["hn"] = emit(hn);
  std::string err;
  add_warnings(x.nu(), doc, err);
  std::ostringstream os;
  for (std::size_t i = 0; i < hn.chain.size(); ++i)
    os << "U_" << i + 1 << ": rank " << hn.chain[i].rank() << ", slope " << to_string(hn.slopes[i]) << "\n";
  return finish(job, doc, os.str(), kExitOk, err);
}

RunResult cmd_verify_single(const JobSpec& job, Stage& stage) {
  const Json in = parse_document(read_input(job.input));
  check_keys(in, {"schema", "type", "roots", "point", "p"}, "document");
  const FiltrationType nu = parse_type(in.contains("type") ? in["type"] : Json(), "type");
  std::vector<RootClass> roots;
  if (in.contains("roots") == in.contains("point"))
    fail(ErrorKind::ParseError, "document: give exactly one of 'roots' or 'point'");
  if (in.contains("roots")) {
    if (!in["roots"].is_array()) fail(ErrorKind::ParseError, "roots: expected an array");
    for (std::size_t i = 0; i < in["roots"].size(); ++i)
      roots.push_back(parse_root(in["roots"][i], "roots[" + std::to_string(i) + "]"));
  } else {
    roots = roots_from_point(parse_point(in["point"], "point"));
  }
  long p = 5;
  if (in.contains("p")) {
    if (!in["p"].is_number_integer()) fail(ErrorKind::ParseError, "p: expected an integer");
    p = in["p"].get<long>();
    FieldSpec(1, p);
  }
  stage.parsing = false;
  const ExistenceReport rep = wa_exists(nu, roots, {job.seed, job.budget, p});
  Json doc = header(job);
  doc["report"] = emit(rep);
  std::string err;
  add_warnings(nu, doc, err);
  std::ostringstream os;
  os << "predicted: " << (rep.predicted ? "yes" : "no") << "\n";
  if (rep.witness) os << "witness found after " << rep.seeds_tried << " seed(s)\n";
  if (rep.obstruction) {
    const auto& ob = *rep.obstruction;
    os << "obstruction: " << (ob.kind == ObstructionKind::Determinant ? "determinant" : "prefix") << " |I| = "
       << ob.indices.size() << ", " << to_string(ob.lhs) << (ob.kind == ObstructionKind::Determinant ? " != " : " < ")
       << to_string(ob.rhs) << "\n";
  }
  int code = rep.predicted ? kExitOk : kExitNegative;
  if (rep.anomaly) {
    err += "anomaly: " + std::string(rep.predicted ? "no weakly admissible flag within the seed budget"
                                                   : "no obstruction found") + "\n";
    code = kExitAnomaly;
  }
  return finish(job, doc, os.str(), code, err);
}

RunResult cmd_sweep(const JobSpec& job, Stage& stage) {
  SweepConfig cfg;
  cfg.d = job.d.value_or(2);
  cfg.e = job.e.value_or(1);
  cfg.f = job.f.value_or(1);
  cfg.max_denominator = job.grid;
  cfg.min_cells = job.cells;
  cfg.seed = job.seed;
  cfg.budget = job.budget;
  cfg.threads = job.threads;
  require(cfg.d >= 1 && cfg.d <= 4 && cfg.e >= 1 && cfg.f >= 1 && cfg.e * cfg.f <= 4 && cfg.max_denominator >= 1,
          ErrorKind::ValidationError, "sweep needs 1 <= d <= 4, e, f >= 1, e*f <= 4, grid >= 1");
  stage.parsing = false;
  const SweepReport rep = theorem_sweep(cfg);
  Json summary{{"d", cfg.d},
               {"e", cfg.e},
               {"f", cfg.f},
               {"grid", cfg.max_denominator},
               {"cells", rep.cells.size()},
               {"predicted_true", rep.predicted_true},
               {"predicted_false", rep.predicted_false},
               {"anomalies", rep.anomalies}};
  RunResult r;
  r.exit_code = rep.anomalies ? kExitAnomaly : kExitOk;
  std::ostringstream os;
  if (job.json) {
    for (const auto& c : rep.cells) os << emit(c).dump() << "\n";
    os << Json{{"schema", kSchemaVersion}, {"command", job.command}, {"summary", summary}}.dump() << "\n";
  } else {
    os << "config d=" << cfg.d << " e=" << cfg.e << " f=" << cfg.f << " grid=1/" << cfg.max_denominator << "\n"
       << "cells            " << rep.cells.size() << "\n"
       << "predicted true   " << rep.predicted_true << "\n"
       << "predicted false  " << rep.predicted_false << "\n"
       << "anomalies        " << rep.anomalies << "\n";
    for (const auto& c : rep.cells)
      if (c.anomaly) os << "  " << c.key << ": " << c.anomaly_detail << "\n";
  }
  r.out = os.str();
  return r;
}

RunResult cmd_examples(const JobSpec& job, Stage& stage) {
  stage.parsing = false;
  const auto suite = example_suite(job.seed);
  Json doc = header(job);
  doc["examples"] = Json::array();
  bool all = true;
  std::ostringstream os;
  for (const auto& c : suite) {
    all = all && c.passed;
    doc["examples"].push_back(Json{{"name", c.name},
                                   {"passed", c.passed},
                                   {"trials", c.trials},
                                   {"agreements", c.agreements},
                                   {"detail", c.detail}});
    os << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
  }
  doc["passed"] = all;
  return finish(job, doc, os.str(), all ? kExitOk : kExitNegative);
}

int error_exit(ErrorKind kind, bool parsing) {
  if (kind == ErrorKind::ParseError) return kExitParse;
  if (kind == ErrorKind::ValidationError || parsing) return kExitValidation;
  if (kind == ErrorKind::SeedBudgetExhausted) return kExitAnomaly;
  return kExitMath;
}

}  // namespace

RunResult run(const JobSpec& job) {
  Stage stage;
  try {
    if (job.command == "mu-of-nu") return cmd_mu_of_nu(job, stage);
    if (job.command == "stratum") return cmd_stratum(job, stage);
    if (job.command == "newton-polygon") return cmd_newton_polygon(job, stage);
    if (job.command == "adjoint-image") return cmd_adjoint_image(job, stage);
    if (job.command == "slope-decomp") return cmd_slope_decomp(job, stage);
    if (job.command == "check-wa") return cmd_check_wa(job, stage);
    if (job.command == "hn") return cmd_hn(job, stage);
    if (job.command == "verify-theorem") return job.input.empty() ? cmd_sweep(job, stage) : cmd_verify_single(job, stage);
    if (job.command == "examples") return cmd_examples(job, stage);
    return {kExitParse, "", "error: unknown command '" + job.command + "'\n"};
  } catch (const Error& err) {
    return {error_exit(err.kind(), stage.parsing), "", std::string("error: ") + err.what() + "\n"};
  } catch (const Json::exception& err) {
    return {kExitParse, "", std::string("error: ParseError: ") + err.what() + "\n"};
  } catch (const std::exception& err) {
    return {kExitMath, "", std::string("error: ") + err.what() + "\n"};
  }
}

}  // namespace phimod
