#include "l2tor/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace l2tor::io {

void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SchemaViolation, path + ": " + what);
}

namespace {

const json& expect(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(path + "/" + key, "missing required field");
  return *it;
}

int expect_int(const json& j, const char* key, const std::string& path) {
  const json& v = expect(j, key, path);
  if (!v.is_number_integer()) schema_error(path + "/" + key, "expected an integer");
  return v.get<int>();
}

Word word_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected a word (array of integers)");
  Word w;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer())
      schema_error(path + "/" + std::to_string(i), "expected an integer");
    w.push_back(j[i].get<std::int64_t>());
  }
  return w;
}

json word_to_json(const Word& w) {
  json out = json::array();
  for (std::int64_t x : w) out.push_back(x);
  return out;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    schema_error(path, "expected [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json matrix2_to_json(const Eigen::Matrix2cd& m) {
  json rows = json::array();
  for (int r = 0; r < 2; ++r) {
    json row = json::array();
    for (int c = 0; c < 2; ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Eigen::Matrix2cd matrix2_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema_error(path, "expected a 2x2 matrix");
  Eigen::Matrix2cd m;
  for (int r = 0; r < 2; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 2)
      schema_error(path + "/" + std::to_string(r), "expected a 2-entry row");
    for (int c = 0; c < 2; ++c)
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)],
                                  path + "/" + std::to_string(r) + "/" + std::to_string(c));
  }
  return m;
}

double finite_or(double v, double fallback) { return std::isfinite(v) ? v : fallback; }

}  // namespace

json group_to_json(const GroupModel& g) {
  json j;
  switch (g.flavor()) {
    case GroupFlavor::FreeAbelian:
      j["type"] = "free_abelian";
      j["rank"] = g.generator_count();
      break;
    case GroupFlavor::Free:
      j["type"] = "free";
      j["rank"] = g.generator_count();
      break;
    case GroupFlavor::Presented: {
      j["type"] = "presented";
      j["generators"] = g.generator_count();
      json rel = json::array();
      for (const Word& r : g.relators()) rel.push_back(word_to_json(r));
      j["relators"] = rel;
      if (!g.infinite_order_generators().empty()) {
        json inf = json::array();
        for (int i : g.infinite_order_generators()) inf.push_back(i);
        j["infiniteOrder"] = inf;
      }
      if (g.has_normal_form()) j["oracle"] = g.oracle_name();
      break;
    }
    case GroupFlavor::Finite: {
      j["type"] = "finite";
      j["order"] = g.declared_order();
      json imgs = json::array();
      for (const Word& p : g.finite_generator_images()) imgs.push_back(word_to_json(p));
      j["images"] = imgs;
      break;
    }
  }
  return j;
}

std::shared_ptr<const GroupModel> group_from_json(const json& j, const std::string& path) {
  const json& tj = expect(j, "type", path);
  if (!tj.is_string()) schema_error(path + "/type", "expected a string");
  std::string type = tj.get<std::string>();
  if (type == "free_abelian") return GroupModel::free_abelian(expect_int(j, "rank", path));
  if (type == "free") return GroupModel::free_group(expect_int(j, "rank", path));
  if (type == "presented") {
    int gens = expect_int(j, "generators", path);
    std::vector<Word> relators;
    const json& rj = expect(j, "relators", path);
    if (!rj.is_array()) schema_error(path + "/relators", "expected an array");
    for (std::size_t i = 0; i < rj.size(); ++i)
      relators.push_back(word_from_json(rj[i], path + "/relators/" + std::to_string(i)));
    std::vector<int> infinite;
    if (j.contains("infiniteOrder")) {
      const json& ij = j["infiniteOrder"];
      if (!ij.is_array()) schema_error(path + "/infiniteOrder", "expected an array");
      for (const auto& v : ij) infinite.push_back(v.get<int>());
    }
    if (j.contains("oracle")) {
      std::string oracle = j["oracle"].get<std::string>();
      if (oracle == "free-times-central-cyclic") {
        auto model = make_fn_times_z_group(gens - 1);
        // sanity: the declared relators must match the built-in presentation
        if (model->relators() != relators)
          schema_error(path + "/oracle",
                       "relators do not match the free-times-central-cyclic presentation");
        return model;
      }
      schema_error(path + "/oracle", "unknown normal-form oracle '" + oracle + "'");
    }
    return GroupModel::presented(gens, std::move(relators), std::move(infinite));
  }
  if (type == "finite") {
    const json& ij = expect(j, "images", path);
    if (!ij.is_array() || ij.empty()) schema_error(path + "/images", "expected permutations");
    std::vector<Word> images;
    for (std::size_t i = 0; i < ij.size(); ++i)
      images.push_back(word_from_json(ij[i], path + "/images/" + std::to_string(i)));
    std::uint64_t order = 0;
    if (j.contains("order")) order = j["order"].get<std::uint64_t>();
    return GroupModel::finite_perm(std::move(images), order);
  }
  schema_error(path + "/type", "unknown group type '" + type + "'");
}

json element_terms_to_json(const GroupRingElement& e) {
  json out = json::array();
  for (const auto& [w, b] : e.terms) {
    json t;
    t["word"] = word_to_json(w);
    if (e.block_size == 1) {
      t["re"] = b(0, 0).real();
      t["im"] = b(0, 0).imag();
    } else {
      json rows = json::array();
      for (int r = 0; r < 2; ++r) {
        json row = json::array();
        for (int c = 0; c < 2; ++c) row.push_back(complex_to_json(b(r, c)));
        rows.push_back(row);
      }
      t["block"] = rows;
    }
    out.push_back(std::move(t));
  }
  return out;
}

GroupRingElement element_terms_from_json(const json& j,
                                         const std::shared_ptr<const GroupModel>& group,
                                         int block_size, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of terms");
  GroupRingElement e{group, block_size, {}};
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string tp = path + "/" + std::to_string(i);
    const json& t = j[i];
    Word w = word_from_json(expect(t, "word", tp), tp + "/word");
    if (group->flavor() == GroupFlavor::FreeAbelian) {
      if (static_cast<int>(w.size()) != group->generator_count())
        schema_error(tp + "/word", "abelian element length must equal the rank");
    }
    if (t.contains("block")) {
      if (block_size != 2) schema_error(tp + "/block", "block term in a scalar matrix");
      Eigen::Matrix2cd m = matrix2_from_json(t["block"], tp + "/block");
      e.add_term(w, block2(m));
    } else {
      if (!t.contains("re") && !t.contains("im"))
        schema_error(tp, "term needs re/im or block");
      double re = t.contains("re") ? t["re"].get<double>() : 0.0;
      double im = t.contains("im") ? t["im"].get<double>() : 0.0;
      Block b = Block::Identity(block_size, block_size);
      b *= Complex(re, im);
      e.add_term(w, b);
    }
  }
  return e;
}

json cw_to_json(const CWDatum& cw) {
  json j;
  j["schema"] = "l2tor/cw/1";
  j["group"] = group_to_json(*cw.group);
  j["ranks"] = json::array();
  for (int r : cw.ranks) j["ranks"].push_back(r);
  json bounds = json::array();
  for (std::size_t p = 0; p < cw.boundaries.size(); ++p) {
    const GroupRingMatrix& d = cw.boundaries[p];  // internal: n_p x n_{p-1}
    // external layout: rows = n_{p-1} faces, cols = n_p cells
    json rows = json::array();
    for (int face = 0; face < d.cols(); ++face) {
      json row = json::array();
      for (int cell = 0; cell < d.rows(); ++cell) {
        const GroupRingElement* e = d.entry(cell, face);
        row.push_back(e ? element_terms_to_json(*e) : json::array());
      }
      rows.push_back(std::move(row));
    }
    bounds.push_back(std::move(rows));
  }
  j["boundaries"] = std::move(bounds);
  return j;
}

CWDatum cw_from_json(const json& j, const std::string& path) {
  CWDatum cw;
  cw.group = group_from_json(expect(j, "group", path), path + "/group");
  const json& rj = expect(j, "ranks", path);
  if (!rj.is_array() || rj.empty()) schema_error(path + "/ranks", "expected a rank list");
  for (const auto& v : rj) {
    if (!v.is_number_integer() || v.get<int>() < 0)
      schema_error(path + "/ranks", "ranks must be nonnegative integers");
    cw.ranks.push_back(v.get<int>());
  }
  const json& bj = expect(j, "boundaries", path);
  if (!bj.is_array() || bj.size() + 1 != cw.ranks.size())
    schema_error(path + "/boundaries", "expected one boundary matrix per degree p >= 1");
  for (std::size_t p = 0; p < bj.size(); ++p) {
    const std::string bp = path + "/boundaries/" + std::to_string(p);
    const json& mat = bj[p];
    const int n_faces = cw.ranks[p];
    const int n_cells = cw.ranks[p + 1];
    if (!mat.is_array() || static_cast<int>(mat.size()) != n_faces)
      schema_error(bp, "expected " + std::to_string(n_faces) + " rows");
    GroupRingMatrix d(cw.group, n_cells, n_faces, 1);
    for (int face = 0; face < n_faces; ++face) {
      const json& row = mat[static_cast<std::size_t>(face)];
      const std::string rp = bp + "/" + std::to_string(face);
      if (!row.is_array() || static_cast<int>(row.size()) != n_cells)
        schema_error(rp, "expected " + std::to_string(n_cells) + " entries");
      for (int cell = 0; cell < n_cells; ++cell) {
        GroupRingElement e = element_terms_from_json(row[static_cast<std::size_t>(cell)],
                                                     cw.group, 1,
                                                     rp + "/" + std::to_string(cell));
        if (!e.is_zero()) d.set_entry(cell, face, std::move(e));
      }
    }
    cw.boundaries.push_back(std::move(d));
  }
  try {
    cw.validate();
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
  return cw;
}

json representation_to_json(const Representation& rep) {
  json j;
  j["presentation"] = group_to_json(*rep.group());
  json imgs = json::array();
  for (const auto& m : rep.images()) imgs.push_back(matrix2_to_json(m));
  j["images"] = imgs;
  return j;
}

Representation representation_from_json(const json& j,
                                        const std::shared_ptr<const GroupModel>& group,
                                        const std::string& path) {
  std::shared_ptr<const GroupModel> g = group;
  if (!g) {
    if (j.contains("presentation"))
      g = group_from_json(j["presentation"], path + "/presentation");
    else if (j.contains("group"))
      g = group_from_json(j["group"], path + "/group");
    else
      schema_error(path, "representation needs a group/presentation");
  }
  const json& ij = expect(j, "images", path);
  if (!ij.is_array() || static_cast<int>(ij.size()) != g->generator_count())
    schema_error(path + "/images", "expected one 2x2 image per generator");
  std::vector<Eigen::Matrix2cd> images;
  for (std::size_t i = 0; i < ij.size(); ++i)
    images.push_back(matrix2_from_json(ij[i], path + "/images/" + std::to_string(i)));
  return Representation(g, std::move(images));
}

RepresentationPath path_from_json(const json& j,
                                  const std::shared_ptr<const GroupModel>& group,
                                  const std::string& path) {
  int grid = j.contains("grid") ? j["grid"].get<int>() : 64;
  double tol = j.contains("tolerance") ? j["tolerance"].get<double>() : kDefaultPathTol;
  if (j.contains("family")) {
    std::string fam = j["family"].get<std::string>();
    if (fam != "diagonal") schema_error(path + "/family", "unknown family '" + fam + "'");
    const json& ej = expect(j, "exponents", path);
    if (!ej.is_array() || static_cast<int>(ej.size()) != group->generator_count())
      schema_error(path + "/exponents", "expected one [num, den] per generator");
    std::vector<std::pair<std::int64_t, std::int64_t>> exps;
    for (std::size_t i = 0; i < ej.size(); ++i) {
      const json& p = ej[i];
      const std::string pp = path + "/exponents/" + std::to_string(i);
      if (p.is_number_integer()) {
        exps.emplace_back(p.get<std::int64_t>(), 1);
      } else if (p.is_array() && p.size() == 2) {
        exps.emplace_back(p[0].get<std::int64_t>(), p[1].get<std::int64_t>());
      } else {
        schema_error(pp, "expected an integer or [num, den]");
      }
    }
    Complex from = complex_from_json(expect(j, "lambdaFrom", path), path + "/lambdaFrom");
    Complex to = complex_from_json(expect(j, "lambdaTo", path), path + "/lambdaTo");
    return RepresentationPath::diagonal_family(group, std::move(exps), from, to, grid, tol);
  }
  const json& kj = expect(j, "keyframes", path);
  if (!kj.is_array() || kj.empty()) schema_error(path + "/keyframes", "expected keyframes");
  std::vector<std::vector<Eigen::Matrix2cd>> frames;
  for (std::size_t f = 0; f < kj.size(); ++f) {
    Representation rep = representation_from_json(kj[f], group,
                                                  path + "/keyframes/" + std::to_string(f));
    frames.push_back(rep.images());
  }
  return RepresentationPath::keyframes(group, std::move(frames), grid, tol);
}

FiniteQuotient quotient_from_json(const json& j,
                                  const std::shared_ptr<const GroupModel>& base,
                                  const std::string& path) {
  const json& ij = expect(j, "images", path);
  if (!ij.is_array() || static_cast<int>(ij.size()) != base->generator_count())
    schema_error(path + "/images", "expected one permutation per generator");
  std::vector<Word> images;
  for (std::size_t i = 0; i < ij.size(); ++i)
    images.push_back(word_from_json(ij[i], path + "/images/" + std::to_string(i)));
  try {
    return make_finite_quotient(base, std::move(images));
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

EngineConfig engine_from_json(const json& j, const std::string& path) {
  EngineConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object()) schema_error(path, "expected an engine object");
  if (j.contains("engine")) {
    std::string e = j["engine"].get<std::string>();
    if (e == "auto") cfg.route = EngineConfig::Route::Auto;
    else if (e == "abelian") cfg.route = EngineConfig::Route::Abelian;
    else if (e == "series") cfg.route = EngineConfig::Route::Series;
    else if (e == "quotient") cfg.route = EngineConfig::Route::Quotient;
    else schema_error(path + "/engine", "unknown engine '" + e + "'");
  }
  if (j.contains("nodes")) cfg.quad.nodes_per_dim = j["nodes"].get<int>();
  if (j.contains("refinementLevels"))
    cfg.quad.refinement_levels = j["refinementLevels"].get<int>();
  if (j.contains("singularitySplit"))
    cfg.quad.singularity_split = j["singularitySplit"].get<bool>();
  if (j.contains("maxTerms")) cfg.series_max_terms = j["maxTerms"].get<int>();
  if (j.contains("seriesCenter")) cfg.series_center = j["seriesCenter"].get<double>();
  if (j.contains("allowDecomposition"))
    cfg.allow_decomposition = j["allowDecomposition"].get<bool>();
  return cfg;
}

json engine_to_json(const EngineConfig& cfg) {
  json j;
  switch (cfg.route) {
    case EngineConfig::Route::Auto: j["engine"] = "auto"; break;
    case EngineConfig::Route::Abelian: j["engine"] = "abelian"; break;
    case EngineConfig::Route::Series: j["engine"] = "series"; break;
    case EngineConfig::Route::Quotient: j["engine"] = "quotient"; break;
  }
  j["nodes"] = cfg.quad.nodes_per_dim;
  j["refinementLevels"] = cfg.quad.refinement_levels;
  j["singularitySplit"] = cfg.quad.singularity_split;
  j["maxTerms"] = cfg.series_max_terms;
  j["allowDecomposition"] = cfg.allow_decomposition;
  return j;
}

json fk_result_to_json(const FKResult& r) {
  json j;
  j["engine"] = r.engine;
  switch (r.certification) {
    case FKResult::Cert::Certified: j["certification"] = "certified"; break;
    case FKResult::Cert::ExactQuadrature: j["certification"] = "exactQuadrature"; break;
    case FKResult::Cert::Heuristic: j["certification"] = "heuristic"; break;
  }
  if (r.zero_determinant) {
    j["logDet"] = nullptr;
    j["zeroDeterminant"] = true;
  } else {
    j["logDet"] = r.log_det;
  }
  if (r.certification == FKResult::Cert::Certified)
    j["errorBound"] = finite_or(r.error_bound, 0.0);
  if (r.certification == FKResult::Cert::ExactQuadrature)
    j["estimatedError"] = r.estimated_error;
  if (r.gap_enclosure) j["gap"] = json::array({r.gap_enclosure->first, r.gap_enclosure->second});
  if (r.quadrature_order) j["quadratureOrder"] = r.quadrature_order;
  if (r.series_terms) j["seriesTerms"] = r.series_terms;
  if (r.kernel_dim) j["kernelDim"] = r.kernel_dim;
  if (r.min_retained_sv > 0) j["minRetainedSingularValue"] = r.min_retained_sv;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

json torsion_result_to_json(const TorsionResult& r) {
  json j;
  j["schema"] = "l2tor/torsion-result/1";
  if (std::isfinite(r.log_tau)) j["logTau"] = r.log_tau;
  else j["logTau"] = nullptr;
  j["status"] = torsion_status_name(r.status);
  if (std::isfinite(r.error_bound)) j["errorBound"] = r.error_bound;
  json per = json::array();
  for (const DegreeResult& d : r.per_degree) {
    json dj = fk_result_to_json(d.det);
    dj["degree"] = d.degree;
    per.push_back(std::move(dj));
  }
  j["perDegree"] = std::move(per);
  j["engineTrail"] = r.engine_trail;
  return j;
}

json scan_to_json(const PathScan& scan) {
  json j;
  j["schema"] = "l2tor/scan/1";
  json rows = json::array();
  for (const PathSample& s : scan.samples) {
    json row;
    row["t"] = s.t;
    if (s.result) {
      if (std::isfinite(s.result->log_tau)) row["logTau"] = s.result->log_tau;
      else row["logTau"] = nullptr;
      row["status"] = torsion_status_name(s.result->status);
      std::optional<std::pair<double, double>> gap;
      for (const DegreeResult& d : s.result->per_degree)
        if (d.det.gap_enclosure && (!gap || d.det.gap_enclosure->first < gap->first))
          gap = d.det.gap_enclosure;
      if (gap) row["gap"] = json::array({gap->first, gap->second});
    } else {
      row["error"] = s.error;
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  json dd = json::array();
  for (double v : scan.second_differences) {
    if (std::isnan(v)) dd.push_back(nullptr);
    else dd.push_back(v);
  }
  j["secondDifferences"] = std::move(dd);
  j["smoothnessAvailable"] = scan.smoothness_available;
  if (scan.smoothness_available)
    j["maxAbsSecondDifference"] = scan.max_abs_second_difference;
  return j;
}

std::string scan_to_csv(const PathScan& scan) {
  std::ostringstream os;
  os.precision(17);
  os << "t,logTau,status,gapLow,gapHigh,error\n";
  for (const PathSample& s : scan.samples) {
    os << s.t << ",";
    if (s.result) {
      if (std::isfinite(s.result->log_tau)) os << s.result->log_tau;
      os << "," << torsion_status_name(s.result->status) << ",";
      std::optional<std::pair<double, double>> gap;
      for (const DegreeResult& d : s.result->per_degree)
        if (d.det.gap_enclosure && (!gap || d.det.gap_enclosure->first < gap->first))
          gap = d.det.gap_enclosure;
      if (gap) os << gap->first << "," << gap->second << ",";
      else os << ",,";
    } else {
      os << ",error,,," << '"' << s.error << '"';
    }
    os << "\n";
  }
  return os.str();
}

json seifert_to_json(const SeifertData& d) {
  json j;
  j["genus"] = d.genus;
  j["cusps"] = d.boundary_count;
  json fib = json::array();
  for (auto [p, q] : d.fibers) fib.push_back(json::array({p, q}));
  j["fibers"] = std::move(fib);
  j["irreducible"] = d.irreducible;
  if (!d.irreducible) j["lambda"] = complex_to_json(d.fiber_eigenvalue);
  return j;
}

SeifertData seifert_from_json(const json& j, const std::string& path) {
  SeifertData d;
  d.genus = expect_int(j, "genus", path);
  d.boundary_count = j.contains("cusps") ? j["cusps"].get<int>()
                                         : expect_int(j, "boundaryCount", path);
  if (j.contains("fibers")) {
    const json& fj = j["fibers"];
    if (!fj.is_array()) schema_error(path + "/fibers", "expected an array of [p, q]");
    for (std::size_t i = 0; i < fj.size(); ++i) {
      const json& f = fj[i];
      if (!f.is_array() || f.size() != 2)
        schema_error(path + "/fibers/" + std::to_string(i), "expected [p, q]");
      d.fibers.emplace_back(f[0].get<int>(), f[1].get<int>());
    }
  }
  d.irreducible = j.contains("irreducible") && j["irreducible"].get<bool>();
  if (j.contains("lambda"))
    d.fiber_eigenvalue = complex_from_json(j["lambda"], path + "/lambda");
  try {
    d.validate();
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
  return d;
}

JSJDatum jsj_from_json(const json& j, const std::string& path) {
  JSJDatum d;
  const json& pj = expect(j, "pieces", path);
  if (!pj.is_array() || pj.empty()) schema_error(path + "/pieces", "expected >= 1 piece");
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string pp = path + "/pieces/" + std::to_string(i);
    const json& p = pj[i];
    std::string type = expect(p, "type", pp).get<std::string>();
    JSJPiece piece;
    if (type == "hyperbolic") {
      piece.kind = JSJPiece::Kind::Hyperbolic;
      piece.hyperbolic_log_tau = expect(p, "logTau", pp).get<double>();
    } else if (type == "seifert") {
      piece.kind = JSJPiece::Kind::Seifert;
      piece.seifert = seifert_from_json(p, pp);
    } else {
      schema_error(pp + "/type", "unknown piece type '" + type + "'");
    }
    d.pieces.push_back(std::move(piece));
  }
  return d;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::ostringstream os;
  os << std::hex << fnv1a64(bytes);
  return os.str();
}

void RunManifest::add_input(const std::string& path, const std::string& bytes) {
  input_hashes.emplace_back(path, fnv1a64_hex(bytes));
}

json RunManifest::to_json() const {
  json j;
  j["schema"] = "l2tor/manifest/1";
  j["version"] = kVersion;
  j["command"] = command;
  json inputs = json::array();
  for (const auto& [p, h] : input_hashes) {
    json e;
    e["path"] = p;
    e["fnv1a64"] = h;
    inputs.push_back(std::move(e));
  }
  j["inputs"] = std::move(inputs);
  j["engine"] = engine;
  json times = json::array();
  for (const auto& [label, ms] : timings_ms) {
    json e;
    e["label"] = label;
    e["ms"] = ms;
    times.push_back(std::move(e));
  }
  j["timings"] = std::move(times);
  j["warnings"] = warnings;
  return j;
}

std::string dump_output(const json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write file: " + path);
  out << bytes;
}

}  // namespace l2tor::io
