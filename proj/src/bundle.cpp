#include "bvm/bundle.hpp"

#include <algorithm>

namespace bvm {

namespace {

std::string rat(const Rational& r) { return r.get_str(); }

Rational rat_from(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  return parse_rational(j.get<std::string>());
}

Json key_json(const TKey& k) {
  Json a = Json::array();
  for (int i : k) a.push_back(i);
  return a;
}

TKey key_from(const Json& j) {
  TKey k;
  for (const auto& v : j) k.push_back(v.get<int>());
  return k;
}

int grouping_degree(const ModelContext& ctx, const Element& rep) {
  if (rep.is_zero()) return 0;
  const Monomial& lead = rep.terms().rbegin()->first;
  const auto& spec = ctx.spec();
  if (spec.model_class == ModelClass::GaugedWeightedHomogeneous) return lead[*spec.p];
  if (!spec.gradings.empty()) return lead.weighted_degree(spec.gradings.front().weights);
  return lead.total_degree();
}

std::string class_name(ModelClass c) {
  return c == ModelClass::IsolatedSingularity ? "isolated" : "gauged";
}

Json checks_json(const std::vector<CheckRecord>& records) {
  Json a = Json::array();
  for (const auto& r : records) {
    Json e;
    e["name"] = r.name;
    e["order"] = r.order;
    e["passed"] = r.passed;
    if (!r.detail.empty()) e["detail"] = r.detail;
    a.push_back(std::move(e));
  }
  return a;
}

}  // namespace

RingReport ring_report(const ModelContext& ctx) {
  RingReport r;
  r.model = ctx.spec().name;
  const auto& h = ctx.h_basis();
  for (std::size_t i = 0; i < h.size(); ++i) {
    int d = grouping_degree(ctx, h.reps[i]);
    r.basis.push_back({h.labels[i], h.ghosts[i], d});
    if (d < 0) d = 0;
    if (r.dimensions.size() <= static_cast<std::size_t>(d)) r.dimensions.resize(d + 1, 0);
    ++r.dimensions[d];
  }
  r.total = h.size();
  return r;
}

Json to_json(const RingReport& r) {
  Json j;
  j["engine_version"] = kEngineVersion;
  j["model"] = r.model;
  Json basis = Json::array();
  for (const auto& b : r.basis) basis.push_back({{"label", b.label}, {"ghost", b.ghost}, {"degree", b.degree}});
  j["basis"] = std::move(basis);
  j["dimensions"] = r.dimensions;
  j["total"] = r.total;
  return j;
}

bool ResultBundle::operator==(const ResultBundle& o) const {
  if (tensors.size() != o.tensors.size()) return false;
  for (std::size_t i = 0; i < tensors.size(); ++i)
    if (tensors[i].arity != o.tensors[i].arity || tensors[i].entries != o.tensors[i].entries) return false;
  if (checks.size() != o.checks.size()) return false;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto &a = checks[i], &b = o.checks[i];
    if (a.name != b.name || a.order != b.order || a.passed != b.passed || a.detail != b.detail) return false;
  }
  return engine_version == o.engine_version && conventions == o.conventions && model == o.model &&
         model_class == o.model_class && truncation == o.truncation && basis == o.basis &&
         coordinates == o.coordinates && correlators == o.correlators;
}

ResultBundle make_bundle(const MasterState& state, const VerificationLog& log) {
  ResultBundle b;
  const auto& ctx = *state.ctx;
  b.model = ctx.spec().name;
  b.model_class = class_name(ctx.spec().model_class);
  b.truncation = state.order;
  RingReport ring = ring_report(ctx);
  b.basis = ring.basis;
  for (int n = 2; n <= state.order && n < static_cast<int>(state.m.size()); ++n) b.tensors.push_back(state.m[n]);
  b.checks = log.records;
  return b;
}

void attach_correlators(ResultBundle& b, const CorrelatorTable& table, const QuantumCoordinates& coords) {
  b.correlators = table;
  b.coordinates.clear();
  for (const auto& c : coords.coords) b.coordinates.emplace_back(c.begin(), c.end());
}

Json to_json(const LaurentPoly& p) {
  Json j;
  if (p.is_zero()) {
    j["lowest"] = 0;
    j["coefficients"] = Json::array();
    return j;
  }
  int lo = p.terms().begin()->first, hi = p.terms().rbegin()->first;
  Json c = Json::array();
  for (int k = lo; k <= hi; ++k) c.push_back(rat(p.coeff(k)));
  j["lowest"] = lo;
  j["coefficients"] = std::move(c);
  return j;
}

LaurentPoly laurent_from_json(const Json& j) {
  LaurentPoly p;
  int lo = j.at("lowest").get<int>();
  int k = lo;
  for (const auto& c : j.at("coefficients")) p.add(k++, rat_from(c));
  return p;
}

Json to_json(const VerificationLog& log) {
  Json j;
  j["passed"] = log.all_passed();
  j["failures"] = log.failures();
  j["checks"] = checks_json(log.records);
  return j;
}

Json to_json(const ResultBundle& b) {
  Json j;
  j["engine_version"] = b.engine_version;
  j["conventions"] = b.conventions;
  j["model"] = b.model;
  j["class"] = b.model_class;
  j["truncation"] = b.truncation;
  Json basis = Json::array();
  for (const auto& e : b.basis) basis.push_back({{"label", e.label}, {"ghost", e.ghost}, {"degree", e.degree}});
  j["basis"] = std::move(basis);

  Json tensors = Json::array();
  for (const auto& t : b.tensors) {
    Json entries = Json::array();
    for (const auto& [k, v] : t.entries) {
      Json vals = Json::array();
      for (const auto& r : v) vals.push_back(rat(r));
      entries.push_back({{"indices", key_json(k)}, {"value", std::move(vals)}});
    }
    tensors.push_back({{"arity", t.arity}, {"entries", std::move(entries)}});
  }
  j["tensors"] = std::move(tensors);

  Json coords = Json::array();
  for (const auto& c : b.coordinates) {
    Json terms = Json::array();
    for (const auto& [k, v] : c) terms.push_back({{"indices", key_json(k)}, {"value", to_json(v)}});
    coords.push_back(std::move(terms));
  }
  j["coordinates"] = std::move(coords);

  Json corr = Json::array();
  for (const auto& [arity, rows] : b.correlators) {
    Json entries = Json::array();
    for (const auto& [k, v] : rows) entries.push_back({{"indices", key_json(k)}, {"value", to_json(v)}});
    corr.push_back({{"arity", arity}, {"entries", std::move(entries)}});
  }
  j["correlators"] = std::move(corr);

  std::size_t failures = std::count_if(b.checks.begin(), b.checks.end(), [](const auto& r) { return !r.passed; });
  j["verification"] = {{"passed", failures == 0}, {"failures", failures}, {"checks", checks_json(b.checks)}};
  return j;
}

ResultBundle bundle_from_json(const Json& j) {
  ResultBundle b;
  b.engine_version = j.at("engine_version").get<std::string>();
  b.conventions = j.at("conventions").get<std::string>();
  b.model = j.at("model").get<std::string>();
  b.model_class = j.at("class").get<std::string>();
  b.truncation = j.at("truncation").get<int>();
  for (const auto& e : j.at("basis"))
    b.basis.push_back({e.at("label").get<std::string>(), e.at("ghost").get<int>(), e.at("degree").get<int>()});
  for (const auto& t : j.at("tensors")) {
    StructureTensor st;
    st.arity = t.at("arity").get<int>();
    for (const auto& e : t.at("entries")) {
      std::vector<Rational> v;
      for (const auto& r : e.at("value")) v.push_back(rat_from(r));
      st.entries.emplace(key_from(e.at("indices")), std::move(v));
    }
    b.tensors.push_back(std::move(st));
  }
  for (const auto& c : j.at("coordinates")) {
    std::map<TKey, LaurentPoly> m;
    for (const auto& e : c) m.emplace(key_from(e.at("indices")), laurent_from_json(e.at("value")));
    b.coordinates.push_back(std::move(m));
  }
  for (const auto& c : j.at("correlators")) {
    auto& rows = b.correlators[c.at("arity").get<int>()];
    for (const auto& e : c.at("entries")) rows.emplace(key_from(e.at("indices")), laurent_from_json(e.at("value")));
  }
  for (const auto& r : j.at("verification").at("checks")) {
    CheckRecord rec;
    rec.name = r.at("name").get<std::string>();
    rec.order = r.at("order").get<int>();
    rec.passed = r.at("passed").get<bool>();
    if (r.contains("detail")) rec.detail = r.at("detail").get<std::string>();
    b.checks.push_back(std::move(rec));
  }
  return b;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(rat(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json tower_report(const FiniteComplex& c, const CohomologyData& data, const ObstructionTower& tower,
                  const Classification& cls, const VerificationLog& log) {
  Json j;
  j["engine_version"] = kEngineVersion;
  j["order"] = tower.order;
  j["dimension"] = c.dim();
  j["cohomology_ghosts"] = data.h_ghosts;
  j["cohomology_basis"] = matrix_to_json(data.f0);
  Json kappa = Json::array();
  for (int l = 1; l <= tower.order; ++l)
    kappa.push_back({{"order", l}, {"matrix", matrix_to_json(tower.kappa[l])}});
  j["kappa"] = std::move(kappa);
  j["observables"] = matrix_to_json(cls.observables);
  j["invisibles"] = matrix_to_json(cls.invisibles);
  j["observable_count"] = cls.observables.cols();
  j["invisible_count"] = cls.invisibles.cols();
  j["verification"] = to_json(log);
  return j;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::ParseError:
      return 1;
    case ErrorKind::InternalIdentityViolation:
    case ErrorKind::HbarDivisionFails:
      return 3;
    case ErrorKind::OracleMismatch:
      return 4;
    default:
      return 2;
  }
}

}  // namespace bvm
