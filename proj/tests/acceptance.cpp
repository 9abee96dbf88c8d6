// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "bvm/bundle.hpp"
#include "bvm/correlators.hpp"
#include "bvm/master.hpp"
#include "bvm/poly_parser.hpp"
#include "dense_oracle.hpp"
#include "laws.hpp"
#include "tower_checks.hpp"

using namespace bvm;
using namespace bvm::test;

namespace {

// Collects the reasons a criterion failed; empty means PASS.
struct Verdict {
  std::vector<std::string> problems;
  std::string summary;
  void need(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

int failures = 0;

void criterion(int k, const std::string& title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.problems.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = v.problems.empty();
  failures += !ok;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << k << ": " << title;
  if (!v.summary.empty()) std::cout << " [" << v.summary << "]";
  std::cout << " (" << std::fixed << std::setprecision(2) << secs << " s)\n";
  for (const auto& p : v.problems) std::cout << "    " << p << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

using Tensor = std::map<TKey, std::vector<Rational>>;

std::vector<Tensor> golden_tensors() {
  std::ifstream in(source_dir() / "tests/golden/a2_order6.json");
  if (!in) throw std::runtime_error("golden file missing");
  auto j = nlohmann::json::parse(in);
  std::vector<Tensor> out(j.at("order").get<int>() + 1);
  for (const auto& t : j.at("tensors")) {
    Tensor& dst = out[t.at("arity").get<int>()];
    for (const auto& e : t.at("entries")) {
      std::vector<Rational> row;
      for (const auto& x : e.at("value")) row.push_back(parse_rational(x.get<std::string>()));
      dst[e.at("indices").get<TKey>()] = row;
    }
  }
  return out;
}

void quintic_ring(Verdict& v) {
  auto start = std::chrono::steady_clock::now();
  auto report = ring_report(*shipped_model("quintic"));
  double secs = seconds_since(start);
  std::ostringstream s;
  s << "dims";
  for (auto d : report.dimensions) s << " " << d;
  s << ", total " << report.total;
  v.summary = s.str();
  v.need(report.dimensions == std::vector<std::size_t>{1, 101, 101, 1}, "dimensions differ from 1,101,101,1");
  v.need(report.total == 204, "total differs from 204");
  v.need(secs < 60, "slower than 60 s");
}

void a2_order6(Verdict& v) {
  auto start = std::chrono::steady_clock::now();
  MasterState s = solve(shipped_model("a2"), 6);
  double secs = seconds_since(start);
  auto golden = golden_tensors();
  auto dense = oracle::dense_solve(*s.ctx, 6);
  for (int n = 2; n <= 6; ++n) {
    v.need(s.m[n].entries == golden[n], "m" + std::to_string(n) + " differs from golden");
    v.need(dense.tensors[n] == golden[n], "oracle m" + std::to_string(n) + " differs from golden");
    v.need(s.theta[n].is_zero(), "Theta_" + std::to_string(n) + " nonzero");
  }
  v.need(s.m[2].at({0, 0}, 2) == std::vector<Rational>{1, 0} && s.m[2].at({0, 1}, 2) == std::vector<Rational>{0, 1} &&
             s.m[2].at({1, 1}, 2) == std::vector<Rational>{0, 0},
         "m2 is not the Q[x]/(x^2) table");
  v.need(s.m[3].entries.size() == 1 && s.m[3].at({1, 1, 1}, 2) == std::vector<Rational>{-1, 0},
         "m3(e1,e1,e1) != -e0");
  for (int n = 4; n <= 6; ++n) v.need(s.m[n].entries.empty(), "m" + std::to_string(n) + " nonzero");
  v.need(secs < 5, "solve slower than 5 s");
  v.summary = "solve " + std::to_string(secs).substr(0, 5) + " s";
}

void identity_suite(Verdict& v) {
  std::size_t records = 0;
  for (const auto& name : identity_models()) {
    auto ctx = shipped_model(name);
    MasterState s = solve(ctx, shipped_truncation(name));
    VerificationLog log = s.log;
    log.append(verify_state(s));
    if (ctx->spec().model_class == ModelClass::IsolatedSingularity) log.append(verify_semiclassical(s));
    log.append(verify_correlators(s, ExpectationVector::from_config(*ctx), std::min(s.order, 4), false));
    records += log.records.size();
    for (const auto& r : log.records)
      v.need(r.passed, name + ": " + r.name + " at order " + std::to_string(r.order));
    v.need(reference_product_table(*ctx).entries == s.m[2].entries, name + ": m2 differs from normal-form products");
  }
  v.summary = std::to_string(records) + " identity records";
}

void oracle_paths(Verdict& v) {
  std::size_t checked = 0;
  for (const auto& name : identity_models()) {
    auto ctx = shipped_model(name);
    auto s = solve(ctx, 4);
    auto vec = ExpectationVector::from_config(*ctx);
    auto table = correlator_table(s, vec, 4);
    for (int arity = 1; arity <= 4; ++arity)
      for (const auto& key : multi_indices(s.dim(), arity)) {
        OracleResult r = partition_oracle(s, vec, key);
        bool ok = r.via_chain == r.via_p_sharp && r.via_chain == r.via_components && r.via_chain == table[arity][key];
        v.need(ok, name + " t" + key_to_string(key) + ": paths disagree");
        ++checked;
      }
    v.need(p_sharp(s, 3) == p3_closed_form(s), name + ": p3 closed form");
    v.need(p_sharp(s, 4) == p4_closed_form(s), name + ": p4 closed form");
  }
  v.summary = std::to_string(checked) + " correlators on three paths";
}

void gauge_invariance(Verdict& v) {
  std::mt19937_64 rng(2024);
  int lambda_gauges = 0;
  for (const auto& name : identity_models()) {
    auto ctx = shipped_model(name);
    const int order = std::min(shipped_truncation(name), 4);
    const int bound = ctx->spec().model_class == ModelClass::GaugedWeightedHomogeneous ? 8 : 4;
    auto kernel = ghost_minus_one_kernel(*ctx, bound);
    auto base = solve(ctx, order);
    auto vec = ExpectationVector::from_config(*ctx);
    auto base_table = correlator_table(base, vec, order);
    int moved = 0;
    for (int g = 0; g < 20; ++g) {
      SolveOptions opts;
      opts.lambda_perturbation = [&](int, const TKey&, const Element&) {
        Element e(ctx->table());
        if (kernel.empty()) return e;
        std::uniform_int_distribution<std::size_t> pick(0, kernel.size() - 1);
        for (int i = 0; i < 2; ++i) e += small_rational(rng) * kernel[pick(rng)];
        return e;
      };
      auto s = solve(ctx, order, opts);
      bool same = true;
      for (int n = 2; n <= order; ++n) same = same && s.m[n].entries == base.m[n].entries;
      v.need(same, name + ": tensors moved under a Lambda gauge");
      v.need(verify_state(s).all_passed(), name + ": identities fail in a gauge");
      v.need(correlator_table(s, vec, order) == base_table, name + ": correlators moved under a Lambda gauge");
      moved += total_theta(s) != total_theta(base);
      ++lambda_gauges;
    }
    if (!kernel.empty()) v.need(moved > 10, name + ": gauges did not move the chain-level data");
  }

  int tower_samples = 0, iota_samples = 0;
  std::vector<FiniteComplex> complexes{load_complex("two_dim"), load_complex("kappa2"), load_complex("conjugated")};
  for (int i = 0; i < 3; ++i) {
    std::vector<int> gh{-1, -1, 0, 0, 0, 1, 1};
    complexes.push_back(conjugated_complex(gh, random_differential(gh, rng), 3, rng));
  }
  for (const auto& c : complexes) {
    auto b = build(c);
    const int order = b.tower.order;
    const std::size_t hd = b.data.dim();
    auto cls = classify(b.tower, hd);
    for (int k = 0; k < 20; ++k) {
      auto s = random_s(b.c, b.data.h_ghosts, order, rng);
      auto xi = random_xi(hd, b.data.h_ghosts, order, rng);
      auto rep = gauge_transform(b.c, b.tower, s, xi);
      v.need(rep.chain_relation && rep.kappa_square, "tower gauge breaks the chain relation or kappa^2");
      ++tower_samples;
      auto cf = random_functional(b.c, rng);
      if (!cf) continue;
      auto r = random_homotopy(b.c, order, rng);
      v.need(iota_identity(b, *cf, r, s, xi, rep), "iota transformation identity");
      MatrixSeries one(order + 1, Matrix(hd, hd));
      one[0] = Matrix::identity(hd);
      auto plain = gauge_transform(b.c, b.tower, s, one);
      auto c2 = shifted_functional(b.c, *cf, r, order);
      for (std::size_t j = 0; j < cls.observables.cols(); ++j) {
        auto a = cls.observables.column(j);
        v.need(expectation_iota(c2, plain.f, a, order) == expectation_iota(*cf, b.tower.f, a, order),
               "iota moved on an observable");
      }
      ++iota_samples;
    }
  }
  v.need(tower_samples >= 100, "fewer than 100 tower samples");
  v.summary = std::to_string(lambda_gauges) + " Lambda gauges, " + std::to_string(tower_samples) +
              " tower samples, " + std::to_string(iota_samples) + " iota samples";
}

void tower_fixtures(Verdict& v) {
  auto two = build(load_complex("two_dim"));
  auto cls = classify(two.tower, two.data.dim());
  v.need(cls.observables.cols() == 1 && cls.invisibles.cols() == 1, "two_dim: expected one observable, one invisible");
  if (cls.invisibles.cols() == 1) {
    auto chain = two.data.f0.apply(cls.invisibles.column(0));
    v.need(chain[0] != 0 && chain[1] == 0, "two_dim: invisible class is not a");
    v.need(!extends_to(two.c, two.data, cls.invisibles.column(0), 1), "two_dim: a extends after all");
  }

  std::mt19937_64 rng(99);
  std::vector<std::vector<int>> layouts{{-1, -1, 0, 0, 0, 1, 1}, {0, 0, 1, 1, 2}, {-1, 0, 0, 0, 1}};
  int conjugated = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const auto& gh = layouts[trial % layouts.size()];
    auto b = build(conjugated_complex(gh, random_differential(gh, rng), 4, rng));
    bool flat = true;
    for (const auto& k : b.tower.kappa) flat = flat && k.is_zero();
    v.need(flat, "conjugated complex with nonzero kappa");
    v.need(classify(b.tower, b.data.dim()).observables.cols() == b.data.dim(), "conjugated complex not observable");
    ++conjugated;
  }

  auto k2 = build(load_complex("kappa2"));
  v.need(k2.tower.kappa[1] == k2.c.frozen_kappa.at(1) && k2.tower.kappa[2] == k2.c.frozen_kappa.at(2),
         "kappa2 fixture regression");
  v.need(k2.tower.kappa[1].is_zero() && !k2.tower.kappa[2].is_zero(), "kappa2 fixture has the wrong shape");
  v.summary = std::to_string(conjugated) + " conjugated towers at N=4";
}

void property_suite(Verdict& v) {
  auto start = std::chrono::steady_clock::now();
  std::uint64_t seed = 1;
  std::ostringstream s;
  for (const auto& name : identity_models()) {
    auto ctx = shipped_model(name);
    std::mt19937_64 rng(seed++);
    int cases = 0;
    for (; cases < 1000; ++cases) {
      auto r = check_laws(*ctx, rng);
      for (const auto& law : r.failed) v.need(false, name + ": " + law + " on " + r.inputs);
    }
    s << name << " " << cases << " ";
  }
  double secs = seconds_since(start);
  v.need(secs < 30, "slower than 30 s");
  s << "cases";
  v.summary = s.str();
}

}  // namespace

int main() {
  criterion(1, "quintic state space", quintic_ring);
  criterion(2, "A2 to order 6 against frozen oracle data", a2_order6);
  criterion(3, "identity suite on a2, a3, mixed2, fermat_cubic", identity_suite);
  criterion(4, "partition oracle and p3/p4 closed forms to order 4", oracle_paths);
  criterion(5, "gauge invariance of tensors, correlators and the tower", gauge_invariance);
  criterion(6, "obstruction tower fixtures", tower_fixtures);
  criterion(7, "random property suite", property_suite);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
