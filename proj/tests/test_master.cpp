#include <doctest.h>

#include <chrono>
#include <fstream>
#include <random>

#include <json.hpp>

#include "bvm/correlators.hpp"
#include "bvm/errors.hpp"
#include "bvm/master.hpp"
#include "bvm/poly_parser.hpp"
#include "dense_oracle.hpp"
#include "support.hpp"

using namespace bvm;

namespace {

using Tensor = std::map<TKey, std::vector<Rational>>;

std::vector<Tensor> golden_tensors(const nlohmann::json& j) {
  std::vector<Tensor> out(j.at("order").get<int>() + 1);
  for (const auto& t : j.at("tensors")) {
    Tensor& dst = out[t.at("arity").get<int>()];
    for (const auto& e : t.at("entries")) {
      std::vector<Rational> row;
      for (const auto& v : e.at("value")) row.push_back(parse_rational(v.get<std::string>()));
      dst[e.at("indices").get<TKey>()] = row;
    }
  }
  return out;
}

nlohmann::json load_golden() {
  std::ifstream in(test::source_dir() / "tests/golden/a2_order6.json");
  REQUIRE(in);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("A2 to order 6 matches the frozen golden data") {
  auto start = std::chrono::steady_clock::now();
  auto ctx = test::shipped_model("a2");
  MasterState s = solve(ctx, 6);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 5.0);

  auto golden = load_golden();
  auto tensors = golden_tensors(golden);
  for (int n = 2; n <= 6; ++n) {
    INFO("arity " << n);
    CHECK(s.m[n].entries == tensors[n]);
  }
  // Spelled out: Q[x]/(x^2) products, m3(e1,e1,e1) = -e0, nothing above.
  CHECK(s.m[2].at({0, 0}, 2) == std::vector<Rational>{1, 0});
  CHECK(s.m[2].at({0, 1}, 2) == std::vector<Rational>{0, 1});
  CHECK(s.m[2].at({1, 1}, 2) == std::vector<Rational>{0, 0});
  CHECK(s.m[3].entries.size() == 1);
  CHECK(s.m[3].at({1, 1, 1}, 2) == std::vector<Rational>{-1, 0});
  for (int n = 4; n <= 6; ++n) CHECK(s.m[n].entries.empty());
  for (int n = 2; n <= 6; ++n) CHECK(s.theta[n].is_zero());
  CHECK(golden.at("vanishing_theta").get<std::vector<int>>() == std::vector<int>{2, 3, 4, 5, 6});
}

TEST_CASE("dense oracle reproduces the golden data and the other isolated models") {
  auto golden = golden_tensors(load_golden());
  auto a2 = test::shipped_model("a2");
  auto dense = oracle::dense_solve(*a2, 6);
  for (int n = 2; n <= 6; ++n) CHECK(dense.tensors[n] == golden[n]);
  for (const char* name : {"a3", "mixed2"}) {
    auto ctx = test::shipped_model(name);
    auto s = solve(ctx, 4);
    auto d = oracle::dense_solve(*ctx, 4);
    for (int n = 2; n <= 4; ++n) {
      INFO(name << " arity " << n);
      CHECK(s.m[n].entries == d.tensors[n]);
    }
  }
}

TEST_CASE("identity suite on every shipped model") {
  for (const auto& name : test::identity_models()) {
    auto ctx = test::shipped_model(name);
    int order = test::shipped_truncation(name);
    MasterState s = solve(ctx, order);
    INFO(name);
    CHECK(s.order == order);
    CHECK(s.log.all_passed());
    auto log = verify_state(s);
    CHECK(log.all_passed());
    CHECK(log.records.size() > static_cast<std::size_t>(3 * order));
    if (ctx->spec().model_class == ModelClass::IsolatedSingularity) CHECK(verify_semiclassical(s).all_passed());
    // m2 against normal-form products of representatives.
    CHECK(reference_product_table(*ctx).entries == s.m[2].entries);
    for (int n = 3; n <= order; ++n)
      for (const auto& [k, row] : s.m[n].entries) CHECK(k.front() != 0);
  }
}

TEST_CASE("descendant morphisms read off the tensors") {
  auto ctx = test::shipped_model("a3");
  auto s = solve(ctx, 3);
  CHECK(extract_descendant_morphism(s, {2}).coeff(0) == ctx->h_basis().reps[2]);
  auto total = total_theta(s);
  CHECK(total.truncated(1) == s.theta[1]);
}

TEST_CASE("solver misuse is reported") {
  auto ctx = test::shipped_model("a2");
  CHECK_THROWS_AS(solve(ctx, 0), Error);
  auto s = solve(ctx, 2);
  CHECK_THROWS_AS(extend(s), Error);
  SolveOptions opts;
  TSeries quadratic(ctx->table());
  quadratic.add({1, 1}, HbarPoly(ctx->h_basis().reps[1]));
  opts.theta1 = quadratic;
  CHECK_THROWS_AS(solve(ctx, 2, opts), Error);
  SolveOptions open;
  open.lambda_perturbation = [&](int, const TKey&, const Element&) { return parse_polynomial(ctx->table(), "x_b"); };
  CHECK_THROWS_AS(solve(ctx, 3, open), Error);
}

TEST_CASE("homotopy gauge changes no structure tensor and no correlator") {
  std::mt19937_64 rng(2024);
  for (const auto& name : test::identity_models()) {
    auto ctx = test::shipped_model(name);
    const int order = std::min(test::shipped_truncation(name), 4);
    const int bound = ctx->spec().model_class == ModelClass::GaugedWeightedHomogeneous ? 8 : 4;
    auto kernel = test::ghost_minus_one_kernel(*ctx, bound);
    if (name == "a2" || name == "a3") CHECK(kernel.empty());
    if (name == "mixed2" || name == "fermat_cubic") CHECK_FALSE(kernel.empty());

    auto base = solve(ctx, order);
    auto vec = ExpectationVector::from_config(*ctx);
    auto base_table = correlator_table(base, vec, order);
    int changed_gauges = 0;
    for (int gauge = 0; gauge < 20; ++gauge) {
      SolveOptions opts;
      bool touched = false;
      opts.lambda_perturbation = [&](int, const TKey&, const Element&) {
        Element e(ctx->table());
        if (kernel.empty()) return e;
        std::uniform_int_distribution<std::size_t> pick(0, kernel.size() - 1);
        for (int i = 0; i < 2; ++i) e += test::small_rational(rng) * kernel[pick(rng)];
        touched = touched || !e.is_zero();
        return e;
      };
      auto s = solve(ctx, order, opts);
      INFO(name << " gauge " << gauge);
      for (int n = 2; n <= order; ++n) CHECK(s.m[n].entries == base.m[n].entries);
      CHECK(verify_state(s).all_passed());
      CHECK(correlator_table(s, vec, order) == base_table);
      if (touched && total_theta(s) != total_theta(base)) ++changed_gauges;
    }
    // Gauges must actually move the chain-level data where Ker Q allows it.
    if (!kernel.empty()) CHECK(changed_gauges > 10);
  }
}
