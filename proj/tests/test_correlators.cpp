#include <doctest.h>

#include "bvm/correlators.hpp"
#include "bvm/errors.hpp"
#include "bvm/model_file.hpp"
#include "bvm/operators.hpp"
#include "support.hpp"

using namespace bvm;

namespace {

LaurentPoly lp(std::initializer_list<std::pair<int, Rational>> terms) {
  LaurentPoly p;
  for (const auto& [k, c] : terms) p.add(k, c);
  return p;
}

}  // namespace

TEST_CASE("Laurent polynomial arithmetic and rendering") {
  LaurentPoly a = lp({{0, 1}, {1, -2}});
  CHECK(a.to_string() == "1 - 2*hbar");
  CHECK((a * a).to_string() == "1 - 4*hbar + 4*hbar^2");
  CHECK(lp({{-1, ratio(1, 2)}}).to_string() == "1/2*hbar^-1");
  CHECK((a - a).is_zero());
  CHECK(minus_hbar_pow(3) == lp({{3, -1}}));
  CHECK(a.shifted(-2).coeff(-1) == Rational(-2));
}

TEST_CASE("A2 correlators under the default expectation") {
  auto ctx = test::shipped_model("a2");
  auto s = solve(ctx, 4);
  auto vec = ExpectationVector::from_config(*ctx);
  REQUIRE(vec.values.size() == 2);
  CHECK(vec.values[0].is_zero());
  CHECK(vec.values[1] == LaurentPoly(1));
  auto table = correlator_table(s, vec, 3);
  CHECK(table[1][{0}].is_zero());
  CHECK(table[1][{1}] == LaurentPoly(1));
  CHECK(table[2][{0, 1}] == LaurentPoly(1));
  CHECK(table[2][{1, 1}].is_zero());
  CHECK(table[2][{0, 0}].is_zero());
  // Every multi-index is listed, zeros included.
  CHECK(table[3].size() == 4);
}

TEST_CASE("configured expectations with hbar corrections") {
  auto file = parse_model_file(
      "name = \"a2h\"\ncoordinates = [\"x\"]\naction = \"x^3/3\"\nexpectation = [\"0\", [\"1\", \"1/2\"]]\n");
  auto ctx = build_model(file.spec);
  auto s = solve(ctx, 3);
  auto vec = ExpectationVector::from_config(*ctx);
  CHECK(vec.values[1] == lp({{0, 1}, {1, ratio(1, 2)}}));
  auto table = correlator_table(s, vec, 2);
  CHECK(table[2][{0, 1}] == lp({{0, 1}, {1, ratio(1, 2)}}));
  CHECK(verify_correlators(s, vec, 3, true).all_passed());
}

TEST_CASE("Omega layers against their explicit low-order expansions") {
  for (const auto& name : test::identity_models()) {
    auto ctx = test::shipped_model(name);
    auto s = solve(ctx, 4);
    VerificationLog log;
    auto om = omega_tower(s, &log);
    INFO(name);
    CHECK(log.all_passed());
    const auto& th = s.theta;
    TSeries w2 = th[1] * th[1] * ratio(1, 2) - th[2].shifted(1);
    TSeries w3 = th[1] * th[1] * th[1] * ratio(1, 6) - (th[1] * th[2]).shifted(1) + th[3].shifted(2);
    TSeries w4 = th[1] * th[1] * th[1] * th[1] * ratio(1, 24) - (th[1] * th[1] * th[2]).shifted(1) * ratio(1, 2) +
                 (th[1] * th[3] + th[2] * th[2] * ratio(1, 2)).shifted(2) - th[4].shifted(3);
    CHECK(om[1] == th[1]);
    CHECK(om[2] == w2);
    CHECK(om[3] == w3);
    CHECK(om[4] == w4);
    for (int n = 1; n <= 4; ++n) CHECK(k_apply(ctx->action(), om[n]).is_zero());
  }
}

TEST_CASE("p fields match the closed forms") {
  for (const auto& name : test::identity_models()) {
    auto ctx = test::shipped_model(name);
    auto s = solve(ctx, 4);
    INFO(name);
    CHECK(p_sharp(s, 3) == p3_closed_form(s));
    CHECK(p_sharp(s, 4) == p4_closed_form(s));
    VerificationLog log;
    p_sharp_tower(s, &log);
    CHECK(log.all_passed());
  }
}

TEST_CASE("partition formula agrees with the p-field path up to order 4") {
  for (const auto& name : test::identity_models()) {
    auto ctx = test::shipped_model(name);
    auto s = solve(ctx, 4);
    auto vec = ExpectationVector::from_config(*ctx);
    auto table = correlator_table(s, vec, 4);
    std::size_t checked = 0;
    for (int arity = 1; arity <= 4; ++arity)
      for (const auto& key : multi_indices(s.dim(), arity)) {
        INFO(name << " t" << key_to_string(key));
        OracleResult r = partition_oracle(s, vec, key);
        CHECK(r.via_chain == r.via_p_sharp);
        CHECK(r.via_chain == r.via_components);
        CHECK(r.via_chain == table[arity][key]);
        CHECK(k_apply(ctx->action(), r.chain).is_zero());
        ++checked;
      }
    CHECK(checked > 0);
  }
}

TEST_CASE("A2 oracle sweep to arity 6") {
  auto ctx = test::shipped_model("a2");
  auto s = solve(ctx, 6);
  auto log = verify_correlators(s, ExpectationVector::from_config(*ctx), 6, true);
  CHECK(log.all_passed());
  std::size_t sweeps = 0;
  for (const auto& r : log.records)
    if (r.name.find("partition") != std::string::npos) ++sweeps;
  CHECK(sweeps == 6);
}

TEST_CASE("quantum coordinates") {
  for (const auto& name : test::identity_models()) {
    auto ctx = test::shipped_model(name);
    auto s = solve(ctx, 4);
    VerificationLog log;
    auto qc = quantum_coordinates(s, ExpectationVector::from_config(*ctx), &log);
    INFO(name);
    CHECK(log.all_passed());
    REQUIRE(qc.coords.size() == s.dim());
    // Leading term T^g = t^g.
    for (std::size_t g = 0; g < s.dim(); ++g) CHECK(qc.coords[g].at({static_cast<int>(g)}) == LaurentPoly(1));
  }
  // A2: P_3^0 at t1^3 is -hbar * m3(e1,e1,e1) / 3! = hbar/6, entering T^0 with hbar^-2.
  auto a2 = test::shipped_model("a2");
  auto s = solve(a2, 3);
  auto qc = quantum_coordinates(s, ExpectationVector::from_config(*a2));
  CHECK(qc.coords[0].at({1, 1, 1}) == lp({{-1, ratio(1, 6)}}));
}
