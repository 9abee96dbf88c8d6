#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "bvm/bundle.hpp"
#include "bvm/correlators.hpp"
#include "bvm/master.hpp"
#include "bvm/model_file.hpp"
#include "bvm/parallel.hpp"
#include "bvm/tower.hpp"

namespace {

using namespace bvm;

struct Options {
  std::string file;
  int order = 0;  // 0: take the file's truncation
  int arity = 2;
  bool oracle = false;
  std::string out;
};

void emit(const Options& opt, const Json& j) {
  std::string text = dump(j);
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(opt.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::Usage, "cannot write " + opt.out);
  f << text;
}

struct Loaded {
  ModelFile file;
  ContextPtr ctx;
  int order;
};

Loaded load(const Options& opt) {
  Loaded l{load_model_file(opt.file), nullptr, 0};
  l.ctx = build_model(l.file.spec);
  l.order = opt.order > 0 ? opt.order : l.file.truncation;
  return l;
}

// Shifts Lambda_n by an element that is not Q-closed, so the defining equation must break.
void corrupt_lambda(MasterState& state, int n) {
  if (n < 1 || n > state.order) throw Error(ErrorKind::Usage, "corrupt_lambda outside the solved range");
  const auto& table = state.ctx->table();
  for (std::size_t v = 0; v < table->size(); ++v) {
    if ((*table)[v].ghost != -1) continue;
    Element bad = Element::variable(table, v);
    if (state.ctx->q(bad).is_zero()) continue;
    TKey key(static_cast<std::size_t>(n), state.dim() > 1 ? 1 : 0);
    state.lambda[n].add(key, HbarPoly(bad));
    return;
  }
  throw Error(ErrorKind::Usage, "model has no ghost -1 variable to corrupt with");
}

VerificationLog full_log(const MasterState& state) {
  VerificationLog log = state.log;
  log.append(verify_state(state));
  if (state.ctx->spec().model_class == ModelClass::IsolatedSingularity) log.append(verify_semiclassical(state));
  return log;
}

int finish(const VerificationLog& log) {
  if (log.all_passed()) return 0;
  for (const auto& r : log.records)
    if (!r.passed) std::cerr << "FAILED " << r.name << " (order " << r.order << ") " << r.detail << "\n";
  return 3;
}

int cmd_ring(const Options& opt) {
  auto l = load(opt);
  emit(opt, to_json(ring_report(*l.ctx)));
  return 0;
}

int cmd_solve(const Options& opt) {
  auto l = load(opt);
  MasterState state = solve(l.ctx, l.order);
  if (l.file.corrupt_lambda) corrupt_lambda(state, *l.file.corrupt_lambda);
  VerificationLog log = full_log(state);
  auto vec = ExpectationVector::from_config(*l.ctx);
  int arity = std::min(opt.arity, l.order);
  log.append(verify_correlators(state, vec, arity, opt.oracle));
  ResultBundle b = make_bundle(state, log);
  VerificationLog scratch;
  attach_correlators(b, correlator_table(state, vec, arity), quantum_coordinates(state, vec, &scratch));
  emit(opt, to_json(b));
  return finish(log);
}

int cmd_correlators(const Options& opt) {
  auto l = load(opt);
  if (opt.arity < 1) throw Error(ErrorKind::Usage, "--arity must be positive");
  int order = std::max(l.order, opt.arity);
  MasterState state = solve(l.ctx, order);
  auto vec = ExpectationVector::from_config(*l.ctx);
  auto table = correlator_table(state, vec, opt.arity);
  Json j;
  j["engine_version"] = kEngineVersion;
  j["model"] = l.ctx->spec().name;
  j["order"] = order;
  Json rows = Json::array();
  for (const auto& [arity, entries] : table)
    for (const auto& [key, value] : entries) {
      Json row = {{"indices", key}, {"value", to_json(value)}, {"text", value.to_string()}};
      if (opt.oracle && arity >= 2) {
        // Throws OracleMismatch (exit 4) on any disagreement.
        auto res = partition_oracle(state, vec, key);
        row["oracle"] = to_json(res.via_chain);
      }
      rows.push_back(std::move(row));
    }
  j["correlators"] = std::move(rows);
  emit(opt, j);
  return 0;
}

int cmd_verify(const Options& opt) {
  auto l = load(opt);
  MasterState state = solve(l.ctx, l.order);
  if (l.file.corrupt_lambda) corrupt_lambda(state, *l.file.corrupt_lambda);
  VerificationLog log = full_log(state);
  auto vec = ExpectationVector::from_config(*l.ctx);
  log.append(verify_correlators(state, vec, std::min(l.order, 4), opt.oracle));
  emit(opt, to_json(log));
  return finish(log);
}

int cmd_obstruction(const Options& opt) {
  std::ifstream in(opt.file, std::ios::binary);
  if (!in) throw Error(ErrorKind::Usage, "cannot open " + opt.file);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  FiniteComplex c = parse_complex(text);
  if (opt.order > 0 && opt.order < c.order()) c.k.resize(static_cast<std::size_t>(opt.order));
  validate(c);
  CohomologyData data = cohomology(c);
  ObstructionTower tower = build_tower(c, data);
  Classification cls = classify(tower, data.dim());

  VerificationLog log;
  MatrixSeries xi(static_cast<std::size_t>(tower.order) + 1, Matrix(data.dim(), data.dim()));
  xi[0] = Matrix::identity(data.dim());
  MatrixSeries s(static_cast<std::size_t>(tower.order) + 1, Matrix(c.dim(), data.dim()));
  GaugeReport rel = gauge_transform(c, tower, s, xi);
  log.add("tower.chain_relation", tower.order, rel.chain_relation);
  log.add("tower.kappa_square", tower.order, rel.kappa_square);
  bool frozen_ok = true;
  for (const auto& [l, expected] : c.frozen_kappa) {
    bool ok = l <= tower.order && tower.kappa[l] == expected;
    frozen_ok = frozen_ok && ok;
    log.add("tower.frozen_kappa", l, ok, ok ? "" : "stored matrix differs");
  }
  emit(opt, tower_report(c, data, tower, cls, log));
  // A broken chain identity outranks a disagreement with the stored values.
  if (!rel.chain_relation || !rel.kappa_square) return finish(log);
  if (!frozen_ok) {
    finish(log);
    return exit_code(ErrorKind::OracleMismatch);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact BV master-equation solver and obstruction calculator"};
  app.require_subcommand(1);
  Options opt;
  std::size_t threads = 0;
  app.add_option("--threads", threads, "worker threads (default: BVMASTER_THREADS or hardware)");

  auto add_common = [&](CLI::App* sub, bool with_arity, bool with_oracle) {
    sub->add_option("file", opt.file, "input file")->required();
    sub->add_option("--order", opt.order, "truncation order");
    sub->add_option("--out", opt.out, "write output to this path");
    sub->add_option("--threads", threads, "worker threads");
    if (with_arity) sub->add_option("--arity", opt.arity, "maximum correlator arity");
    if (with_oracle) sub->add_flag("--oracle", opt.oracle, "cross-check with the partition formula");
  };
  auto* ring = app.add_subcommand("ring", "cohomology basis report");
  add_common(ring, false, false);
  auto* solve_cmd = app.add_subcommand("solve", "solve to the given order and emit the result bundle");
  add_common(solve_cmd, true, true);
  auto* corr = app.add_subcommand("correlators", "correlator table");
  add_common(corr, true, true);
  auto* verify = app.add_subcommand("verify", "verification log only");
  add_common(verify, false, true);
  auto* obstruction = app.add_subcommand("obstruction", "obstruction tower of a finite complex");
  add_common(obstruction, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (ring->parsed()) return cmd_ring(opt);
    if (solve_cmd->parsed()) return cmd_solve(opt);
    if (corr->parsed()) return cmd_correlators(opt);
    if (verify->parsed()) return cmd_verify(opt);
    return cmd_obstruction(opt);
  } catch (const ParseError& e) {
    std::cerr << opt.file << ":" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
