#include <cstdlib>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "twosided/matrix_market.hpp"

namespace twosided::cli {

namespace {

struct RunFlags {
  RunConfig cfg;
  std::string op = "trsm";
  std::string config_path;
  CLI::Option* seeds = nullptr;
};

void add_run_options(CLI::App* app, RunFlags& f, bool single) {
  RunConfig& c = f.cfg;
  app->add_option("--op", f.op, "trsm, trmm or reduce");
  if (single) {
    c.variants = {"4"};
    c.sizes = {1024};
    c.block_sizes = {64};
    app->add_option("--variant,--variants", c.variants, "variant (1..5, m1, m2)")->delimiter(',');
    app->add_option("--n,--sizes", c.sizes, "matrix order")->delimiter(',');
    app->add_option("--b,--block-sizes", c.block_sizes, "block size")->delimiter(',');
  } else {
    app->add_option("--variants,--variant", c.variants, "comma-separated variants or 'all'")->delimiter(',');
    app->add_option("--sizes,--n", c.sizes, "comma-separated matrix orders")->delimiter(',');
    app->add_option("--block-sizes,--b", c.block_sizes, "comma-separated block sizes")->delimiter(',');
  }
  f.seeds = app->add_option("--seeds,--seed", c.seeds, "comma-separated seeds (default $TWOSIDED_SEED or 1)")
                ->delimiter(',');
  app->add_option("--field", c.field, "real or complex");
  app->add_option("--tolerance", c.tolerance, "relative tolerance");
  app->add_option("--out,--output", c.output, "write results to this file instead of stdout");
  app->add_option("--format", c.format, "csv, json or table");
  app->add_option("--config", f.config_path, "JSON config; its keys override flags");
}

void finish_run_flags(RunFlags& f) {
  f.cfg.op = parse_operation(f.op);
  if (f.seeds->count() == 0) {
    if (const char* env = std::getenv("TWOSIDED_SEED"); env != nullptr && *env != '\0') {
      try {
        std::size_t pos = 0;
        const unsigned long long s = std::stoull(env, &pos);
        if (pos != std::string(env).size()) throw std::invalid_argument("trailing characters");
        f.cfg.seeds = {s};
      } catch (const std::exception&) {
        throw InvalidArgument(std::string("TWOSIDED_SEED is not an unsigned integer: '") + env + "'");
      }
    }
  }
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw InvalidArgument("cannot open config '" + f.config_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("config '" + f.config_path + "' is not valid JSON: " + e.what());
    }
    f.cfg = RunConfig::from_json(j, f.cfg);
  }
  f.cfg.validate();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Blocked two-sided triangular solve and product: verification, benchmarks, flop reports"};
  app.name("twosided");
  app.require_subcommand(1);

  RunFlags verify, bench, flops;
  CLI::App* v = app.add_subcommand("verify", "oracle comparison and invariant checks over a grid");
  verify.cfg.format = "table";
  add_run_options(v, verify, false);
  v->add_flag("--check-invariants", verify.cfg.check_invariants, "check the loop invariant at every boundary");
  v->add_flag("--strict", verify.cfg.strict, "stop a run at its first failing boundary");
  v->add_flag("--parallel-configs", verify.cfg.parallel_configs, "run grid cells concurrently");
  v->add_option("--inject-fault", verify.cfg.inject_fault, "omit this update step from every run");
  v->add_option("--trace", verify.cfg.trace, "write the per-boundary residual trace as CSV");

  CLI::App* b = app.add_subcommand("bench", "time variants over sizes and block sizes");
  add_run_options(b, bench, false);
  bench.cfg.sizes = {512};
  bench.cfg.block_sizes = {64};
  b->add_option("--reps", bench.cfg.reps, "repetitions per cell");
  b->add_flag("--parallel-configs", bench.cfg.parallel_configs, "run cells concurrently");

  CLI::App* f = app.add_subcommand("flops", "predicted and measured flop ledgers");
  flops.cfg.format = "json";
  add_run_options(f, flops, true);

  ReduceOptions red;
  std::vector<std::string> random_args;
  CLI::App* r = app.add_subcommand("reduce", "Cholesky of B, then C = L^{-1} A L^{-H}");
  r->add_option("--in", red.inputs, "A.mtx then B.mtx (give twice)");
  r->add_option("--random", random_args, "n seed")->expected(2);
  r->add_option("--variant", red.variant, "trsm variant 1..5");
  r->add_option("--block-size,--b", red.block_size, "block size");
  r->add_option("--field", red.field, "field for --random: real or complex");
  r->add_option("--out", red.output, "write C (lower triangle) as Matrix Market");
  double tol = 0.0;
  CLI::Option* tol_opt = r->add_option("--tolerance", tol, "residual bound (default 50 n eps kappa(L)^2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (v->parsed()) {
      finish_run_flags(verify);
      return cmd_verify(verify.cfg, out, err);
    }
    if (b->parsed()) {
      finish_run_flags(bench);
      return cmd_bench(bench.cfg, out, err);
    }
    if (f->parsed()) {
      finish_run_flags(flops);
      return cmd_flops(flops.cfg, out, err);
    }
    if (!random_args.empty()) {
      try {
        red.random = std::make_pair(static_cast<index_t>(std::stoll(random_args[0])),
                                    static_cast<std::uint64_t>(std::stoull(random_args[1])));
      } catch (const std::exception&) {
        throw InvalidArgument("--random expects two integers: n seed");
      }
    }
    if (*tol_opt) red.tolerance = tol;
    return cmd_reduce(red, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const MatrixMarketError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SingularFactor& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const NotPositiveDefinite& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace twosided::cli
