#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elseq/acceptance.hpp"
#include "elseq/bounds.hpp"
#include "elseq/errors.hpp"
#include "elseq/experiments.hpp"
#include "elseq/oracle.hpp"
#include "elseq/seqgen.hpp"
#include "elseq/stats.hpp"
#include "elseq/theory.hpp"

namespace {

constexpr uint64_t kPrimeCap = uint64_t(1) << 50;

void check_prime_cap(uint64_t p) {
  if (p > kPrimeCap) throw elseq::ParameterError("p is capped at 2^50 on the command line");
}

std::ostream& output_stream(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw elseq::ParameterError("cannot open output file " + path);
  return file;
}

std::string rational_str(const elseq::Rational& r) {
  std::ostringstream os;
  os << r << " (" << elseq::to_double(r) << ")";
  return os.str();
}

int run_cli(int argc, char** argv) {
  CLI::App app{"ElGamal sequences modulo v: generation, statistics, bounds, exact theory"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "emit a sequence over Z_v");
  uint64_t gen_p = 0, gen_g = 0, gen_n = 0, gen_seed = 1;
  uint32_t gen_v = 2;
  bool gen_random = false;
  std::string gen_out;
  gen->add_option("--p", gen_p, "prime modulus");
  gen->add_option("--g", gen_g, "primitive root");
  gen->add_option("--v", gen_v, "alphabet size")->required();
  gen->add_option("--n", gen_n, "length (random balanced mode)");
  gen->add_flag("--random-balanced", gen_random, "uniform balanced word instead of ElGamal");
  gen->add_option("--seed", gen_seed, "seed (random balanced mode)");
  gen->add_option("--out", gen_out, "output file (default stdout)");
  gen->callback([&] {
    std::ofstream file;
    std::ostream& os = output_stream(gen_out, file);
    if (gen_random) {
      auto rng = elseq::derive_stream(gen_seed);
      elseq::write_sequence(os, elseq::random_balanced_sequence(gen_v, gen_n, rng));
    } else {
      check_prime_cap(gen_p);
      elseq::write_sequence(os, elseq::elgamal_sequence({gen_p, gen_g, gen_v}));
    }
  });

  // ---- stats ----
  auto* st = app.add_subcommand("stats", "tuple/run/balance statistics of a sequence file");
  std::string st_in, st_csv;
  uint32_t st_t = 2;
  st->add_option("--in", st_in, "sequence file (see generate)")->required();
  st->add_option("--t", st_t, "tuple length")->capture_default_str();
  st->add_option("--csv", st_csv, "write (kind,key,count) CSV here");
  st->callback([&] {
    std::ifstream is(st_in);
    if (!is) throw elseq::ParameterError("cannot open " + st_in);
    const elseq::SequenceZv seq = elseq::read_sequence(is);
    const elseq::BalanceProfile profile = elseq::balance_profile(seq);
    std::cout << "v=" << seq.v << " n=" << seq.size() << " least_period=" << elseq::least_period(seq)
              << "\n";
    std::cout << "balance:";
    for (uint32_t a = 0; a < seq.v; ++a) std::cout << ' ' << a << ':' << profile.counts[a];
    std::cout << " (max pairwise difference " << profile.max_difference << ")\n";
    const elseq::TupleStats tuples = elseq::tuple_counts(seq, st_t);
    std::cout << "t=" << st_t << " distinct_tuples=" << tuples.counts.size()
              << " tuple_balance_deviation=" << elseq::tuple_balance_deviation(tuples) << "\n";
    const elseq::RunStats runs = elseq::run_counts(seq);
    for (const auto& [t, count] : runs.totals) std::cout << "rho(" << t << ")=" << count << ' ';
    std::cout << "\n";
    if (!st_csv.empty()) {
      std::ofstream os(st_csv, std::ios::binary);
      elseq::write_stats_csv(os, tuples, runs);
    }
  });

  // ---- bounds ----
  auto* bd = app.add_subcommand("bounds", "print bound intervals for (p, g, v, t)");
  uint64_t bd_p = 0, bd_g = 0;
  uint32_t bd_v = 2, bd_t = 2;
  bool bd_csv = false;
  bd->add_option("--p", bd_p)->required();
  bd->add_option("--g", bd_g)->required();
  bd->add_option("--v", bd_v)->required();
  bd->add_option("--t", bd_t)->required();
  bd->add_flag("--csv", bd_csv, "CSV rows instead of text");
  bd->callback([&] {
    check_prime_cap(bd_p);
    std::vector<std::pair<std::string, elseq::BoundInterval>> rows;
    rows.emplace_back("tuple", elseq::elgamal_tuple_bounds(bd_p, bd_g, bd_v, bd_t));
    if (bd_t >= 2) rows.emplace_back("mu", elseq::mu_bounds(bd_p, bd_g, bd_v, bd_t));
    rows.emplace_back("run_diff", elseq::run_bounds_difference(bd_p, bd_g, bd_v, bd_t));
    rows.emplace_back("run_sum", elseq::run_bounds_sum(bd_p, bd_g, bd_v, bd_t));
    if (std::gcd(bd_g, uint64_t(bd_v)) == 1) {
      rows.emplace_back("run_invertible", elseq::run_bounds_invertible(bd_p, bd_g, bd_v, bd_t));
    }
    rows.emplace_back("run_best", elseq::best_run_bounds(bd_p, bd_g, bd_v, bd_t));
    if (bd_csv) {
      elseq::write_bound_csv_header(std::cout);
      for (const auto& [kind, interval] : rows) {
        elseq::write_bound_csv_row(std::cout, bd_p, bd_g, bd_v, bd_t, kind, interval);
      }
    } else {
      for (const auto& [kind, interval] : rows) {
        std::cout << kind << ": [" << interval.lower << ", " << interval.upper << "]"
                  << (interval.vacuous ? " (vacuous lower)" : "") << "\n";
      }
      const elseq::TupleCoverage cover = elseq::tuple_coverage_check(bd_p, bd_g, bd_v, bd_t);
      std::cout << "coverage: sufficient=" << cover.sufficient << " necessary=" << cover.necessary;
      if (cover.iff_applicable) std::cout << " covered_iff=" << cover.covered;
      std::cout << "\n";
      if (bd_g == bd_v) {
        const elseq::TupleCountSplit split = elseq::tuple_count_split(bd_p, bd_v, bd_t);
        std::cout << "g=v split: n_l=" << split.n_lower << " n_u=" << split.n_upper
                  << " floor(q/v)=" << split.floor_q_v << "\n";
      }
    }
  });

  // ---- moments ----
  auto* mo = app.add_subcommand("moments", "exact and approximate moments over B(v, n)");
  uint32_t mo_v = 2;
  uint64_t mo_n = 0, mo_run_t = 0, mo_mc = 0, mo_seed = 1;
  std::string mo_tuple;
  uint32_t mo_run_b = 0;
  bool mo_approx = false;
  mo->add_option("--v", mo_v)->required();
  mo->add_option("--n", mo_n)->required();
  mo->add_option("--tuple", mo_tuple, "tuple as digits, e.g. 011");
  mo->add_option("--run-symbol", mo_run_b, "run symbol b");
  mo->add_option("--run-length", mo_run_t, "run length t");
  mo->add_flag("--approx", mo_approx, "also print polynomial approximations");
  mo->add_option("--mc-samples", mo_mc, "Monte Carlo cross-check sample count");
  mo->add_option("--seed", mo_seed, "Monte Carlo seed");
  mo->callback([&] {
    const bool tuple_mode = !mo_tuple.empty();
    if (tuple_mode == (mo_run_t > 0)) {
      throw elseq::ParameterError("pass exactly one of --tuple or --run-length");
    }
    elseq::MonteCarloTarget target;
    elseq::MomentPair exact;
    if (tuple_mode) {
      const std::vector<uint32_t> z = elseq::tuple_from_string(mo_tuple, mo_v);
      exact = elseq::tuple_moments_exact(mo_v, mo_n, z);
      target = {true, z, 0, 0};
      std::cout << "E(lambda) = " << rational_str(exact.mean) << "\n"
                << "VAR(lambda) = " << rational_str(exact.variance) << "\n";
      if (mo_approx) {
        const auto a = elseq::tuple_moment_approximations(mo_v, mo_n, z.size());
        std::cout << "E approx in [" << a.e_lower << ", " << a.e_upper << "]\n"
                  << "VAR approx in [" << a.var_lower << ", " << a.var_upper
                  << "], non-overlap upper " << a.var_upper_nonoverlap << "\n";
      }
    } else {
      exact = elseq::run_moments_exact(mo_v, mo_n, mo_run_t);
      target = {false, {}, mo_run_b, mo_run_t};
      std::cout << "E(rho) = " << rational_str(exact.mean) << "\n"
                << "VAR(rho) = " << rational_str(exact.variance) << "\n";
      if (mo_approx) {
        const auto a = elseq::run_moment_approximations(mo_v, mo_n, mo_run_t);
        std::cout << "E leading " << a.e_leading << ", VAR leading " << a.var_leading << "\n";
      }
    }
    if (mo_mc > 0) {
      const auto mc = elseq::monte_carlo_moments(mo_v, mo_n, target, mo_mc, mo_seed);
      std::cout << "monte carlo: mean " << mc.empirical_mean << " variance "
                << mc.empirical_variance << " z_score ";
      if (mc.z_score) std::cout << *mc.z_score;
      else std::cout << "undefined";
      std::cout << "\n";
    }
  });

  // ---- oracle ----
  auto* orc = app.add_subcommand("oracle", "exhaustive distributions over B(v, n)");
  uint32_t orc_v = 2;
  uint64_t orc_n = 0, orc_run_t = 0, orc_cap = elseq::kDefaultEnumerationCap;
  uint32_t orc_run_b = 0;
  std::string orc_tuple;
  bool orc_census = false;
  orc->add_option("--v", orc_v)->required();
  orc->add_option("--n", orc_n)->required();
  orc->add_option("--tuple", orc_tuple, "tuple as digits");
  orc->add_option("--run-symbol", orc_run_b);
  orc->add_option("--run-length", orc_run_t);
  orc->add_flag("--period-census", orc_census);
  orc->add_option("--cap", orc_cap, "enumeration cap");
  orc->callback([&] {
    if (orc_census) {
      const auto census = elseq::exact_period_census(orc_v, orc_n, orc_cap);
      std::cout << "{";
      bool first = true;
      for (const auto& [period, count] : census) {
        if (!first) std::cout << ", ";
        std::cout << '"' << period << "\": " << count;
        first = false;
      }
      std::cout << "}\n";
      return;
    }
    elseq::CountDistribution dist;
    std::string kind, key;
    if (!orc_tuple.empty()) {
      const auto z = elseq::tuple_from_string(orc_tuple, orc_v);
      dist = elseq::exact_tuple_distribution(orc_v, orc_n, z, orc_cap);
      kind = "tuple";
      key = elseq::tuple_to_string(z, orc_v);
    } else if (orc_run_t > 0) {
      dist = elseq::exact_run_distribution(orc_v, orc_n, orc_run_b, orc_run_t, orc_cap);
      kind = "run";
      key = std::to_string(orc_run_b) + ":" + std::to_string(orc_run_t);
    } else {
      throw elseq::ParameterError("pass --tuple, --run-length, or --period-census");
    }
    std::cout << elseq::distribution_to_json(dist, orc_v, orc_n, kind, key) << "\n";
    const auto moments = elseq::distribution_moments(dist);
    std::cout << "mean " << rational_str(moments.mean) << ", variance "
              << rational_str(moments.variance) << "\n";
    const auto normality = elseq::normality_diagnostic(dist);
    std::cout << "skewness ";
    if (normality.skewness) std::cout << *normality.skewness;
    else std::cout << "undefined";
    std::cout << ", excess kurtosis ";
    if (normality.excess_kurtosis) std::cout << *normality.excess_kurtosis;
    else std::cout << "undefined";
    std::cout << "\n";
  });

  // ---- experiment ----
  auto* ex = app.add_subcommand("experiment", "run the trial grid from a key=value config file");
  std::string ex_config;
  ex->add_option("--config", ex_config, "config file")->required();
  ex->callback([&] {
    const elseq::ExperimentConfig config = elseq::parse_config_file(ex_config);
    const std::string out = elseq::run_experiment(config);
    std::cout << "wrote trials.csv, runs.csv, ratios.csv, aggregates.json to " << out << "\n";
  });

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  std::vector<int> ver_criteria;
  std::string ver_scratch = "acceptance_scratch";
  ver->add_option("--criteria", ver_criteria, "criterion ids to run (default all)");
  ver->add_option("--scratch", ver_scratch, "scratch directory for the determinism check");
  ver->callback([&] {
    elseq::AcceptanceOptions options;
    options.only = ver_criteria;
    options.scratch_dir = ver_scratch;
    if (elseq::run_acceptance(std::cout, options) > 0) {
      throw elseq::InvariantViolationError("acceptance criteria failed");
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const elseq::ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return static_cast<int>(elseq::ExitCode::resource_cap);
  } catch (const elseq::InvariantViolationError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return static_cast<int>(elseq::ExitCode::invariant_violation);
  } catch (const elseq::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return static_cast<int>(elseq::ExitCode::parameter_error);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(elseq::ExitCode::invariant_violation);
  }
}
