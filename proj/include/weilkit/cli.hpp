#ifndef WEILKIT_CLI_HPP
#define WEILKIT_CLI_HPP

// The `weilkit` command line: count, zeta, integrate, compare, validate.
// Exit codes: 0 success, 1 validation/budget/domain failure, 2 usage, I/O or
// parse error.

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weilkit/count_cache.hpp"
#include "weilkit/counter.hpp"
#include "weilkit/geomdsl.hpp"
#include "weilkit/json_io.hpp"
#include "weilkit/kequiv.hpp"
#include "weilkit/padics.hpp"
#include "weilkit/zetakit.hpp"

namespace weilkit {

struct Config {
  std::string cache_dir;
  bool no_cache = false;
  std::uint64_t budget = 100'000'000;
  unsigned level = 4;
  double tol = 1e-6;
  std::string format = "text";
  unsigned threads = 0;
  std::string models_dir;
};

namespace cli_detail {

struct Failure {
  int code;
  std::string message;
};

inline std::string default_cache_dir() {
  if (const char* env = std::getenv("WEILKIT_CACHE_DIR"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::string(xdg) + "/weilkit";
  if (const char* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/weilkit";
  return ".weilkit-cache";
}

inline VarietyModel load_checked(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw Failure{2, "cannot open model file " + path};
  VarietyModel m;
  try {
    m = load_variety(path);
  } catch (const ParseError& e) {
    throw Failure{2, path + ": " + e.what()};
  }
  const auto diags = validate(m);
  if (!diags.empty()) {
    std::string msg = path + ": invalid model";
    for (const auto& d : diags) msg += "\n  " + d.message;
    throw Failure{1, msg};
  }
  return m;
}

inline std::vector<std::uint64_t> parse_primes(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Failure{2, "--primes: '" + item + "' is not an integer"};
    }
  }
  if (out.empty()) throw Failure{2, "--primes: empty list"};
  return out;
}

class Runner {
 public:
  Runner(const Config& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {
    if (!cfg_.no_cache) cache_ = std::make_unique<CountCache>(cfg_.cache_dir.empty() ? default_cache_dir() : cfg_.cache_dir);
    opt_.budget = cfg_.budget;
    opt_.threads = cfg_.threads;
  }

  void emit(const std::string& command, Json doc) {
    doc["schema"] = kSchemaVersion;
    doc["command"] = command;
    if (cfg_.format == "json") {
      out_ << doc.dump(2) << "\n";
    } else if (cfg_.format == "csv") {
      std::string s = "key,value\n";
      render_csv(doc, s);
      out_ << s;
    } else {
      std::string s;
      render_text(doc, s);
      out_ << s;
    }
  }

  int count(const std::string& path, std::uint64_t p, unsigned k, unsigned rmax) {
    const auto m = load_checked(path);
    check_prime(p);
    auto t = count_tower(m, p, k, rmax, opt_, cache_.get());
    emit("count", {{"model", m.name}, {"model_hash", model_hash(m)}, {"table", to_json(t)}});
    if (!t.complete()) {
      err_ << "error: " << t.truncation_reason << "\n";
      return 1;
    }
    return 0;
  }

  int zeta(const std::string& path, std::uint64_t p, unsigned k, unsigned rmax, bool betti, bool hodge) {
    const auto m = load_checked(path);
    check_prime(p);
    auto t = count_tower(m, p, k, rmax, opt_, cache_.get());
    if (t.counts.empty()) throw Failure{1, t.truncation_reason};
    Json doc = {{"model", m.name}, {"model_hash", model_hash(m)}, {"table", to_json(t)}};
    RationalZeta z;
    try {
      z = reconstruct_zeta(t, m.expected_dim);
    } catch (const InsufficientTerms& e) {
      emit("zeta", doc);
      throw Failure{1, std::string(e.what()) +
                           (t.complete() ? "" : " (counts truncated by budget: " + t.truncation_reason + ")")};
    }
    doc["zeta"] = to_json(z);
    std::optional<std::string> failure;
    if (m.expected_dim) {
      const auto w = weil_classify(z, *m.expected_dim, cfg_.tol);
      doc["weil"] = to_json(w);
      if (betti || hodge) {
        if (!w.purity_ok) {
          failure = "purity_ok false: reciprocal roots do not fit the Weil weights (is the model singular at p?)";
        } else if (t.smooth_at_p && !*t.smooth_at_p) {
          failure = "model is singular at p = " + std::to_string(p) + "; Betti numbers are not defined by this zeta";
        } else {
          if (betti) doc["betti"] = betti_numbers(w);
          if (hodge) {
            try {
              doc["hodge"] = to_json(curve_hodge(w));
            } catch (const DomainError& e) {
              failure = e.what();
            }
          }
        }
      }
    } else if (betti || hodge) {
      failure = "model has no dim statement; weights cannot be classified";
    }
    emit("zeta", doc);
    if (failure) {
      err_ << "error: " << *failure << "\n";
      return 1;
    }
    return 0;
  }

  int integrate(const std::string& path, std::uint64_t p) {
    const auto m = load_checked(path);
    check_prime(p);
    const auto g = integrate_gauge(m, p);
    const std::uint64_t n1 = count_points(m, make_field(p, 1), opt_);
    const Rational via_count(Integer(n1), ipow(Integer(p), g.n));
    const auto oracle = gauge_oracle(m, p, cfg_.level, cfg_.threads == 0 ? 1 : cfg_.threads);
    const bool match = via_count == g.value;
    const bool brackets = oracle.contains(g.value);
    emit("integrate", {{"model", m.name},
                       {"p", p},
                       {"integral", to_json(g)},
                       {"count", n1},
                       {"count_over_p_n", to_string(via_count)},
                       {"matches_count", match},
                       {"oracle", to_json(oracle)},
                       {"oracle_brackets", brackets}});
    if (!match || !brackets) {
      err_ << "error: cross-check failed\n";
      return 1;
    }
    return 0;
  }

  int compare(const std::string& example, const std::string& primes, unsigned rmax, bool hodge) {
    const auto pair = load_example(example, cfg_.models_dir.empty() ? default_models_dir() : cfg_.models_dir);
    const auto ps = parse_primes(primes);
    const auto rep = compare_counts(pair, ps, rmax, opt_, cache_.get());
    Json doc = {{"report", to_json(rep)}};
    if (hodge) {
      Json hs = Json::array();
      for (auto p : ps)
        if (std::find(rep.skipped.begin(), rep.skipped.end(), p) == rep.skipped.end())
          hs.push_back(to_json(infer_equal_hodge_curves(pair, p, std::max(rmax, 2u), opt_, cache_.get())));
      doc["hodge"] = hs;
    }
    emit("compare", doc);
    return 0;
  }

  int validate_cmd(const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) throw Failure{2, "cannot open model file " + path};
    VarietyModel m;
    try {
      m = load_variety(path);
    } catch (const ParseError& e) {
      throw Failure{2, path + ": " + e.what()};
    }
    const auto diags = validate(m);
    Json d = Json::array();
    for (const auto& x : diags) d.push_back(x.message);
    emit("validate", {{"model", m.name},
                      {"model_hash", model_hash(m)},
                      {"valid", diags.empty()},
                      {"diagnostics", d},
                      {"canonical", print_variety(m)}});
    return diags.empty() ? 0 : 1;
  }

 private:
  static void check_prime(std::uint64_t p) {
    if (!is_prime(p)) throw Failure{2, "--p " + std::to_string(p) + " is not prime"};
  }

  Config cfg_;
  std::ostream& out_;
  std::ostream& err_;
  std::unique_ptr<CountCache> cache_;
  CountOptions opt_;
};

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using cli_detail::Failure;
  CLI::App app{"weilkit: point counts, zeta functions and p-adic integrals of varieties", "weilkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--cache-dir", cfg.cache_dir, "count cache directory (default $WEILKIT_CACHE_DIR)");
  app.add_flag("--no-cache", cfg.no_cache, "do not read or write the count cache");
  app.add_option("--budget", cfg.budget, "max enumerated candidates per count")->check(CLI::PositiveNumber);
  app.add_option("--level", cfg.level, "refinement level N for interval integration")->check(CLI::Range(1u, 12u));
  app.add_option("--tol", cfg.tol, "relative tolerance for Weil weights")->check(CLI::Range(0.0, 1.0));
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--threads", cfg.threads, "worker threads (0: all cores)");
  app.add_option("--models-dir", cfg.models_dir, "directory with bundled example models (default $WEILKIT_MODELS)");

  std::string model;
  std::uint64_t p = 0;
  unsigned k = 1, rmax = 1, zeta_rmax = 6, compare_rmax = 1;
  bool betti = false, hodge = false, compare_hodge = false;
  std::string example, primes = "2,3,5";

  auto* count = app.add_subcommand("count", "count points over F_{q^r}, r = 1..rmax");
  count->add_option("model", model, "model file (.vty)")->required();
  count->add_option("--p", p, "prime")->required();
  count->add_option("--k", k, "base field F_{p^k}")->check(CLI::PositiveNumber);
  count->add_option("--rmax", rmax, "largest extension degree r")->check(CLI::PositiveNumber);

  auto* zeta = app.add_subcommand("zeta", "reconstruct the zeta function and classify weights");
  zeta->add_option("model", model, "model file (.vty)")->required();
  zeta->add_option("--p", p, "prime")->required();
  zeta->add_option("--k", k, "base field F_{p^k}")->check(CLI::PositiveNumber);
  zeta->add_option("--rmax", zeta_rmax, "number of counts to use (truncated by the budget)")
      ->check(CLI::PositiveNumber);
  zeta->add_flag("--betti", betti, "report Betti numbers (requires purity)");
  zeta->add_flag("--hodge-curve", hodge, "report the Hodge diamond of a curve");

  auto* integ = app.add_subcommand("integrate", "integrate the gauge form over X(Z_p) and cross-check");
  integ->add_option("model", model, "model file (.vty)")->required();
  integ->add_option("--p", p, "prime")->required();

  auto* cmp = app.add_subcommand("compare", "compare point counts of a bundled example pair");
  cmp->add_option("--example", example, "example name")->required();
  cmp->add_option("--primes", primes, "comma-separated primes");
  cmp->add_option("--rmax", compare_rmax, "largest extension degree r")->check(CLI::PositiveNumber);
  cmp->add_flag("--hodge", compare_hodge, "also compare curve Hodge diamonds");

  auto* val = app.add_subcommand("validate", "parse and validate a model file");
  val->add_option("model", model, "model file (.vty)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    cli_detail::Runner run(cfg, out, err);
    if (count->parsed()) return run.count(model, p, k, rmax);
    if (zeta->parsed()) return run.zeta(model, p, k, zeta_rmax, betti, hodge);
    if (integ->parsed()) return run.integrate(model, p);
    if (cmp->parsed()) return run.compare(example, primes, compare_rmax, compare_hodge);
    if (val->parsed()) return run.validate_cmd(model);
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    const std::string what = e.what();
    err << "error: " << what << "\n";
    return what.rfind("cannot open", 0) == 0 ? 2 : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace weilkit

#endif  // WEILKIT_CLI_HPP
