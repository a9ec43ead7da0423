// lattri: counts, growth constants, certificates and self-checks from the command line.
//
// Exit status: 0 success, 1 a check or certification failed, 2 bad input or
// resource limit.

#include "lattri/lattri.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace lattri;
using nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string format = "plain";
  unsigned threads = 1;
  std::string cache_dir;
  bool allow_long = false;

  std::int64_t m = 0, n = 0;
  std::string mode = "bigint";
  std::vector<std::uint64_t> primes;
  std::string orientation = "narrow";
  double memory_gb = 6;

  int nodes = 100;
  unsigned digits = 0;  // 0: follow the node count

  std::string suite = "all";
  double max_seconds = std::numeric_limits<double>::infinity();

  double c = 4 * std::log2((1 + std::sqrt(5.0)) / 2);

  std::optional<CountCache> cache() const {
    if (!cache_dir.empty()) return CountCache(cache_dir);
    return CountCache::from_env();
  }
};

/// Input errors that map to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One report per command: the json schema is {command, inputs, result,
/// capacity?, digits?, certified_error?, seconds}, plus checks for verify.
struct Report {
  std::string command;
  ordered_json inputs = ordered_json::object();
  std::string result;
  std::optional<double> capacity;
  std::optional<int> digits;
  std::optional<double> certified_error;
  double seconds = 0;
  std::vector<std::pair<std::string, std::string>> extra;  // "details" in json
  std::vector<CheckResult> checks;

  void print(const std::string& format) const {
    if (format == "json") {
      ordered_json j;
      j["command"] = command;
      j["inputs"] = inputs;
      j["result"] = result;
      if (capacity) j["capacity"] = *capacity;
      if (digits) j["digits"] = *digits;
      if (certified_error) j["certified_error"] = *certified_error;
      j["seconds"] = seconds;
      if (!extra.empty()) {
        j["details"] = ordered_json::object();
        for (const auto& [k, v] : extra) j["details"][k] = v;
      }
      if (command == "verify") {
        j["checks"] = ordered_json::array();
        for (const auto& c : checks)
          j["checks"].push_back({{"name", c.name},
                                 {"status", c.skipped ? "skipped" : c.passed ? "pass" : "fail"},
                                 {"detail", c.detail},
                                 {"seconds", c.seconds}});
      }
      std::cout << j.dump(2) << '\n';
    } else if (format == "csv") {
      std::cout << "command,result,capacity,digits,certified_error,seconds\n";
      std::cout << command << ',' << '"' << result << '"' << ',';
      if (capacity) std::cout << fmt(*capacity);
      std::cout << ',';
      if (digits) std::cout << *digits;
      std::cout << ',';
      if (certified_error) std::cout << fmt(*certified_error);
      std::cout << ',' << seconds << '\n';
      for (const auto& c : checks)
        std::cout << "check," << c.name << ',' << (c.skipped ? "skipped" : c.passed ? "pass" : "fail") << ",,,"
                  << c.seconds << '\n';
    } else {
      std::cout << command << ": " << result << '\n';
      if (capacity) std::cout << "  capacity        " << fmt(*capacity) << '\n';
      for (const auto& [k, v] : extra) std::cout << "  " << k << std::string(16 - std::min<std::size_t>(15, k.size()), ' ') << v << '\n';
      if (digits) std::cout << "  digits          " << *digits << '\n';
      if (certified_error) std::cout << "  certified error " << fmt(*certified_error) << '\n';
      for (const auto& c : checks)
        std::printf("  %-28s %-7s %8.2f s  %s\n", c.name.c_str(), c.skipped ? "skipped" : c.passed ? "pass" : "FAIL",
                    c.seconds, c.detail.c_str());
      std::cout << "  seconds         " << seconds << '\n';
    }
  }

  static std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Rough size of the ceiling space: (n+1)^(k+1) for strip width k.
bool count_is_long(std::int64_t m, std::int64_t n) {
  const double k = static_cast<double>(std::min(m, n)), len = static_cast<double>(std::max(m, n));
  return (k + 1) * std::log10(len + 1) > std::log10(2e7);
}

int cmd_count(const RunConfig& cfg) {
  if (cfg.m < 1 || cfg.n < 0) throw UsageError("count needs --m >= 1 and --n >= 0");
  if (!cfg.allow_long && count_is_long(cfg.m, cfg.n))
    throw UsageError("f(" + std::to_string(cfg.m) + "," + std::to_string(cfg.n) +
                     ") is a long computation; pass --allow-long to run it");
  const auto t0 = std::chrono::steady_clock::now();
  CountOptions opts;
  opts.threads = cfg.threads;
  opts.memory_budget_bytes = static_cast<std::size_t>(cfg.memory_gb * (1ull << 30));
  if (cfg.orientation == "as-given") opts.orientation = Orientation::as_given;
  else if (cfg.orientation != "narrow") throw UsageError("--orientation must be narrow or as-given");
  CountMode mode;
  if (cfg.mode == "modular") mode = CountMode::modular(cfg.primes);
  else if (cfg.mode != "bigint") throw UsageError("--mode must be bigint or modular");

  const auto count = count_rectangle(cfg.m, cfg.n, mode, opts);
  Report r;
  r.command = "count";
  r.inputs = {{"m", cfg.m}, {"n", cfg.n}, {"mode", cfg.mode}, {"orientation", cfg.orientation}};
  r.result = to_decimal(count);
  if (cfg.n > 0) r.capacity = capacity_of(count, cfg.m, cfg.n);
  int status = 0;
  if (const auto cache = cfg.cache(); cache && cfg.n > 0) {
    const auto old = cache->lookup(cfg.m, cfg.n);
    if (old && *old != count) {
      r.extra.emplace_back("cache", "MISMATCH with cached " + to_decimal(*old));
      status = 1;
    } else {
      if (!old) cache->append(cfg.m, cfg.n, count);
      r.extra.emplace_back("cache", cache->file().string());
    }
  }
  r.seconds = seconds_since(t0);
  r.print(cfg.format);
  return status;
}

int cmd_c2(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const unsigned digits = cfg.digits ? cfg.digits : 30;
  PrecisionScope p(digits + 10);
  const auto a = alpha_c2();
  Report r;
  r.command = "c2";
  r.inputs = {{"digits", digits}};
  r.result = a.c2.str(static_cast<std::streamsize>(digits));
  r.digits = static_cast<int>(digits);
  r.extra.emplace_back("alpha", a.alpha.str(static_cast<std::streamsize>(digits)));
  r.extra.emplace_back("pole", a.pole.str(static_cast<std::streamsize>(digits)));
  r.seconds = seconds_since(t0);
  r.print(cfg.format);
  return 0;
}

int cmd_c3(const RunConfig& cfg) {
  if (cfg.nodes < 8) throw UsageError("--nodes must be at least 8");
  const unsigned digits = cfg.digits ? cfg.digits : PrecisionContext::default_digits(cfg.nodes);
  if (!cfg.allow_long && (cfg.nodes > 400 || digits > 80))
    throw UsageError("more than 400 nodes or 80 digits is a long computation; pass --allow-long");
  const auto t0 = std::chrono::steady_clock::now();
  PrecisionContext ctx;
  ctx.nodes = cfg.nodes;
  ctx.digits = digits;
  ctx.threads = cfg.threads;
  const auto res = solve_x0_c3(ctx);

  PrecisionScope p(digits);
  // E_n with the constants valid near the root, an enclosure of the exact
  // root, and uniqueness of the solution of the integral equation
  const double err = nystrom_error_estimate(ErrorBudget::width3_near_root(cfg.nodes));
  const auto enc = enclose_root(res.x0, cfg.nodes, err, cfg.threads);
  const auto uniq = uniqueness_certify(17.0 / 35, std::min(cfg.nodes, 200));
  const HighReal published_x0 = 1 / sqrt(HighReal(reference::width3_limit()));
  const HighReal published_residual = abs(H_eval(published_x0, cfg.nodes, cfg.threads) - 1);

  Report r;
  r.command = "c3";
  r.inputs = {{"nodes", cfg.nodes}, {"digits", digits}};
  const auto shown = static_cast<std::streamsize>(digits - 2);
  r.result = res.c3.str(shown);
  if (enc.certified) {
    r.certified_error = enc.c3_error;
    r.digits = std::max(0, static_cast<int>(std::floor(-std::log10(enc.c3_error / static_cast<double>(res.c3)))));
  }
  r.extra.emplace_back("limit", res.limit.str(shown));
  r.extra.emplace_back("x0", res.x0.str(shown));
  r.extra.emplace_back("residual", HighReal(abs(res.residual)).str(3));
  r.extra.emplace_back("residual_ref", published_residual.str(3));
  r.extra.emplace_back("E_n", Report::fmt(err));
  r.extra.emplace_back("enclosure", enc.certified ? "[" + enc.lo.str(shown) + ", " + enc.hi.str(shown) + "]"
                                                  : "not certified");
  r.extra.emplace_back("uniqueness", uniq.certified ? uniq.route : "not certified");
  r.seconds = seconds_since(t0);
  r.print(cfg.format);
  return uniq.certified && enc.certified ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg) {
  const auto& suites = verify_suites();
  if (std::find(suites.begin(), suites.end(), cfg.suite) == suites.end())
    throw UsageError("unknown suite " + cfg.suite);
  const auto t0 = std::chrono::steady_clock::now();
  VerifyOptions o;
  o.threads = cfg.threads;
  o.max_seconds = cfg.max_seconds;
  o.allow_long = cfg.allow_long;
  o.cache = cfg.cache();
  Report r;
  r.command = "verify";
  r.inputs = {{"suite", cfg.suite}};
  if (std::isfinite(cfg.max_seconds)) r.inputs["max_seconds"] = cfg.max_seconds;
  r.checks = run_suite(cfg.suite, o);
  int pass = 0, fail = 0, skip = 0;
  for (const auto& c : r.checks) (c.skipped ? skip : c.passed ? pass : fail)++;
  r.result = std::to_string(pass) + " passed, " + std::to_string(fail) + " failed, " + std::to_string(skip) + " skipped";
  r.seconds = seconds_since(t0);
  r.print(cfg.format);
  return fail == 0 ? 0 : 1;
}

int cmd_bound_np(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = np_upper_bound(cfg.c);
  Report r;
  r.command = "bound-np";
  r.inputs = {{"c", cfg.c}};
  r.result = Report::fmt(b.bound);
  r.extra.emplace_back("argmax", Report::fmt(b.argmax));
  r.seconds = seconds_since(t0);
  r.print(cfg.format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counts of primitive lattice triangulations and their growth constants"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "plain"}));
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--cache-dir", cfg.cache_dir, "Count cache directory (default: $LATTRI_CACHE_DIR)");
  app.add_flag("--allow-long", cfg.allow_long, "Permit computations that take hours");

  auto* count = app.add_subcommand("count", "Exact number of triangulations of the m x n rectangle");
  count->add_option("m,--m", cfg.m, "Width")->required();
  count->add_option("n,--n", cfg.n, "Height")->required();
  count->add_option("--mode", cfg.mode, "bigint or modular")->check(CLI::IsMember({"bigint", "modular"}));
  count->add_option("--primes", cfg.primes, "Moduli for modular mode (default: enough 62-bit primes)");
  count->add_option("--orientation", cfg.orientation, "narrow (sweep the shorter side) or as-given");
  count->add_option("--memory-gb", cfg.memory_gb, "Memory budget for one DP pass");

  auto* c2 = app.add_subcommand("c2", "Width-2 growth constant in closed form");
  c2->add_option("--digits", cfg.digits, "Digits to print");

  auto* c3 = app.add_subcommand("c3", "Width-3 growth constant from the integral equation");
  c3->add_option("--nodes", cfg.nodes, "Quadrature nodes");
  c3->add_option("--digits", cfg.digits, "Working precision in decimal digits (default 12 + 0.12 nodes)");

  auto* verify = app.add_subcommand("verify", "Run the self-checks");
  verify->add_option("--suite", cfg.suite, "oracle, tables, series, bounds, convexity, constants or all");
  verify->add_option("--max-seconds", cfg.max_seconds, "Skip checks once this much time has passed");

  auto* np = app.add_subcommand("bound-np", "Upper bound for the non-primitive growth constant");
  np->add_option("--c", cfg.c, "Capacity bound for primitive triangulations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*count) return cmd_count(cfg);
    if (*c2) return cmd_c2(cfg);
    if (*c3) return cmd_c3(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*np) return cmd_bound_np(cfg);
  } catch (const MemoryBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
