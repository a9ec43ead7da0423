#pragma once

// Named end-to-end checks shared by the acceptance binary and `lattri verify`.

#include "lattri/bounds.hpp"
#include "lattri/brute_force.hpp"
#include "lattri/count_cache.hpp"
#include "lattri/fredholm.hpp"
#include "lattri/laurent.hpp"
#include "lattri/series.hpp"
#include "lattri/strip_counter.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lattri {

namespace reference {

/// lim f(3,n)^(1/(3n)) to 121 significant digits.
inline const char* width3_limit() {
  return "4.239369481548025671877625742045235772100695711251795499830801"
         "687833358238276728987837054831763341276708855553395893005289";
}

struct GoldenCount {
  std::int64_t m, n;
  const char* value;
};

/// Published exact counts, cheapest first.
inline const std::vector<GoldenCount>& golden_counts() {
  static const std::vector<GoldenCount> g{
      {5, 1, "252"},
      {5, 2, "182132"},
      {6, 2, "2801708"},
      {7, 2, "43936824"},
      {8, 2, "698607816"},
      {9, 2, "11224598424"},
      {5, 3, "182881520"},
      {6, 3, "12244184472"},
  };
  return g;
}

inline const char* f_5_6() { return "341816489625522032"; }

}  // namespace reference

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyOptions {
  unsigned threads = 1;
  double max_seconds = std::numeric_limits<double>::infinity();
  bool allow_long = false;
  std::optional<CountCache> cache;
};

namespace detail {

inline double trunc4(double c) { return std::floor(c * 1e4) / 1e4; }

/// Runs body(detail_stream) -> passed and times it against `limit` seconds.
inline CheckResult timed(const std::string& name, double limit, const std::function<bool(std::ostream&)>& body) {
  CheckResult r;
  r.name = name;
  std::ostringstream os;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.passed = body(os);
  } catch (const std::exception& e) {
    os << (os.tellp() > 0 ? "; " : "") << "exception: " << e.what();
    r.passed = false;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > limit) {
    os << (os.tellp() > 0 ? "; " : "") << "took " << r.seconds << " s, limit " << limit << " s";
    r.passed = false;
  }
  r.detail = os.str();
  return r;
}

inline BigCount binomial(int n, int k) {
  BigCount b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

/// Number of leading decimal digits on which a and b agree.
inline int agreeing_digits(const HighReal& a, const HighReal& b) {
  const HighReal d = abs(a - b);
  if (d == 0) return static_cast<int>(HighReal::default_precision());
  return static_cast<int>(std::floor(static_cast<double>(-log10(d / abs(b)))));
}

}  // namespace detail

namespace checks {

inline CheckResult binomial_family(const VerifyOptions& o) {
  return detail::timed("binomial_family", 1.0, [&](std::ostream& os) {
    CountOptions co;
    co.threads = o.threads;
    for (int n = 1; n <= 10; ++n)
      if (count_rectangle(1, n, {}, co) != detail::binomial(2 * n, n)) {
        os << "f(1," << n << ") differs from binom(" << 2 * n << ',' << n << ')';
        return false;
      }
    os << "f(1,n) = binom(2n,n) for n = 1..10";
    return true;
  });
}

inline CheckResult oracle_equivalence(const VerifyOptions& o) {
  return detail::timed("oracle_equivalence", 120.0, [&](std::ostream& os) {
    CountOptions co;
    co.threads = o.threads;
    int pairs = 0;
    for (std::int64_t m = 1; m <= 8; ++m)
      for (std::int64_t n = 1; m * n <= 8; ++n) {
        const auto dp = count_rectangle(m, n, {}, co);
        const auto bf = brute_force_count(LatticePolygon::rectangle(m, n));
        if (dp != bf) {
          os << m << 'x' << n << ": dp " << dp << " vs brute force " << bf;
          return false;
        }
        ++pairs;
      }
    os << pairs << " rectangles with m*n <= 8 agree";
    return true;
  });
}

inline CheckResult golden_entry(const reference::GoldenCount& g, const VerifyOptions& o) {
  std::ostringstream name;
  name << "golden_f(" << g.m << ',' << g.n << ')';
  return detail::timed(name.str(), 600.0, [&](std::ostream& os) {
    CountOptions co;
    co.threads = o.threads;
    const auto v = count_rectangle(g.m, g.n, {}, co);
    os << v;
    if (o.cache) o.cache->append(g.m, g.n, v);
    return v == BigCount(g.value);
  });
}

inline CheckResult transpose_cross_check(const VerifyOptions& o) {
  return detail::timed("transpose_f(5,6)=f(6,5)", 600.0, [&](std::ostream& os) {
    CountOptions co;
    co.threads = o.threads;
    co.orientation = Orientation::as_given;
    const auto a = count_rectangle(5, 6, {}, co);
    const auto b = count_rectangle(6, 5, {}, co);
    os << "width 5: " << a << ", width 6: " << b;
    if (o.cache) o.cache->append(5, 6, a);
    return a == b && a == BigCount(reference::f_5_6());
  });
}

inline CheckResult capacities(const VerifyOptions& o) {
  return detail::timed("capacities", 600.0, [&](std::ostream& os) {
    CountOptions co;
    co.threads = o.threads;
    struct Want {
      std::int64_t m, n;
      double c;
    };
    bool ok = true;
    for (const auto& w : {Want{5, 2, 1.7474}, Want{7, 2, 1.8134}, Want{9, 3, 1.9214}}) {
      const auto r = capacity(w.m, w.n, {}, co);
      os << "c(" << w.m << ',' << w.n << ") = " << r.capacity << ' ';
      ok = ok && std::abs(detail::trunc4(r.capacity) - w.c) < 1e-9;
    }
    return ok;
  });
}

inline CheckResult crt_path(const VerifyOptions& o) {
  return detail::timed("crt_reconstruction", 600.0, [&](std::ostream& os) {
    CountOptions co;
    co.threads = o.threads;
    std::size_t fewest = 1000;
    auto entries = reference::golden_counts();
    entries.push_back({5, 6, reference::f_5_6()});
    for (const auto& g : entries) {
      const auto shape = detail::rectangle_profile(g.m, g.n, Orientation::narrow_strip);
      const auto primes = primes_for_bits(count_bound_bits(shape));
      fewest = std::min(fewest, primes.size());
      const auto v = crt_reconstruct(count_shape_residues(shape, primes, co));
      if (primes.size() < 3 || v != BigCount(g.value)) {
        os << "f(" << g.m << ',' << g.n << ") via " << primes.size() << " primes gave " << v;
        return false;
      }
    }
    os << entries.size() << " counts reconstructed, at least " << fewest << " primes each";
    return true;
  });
}

inline CheckResult width2_closed_form(const VerifyOptions&) {
  return detail::timed("width2_constant", 1.0, [&](std::ostream& os) {
    PrecisionScope p(50);
    const auto r = alpha_c2();
    const double c2 = static_cast<double>(r.c2);
    const HighReal g = G_closed(r.pole);
    os << "c2 = " << r.c2.str(12) << ", G(pole) - 1 = " << static_cast<double>(g - 1);
    return std::abs(c2 - 2.05256897) < 5e-9 && abs(g - 1) < HighReal("1e-12");
  });
}

inline CheckResult series_identities(const VerifyOptions& o) {
  return detail::timed("series_identities", 60.0, [&](std::ostream& os) {
    CountOptions co;
    co.threads = o.threads;
    bool ok = Hstar_from_H({0, 1, 2, 14, 86}) == PowerSeries{1, 1, 3, 19, 125};
    const auto gs = gstar_coeffs(2);
    ok = ok && gs[2] == 44;
    // brute force over trapezoids T(a,c) with a + c = 2n
    for (int n = 1; n <= 2; ++n) {
      BigCount s = 0;
      for (int a = 0; a <= 2 * n; ++a) s += brute_force_count(trapezoid_T2(a, 2 * n - a));
      ok = ok && s == gs[static_cast<std::size_t>(n)];
    }
    const PowerSeries hs{1, 1, 3, 19, 125};
    for (int n = 1; n <= 3; ++n) {
      BigCount s = 0;
      for (int a = 0; a <= n; ++a)
        if (hstar_admissible(a, n - a)) s += brute_force_count(trapezoid_T3(a, n - a));
      ok = ok && s == hs[static_cast<std::size_t>(n)];
    }
    const auto h = H_from_Hstar(hstar_from_trapezoids(5, co));
    os << "h_5 = " << h[5];
    return ok && h[5] == 712;
  });
}

inline CheckResult width3_constant(int nodes, unsigned digits, int want_digits, double limit_seconds,
                                   const VerifyOptions& o) {
  std::ostringstream name;
  name << "width3_constant_n" << nodes;
  return detail::timed(name.str(), limit_seconds, [&](std::ostream& os) {
    PrecisionContext ctx;
    ctx.nodes = nodes;
    ctx.digits = digits;
    ctx.threads = o.threads;
    const auto r = solve_x0_c3(ctx);
    PrecisionScope p(digits);
    const HighReal L(reference::width3_limit());
    const int agree = detail::agreeing_digits(r.limit, L);
    const HighReal c3_ref = log(L) / log(HighReal(2));
    const double c3_rel = static_cast<double>(abs(r.c3 - c3_ref) / c3_ref);
    // residual at the x0 implied by the published limit
    const HighReal x0 = 1 / sqrt(L);
    const double res = static_cast<double>(abs(H_eval(x0, nodes, o.threads) - 1));
    // an enclosure from the error estimate must hold the published root
    const auto enc = enclose_root(r.x0, nodes, nystrom_error_estimate(ErrorBudget::width3_near_root(nodes)), o.threads);
    os << "c3 = " << r.c3.str(12) << ", limit agrees to " << agree << " digits, |H-1| at published root = " << res
       << ", certified c3 error " << (enc.certified ? enc.c3_error : -1.0);
    bool ok = agree >= want_digits && c3_rel < 5e-8 && enc.certified && enc.lo < x0 && x0 < enc.hi;
    if (nodes <= 100) ok = ok && res <= 1e-8;
    return ok;
  });
}

inline CheckResult certification_constants(const VerifyOptions&) {
  return detail::timed("certification_constants", 60.0, [&](std::ostream& os) {
    const double x = 17.0 / 35;
    const double psi = eval_Psi(x, Cplx<double>(1)).re;
    const double p = eval_P(x, Cplx<double>(1), Cplx<double>(1)).re;
    const double n2 = N2(x, 200);
    int bad = 0;
    for (int i = 1; i <= 100; ++i)
      for (int j = 0; j < 100; ++j) {
        try {
          unit_disk_roots(0.486 * i / 100.0, circle_point(j / 100.0));
        } catch (const RootCountError&) {
          ++bad;
        }
      }
    os << "Psi = " << psi << ", P = " << p << ", N2 = " << n2 << ", grid points without 2 roots = " << bad;
    return std::abs(psi - 0.44768) <= 5e-5 && std::abs(p - 0.02183) <= 5e-5 && std::abs(n2 - 0.88525) <= 1e-3 &&
           bad == 0;
  });
}

inline CheckResult grid_certificates(const VerifyOptions&) {
  return detail::timed("grid_certificates", 120.0, [&](std::ostream& os) {
    const auto pc = certify_P_on_torus();
    const auto ps = certify_Re_Psi(pc);
    os << "min |P| >= " << pc.min_abs_P() << ", min |Psi| >= " << ps.min_abs_Psi();
    return pc.cert.target_reached && ps.cert.target_reached && pc.min_abs_P() > 0.021 && ps.min_abs_Psi() > 0.44;
  });
}

inline CheckResult uniqueness(const VerifyOptions&) {
  return detail::timed("uniqueness", 30.0, [&](std::ostream& os) {
    const auto r = uniqueness_certify(17.0 / 35, 100);
    os << r.route << ", " << r.diagnostics;
    return r.certified;
  });
}

inline CheckResult error_column(const VerifyOptions&) {
  return detail::timed("error_estimate_column", 1.0, [&](std::ostream& os) {
    bool ok = true;
    for (const auto& [n, published] : {std::pair{100, 6.95e-4}, std::pair{200, 5.60e-15}, std::pair{300, 3.39e-26}}) {
      const double e = nystrom_error_estimate(ErrorBudget::width3_near_root(n));
      os << "n=" << n << ": " << e << ' ';
      ok = ok && std::abs(e / published - 1) <= 0.03;
    }
    return ok;
  });
}

inline CheckResult nonprimitive_bound(const VerifyOptions&) {
  return detail::timed("nonprimitive_bound", 1.0, [&](std::ostream& os) {
    const auto r = np_upper_bound(4 * std::log2((1 + std::sqrt(5.0)) / 2));
    os.precision(12);
    os << "bound " << r.bound << " at " << r.argmax;
    return std::abs(r.bound - 4.735820221) <= 1e-8 && std::abs(r.argmax - 0.83206855) <= 1e-6;
  });
}

inline CheckResult phi_series_agreement(const VerifyOptions&) {
  return detail::timed("phi_residue_vs_series", 60.0, [&](std::ostream& os) {
    PrecisionScope p(30);
    const auto phi = Phi_series(40);
    HighReal worst = 0;
    for (const char* xs : {"0.05", "0.1", "0.15", "0.2"})
      for (const char* ts : {"0", "0.125", "0.3", "0.5", "0.77"}) {
        const HighReal x(xs);
        const auto t = circle_point(HighReal(ts));
        worst = max(worst, (eval_Phi(x, t) - phi.eval(x, t)).abs());
      }
    os << "max difference " << static_cast<double>(worst);
    return worst < HighReal("1e-10");
  });
}

inline CheckResult psi_series_coefficients(const VerifyOptions&) {
  return detail::timed("psi_series_through_x7", 60.0, [&](std::ostream& os) {
    // the residue formula minus the series through x^7 must be O(x^8)
    PrecisionScope p(60);
    const auto psi = Psi_series(7);
    double worst = 0;
    for (const char* xs : {"1e-3", "5e-4"})
      for (const char* ts : {"0", "0.2", "0.45", "0.81"}) {
        const HighReal x(xs);
        const auto t = circle_point(HighReal(ts));
        const HighReal d = (eval_Psi(x, t) - psi.eval(x, t)).abs();
        worst = std::max(worst, static_cast<double>(d / pow(x, 8)));
      }
    const bool low_order = psi[4] == LaurentPoly{{-1, -1}} && psi[5] == LaurentPoly{{1, -1}};
    os << "max |remainder| / x^8 = " << worst;
    return low_order && worst < 1e3;
  });
}

inline CheckResult nystrom_conjugate_symmetry(const VerifyOptions& o) {
  return detail::timed("nystrom_conjugate_symmetry", 60.0, [&](std::ostream& os) {
    PrecisionScope p(30);
    const auto s = nystrom_solve(HighReal("0.47"), 100, o.threads);
    HighReal worst = 0;
    for (int j = 1; j < 100; ++j) worst = max(worst, (s.phi[100 - j] - s.phi[j].conj()).abs());
    os << "max |phi(-tau) - conj phi(tau)| = " << static_cast<double>(worst);
    return worst < HighReal("1e-25") && abs(s.H().im) < HighReal("1e-25");
  });
}

inline CheckResult h_monotone(const VerifyOptions& o) {
  return detail::timed("H_monotone", 60.0, [&](std::ostream& os) {
    double prev = -1;
    for (int i = 0; i <= 50; ++i) {
      const double x = (17.0 / 35) * i / 50;
      const double h = H_eval(x, 100, o.threads);
      if (!(h > prev) && i > 0) {
        os << "H not increasing at x = " << x;
        return false;
      }
      prev = h;
    }
    os << "increasing on 51 points of [0, 17/35], H(17/35) = " << prev;
    return true;
  });
}

/// Log-convexity f(m,n-1) f(m,n+1) >= f(m,n)^2 on computed columns and on
/// every cached triple.
inline CheckResult log_convexity(const VerifyOptions& o) {
  return detail::timed("log_convexity", 120.0, [&](std::ostream& os) {
    CountOptions co;
    co.threads = o.threads;
    std::size_t triples = 0;
    const std::vector<std::pair<std::int64_t, std::int64_t>> columns{{1, 30}, {2, 20}, {3, 12}, {4, 8}, {5, 5}};
    for (const auto& [m, nmax] : columns) {
      const auto col = count_rectangle_column(m, nmax, co);
      for (bool b : convexity_check(col)) {
        if (!b) {
          os << "fails in column m = " << m;
          return false;
        }
        ++triples;
      }
      if (o.cache)
        for (std::int64_t n = 1; n <= nmax; ++n) o.cache->append(m, n, col[static_cast<std::size_t>(n)]);
    }
    if (o.cache) {
      const auto all = o.cache->load();
      auto get = [&](std::int64_t m, std::int64_t n) -> std::optional<BigCount> {
        if (n == 0) return BigCount(1);
        auto it = all.find(m <= n ? std::pair{m, n} : std::pair{n, m});
        if (it == all.end()) return std::nullopt;
        return it->second;
      };
      for (const auto& [key, v] : all)
        for (const auto& [m, n] : {key, std::pair{key.second, key.first}}) {
          const auto a = get(m, n - 1), c = get(m, n + 1);
          if (!a || !c) continue;
          if (*a * *c < v * v) {
            os << "cached values fail at (" << m << ',' << n << ')';
            return false;
          }
          ++triples;
        }
    }
    os << triples << " triples checked";
    return true;
  });
}

inline CheckResult thread_determinism(const VerifyOptions&) {
  return detail::timed("thread_determinism", 120.0, [&](std::ostream& os) {
    CountOptions one, four;
    four.threads = 4;
    bool ok = count_rectangle(4, 4, {}, one) == count_rectangle(4, 4, {}, four);
    ok = ok && count_rectangle(3, 5, CountMode::modular(), one) == count_rectangle(3, 5, CountMode::modular(), four);
    const auto a = nystrom_solve(0.47, 64, 1), b = nystrom_solve(0.47, 64, 4);
    for (std::size_t i = 0; i < a.phi.size(); ++i) ok = ok && a.phi[i].re == b.phi[i].re && a.phi[i].im == b.phi[i].im;
    os << (ok ? "identical results with 1 and 4 threads" : "results depend on the thread count");
    return ok;
  });
}

}  // namespace checks

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> s{"oracle", "tables", "series", "bounds", "convexity", "constants", "all"};
  return s;
}

/// Runs a named suite. Checks that would start after `max_seconds` have
/// elapsed are reported as skipped.
inline std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& o) {
  using Check = std::function<CheckResult()>;
  std::vector<std::pair<std::string, Check>> list;
  auto add = [&](const std::string& name, CheckResult (*f)(const VerifyOptions&)) {
    list.emplace_back(name, [f, &o] { return f(o); });
  };
  const bool all = suite == "all";
  if (all || suite == "oracle") {
    add("binomial_family", checks::binomial_family);
    add("oracle_equivalence", checks::oracle_equivalence);
  }
  if (all || suite == "tables") {
    for (const auto& g : reference::golden_counts())
      list.emplace_back("golden_f(" + std::to_string(g.m) + ',' + std::to_string(g.n) + ')',
                        [g, &o] { return checks::golden_entry(g, o); });
    add("capacities", checks::capacities);
    add("crt_reconstruction", checks::crt_path);
    add("transpose_f(5,6)=f(6,5)", checks::transpose_cross_check);
  }
  if (all || suite == "series") {
    add("width2_constant", checks::width2_closed_form);
    add("series_identities", checks::series_identities);
    add("nonprimitive_bound", checks::nonprimitive_bound);
    add("phi_residue_vs_series", checks::phi_series_agreement);
    add("psi_series_through_x7", checks::psi_series_coefficients);
  }
  if (all || suite == "bounds") {
    add("certification_constants", checks::certification_constants);
    add("error_estimate_column", checks::error_column);
    add("uniqueness", checks::uniqueness);
    add("grid_certificates", checks::grid_certificates);
    add("nystrom_conjugate_symmetry", checks::nystrom_conjugate_symmetry);
    add("H_monotone", checks::h_monotone);
  }
  if (all || suite == "convexity") add("log_convexity", checks::log_convexity);
  if (all || suite == "constants") {
    list.emplace_back("width3_constant_n100", [&o] { return checks::width3_constant(100, 24, 9, 30, o); });
    if (o.allow_long)
      list.emplace_back("width3_constant_n400", [&o] { return checks::width3_constant(400, 60, 40, 600, o); });
  }
  if (all) add("thread_determinism", checks::thread_determinism);
  if (list.empty()) throw std::invalid_argument("unknown suite: " + suite);

  std::vector<CheckResult> out;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [name, check] : list) {
    const double spent = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (spent > o.max_seconds) {
      CheckResult r;
      r.name = name;
      r.skipped = true;
      r.passed = true;
      r.detail = "skipped: time budget spent";
      out.push_back(r);
      continue;
    }
    out.push_back(check());
  }
  return out;
}

}  // namespace lattri
