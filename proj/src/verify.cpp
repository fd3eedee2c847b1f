#include "eaton/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "eaton/analysis.hpp"
#include "eaton/json_io.hpp"
#include "eaton/predictor.hpp"
#include "eaton/sl2.hpp"

namespace eaton {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mtx;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(error_mtx);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double ratio_of(double hi, double lo) {
  if (lo < 1e-12) return hi < 1e-12 ? 1.0 : std::numeric_limits<double>::infinity();
  return hi / lo;
}

SL2Z example_matrix() { return word_to_matrix(parse_word("R^3 L")); }

TorusPoint example_point() { return {Rat(1, 3), Rat(0)}; }

// ---------------------------------------------------------------- A1

CriterionResult a1_symbolic() {
  CriterionResult r{"A1", "symbolic prediction for the R=1/3 periodic example",
                    false, false, ""};
  const auto t0 = std::chrono::steady_clock::now();
  const BandPrediction p =
      predict_band_periodic(example_point(), example_matrix(), 1.0 / 3.0);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();

  const PSL2Z expected_induced{SL2Z{1, 1, 1, 2}};
  const double expected_slope = -(std::sqrt(21.0) + 3.0 * std::sqrt(5.0)) / 4.0;

  const bool induced_ok =
      p.induced_class.has_value() && *p.induced_class == expected_induced;
  const bool slope_ok =
      p.slope.has_value() && std::abs(*p.slope - expected_slope) < 1e-9;
  const bool fast = ms < 1000.0;
  r.passed = induced_ok && slope_ok && fast;
  std::ostringstream os;
  os << "induced=[[1,1],[1,2]] " << (induced_ok ? "ok" : "MISMATCH")
     << ", slope=" << fmt(p.slope ? *p.slope : 0.0) << " vs " << fmt(expected_slope)
     << ", runtime=" << fmt(ms) << "ms";
  r.details = os.str();
  return r;
}

// ------------------------------------------------------------- A2 / A3

struct Ex54Stats {
  double supF5 = 0, supF6 = 0;
  double wp5 = 0, wp6 = 0;
  double wr5 = 0, wr6 = 0;
  int singular = 0;
};

std::pair<CriterionResult, CriterionResult> a23_confinement(
    const VerifyOptions& opt) {
  CriterionResult r2{"A2", "band confinement on the periodic example ensemble",
                     false, false, ""};
  CriterionResult r3{"A3", "10-degree rotated direction leaks transversally",
                     false, false, ""};

  const double R = 1.0 / 3.0;
  const SceneConfig cfg =
      SceneConfig::make(named_lattice("example54"), R, Model::Flat);
  const BandPrediction pred =
      predict_band_periodic(example_point(), example_matrix(), R);
  const Vec2 dir = pred.direction;
  const Vec2 dir_rot = Mat2::rotation(10.0 * M_PI / 180.0).apply(dir);
  const Vec2 ab = pred.bounded_functional;

  const int n_orbits = 100;
  const double t_hi = 1e6, t_mid = 1e5, sample_dt = 25.0;

  Rng rng(opt.seed);
  std::vector<Vec2> starts;
  while (static_cast<int>(starts.size()) < n_orbits) {
    const double y1 = rng.uniform(-0.5, 0.5);
    const double y2 = rng.uniform(-0.5, 0.5);
    const Vec2 p = cfg.basis.gamma_plus * y1 + cfg.basis.gamma_minus * y2;
    if (std::abs(p.y) < 1e-9 && std::abs(p.x) < R) continue;  // on the slit
    starts.push_back(p);
  }

  std::vector<Ex54Stats> stats(n_orbits);
  parallel_for(n_orbits, opt.threads, [&](std::size_t i) {
    const Trajectory tr = trace(cfg, starts[i], +1, t_hi, sample_dt, false);
    Ex54Stats s;
    const TileIndex m0 = tr.start.tile;
    const Vec2 origin = tr.start.pos;
    for (const Sample& sm : tr.samples) {
      const double dm1 = static_cast<double>(sm.tile.m1 - m0.m1);
      const double dm2 = static_cast<double>(sm.tile.m2 - m0.m2);
      const double F = std::abs(ab.x * dm1 + ab.y * dm2);
      const Vec2 rel = sm.position - origin;
      const double wp = std::abs(rel.cross(dir));
      const double wr = std::abs(rel.cross(dir_rot));
      if (sm.time <= t_mid) {
        s.supF5 = std::max(s.supF5, F);
        s.wp5 = std::max(s.wp5, wp);
        s.wr5 = std::max(s.wr5, wr);
      }
      s.supF6 = std::max(s.supF6, F);
      s.wp6 = std::max(s.wp6, wp);
      s.wr6 = std::max(s.wr6, wr);
    }
    s.singular = tr.singular_count;
    stats[i] = s;
  });

  int a2_fail = 0;
  int a3_pass = 0;
  int decade_pass = 0;
  double worst_gap = 0, worst_ratio = 0, min_specificity = 1e300;
  std::vector<double> decade_ratios;
  for (const Ex54Stats& s : stats) {
    const double gap = s.supF6 - s.supF5;
    const double wratio = ratio_of(s.wp6, s.wp5);
    if (!(gap <= 2.0 && wratio <= 1.5)) ++a2_fail;
    worst_gap = std::max(worst_gap, gap);
    worst_ratio = std::max(worst_ratio, wratio);
    // Direction specificity: the width measured against the rotated line vs
    // the width against the predicted line, same orbit, same horizon.
    const double specificity = ratio_of(s.wr6, s.wp6);
    min_specificity = std::min(min_specificity, specificity);
    if (specificity >= 3.0) ++a3_pass;
    // Decade growth of the rotated width, reported alongside: the sup grows
    // in renormalization bursts of factor ~2.618, so per-orbit single-decade
    // ratios scatter widely around the mean rate ~4.1.
    const double dr = ratio_of(s.wr6, s.wr5);
    decade_ratios.push_back(dr);
    if (dr >= 3.0) ++decade_pass;
  }
  std::sort(decade_ratios.begin(), decade_ratios.end());

  r2.passed = a2_fail == 0;
  {
    std::ostringstream os;
    os << n_orbits << " orbits, worst functional sup gap " << fmt(worst_gap)
       << " (<=2), worst width ratio " << fmt(worst_ratio) << " (<=1.5), "
       << a2_fail << " failures";
    r2.details = os.str();
  }
  r3.passed = a3_pass >= 90;
  {
    std::ostringstream os;
    os << a3_pass << "/" << n_orbits
       << " orbits with rotated/predicted width >= 3 (need 90); min "
       << fmt(min_specificity) << "; rotated-width decade ratios: median "
       << fmt(decade_ratios[n_orbits / 2]) << ", " << decade_pass
       << "/" << n_orbits << " above 3";
    r3.details = os.str();
  }
  return {r2, r3};
}

// ---------------------------------------------------------------- A4

CriterionResult a4_correspondence(const VerifyOptions& opt) {
  CriterionResult r{"A4", "flat/round orbits stay within 2R on random scenes",
                    false, false, ""};
  Rng rng(opt.seed + 4);
  const int n_scenes = 50;
  int failures = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::string first_error;
  for (int i = 0; i < n_scenes; ++i) {
    const double R = rng.uniform(0.05, 0.3);
    const Lattice2 L = random_admissible_lattice(rng, R);
    const SceneConfig cf = SceneConfig::make(L, R, Model::Flat);
    const SceneConfig ce = SceneConfig::make(L, R, Model::Eaton);
    const Vec2 start = random_start_in_domain(rng, ce);
    try {
      const double d = compare_models(cf, ce, start, 1e4);
      worst = std::max(worst, d - 2.0 * R);
      if (!(d <= 2.0 * R + 1e-12)) ++failures;
    } catch (const Error& e) {
      ++failures;
      if (first_error.empty()) first_error = e.what();
    }
  }
  r.passed = failures == 0;
  std::ostringstream os;
  os << n_scenes << " scenes, worst sup-(2R) margin " << fmt(worst) << ", "
     << failures << " failures";
  if (!first_error.empty()) os << "; first error: " << first_error;
  r.details = os.str();
  return r;
}

// ---------------------------------------------------------------- A5

SL2Z random_sl2(Rng& rng, int max_letters, int max_exp) {
  for (;;) {
    try {
      GenWord w;
      const int len = 1 + static_cast<int>(rng.uniform_int(0, max_letters - 1));
      Gen g = rng.coin() ? Gen::HPlus : Gen::HMinus;
      for (int i = 0; i < len; ++i) {
        const std::int64_t e =
            (1 + rng.uniform_int(0, max_exp - 1)) * (rng.coin() ? 1 : -1);
        w.push_back({g, e});
        g = g == Gen::HPlus ? Gen::HMinus : Gen::HPlus;
      }
      return word_to_matrix(w);
    } catch (const Overflow&) {
    }
  }
}

TorusPoint random_torus_point(Rng& rng) {
  // Odd denominators keep the orbit off the degenerate half-integer seam.
  for (;;) {
    const std::int64_t d = 2 * rng.uniform_int(1, 20) + 1;
    const std::int64_t nx = rng.uniform_int(-(d - 1) / 2, (d - 1) / 2);
    const std::int64_t ny = rng.uniform_int(-(d - 1) / 2, (d - 1) / 2);
    if (nx == 0 && ny == 0) continue;
    return {Rat(nx, d), Rat(ny, d)};
  }
}

CriterionResult a5_algebraic(const VerifyOptions& opt) {
  CriterionResult r{"A5", "algebraic suites (words, cocycle, bases, tiles)",
                    false, false, ""};
  Rng rng(opt.seed + 5);
  std::ostringstream os;
  bool ok = true;

  {  // word decomposition round trip, exact
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const SL2Z g = random_sl2(rng, 10, 3);
      const WordDecomposition dec = decompose_word(g);
      const SL2Z m = word_to_matrix(dec.word);
      const SL2Z expect = dec.sign > 0 ? g : SL2Z{-g.a, -g.b, -g.c, -g.d, };
      if (!(m.a == expect.a && m.b == expect.b && m.c == expect.c &&
            m.d == expect.d))
        ++bad;
      for (std::size_t k = 1; k < dec.word.size(); ++k)
        if (dec.word[k].gen == dec.word[k - 1].gen) ++bad;
    }
    ok &= bad == 0;
    os << "word round-trips bad=" << bad;
  }

  {  // induced-action cocycle identity, exact in PSL
    int bad = 0;
    const PSL2Z id{SL2Z::identity()};
    for (int i = 0; i < 200; ++i) {
      const SL2Z g = random_sl2(rng, 6, 3);
      const TorusPoint u = random_torus_point(rng);
      const TorusPoint gu = torus_act(g, u);
      const SL2Z lhs =
          mul(induced_action(inverse(g), gu).rep(), induced_action(g, u).rep());
      if (!(PSL2Z(lhs) == id)) ++bad;
    }
    ok &= bad == 0;
    os << ", cocycle bad=" << bad;
  }

  {  // positive-basis postconditions on random admissible scenes
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
      const double R = rng.uniform(0.05, 0.35);
      const Lattice2 L = random_admissible_lattice(rng, R);
      const PositiveBasis B = positive_basis(L, R);
      const double bound = 1.0 / (2.0 * R);
      if (!(B.gamma_plus.y >= 0.0 && B.gamma_plus.y < bound &&
            B.gamma_minus.y > 0.0 && B.gamma_minus.y < bound))
        ++bad;
      if (std::abs(B.gamma_plus.cross(B.gamma_minus) - 1.0) > 1e-9) ++bad;
      // both original basis vectors must have integer coordinates in B
      const Mat2 Cinv =
          Mat2::from_columns(B.gamma_plus, B.gamma_minus).inverse();
      double imat[4];
      const Vec2 c1 = Cinv.apply(L.b1), c2 = Cinv.apply(L.b2);
      imat[0] = std::round(c1.x);
      imat[1] = std::round(c2.x);
      imat[2] = std::round(c1.y);
      imat[3] = std::round(c2.y);
      if (std::abs(c1.x - imat[0]) > 1e-6 || std::abs(c1.y - imat[2]) > 1e-6 ||
          std::abs(c2.x - imat[1]) > 1e-6 || std::abs(c2.y - imat[3]) > 1e-6)
        ++bad;
      else if (std::llabs(static_cast<std::int64_t>(imat[0] * imat[3] -
                                                    imat[1] * imat[2])) != 1)
        ++bad;
    }
    ok &= bad == 0;
    os << ", positive-basis bad=" << bad;
  }

  {  // tile reconstruction
    int bad = 0;
    for (int i = 0; i < 50; ++i) {
      const double R = rng.uniform(0.05, 0.35);
      const PositiveBasis B = positive_basis(random_admissible_lattice(rng, R), R);
      for (int k = 0; k < 20; ++k) {
        const Vec2 x{rng.uniform(-50, 50), rng.uniform(-50, 50)};
        const auto [m, y] = tile_index(x, B);
        if (!(y.x >= -0.5 && y.x < 0.5 && y.y >= -0.5 && y.y < 0.5)) ++bad;
        const Vec2 rec = B.point(m.m1, m.m2) + B.gamma_plus * y.x +
                         B.gamma_minus * y.y;
        if ((rec - x).norm() > 1e-9 * (1.0 + x.norm())) ++bad;
      }
    }
    ok &= bad == 0;
    os << ", tile bad=" << bad;
  }

  r.passed = ok;
  r.details = os.str();
  return r;
}

// ---------------------------------------------------------------- A6

CriterionResult a6_deviation(const VerifyOptions& opt) {
  CriterionResult r{"A6", "deviation-exponent diagnostic (soft)", false, true, ""};
  Rng rng(opt.seed + 26);
  const double R = 0.2;
  const Lattice2 L = random_admissible_lattice(rng, R);
  const SceneConfig cfg = SceneConfig::make(L, R, Model::Flat);
  const int n_orbits = 20;
  std::vector<Vec2> starts;
  for (int i = 0; i < n_orbits; ++i)
    starts.push_back(random_start_in_domain(rng, cfg));

  std::vector<double> slopes(n_orbits, std::numeric_limits<double>::quiet_NaN());
  parallel_for(n_orbits, opt.threads, [&](std::size_t i) {
    const Trajectory tr = trace(cfg, starts[i], +1, 1e6, 10.0, false);
    try {
      slopes[i] = deviation_exponent(tr).slope;
    } catch (const InsufficientData&) {
    }
  });

  std::vector<double> good;
  for (double s : slopes)
    if (std::isfinite(s)) good.push_back(s);
  std::sort(good.begin(), good.end());
  double median = std::numeric_limits<double>::quiet_NaN();
  if (!good.empty()) {
    const std::size_t n = good.size();
    median = n % 2 ? good[n / 2] : 0.5 * (good[n / 2 - 1] + good[n / 2]);
  }
  r.passed = good.size() >= 10 && median >= 0.35 && median <= 0.65;
  std::ostringstream os;
  os << "median slope " << fmt(median) << " over " << good.size()
     << " orbits (target [0.35, 0.65]; diagnostic only)";
  r.details = os.str();
  return r;
}

// ---------------------------------------------------------------- A7

CriterionResult a7_threshold() {
  CriterionResult r{"A7", "hexagonal admissibility brackets the packing bound",
                    false, false, ""};
  const Lattice2 hex = named_lattice("hexagonal");
  const bool lo = is_admissible(hex, 0.53);
  const bool hi = is_admissible(hex, 0.54);
  r.passed = lo && !hi;
  std::ostringstream os;
  os << "R=0.53 admissible=" << (lo ? "yes" : "no")
     << ", R=0.54 admissible=" << (hi ? "yes" : "no") << ", threshold "
     << fmt(1.0 / std::sqrt(2.0 * std::sqrt(3.0)));
  r.details = os.str();
  return r;
}

// ---------------------------------------------------------------- A8

CriterionResult a8_hand_orbit() {
  CriterionResult r{"A8", "hand-checked two-event cycle and 2R distance",
                    false, false, ""};
  bool ok = true;
  std::ostringstream os;

  const Lattice2 sq = named_lattice("square");
  const double R = 0.25;
  const Vec2 start{0.1, 0.05};
  const double s_ord = std::sqrt(0.0525);

  const SceneConfig cf = SceneConfig::make(sq, R, Model::Flat);
  const Trajectory tf = trace(cf, start, +1, 10.0, 0.5);
  ok &= tf.events.size() == 10;  // events at t = 0.95, 1.95, ..., 9.95
  for (std::size_t i = 0; ok && i < tf.events.size(); ++i) {
    const Event& e = tf.events[i];
    ok &= e.kind == EventKind::SlitHit;
    const bool even = i % 2 == 0;
    const Vec2 expect_pos = even ? Vec2{0.1, 1.0} : Vec2{-0.1, 0.0};
    const TileIndex expect_lp = even ? TileIndex{0, 1} : TileIndex{0, 0};
    ok &= (e.position - expect_pos).norm() < 1e-12;
    ok &= e.lattice_point == expect_lp;
    ok &= std::abs(e.time - (0.95 + static_cast<double>(i))) < 1e-12;
  }
  for (const Sample& sm : tf.samples)
    ok &= sm.tile.m1 == 0 && (sm.tile.m2 == 0 || sm.tile.m2 == 1);
  os << "flat events=" << tf.events.size();

  const SceneConfig ce = SceneConfig::make(sq, R, Model::Eaton);
  const Trajectory te = trace(ce, start, +1, 10.0, 0.5);
  ok &= te.events.size() >= 4;
  if (te.events.size() >= 4) {
    const Event& e0 = te.events[0];
    const Event& e1 = te.events[1];
    const Event& e2 = te.events[2];
    ok &= e0.kind == EventKind::LensEntry &&
          (e0.position - Vec2{0.1, 1.0 - s_ord}).norm() < 1e-12 &&
          e0.lattice_point == TileIndex{0, 1};
    ok &= e1.kind == EventKind::LensExit &&
          (e1.position - Vec2{-0.1, 1.0 - s_ord}).norm() < 1e-12;
    ok &= e2.kind == EventKind::LensEntry &&
          (e2.position - Vec2{-0.1, s_ord}).norm() < 1e-12 &&
          e2.lattice_point == TileIndex{0, 0};
  }
  os << ", round entry ordinates 1-sqrt(.0525)=" << fmt(1.0 - s_ord) << " and "
     << fmt(s_ord);

  const double sup = compare_models(cf, ce, start, 10.0);
  ok &= std::abs(sup - 0.2) < 1e-12;
  os << ", sup distance " << fmt(sup) << " (expect 0.2)";

  r.passed = ok;
  r.details = os.str();
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"example54",    "correspondence", "algebraic", "deviation",
          "admissibility", "hand-orbit",    "all"};
}

std::vector<CriterionResult> run_suite(const std::string& name,
                                       const VerifyOptions& opt) {
  std::vector<CriterionResult> out;
  const bool all = name == "all";
  if (all || name == "example54") {
    out.push_back(a1_symbolic());
    auto [r2, r3] = a23_confinement(opt);
    out.push_back(std::move(r2));
    out.push_back(std::move(r3));
  }
  if (all || name == "correspondence") out.push_back(a4_correspondence(opt));
  if (all || name == "algebraic") out.push_back(a5_algebraic(opt));
  if (all || name == "deviation") out.push_back(a6_deviation(opt));
  if (all || name == "admissibility") out.push_back(a7_threshold());
  if (all || name == "hand-orbit") out.push_back(a8_hand_orbit());
  if (out.empty()) throw Error("unknown verification suite \"" + name + "\"");
  return out;
}

bool all_hard_passed(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results)
    if (!r.soft && !r.passed) return false;
  return true;
}

Lattice2 random_unimodular_lattice(Rng& rng) {
  const double shear = rng.uniform(-1.0, 1.0);
  const double stretch = rng.uniform(0.0, 0.75);
  const double angle = rng.uniform(0.0, M_PI);
  const Mat2 M = Mat2::rotation(angle) *
                 Mat2{std::exp(stretch), 0.0, 0.0, std::exp(-stretch)} *
                 Mat2{1.0, shear, 0.0, 1.0};
  return {M.col1(), M.col2()};
}

Lattice2 random_admissible_lattice(Rng& rng, double R) {
  for (int i = 0; i < 100000; ++i) {
    const Lattice2 L = random_unimodular_lattice(rng);
    if (is_admissible(L, R)) return L;
  }
  throw Error("random_admissible_lattice: rejection sampling failed");
}

Vec2 random_start_in_domain(Rng& rng, const SceneConfig& cfg) {
  const double R = cfg.radius;
  for (int tries = 0; tries < 100000; ++tries) {
    const double y1 = rng.uniform(-0.5, 0.5);
    const double y2 = rng.uniform(-0.5, 0.5);
    const Vec2 p = cfg.basis.gamma_plus * y1 + cfg.basis.gamma_minus * y2;
    bool bad = false;
    visit_coefficient_hull(
        cfg.basis.gamma_plus, cfg.basis.gamma_minus, p.x - 1.5 * R,
        p.x + 1.5 * R, p.y - 1.5 * R, p.y + 1.5 * R,
        [&](std::int64_t, std::int64_t, Vec2 q) {
          if (cfg.model == Model::Eaton) {
            if ((q - p).norm() < R * 1.02) bad = true;
          } else {
            if (std::abs(q.y - p.y) < 1e-6 && std::abs(q.x - p.x) < R * 1.02)
              bad = true;
          }
        });
    if (!bad) return p;
  }
  throw Error("random_start_in_domain: rejection sampling failed");
}

}  // namespace eaton
