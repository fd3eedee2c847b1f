#include "eaton/raytrace.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace eaton {

namespace {

// Precomputed per-scene search state. Event searches run in local tile
// coordinates; the reduced basis keeps the coefficient hull tight.
struct SearchContext {
  const SceneConfig* cfg;
  Vec2 gp, gm;  // tile basis (positive)
  Vec2 r1, r2;  // search basis (Lagrange reduced)
  Mat2 inv_search;
  std::int64_t u11, u12, u21, u22;  // search coords -> tile coords
  int udet;
  std::optional<double> projection_step;  // x-projection spacing when discrete
  double window0;

  explicit SearchContext(const SceneConfig& c)
      : cfg(&c),
        gp(c.basis.gamma_plus),
        gm(c.basis.gamma_minus),
        window0(2.0 / c.radius) {
    const Lattice2 red = gauss_reduce(c.lattice);
    r1 = red.b1;
    r2 = red.b2;
    inv_search = Mat2::from_columns(r1, r2).inverse();
    const Mat2 U =
        Mat2::from_columns(gp, gm).inverse() * Mat2::from_columns(r1, r2);
    const auto to_int = [](double v) {
      const double r = std::round(v);
      if (std::abs(v - r) > 1e-6)
        throw Error("SearchContext: bases do not generate the same lattice");
      return static_cast<std::int64_t>(r);
    };
    u11 = to_int(U.a);
    u12 = to_int(U.b);
    u21 = to_int(U.c);
    u22 = to_int(U.d);
    const std::int64_t du = u11 * u22 - u12 * u21;
    if (du != 1 && du != -1)
      throw Error("SearchContext: basis change is not unimodular");
    udet = static_cast<int>(du);
    projection_step = discrete_projection_step();
  }

  TileIndex to_tile(std::int64_t k1, std::int64_t k2) const {
    return {u11 * k1 + u12 * k2, u21 * k1 + u22 * k2};
  }

  // Inverse of to_tile; exact since |det U| = 1.
  std::pair<std::int64_t, std::int64_t> from_tile(TileIndex n) const {
    return {udet * (u22 * n.m1 - u12 * n.m2),
            udet * (u11 * n.m2 - u21 * n.m1)};
  }

  // Spacing of the lattice's x-projection when it is (numerically) a discrete
  // subgroup delta * Z; nullopt when the projection looks dense. Used to
  // prove a vertical strip empty. Errs toward "dense", which only costs a
  // search.
  std::optional<double> discrete_projection_step() const {
    const double px = gp.x;  // > 0 by the positive-basis region
    const double mx = gm.x;  // <= 0
    const double scale = std::max(1.0, std::abs(px));
    if (std::abs(mx) < 1e-14 * scale) return px;
    const double r = -mx / px;
    // Continued fraction convergents of r.
    double v = r;
    std::int64_t h0 = 1, h1 = static_cast<std::int64_t>(std::floor(v));
    std::int64_t k0 = 0, k1 = 1;
    v -= std::floor(v);
    for (int i = 0; i < 48; ++i) {
      const double approx = static_cast<double>(h1) / static_cast<double>(k1);
      if (std::abs(r - approx) <= 1e-12 * std::max(1.0, r)) {
        if (k1 > 1000000) return std::nullopt;
        return px / static_cast<double>(k1);
      }
      if (v < 1e-15) break;
      v = 1.0 / v;
      const double a = std::floor(v);
      if (a > 9.0e15) break;
      v -= a;
      const auto ai = static_cast<std::int64_t>(a);
      const std::int64_t h2 = ai * h1 + h0;
      const std::int64_t k2 = ai * k1 + k0;
      if (k2 > 2000000 || h2 < 0) break;
      h0 = h1;
      h1 = h2;
      k0 = k1;
      k1 = k2;
    }
    return std::nullopt;
  }

  bool strip_has_points(double x_center) const {
    if (!projection_step) return true;  // dense projection
    const double delta = *projection_step;
    // Widened by the singular tolerance: exact-endpoint columns still count,
    // they produce flagged pass-through events rather than NoHit.
    const double lo = x_center - cfg->radius - cfg->tol_singular;
    const double hi = x_center + cfg->radius + cfg->tol_singular;
    const double eps =
        1e-12 * (1.0 + std::abs(lo / delta) + std::abs(hi / delta));
    const double n = std::floor(hi / delta - eps);
    return n * delta > lo + eps * delta;
  }
};

struct Hit {
  bool found = false;
  EventKind kind = EventKind::SlitHit;
  double dy = 0.0;       // strictly positive travel to the event
  double event_y = 0.0;  // ordinate in local coordinates
  Vec2 lambda;           // lattice point, local coordinates
  std::int64_t k1 = 0, k2 = 0;  // search-basis coordinates
};

struct Exclude {
  bool active = false;
  std::int64_t k1 = 0, k2 = 0;
};

// Scans lattice points in the vertical band [from, to) ahead of q (distances
// along dir) and keeps the nearest admissible interaction.
void scan_band(const SearchContext& ctx, Vec2 q, int dir, double from,
               double to, const Exclude& skip, Hit& best) {
  const SceneConfig& c = *ctx.cfg;
  const double R = c.radius;
  const double tol = c.tol_singular;
  const bool eaton = c.model == Model::Eaton;
  // Offsets in (R - tol, R + tol) are near-endpoint/tangent passages and get
  // flagged in both models, so the strip is widened by tol on each side.
  const double xstrip = R + tol;
  const double pad = eaton ? R : 0.0;

  const double xpad = kPosTol * (1.0 + std::abs(q.x) + R);
  const double xlo = q.x - xstrip - xpad;
  const double xhi = q.x + xstrip + xpad;
  double ylo, yhi;
  if (dir > 0) {
    ylo = q.y + from - pad;
    yhi = q.y + to + pad;
  } else {
    ylo = q.y - to - pad;
    yhi = q.y - from + pad;
  }

  // Coefficient hull of the band in the reduced basis.
  const Vec2 corners[4] = {{xlo, ylo}, {xlo, yhi}, {xhi, ylo}, {xhi, yhi}};
  double lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
  for (int i = 0; i < 4; ++i) {
    const Vec2 cc = ctx.inv_search.apply(corners[i]);
    if (i == 0) {
      lo1 = hi1 = cc.x;
      lo2 = hi2 = cc.y;
    } else {
      lo1 = std::min(lo1, cc.x);
      hi1 = std::max(hi1, cc.x);
      lo2 = std::min(lo2, cc.y);
      hi2 = std::max(hi2, cc.y);
    }
  }
  const auto a1 = static_cast<std::int64_t>(std::ceil(lo1 - 1e-9));
  const auto b1 = static_cast<std::int64_t>(std::floor(hi1 + 1e-9));
  const auto a2 = static_cast<std::int64_t>(std::ceil(lo2 - 1e-9));
  const auto b2 = static_cast<std::int64_t>(std::floor(hi2 + 1e-9));

  for (std::int64_t k1 = a1; k1 <= b1; ++k1) {
    const double bx = ctx.r1.x * k1;
    const double by = ctx.r1.y * k1;
    for (std::int64_t k2 = a2; k2 <= b2; ++k2) {
      if (skip.active && k1 == skip.k1 && k2 == skip.k2) continue;
      const double px = bx + ctx.r2.x * k2;
      const double adx = std::abs(px - q.x);
      if (adx >= xstrip) continue;
      const double py = by + ctx.r2.y * k2;

      EventKind kind;
      double ey;
      if (adx > R - tol) {
        // Near the slit endpoint / circle tangency: flagged pass-through.
        kind = EventKind::SingularEndpoint;
        ey = py;
      } else if (eaton) {
        const double s = std::sqrt(R * R - adx * adx);
        kind = adx <= tol ? EventKind::CenterTurnback : EventKind::LensEntry;
        ey = py - dir * s;
      } else {
        kind = EventKind::SlitHit;
        ey = py;
      }

      const double dy = dir * (ey - q.y);
      if (!(dy > 0.0)) continue;  // strictly ahead
      if (best.found && dy >= best.dy) continue;
      best = {true, kind, dy, ey, Vec2{px, py}, k1, k2};
    }
  }
}

Hit find_next(const SearchContext& ctx, Vec2 q, int dir, const Exclude& skip) {
  if (!ctx.strip_has_points(q.x))
    throw NoHitWithinCap("event search: vertical strip contains no lattice point");
  const SceneConfig& c = *ctx.cfg;
  Hit best;
  double from = 0.0;
  double window = ctx.window0;
  double scanned_area = 0.0;
  for (int e = 0; e <= c.max_window_doublings; ++e) {
    scan_band(ctx, q, dir, from, window, skip, best);
    if (best.found && best.dy <= window) return best;
    scanned_area += 2.0 * c.radius * (window - from);
    if (scanned_area > 4.0e6)
      throw SearchExhausted("event search: scanned area cap exceeded");
    from = window;
    window *= 2.0;
  }
  if (best.found) return best;
  throw SearchExhausted("event search: window growth cap exceeded");
}

// A flat-model start on an open slit has no defined first motion and is
// rejected. A round-model start inside a disk is fine: the containing lens's
// entry rim lies behind the ray, so the trace runs straight out through the
// far rim, which is exactly the orbit correspondence outside the disks.
void validate_start(const SearchContext& ctx, Vec2 q) {
  const SceneConfig& c = *ctx.cfg;
  if (c.model != Model::Flat) return;
  const double R = c.radius;
  bool inside = false;
  visit_coefficient_hull(
      ctx.r1, ctx.r2, q.x - R - kPosTol, q.x + R + kPosTol, q.y - R - kPosTol,
      q.y + R + kPosTol, [&](std::int64_t, std::int64_t, Vec2 p) {
        if (std::abs(p.y - q.y) <= 1e-12 * (1.0 + std::abs(q.y)) &&
            std::abs(p.x - q.x) < R * (1.0 - kStrictRel))
          inside = true;
      });
  if (inside) throw Error("trace: start inside a slit");
}

}  // namespace

SceneConfig SceneConfig::make(const Lattice2& L, double R, Model model,
                              double tol_singular) {
  if (!(R > 0.0)) throw Error("SceneConfig: R must be positive");
  if (!(tol_singular > 0.0) || tol_singular >= R / 4.0)
    throw Error("SceneConfig: tol_singular must lie in (0, R/4)");
  if (model == Model::Flat) {
    if (!slits_disjoint(L, R))
      throw NotDisjoint("SceneConfig: slits overlap for this radius");
  } else {
    if (!is_admissible(L, R))
      throw NotAdmissible("SceneConfig: disks overlap for this radius");
  }
  return SceneConfig{L, R, model, tol_singular, 30, positive_basis(L, R)};
}

Event next_flat_event(const RayState& s, const SceneConfig& c) {
  if (c.model != Model::Flat) throw Error("next_flat_event: not a flat scene");
  const SearchContext ctx(c);
  const auto [m, yc] = tile_index(s.pos, c.basis);
  const Vec2 base = c.basis.point(m.m1, m.m2);
  const Hit hit = find_next(ctx, s.pos - base, s.dir, {});
  return {hit.kind, Vec2{s.pos.x, base.y + hit.event_y},
          m + ctx.to_tile(hit.k1, hit.k2), s.time + hit.dy};
}

RayState reflect_flat(const RayState& s, const Event& e, const SceneConfig& c) {
  if (e.kind != EventKind::SlitHit)
    throw Error("reflect_flat: event is not a slit hit");
  const Vec2 lambda = c.basis.point(e.lattice_point.m1, e.lattice_point.m2);
  const Vec2 pos{2.0 * lambda.x - e.position.x, e.position.y};
  const auto [tile, yc] = tile_index(pos, c.basis);
  return {pos, -s.dir, e.time, tile, -s.sheet};
}

Event next_eaton_event(const RayState& s, const SceneConfig& c) {
  if (c.model != Model::Eaton)
    throw Error("next_eaton_event: not a round scene");
  const SearchContext ctx(c);
  const auto [m, yc] = tile_index(s.pos, c.basis);
  const Vec2 base = c.basis.point(m.m1, m.m2);
  const Hit hit = find_next(ctx, s.pos - base, s.dir, {});
  return {hit.kind, Vec2{s.pos.x, base.y + hit.event_y},
          m + ctx.to_tile(hit.k1, hit.k2), s.time + hit.dy};
}

RayState reflect_eaton(const RayState& s, const Event& e, const SceneConfig& c,
                       Event* exit_event) {
  if (e.kind == EventKind::CenterTurnback) {
    const auto [tile, yc] = tile_index(e.position, c.basis);
    return {e.position, -s.dir, e.time, tile, -s.sheet};
  }
  if (e.kind != EventKind::LensEntry)
    throw Error("reflect_eaton: event is not a lens interaction");
  const Vec2 lambda = c.basis.point(e.lattice_point.m1, e.lattice_point.m2);
  const Vec2 pos{2.0 * lambda.x - e.position.x, e.position.y};
  if (exit_event != nullptr)
    *exit_event = {EventKind::LensExit, pos, e.lattice_point, e.time};
  const auto [tile, yc] = tile_index(pos, c.basis);
  return {pos, -s.dir, e.time, tile, -s.sheet};
}

Trajectory trace(const SceneConfig& c, Vec2 start, int dir, double t_max,
                 double sample_dt, bool record_events) {
  if (dir != 1 && dir != -1) throw Error("trace: dir must be +1 or -1");
  if (!(t_max >= 0.0)) throw Error("trace: t_max must be nonnegative");
  if (!(sample_dt > 0.0)) throw Error("trace: sample_dt must be positive");

  const SearchContext ctx(c);
  auto [m, yc0] = tile_index(start, c.basis);
  Vec2 q = start - c.basis.point(m.m1, m.m2);
  validate_start(ctx, q);

  int d = dir;
  int sheet = dir;
  double t = 0.0;

  Trajectory out{c, RayState{start, dir, 0.0, m, sheet}, {}, {}, 0};
  std::int64_t next_sample = 0;

  const auto emit_samples_until = [&](double t_target) {
    while (true) {
      const double ts = static_cast<double>(next_sample) * sample_dt;
      if (ts > t_target || ts > t_max) break;
      const Vec2 local{q.x, q.y + d * (ts - t)};
      const auto [dm, yc] = tile_index(local, c.basis);
      out.samples.push_back(
          {ts, c.basis.point(m.m1, m.m2) + local, m + dm, sheet});
      ++next_sample;
    }
  };

  // The lattice point of the last interaction is excluded from the next
  // search: its recomputed ordinate can differ from q.y by an ulp after tile
  // renormalization, which would otherwise produce a spurious dy ~ 1e-17
  // re-hit.
  Exclude skip;

  while (t < t_max) {
    const Hit hit = find_next(ctx, q, d, skip);
    if (t + hit.dy > t_max) {
      emit_samples_until(t_max);
      q = {q.x, q.y + d * (t_max - t)};
      t = t_max;
      break;
    }
    emit_samples_until(t + hit.dy);
    t += hit.dy;

    const Vec2 base = c.basis.point(m.m1, m.m2);
    const TileIndex lp = m + ctx.to_tile(hit.k1, hit.k2);

    switch (hit.kind) {
      case EventKind::SlitHit: {
        if (record_events)
          out.events.push_back(
              {EventKind::SlitHit, base + Vec2{q.x, hit.event_y}, lp, t});
        q = {2.0 * hit.lambda.x - q.x, hit.event_y};
        d = -d;
        sheet = -sheet;
        break;
      }
      case EventKind::SingularEndpoint: {
        // Pass straight through the endpoint; flag only.
        if (record_events)
          out.events.push_back({EventKind::SingularEndpoint,
                                base + Vec2{q.x, hit.event_y}, lp, t});
        ++out.singular_count;
        q = {q.x, hit.event_y};
        break;
      }
      case EventKind::CenterTurnback: {
        if (record_events)
          out.events.push_back({EventKind::CenterTurnback,
                                base + Vec2{q.x, hit.event_y}, lp, t});
        q = {q.x, hit.event_y};
        d = -d;
        sheet = -sheet;
        break;
      }
      case EventKind::LensEntry: {
        // Entry and exit share a timestamp: internal transit is free.
        const Vec2 exit{2.0 * hit.lambda.x - q.x, hit.event_y};
        if (record_events) {
          out.events.push_back(
              {EventKind::LensEntry, base + Vec2{q.x, hit.event_y}, lp, t});
          out.events.push_back({EventKind::LensExit, base + exit, lp, t});
        }
        q = exit;
        d = -d;
        sheet = -sheet;
        break;
      }
      case EventKind::LensExit:
        throw Error("trace: unexpected event kind");
    }

    // Renormalize the tile and carry the exclusion into the new frame.
    const auto [dm, yc] = tile_index(q, c.basis);
    if (dm.m1 != 0 || dm.m2 != 0) {
      m = m + dm;
      q = q - c.basis.point(dm.m1, dm.m2);
    }
    const auto [ek1, ek2] = ctx.from_tile(lp - m);
    skip = {true, ek1, ek2};
  }

  emit_samples_until(t_max);
  return out;
}

double refractive_index(double r, double R) {
  if (!(R > 0.0)) throw Error("refractive_index: R must be positive");
  if (!(r > 0.0))
    throw NonPositiveRadius("refractive_index: undefined at the lens center");
  if (r > R) return 1.0;
  return std::sqrt(2.0 * R / r - 1.0);
}

}  // namespace eaton
