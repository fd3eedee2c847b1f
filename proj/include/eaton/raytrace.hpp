// Event-driven simulation of vertical light rays in the flat-slit plane and
// in the round retroreflector array. Positions are maintained as
// (tile index, local offset) so long runs do not lose precision.
#pragma once

#include <cstdint>
#include <vector>

#include "eaton/geom.hpp"
#include "eaton/lattice.hpp"

namespace eaton {

enum class Model { Flat, Eaton };

struct SceneConfig {
  Lattice2 lattice;
  double radius;
  Model model;
  double tol_singular = 1e-10;
  // Expanding event search: initial vertical window 4/(2R), doubled at most
  // this many times before SearchExhausted.
  int max_window_doublings = 30;
  PositiveBasis basis;  // working positive basis for tiles and event search

  // Validates the model constraint: flat requires disjoint slits, round
  // requires pairwise disjoint disks.
  static SceneConfig make(const Lattice2& L, double R, Model model,
                          double tol_singular = 1e-10);
};

struct RayState {
  Vec2 pos;
  int dir = +1;  // +1 up, -1 down
  double time = 0.0;
  TileIndex tile;
  int sheet = +1;
};

enum class EventKind {
  SlitHit,
  LensEntry,
  LensExit,
  CenterTurnback,
  SingularEndpoint,
};

struct Event {
  EventKind kind;
  Vec2 position;            // absolute plane position
  TileIndex lattice_point;  // integer coordinates in the scene basis
  double time;
};

struct Sample {
  double time;
  Vec2 position;
  TileIndex tile;
  int sheet;
};

struct Trajectory {
  SceneConfig config;
  RayState start;
  std::vector<Event> events;
  std::vector<Sample> samples;
  int singular_count = 0;

  bool singular() const { return singular_count > 0; }
};

// Next slit interaction of a flat-model ray: the slit column within R of the
// ray with the nearest center strictly ahead. An offset within tol_singular
// of R yields a SingularEndpoint. Throws NoHitWithinCap when the vertical
// strip provably contains no lattice point, SearchExhausted when the window
// cap is reached.
Event next_flat_event(const RayState& s, const SceneConfig& c);

// Point reflection through the slit center: x -> 2 lambda_x - x, direction
// and sheet flip, tile recomputed.
RayState reflect_flat(const RayState& s, const Event& e, const SceneConfig& c);

// Next lens interaction of a round-model ray: LensEntry at the first circle
// crossed, CenterTurnback on the lens axis, SingularEndpoint at tangency.
// Events lie strictly ahead; a state on a rim pointing inward (or inside a
// disk) does not interact with that disk and passes straight out.
Event next_eaton_event(const RayState& s, const SceneConfig& c);

// Applies the horizontal-chord rule: exit at the mirrored abscissa at the
// entry ordinate, direction reversed, zero transit time. exit_event is filled
// for regular entries and left untouched for turnbacks.
RayState reflect_eaton(const RayState& s, const Event& e, const SceneConfig& c,
                       Event* exit_event);

// Traces until the accumulated vertical travel reaches t_max, recording
// events, tile indices and position samples every sample_dt. Deterministic.
// Singular endpoints are passed through straight and counted, not fatal.
Trajectory trace(const SceneConfig& c, Vec2 start, int dir, double t_max,
                 double sample_dt, bool record_events = true);

// Radial refractive-index profile of the retroreflector lens: sqrt(2R/r - 1)
// inside, 1 outside; undefined at the center.
double refractive_index(double r, double R);

}  // namespace eaton
