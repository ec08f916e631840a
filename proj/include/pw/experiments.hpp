#pragma once

/// \file
/// Cavity bookkeeping and the canned experiment drivers: crossing
/// detection/statistics over trajectories, parameter sweeps, the single-
/// impact wave-shape check and the free-dispersion check.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pw/config.hpp"
#include "pw/dynamics.hpp"
#include "pw/topography.hpp"

namespace pw {

/// Connected deep regions of a topography. Labels are 1-based and assigned
/// in row-major order of each component's first cell, so numbering is
/// deterministic for a given field. Label 0 is barrier/exterior.
struct cavity_map {
	grid g;
	std::vector<int> label;  // per cell, 0 = not a cavity
	int count = 0;
	double threshold = 0.0;
	// unordered adjacent pairs (i < j): cavities facing each other across a
	// barrier along a grid axis
	std::vector<std::pair<int, int>> adjacency;

	int label_at(double x, double y) const;
	bool adjacent(int a, int b) const;
};

/// 4-connected components of {H > threshold} with periodic wrap. The
/// threshold must lie strictly inside the field's depth range unless the
/// field is uniform (then the whole grid is one cavity).
cavity_map label_cavities(const topography &topo, double threshold);

/// `requested` if nonzero, else the midpoint of the field's depth range.
double resolve_cavity_threshold(const topography &topo, double requested);

struct crossing_event {
	double t = 0.0;
	int from = 0;
	int to = 0;
	double x = 0.0, y = 0.0;
	bool diagonal = false; // pair not in the adjacency list
};

/// debounce window (Faraday periods) applied between committed crossings
inline constexpr double k_crossing_debounce = 1.0;

/// Scan a sampled trajectory for cavity changes. Two samples with distinct
/// nonzero labels commit a crossing; label changes within the debounce
/// window of the last committed event are suppressed (boundary jitter
/// yields one event, not many). Barrier samples attribute the crossing to
/// the surrounding nonzero labels.
std::vector<crossing_event> detect_crossings(const std::vector<trajectory_row> &rows,
                                             const cavity_map &map);

struct edge_count {
	int from = 0, to = 0; // normalized from < to
	std::size_t count = 0;
	bool diagonal = false;
};

struct occupancy_stats {
	std::map<int, double> dwell;      // per-cavity time in Faraday periods
	std::vector<edge_count> edges;
	std::size_t total_crossings = 0;
	double span = 0.0;                // trajectory length in Faraday periods
	double crossing_rate_per_min = 0.0;
	double mean_speed_last10 = 0.0;
};

/// Aggregate dwell times, per-edge counts and the per-minute crossing rate
/// (via the dimensional Faraday period in groups.t_f_seconds).
occupancy_stats occupancy(const std::vector<trajectory_row> &rows,
                          const std::vector<crossing_event> &events,
                          const cavity_map &map, const nondim_groups &groups);

enum class sweep_axis { gamma, well_width, barrier_width, depth_ratio };

struct sweep_point {
	double value = 0.0;
	bool failed = false;
	std::string error;
	double mean_speed = 0.0;
	double crossing_rate_per_min = 0.0;
	std::size_t crossings = 0;
	occupancy_stats stats;
	std::string out_dir;
};

struct sweep_result {
	sweep_axis axis = sweep_axis::gamma;
	std::vector<sweep_point> points; // input order preserved
};

sweep_axis parse_sweep_axis(const std::string &name);
std::string sweep_axis_name(sweep_axis axis);

/// Run one simulation per axis value (other parameters fixed, same seed for
/// every run so the result is permutation-invariant in `values`). Runs fan
/// out over a small worker pool; a failed run marks its point and the sweep
/// continues. Artifacts land in numbered subdirectories of out_dir.
sweep_result sweep(const sim_config &base, sweep_axis axis,
                   const std::vector<double> &values, const std::string &out_dir);

struct impact_report {
	bool no_wave = false;        // nothing was excited (zero-forcing control)
	double asymmetry = 0.0;      // max |eta - eta rotated 90 degrees|
	double crest_spacing = 0.0;  // radial distance between first two crests
	double crest_r1 = 0.0, crest_r2 = 0.0;
	std::string snapshot_path;
};

/// Drop a single impact at the domain center on a flat bath, evolve for
/// `periods`, and measure the ring pattern: fourfold symmetry and the
/// spacing of the first two radial crests (in Faraday wavelengths).
impact_report impact_test(const sim_config &cfg, double periods,
                          const std::string &out_dir);

struct dispersion_mode_result {
	double kx = 0.0, ky = 0.0;
	double k_abs = 0.0;
	double omega_analytic = 0.0;
	double omega_measured = 0.0;
	double rel_error = 0.0;
	bool blew_up = false;
};

struct dispersion_report {
	std::vector<dispersion_mode_result> modes;
	double max_rel_error = 0.0;
	bool any_blowup = false;
};

/// Undamped free-wave frequency check: seed one mode at a time on a flat
/// bath (no droplet, no parametric forcing, viscosity off), time the
/// oscillation by interpolated zero crossings, compare with the analytic
/// gravity-capillary frequency. Exponential growth is reported per mode
/// instead of a frequency (the wrong-sign negative control).
dispersion_report dispersion_test(const sim_config &cfg,
                                  const std::vector<std::pair<int, int>> &mode_indices,
                                  double periods_per_mode);

} // namespace pw
