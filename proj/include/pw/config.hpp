#pragma once

/// \file
/// Flat key=value run configuration: parsing, validation hooks, presets and
/// the canonical resolved echo that accompanies every run's artifacts.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pw/dynamics.hpp"
#include "pw/params.hpp"
#include "pw/topography.hpp"

namespace pw {

enum class topo_kind { flat, cavities, file };

struct droplet_config {
	bool enabled = false;
	double x = -1.0, y = -1.0; // negative = center of the domain
	double vx = 0.0, vy = 0.0;
	double impact_phase = 0.0;
	double v_jitter = 0.0; // amplitude of the seeded initial-velocity jitter
};

struct run_controls {
	double t_max = 50.0;          // run length in Faraday periods
	std::uint64_t seed = 1;
	std::size_t snapshot_stride = 0; // periods between snapshots, 0 = ends only
	double cavity_threshold = 0.0;   // 0 = midpoint of the depth range
	std::string out_dir = "out";
};

struct sim_config {
	fluid_params fluid;
	forcing_params forcing;
	double gamma_threshold_hint = 0.0; // 0 = no supercriticality warning

	double domain_size = 8.0;     // L, Faraday wavelengths
	std::size_t resolution = 64;  // N, power of two >= 8
	double depth = 0.0;           // reference bath depth [m], required
	topo_kind topo = topo_kind::flat;
	std::string topo_file;
	cavity_spec cavity;

	step_config numerics; // includes m_galerkin and the depth convention

	droplet_config droplet;
	run_controls run;

	std::string source_name; // file the config came from, for messages
};

/// Parse a config file. Unknown keys, duplicate keys (both line numbers are
/// named), malformed values and missing required keys all raise
/// config_error. A `preset` key is expanded first; explicit keys override
/// the preset regardless of file order.
sim_config load_config(const std::string &path);
sim_config parse_config(const std::string &text, const std::string &name);

/// Canonical echo with every effective key explicit, in fixed order.
std::string resolved_config_text(const sim_config &cfg);

/// Build the topography described by the config (grid comes with it).
topography build_topography(const sim_config &cfg);

} // namespace pw
