#include "pw/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pw/errors.hpp"
#include "pw/io.hpp"

namespace pw {

namespace {

struct raw_entry {
	std::string value;
	int line = 0;
};

std::string trim(const std::string &s) {
	const auto first = s.find_first_not_of(" \t\r");
	if (first == std::string::npos) return "";
	const auto last = s.find_last_not_of(" \t\r");
	return s.substr(first, last - first + 1);
}

double parse_double(const std::string &key, const raw_entry &e) {
	const std::string v = trim(e.value);
	double out = 0.0;
	const char *begin = v.data(), *end = v.data() + v.size();
	auto [ptr, ec] = std::from_chars(begin, end, out);
	if (ec != std::errc() || ptr != end) {
		throw config_error("line " + std::to_string(e.line) + ": key '" + key +
		                   "' expects a number, got '" + v + "'");
	}
	return out;
}

std::size_t parse_size(const std::string &key, const raw_entry &e) {
	const double v = parse_double(key, e);
	if (v < 0.0 || v != std::floor(v)) {
		throw config_error("line " + std::to_string(e.line) + ": key '" + key +
		                   "' expects a non-negative integer");
	}
	return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string &key, const raw_entry &e) {
	const std::string v = trim(e.value);
	if (v == "true" || v == "1") return true;
	if (v == "false" || v == "0") return false;
	throw config_error("line " + std::to_string(e.line) + ": key '" + key +
	                   "' expects true/false");
}

const char *const k_known_keys[] = {
    "preset",
    "fluid.density",
    "fluid.surface_tension",
    "fluid.kinematic_viscosity",
    "fluid.dynamic_viscosity",
    "fluid.drop_mass",
    "fluid.drop_damping",
    "forcing.frequency_hz",
    "forcing.gamma",
    "forcing.gravity",
    "forcing.gamma_threshold_hint",
    "domain.size",
    "domain.resolution",
    "domain.depth",
    "domain.topography",
    "domain.topo_file",
    "domain.cavity.rows",
    "domain.cavity.cols",
    "domain.cavity.well_width",
    "domain.cavity.barrier_width",
    "domain.cavity.deep_depth",
    "domain.cavity.shallow_depth",
    "numerics.scheme",
    "numerics.integrator",
    "numerics.dt",
    "numerics.m_galerkin",
    "numerics.contact_fraction",
    "numerics.smoothing",
    "numerics.dealias",
    "numerics.cfl_safety",
    "numerics.eval_interp",
    "numerics.dtn_sign",
    "numerics.topography_convention",
    "droplet.enabled",
    "droplet.x",
    "droplet.y",
    "droplet.vx",
    "droplet.vy",
    "droplet.impact_phase",
    "droplet.v_jitter",
    "run.t_max",
    "run.seed",
    "run.snapshot_stride",
    "run.cavity_threshold",
    "run.out_dir",
};

bool known_key(const std::string &key) {
	for (const char *k : k_known_keys) {
		if (key == k) return true;
	}
	return false;
}

} // namespace

sim_config parse_config(const std::string &text, const std::string &name) {
	std::map<std::string, raw_entry> entries;
	std::istringstream in(text);
	std::string line;
	int lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		const auto hash = line.find('#');
		if (hash != std::string::npos) line = line.substr(0, hash);
		line = trim(line);
		if (line.empty()) continue;
		const auto eq = line.find('=');
		if (eq == std::string::npos) {
			throw config_error(name + " line " + std::to_string(lineno) +
			                   ": expected key = value, got '" + line + "'");
		}
		const std::string key = trim(line.substr(0, eq));
		const std::string value = trim(line.substr(eq + 1));
		if (key.empty()) {
			throw config_error(name + " line " + std::to_string(lineno) +
			                   ": empty key");
		}
		if (!known_key(key)) {
			throw config_error(name + " line " + std::to_string(lineno) +
			                   ": unknown key '" + key + "'");
		}
		auto it = entries.find(key);
		if (it != entries.end()) {
			throw config_error(name + ": duplicate key '" + key + "' on lines " +
			                   std::to_string(it->second.line) + " and " +
			                   std::to_string(lineno));
		}
		entries[key] = raw_entry{value, lineno};
	}

	sim_config cfg;
	cfg.source_name = name;

	// preset values go in first; explicit keys override them below
	bool have_viscosity = false;
	if (auto it = entries.find("preset"); it != entries.end()) {
		const std::string preset = trim(it->second.value);
		if (preset == "silicone_80hz") {
			cfg.fluid.density = 965.0;
			cfg.fluid.surface_tension = 0.0209;
			cfg.fluid.kinematic_viscosity = 2e-2 / 965.0; // dynamic 2e-2 Pa s
			cfg.forcing.frequency_hz = 80.0;
			have_viscosity = true;
		} else {
			throw config_error(name + " line " + std::to_string(it->second.line) +
			                   ": unknown preset '" + preset + "'");
		}
	}

	auto get_d = [&](const char *key, double &dst) {
		if (auto it = entries.find(key); it != entries.end()) {
			dst = parse_double(key, it->second);
			return true;
		}
		return false;
	};
	auto get_z = [&](const char *key, std::size_t &dst) {
		if (auto it = entries.find(key); it != entries.end()) {
			dst = parse_size(key, it->second);
			return true;
		}
		return false;
	};
	auto get_b = [&](const char *key, bool &dst) {
		if (auto it = entries.find(key); it != entries.end()) {
			dst = parse_bool(key, it->second);
		}
	};
	auto get_s = [&](const char *key, std::string &dst) {
		if (auto it = entries.find(key); it != entries.end()) {
			dst = trim(it->second.value);
		}
	};

	get_d("fluid.density", cfg.fluid.density);
	get_d("fluid.surface_tension", cfg.fluid.surface_tension);
	if (get_d("fluid.kinematic_viscosity", cfg.fluid.kinematic_viscosity)) {
		have_viscosity = true;
	}
	if (auto it = entries.find("fluid.dynamic_viscosity"); it != entries.end()) {
		if (entries.count("fluid.kinematic_viscosity")) {
			throw config_error(name +
			                   ": give either fluid.kinematic_viscosity or "
			                   "fluid.dynamic_viscosity, not both");
		}
		const double dyn = parse_double("fluid.dynamic_viscosity", it->second);
		if (!(cfg.fluid.density > 0.0)) {
			throw config_error(name +
			                   ": fluid.dynamic_viscosity needs fluid.density");
		}
		cfg.fluid.kinematic_viscosity = dyn / cfg.fluid.density;
		have_viscosity = true;
	}
	get_d("fluid.drop_mass", cfg.fluid.drop_mass);
	get_d("fluid.drop_damping", cfg.fluid.drop_damping);

	get_d("forcing.frequency_hz", cfg.forcing.frequency_hz);
	get_d("forcing.gamma", cfg.forcing.gamma);
	get_d("forcing.gravity", cfg.forcing.gravity);
	get_d("forcing.gamma_threshold_hint", cfg.gamma_threshold_hint);

	get_d("domain.size", cfg.domain_size);
	get_z("domain.resolution", cfg.resolution);
	get_d("domain.depth", cfg.depth);
	if (auto it = entries.find("domain.topography"); it != entries.end()) {
		const std::string v = trim(it->second.value);
		if (v == "flat") {
			cfg.topo = topo_kind::flat;
		} else if (v == "cavities") {
			cfg.topo = topo_kind::cavities;
		} else if (v == "file") {
			cfg.topo = topo_kind::file;
		} else {
			throw config_error(name + " line " + std::to_string(it->second.line) +
			                   ": domain.topography must be flat|cavities|file");
		}
	}
	get_s("domain.topo_file", cfg.topo_file);
	get_z("domain.cavity.rows", cfg.cavity.rows);
	get_z("domain.cavity.cols", cfg.cavity.cols);
	get_d("domain.cavity.well_width", cfg.cavity.well_width);
	get_d("domain.cavity.barrier_width", cfg.cavity.barrier_width);
	get_d("domain.cavity.deep_depth", cfg.cavity.deep_depth);
	get_d("domain.cavity.shallow_depth", cfg.cavity.shallow_depth);

	if (auto it = entries.find("numerics.scheme"); it != entries.end()) {
		const std::string v = trim(it->second.value);
		if (v == "pseudo_spectral") {
			cfg.numerics.sch = scheme::pseudo_spectral;
		} else if (v == "central_difference") {
			cfg.numerics.sch = scheme::central_difference;
		} else {
			throw config_error(
			    name + " line " + std::to_string(it->second.line) +
			    ": numerics.scheme must be pseudo_spectral|central_difference");
		}
	}
	if (auto it = entries.find("numerics.integrator"); it != entries.end()) {
		const std::string v = trim(it->second.value);
		if (v == "rk4") {
			cfg.numerics.integ = integrator::rk4;
		} else if (v == "leapfrog") {
			cfg.numerics.integ = integrator::leapfrog;
		} else {
			throw config_error(name + " line " + std::to_string(it->second.line) +
			                   ": numerics.integrator must be rk4|leapfrog");
		}
	}
	get_d("numerics.dt", cfg.numerics.dt);
	get_d("numerics.m_galerkin", cfg.numerics.m_galerkin);
	get_d("numerics.contact_fraction", cfg.numerics.contact_fraction);
	get_d("numerics.smoothing", cfg.cavity.smoothing);
	get_b("numerics.dealias", cfg.numerics.dealias);
	get_d("numerics.cfl_safety", cfg.numerics.cfl_safety);
	if (auto it = entries.find("numerics.eval_interp"); it != entries.end()) {
		const std::string v = trim(it->second.value);
		if (v == "fourier") {
			cfg.numerics.eval_interp = interp::fourier;
		} else if (v == "bilinear") {
			cfg.numerics.eval_interp = interp::bilinear;
		} else {
			throw config_error(name + " line " + std::to_string(it->second.line) +
			                   ": numerics.eval_interp must be fourier|bilinear");
		}
	}
	if (auto it = entries.find("numerics.dtn_sign"); it != entries.end()) {
		const std::string v = trim(it->second.value);
		if (v == "plus" || v == "+1") {
			cfg.numerics.dtn_sign = 1;
		} else if (v == "minus" || v == "-1") {
			cfg.numerics.dtn_sign = -1;
		} else {
			throw config_error(name + " line " + std::to_string(it->second.line) +
			                   ": numerics.dtn_sign must be plus|minus");
		}
	}
	if (auto it = entries.find("numerics.topography_convention");
	    it != entries.end()) {
		const std::string v = trim(it->second.value);
		if (v == "deviation") {
			cfg.numerics.convention = topo_convention::deviation;
		} else if (v == "total") {
			cfg.numerics.convention = topo_convention::total;
		} else {
			throw config_error(
			    name + " line " + std::to_string(it->second.line) +
			    ": numerics.topography_convention must be deviation|total");
		}
	}

	get_b("droplet.enabled", cfg.droplet.enabled);
	get_d("droplet.x", cfg.droplet.x);
	get_d("droplet.y", cfg.droplet.y);
	get_d("droplet.vx", cfg.droplet.vx);
	get_d("droplet.vy", cfg.droplet.vy);
	get_d("droplet.impact_phase", cfg.droplet.impact_phase);
	get_d("droplet.v_jitter", cfg.droplet.v_jitter);
	cfg.numerics.impact_phase = cfg.droplet.impact_phase;

	get_d("run.t_max", cfg.run.t_max);
	if (auto it = entries.find("run.seed"); it != entries.end()) {
		cfg.run.seed = static_cast<std::uint64_t>(
		    parse_size("run.seed", it->second));
	}
	get_z("run.snapshot_stride", cfg.run.snapshot_stride);
	get_d("run.cavity_threshold", cfg.run.cavity_threshold);
	get_s("run.out_dir", cfg.run.out_dir);

	// required values that have no usable default
	if (!(cfg.fluid.density > 0.0)) {
		throw config_error(name + ": fluid.density is required (or use a preset)");
	}
	if (!(cfg.fluid.surface_tension > 0.0)) {
		throw config_error(name + ": fluid.surface_tension is required");
	}
	if (!have_viscosity) {
		throw config_error(name + ": one of fluid.kinematic_viscosity or "
		                          "fluid.dynamic_viscosity is required");
	}
	if (!(cfg.forcing.frequency_hz > 0.0)) {
		throw config_error(name + ": forcing.frequency_hz is required");
	}
	if (!entries.count("forcing.gamma")) {
		throw config_error(name + ": forcing.gamma is required");
	}
	if (!(cfg.depth > 0.0)) {
		throw config_error(name + ": domain.depth (reference depth, meters) is required");
	}
	if (cfg.droplet.enabled) {
		if (!(cfg.fluid.drop_mass > 0.0)) {
			throw config_error(name + ": fluid.drop_mass is required when the "
			                          "droplet is enabled");
		}
		if (!entries.count("fluid.drop_damping") ||
		    !(cfg.fluid.drop_damping > 0.0)) {
			throw config_error(name + ": fluid.drop_damping is required when the "
			                          "droplet is enabled (no default exists)");
		}
	} else if (!(cfg.fluid.drop_mass > 0.0)) {
		// groups still need a mass; a nominal one is fine without a droplet
		cfg.fluid.drop_mass = 1e-7;
	}
	if (!(cfg.fluid.drop_damping > 0.0)) {
		cfg.fluid.drop_damping = 1.0;
	}

	validation_report rep = validate(cfg);
	if (!rep.ok()) {
		std::string msg = name + ": invalid configuration";
		for (const std::string &e : rep.errors) msg += "\n  " + e;
		throw config_error(msg);
	}
	return cfg;
}

sim_config load_config(const std::string &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw config_error("cannot open config file: " + path);
	}
	std::ostringstream buf;
	buf << in.rdbuf();
	return parse_config(buf.str(), path);
}

std::string resolved_config_text(const sim_config &cfg) {
	std::ostringstream out;
	auto kv = [&out](const char *key, const std::string &value) {
		out << key << " = " << value << "\n";
	};
	auto kvd = [&](const char *key, double v) { kv(key, format_double(v)); };

	out << "# resolved configuration (every effective key explicit)\n";
	kvd("fluid.density", cfg.fluid.density);
	kvd("fluid.surface_tension", cfg.fluid.surface_tension);
	kvd("fluid.kinematic_viscosity", cfg.fluid.kinematic_viscosity);
	kvd("fluid.drop_mass", cfg.fluid.drop_mass);
	kvd("fluid.drop_damping", cfg.fluid.drop_damping);
	kvd("forcing.frequency_hz", cfg.forcing.frequency_hz);
	kvd("forcing.gamma", cfg.forcing.gamma);
	kvd("forcing.gravity", cfg.forcing.gravity);
	kvd("forcing.gamma_threshold_hint", cfg.gamma_threshold_hint);
	kvd("domain.size", cfg.domain_size);
	kv("domain.resolution", std::to_string(cfg.resolution));
	kvd("domain.depth", cfg.depth);
	switch (cfg.topo) {
	case topo_kind::flat: kv("domain.topography", "flat"); break;
	case topo_kind::cavities: kv("domain.topography", "cavities"); break;
	case topo_kind::file: kv("domain.topography", "file"); break;
	}
	if (!cfg.topo_file.empty()) kv("domain.topo_file", cfg.topo_file);
	if (cfg.topo == topo_kind::cavities) {
		kv("domain.cavity.rows", std::to_string(cfg.cavity.rows));
		kv("domain.cavity.cols", std::to_string(cfg.cavity.cols));
		kvd("domain.cavity.well_width", cfg.cavity.well_width);
		kvd("domain.cavity.barrier_width", cfg.cavity.barrier_width);
		kvd("domain.cavity.deep_depth", cfg.cavity.deep_depth);
		kvd("domain.cavity.shallow_depth", cfg.cavity.shallow_depth);
	}
	kv("numerics.scheme", cfg.numerics.sch == scheme::pseudo_spectral
	                          ? "pseudo_spectral"
	                          : "central_difference");
	kv("numerics.integrator",
	   cfg.numerics.integ == integrator::rk4 ? "rk4" : "leapfrog");
	kvd("numerics.dt", cfg.numerics.dt);
	kvd("numerics.m_galerkin", cfg.numerics.m_galerkin);
	kvd("numerics.contact_fraction", cfg.numerics.contact_fraction);
	kvd("numerics.smoothing", cfg.cavity.smoothing);
	kv("numerics.dealias", cfg.numerics.dealias ? "true" : "false");
	kvd("numerics.cfl_safety", cfg.numerics.cfl_safety);
	kv("numerics.eval_interp",
	   cfg.numerics.eval_interp == interp::fourier ? "fourier" : "bilinear");
	kv("numerics.dtn_sign", cfg.numerics.dtn_sign > 0 ? "plus" : "minus");
	kv("numerics.topography_convention",
	   cfg.numerics.convention == topo_convention::deviation ? "deviation"
	                                                         : "total");
	kv("droplet.enabled", cfg.droplet.enabled ? "true" : "false");
	kvd("droplet.x", cfg.droplet.x);
	kvd("droplet.y", cfg.droplet.y);
	kvd("droplet.vx", cfg.droplet.vx);
	kvd("droplet.vy", cfg.droplet.vy);
	kvd("droplet.impact_phase", cfg.droplet.impact_phase);
	kvd("droplet.v_jitter", cfg.droplet.v_jitter);
	kvd("run.t_max", cfg.run.t_max);
	kv("run.seed", std::to_string(cfg.run.seed));
	kv("run.snapshot_stride", std::to_string(cfg.run.snapshot_stride));
	kvd("run.cavity_threshold", cfg.run.cavity_threshold);
	kv("run.out_dir", cfg.run.out_dir);
	return out.str();
}

topography build_topography(const sim_config &cfg) {
	const grid g = make_grid(cfg.resolution, cfg.domain_size);
	switch (cfg.topo) {
	case topo_kind::flat:
		return make_flat(g, 1.0);
	case topo_kind::cavities:
		return make_cavities(g, cfg.cavity);
	case topo_kind::file: {
		const snapshot snap = read_snapshot(cfg.topo_file);
		if (snap.n != cfg.resolution) {
			throw config_error("topography file resolution " +
			                   std::to_string(snap.n) +
			                   " does not match domain.resolution " +
			                   std::to_string(cfg.resolution));
		}
		if (snap.fields.empty()) {
			throw format_error("topography file has no fields: " + cfg.topo_file);
		}
		return make_from_samples(g, snap.fields.front());
	}
	}
	throw config_error("unreachable topography kind");
}

} // namespace pw
