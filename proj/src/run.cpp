#include "pw/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "pw/errors.hpp"
#include "pw/experiments.hpp"
#include "pw/io.hpp"
#include "pw/params.hpp"

namespace pw {

namespace {

void write_text(const std::string &path, const std::string &text) {
	std::ofstream out(path, std::ios::trunc);
	if (!out) throw format_error("cannot open for writing: " + path);
	out << text;
}

snapshot make_wave_snapshot(const grid &g, fft_engine &fft,
                            const wave_state &w) {
	snapshot snap;
	snap.n = g.n;
	snap.l = g.l;
	snap.t = w.t;
	snap.names = {"eta", "phi"};
	snap.fields = {inverse_real(fft, w.eta_hat), inverse_real(fft, w.phi_hat)};
	return snap;
}

} // namespace

run_artifacts run_simulation(const sim_config &cfg,
                             const std::string &out_dir_override) {
	run_artifacts art;

	validation_report rep = validate(cfg);
	if (!rep.ok()) {
		std::string msg = "invalid configuration";
		for (const std::string &e : rep.errors) msg += "\n  " + e;
		throw config_error(msg);
	}
	art.warnings = rep.warnings;

	const faraday_scales scales =
	    compute_faraday_scales(cfg.fluid, cfg.forcing, cfg.depth);
	const nondim_groups groups =
	    compute_nondim_groups(cfg.fluid, cfg.forcing, scales, cfg.depth);
	const grid g = make_grid(cfg.resolution, cfg.domain_size);
	const fourier_basis basis(g);
	const topography topo = build_topography(cfg);

	const cfl_report cfl = cfl_check(basis, groups, cfg.numerics);
	if (!cfl.ok) {
		throw config_error(
		    "numerics.dt = " + format_double(cfg.numerics.dt) +
		    " exceeds the advective stability limit " +
		    format_double(cfl.dt_limit) + " (fastest resolved phase speed " +
		    format_double(cfl.c_max) + " at |k| = " +
		    format_double(cfl.k_limiting) + "); lower dt or the resolution");
	}

	simulator sim(basis, topo, groups, cfg.numerics, &art.warnings);
	if (sim.variable_depth()) {
		sim.precombine_depth_operator();
	}

	art.out_dir = out_dir_override.empty() ? cfg.run.out_dir : out_dir_override;
	std::filesystem::create_directories(art.out_dir);
	write_text(art.out_dir + "/config_resolved.txt", resolved_config_text(cfg));

	const cavity_map map = label_cavities(
	    topo, resolve_cavity_threshold(topo, cfg.run.cavity_threshold));

	wave_state w = sim.make_state();
	droplet_state drop;
	droplet_state *dropptr = nullptr;
	if (cfg.droplet.enabled) {
		drop.x = cfg.droplet.x < 0.0 ? 0.5 * g.l : cfg.droplet.x;
		drop.y = cfg.droplet.y < 0.0 ? 0.5 * g.l : cfg.droplet.y;
		drop.vx = cfg.droplet.vx;
		drop.vy = cfg.droplet.vy;
		if (cfg.droplet.v_jitter > 0.0) {
			// deterministic symmetry-breaking kick in a seeded direction
			std::mt19937_64 rng(cfg.run.seed);
			std::uniform_real_distribution<double> angle(
			    0.0, 2.0 * std::acos(-1.0));
			const double th = angle(rng);
			drop.vx += cfg.droplet.v_jitter * std::cos(th);
			drop.vy += cfg.droplet.v_jitter * std::sin(th);
		}
		dropptr = &drop;
	}

	fft_engine fft(g.n);
	auto record = [&] {
		trajectory_row row;
		row.t = w.t;
		if (dropptr) {
			row.x = drop.x;
			row.y = drop.y;
			row.vx = drop.vx;
			row.vy = drop.vy;
			row.in_contact = drop.in_contact ? 1 : 0;
			row.cavity = map.label_at(drop.x, drop.y);
		}
		art.trajectory.push_back(row);
	};
	auto save_snapshot = [&](const std::string &stem) {
		const std::string path = art.out_dir + "/" + stem + ".pwf";
		write_snapshot(path, make_wave_snapshot(g, fft, w));
		art.snapshot_paths.push_back(path);
		return path;
	};

	const auto per_period = static_cast<std::size_t>(
	    std::llround(1.0 / cfg.numerics.dt));
	const auto total_steps = static_cast<std::size_t>(
	    std::llround(cfg.run.t_max / cfg.numerics.dt));

	record();
	if (cfg.run.snapshot_stride > 0) save_snapshot("snap_000000");

	auto flush_artifacts = [&] {
		art.trajectory_path = art.out_dir + "/trajectory.csv";
		write_trajectory_csv(art.trajectory_path, art.trajectory);
		const auto events = detect_crossings(art.trajectory, map);
		const occupancy_stats stats =
		    occupancy(art.trajectory, events, map, groups);
		art.events_path = art.out_dir + "/events.csv";
		write_events_csv(art.events_path, events);
		art.stats_path = art.out_dir + "/stats.csv";
		write_stats_csv(art.stats_path, stats);
		write_heatmap_txt(art.out_dir + "/heatmap.txt", stats, map);
		art.mean_speed_last10 = stats.mean_speed_last10;
	};

	for (std::size_t s = 0; s < total_steps; ++s) {
		try {
			sim.step(w, dropptr);
		} catch (const numerical_error &) {
			// flush what exists plus the offending state, then re-raise
			record();
			flush_artifacts();
			try {
				save_snapshot("crash");
			} catch (const std::exception &) {
				// the crash snapshot is best-effort
			}
			throw;
		}
		record();
		const std::size_t done = s + 1;
		if (cfg.run.snapshot_stride > 0 && done % per_period == 0) {
			const std::size_t period = done / per_period;
			if (period % cfg.run.snapshot_stride == 0) {
				char stem[32];
				std::snprintf(stem, sizeof(stem), "snap_%06zu", period);
				save_snapshot(stem);
			}
		}
	}

	flush_artifacts();
	save_snapshot("final");
	return art;
}

} // namespace pw
