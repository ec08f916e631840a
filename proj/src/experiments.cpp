#include "pw/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <filesystem>
#include <limits>
#include <thread>

#include "pw/errors.hpp"
#include "pw/io.hpp"
#include "pw/params.hpp"
#include "pw/run.hpp"

namespace pw {

namespace {

std::size_t wrap_cell(double pos, double l, std::size_t n) {
	double u = pos / l;
	u -= std::floor(u);
	auto i = static_cast<std::size_t>(u * static_cast<double>(n));
	return (i >= n) ? 0 : i; // u can round up to exactly 1
}

} // namespace

int cavity_map::label_at(double x, double y) const {
	const std::size_t ix = wrap_cell(x, g.l, g.n);
	const std::size_t iy = wrap_cell(y, g.l, g.n);
	return label[g.idx(ix, iy)];
}

bool cavity_map::adjacent(int a, int b) const {
	if (a > b) std::swap(a, b);
	for (const auto &[p, q] : adjacency) {
		if (p == a && q == b) return true;
	}
	return false;
}

double resolve_cavity_threshold(const topography &topo, double requested) {
	if (requested != 0.0) return requested;
	return 0.5 * (topo.h_min + topo.h_max);
}

cavity_map label_cavities(const topography &topo, double threshold) {
	const grid &g = topo.g;
	cavity_map map;
	map.g = g;
	map.threshold = threshold;
	map.label.assign(g.cells(), 0);

	const bool uniform = topo.is_flat();
	if (uniform) {
		// one cavity covering everything; no barriers, no adjacency
		std::fill(map.label.begin(), map.label.end(), 1);
		map.count = 1;
		return map;
	}
	if (!(threshold > topo.h_min && threshold < topo.h_max)) {
		throw config_error(
		    "cavity threshold " + std::to_string(threshold) +
		    " must lie strictly between the depth extremes [" +
		    std::to_string(topo.h_min) + ", " + std::to_string(topo.h_max) + "]");
	}

	const std::size_t n = g.n;
	auto deep = [&](std::size_t at) { return topo.h[at] > threshold; };

	int next_label = 0;
	std::deque<std::size_t> queue;
	for (std::size_t start = 0; start < g.cells(); ++start) {
		if (!deep(start) || map.label[start] != 0) continue;
		++next_label;
		map.label[start] = next_label;
		queue.push_back(start);
		while (!queue.empty()) {
			const std::size_t at = queue.front();
			queue.pop_front();
			const std::size_t ix = at % n, iy = at / n;
			const std::size_t nb[4] = {
			    g.idx((ix + 1) % n, iy),
			    g.idx((ix + n - 1) % n, iy),
			    g.idx(ix, (iy + 1) % n),
			    g.idx(ix, (iy + n - 1) % n),
			};
			for (std::size_t other : nb) {
				if (deep(other) && map.label[other] == 0) {
					map.label[other] = next_label;
					queue.push_back(other);
				}
			}
		}
	}
	map.count = next_label;

	// adjacency: along every grid row and column (circular), two distinct
	// labels separated only by barrier cells face each other
	auto note_pair = [&map](int a, int b) {
		if (a == b || a == 0 || b == 0) return;
		if (a > b) std::swap(a, b);
		for (const auto &[p, q] : map.adjacency) {
			if (p == a && q == b) return;
		}
		map.adjacency.emplace_back(a, b);
	};
	auto scan_line = [&](auto cell_at) {
		// circular scan: remember the last nonzero label and whether a
		// barrier gap has been seen since; to close the wrap, continue past
		// the end until the first nonzero label repeats
		int last = 0;
		bool gap = false;
		int first_nonzero = 0;
		for (std::size_t pass = 0; pass < 2 * map.g.n; ++pass) {
			const int lab = map.label[cell_at(pass % map.g.n)];
			if (lab == 0) {
				gap = true;
			} else {
				if (last != 0 && gap) note_pair(last, lab);
				last = lab;
				gap = false;
				if (first_nonzero == 0) {
					first_nonzero = lab;
				} else if (pass >= map.g.n) {
					break; // wrapped far enough to close the circle
				}
			}
		}
	};
	for (std::size_t iy = 0; iy < n; ++iy) {
		scan_line([&, iy](std::size_t i) { return g.idx(i, iy); });
	}
	for (std::size_t ix = 0; ix < n; ++ix) {
		scan_line([&, ix](std::size_t i) { return g.idx(ix, i); });
	}
	std::sort(map.adjacency.begin(), map.adjacency.end());
	return map;
}

std::vector<crossing_event> detect_crossings(const std::vector<trajectory_row> &rows,
                                             const cavity_map &map) {
	std::vector<crossing_event> events;
	int committed = 0;
	double last_event_t = -std::numeric_limits<double>::infinity();
	for (const trajectory_row &r : rows) {
		const int lab = map.label_at(r.x, r.y);
		if (lab == 0) continue; // barrier transit: wait for the far side
		if (committed == 0) {
			committed = lab; // starting cavity, no event
			continue;
		}
		if (lab != committed) {
			if (r.t - last_event_t >= k_crossing_debounce) {
				crossing_event e;
				e.t = r.t;
				e.from = committed;
				e.to = lab;
				e.x = r.x;
				e.y = r.y;
				e.diagonal = !map.adjacent(committed, lab);
				events.push_back(e);
				last_event_t = r.t;
			}
			// boundary jitter within the debounce window retargets the
			// committed cavity silently instead of emitting echo events
			committed = lab;
		}
	}
	return events;
}

occupancy_stats occupancy(const std::vector<trajectory_row> &rows,
                          const std::vector<crossing_event> &events,
                          const cavity_map &map, const nondim_groups &groups) {
	occupancy_stats stats;
	stats.total_crossings = events.size();
	if (rows.size() >= 2) {
		stats.span = rows.back().t - rows.front().t;
	}

	// dwell: each sample interval belongs to the cavity committed at its
	// left end (the last nonzero label seen, matching detect_crossings)
	int committed = 0;
	for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
		const int lab = map.label_at(rows[i].x, rows[i].y);
		if (lab != 0) committed = lab;
		if (committed != 0) {
			stats.dwell[committed] += rows[i + 1].t - rows[i].t;
		}
	}

	for (const crossing_event &e : events) {
		int a = e.from, b = e.to;
		if (a > b) std::swap(a, b);
		bool found = false;
		for (edge_count &ec : stats.edges) {
			if (ec.from == a && ec.to == b) {
				++ec.count;
				found = true;
				break;
			}
		}
		if (!found) {
			stats.edges.push_back(edge_count{a, b, 1, e.diagonal});
		}
	}
	std::sort(stats.edges.begin(), stats.edges.end(),
	          [](const edge_count &l, const edge_count &r) {
		          return std::tie(l.from, l.to) < std::tie(r.from, r.to);
	          });

	if (stats.span > 0.0 && groups.t_f_seconds > 0.0) {
		const double minutes = stats.span * groups.t_f_seconds / 60.0;
		stats.crossing_rate_per_min =
		    static_cast<double>(events.size()) / minutes;
	}

	if (!rows.empty()) {
		const double t_cut = rows.back().t - 10.0;
		double sum = 0.0;
		std::size_t count = 0;
		for (const trajectory_row &r : rows) {
			if (r.t >= t_cut) {
				sum += std::hypot(r.vx, r.vy);
				++count;
			}
		}
		if (count > 0) stats.mean_speed_last10 = sum / static_cast<double>(count);
	}
	return stats;
}

sweep_axis parse_sweep_axis(const std::string &name) {
	if (name == "gamma") return sweep_axis::gamma;
	if (name == "well_width") return sweep_axis::well_width;
	if (name == "barrier_width") return sweep_axis::barrier_width;
	if (name == "depth_ratio") return sweep_axis::depth_ratio;
	throw config_error("unknown sweep axis '" + name +
	                   "' (gamma|well_width|barrier_width|depth_ratio)");
}

std::string sweep_axis_name(sweep_axis axis) {
	switch (axis) {
	case sweep_axis::gamma: return "gamma";
	case sweep_axis::well_width: return "well_width";
	case sweep_axis::barrier_width: return "barrier_width";
	case sweep_axis::depth_ratio: return "depth_ratio";
	}
	return "?";
}

namespace {

sim_config apply_axis(sim_config cfg, sweep_axis axis, double value) {
	switch (axis) {
	case sweep_axis::gamma:
		cfg.forcing.gamma = value;
		break;
	case sweep_axis::well_width:
		cfg.cavity.well_width = value;
		break;
	case sweep_axis::barrier_width:
		cfg.cavity.barrier_width = value;
		break;
	case sweep_axis::depth_ratio:
		// barrier depth as a fraction of the well depth; 1 removes the barrier
		cfg.cavity.shallow_depth = cfg.cavity.deep_depth * value;
		break;
	}
	return cfg;
}

void run_sweep_point(const sim_config &base, sweep_axis axis,
                     const std::string &out_dir, std::size_t index,
                     sweep_point &point) {
	try {
		sim_config cfg = apply_axis(base, axis, point.value);
		char sub[32];
		std::snprintf(sub, sizeof(sub), "point_%02zu", index);
		point.out_dir = out_dir + "/" + sub;
		run_artifacts art = run_simulation(cfg, point.out_dir);
		point.mean_speed = art.mean_speed_last10;

		const topography topo = build_topography(cfg);
		const cavity_map map = label_cavities(
		    topo, resolve_cavity_threshold(topo, cfg.run.cavity_threshold));
		const auto events = detect_crossings(art.trajectory, map);
		const faraday_scales scales =
		    compute_faraday_scales(cfg.fluid, cfg.forcing, cfg.depth);
		const nondim_groups groups =
		    compute_nondim_groups(cfg.fluid, cfg.forcing, scales,
		                          cfg.depth);
		point.stats = occupancy(art.trajectory, events, map, groups);
		point.crossings = point.stats.total_crossings;
		point.crossing_rate_per_min = point.stats.crossing_rate_per_min;
	} catch (const std::exception &e) {
		point.failed = true;
		point.error = e.what();
	}
}

} // namespace

sweep_result sweep(const sim_config &base, sweep_axis axis,
                   const std::vector<double> &values,
                   const std::string &out_dir) {
	sweep_result result;
	result.axis = axis;
	result.points.resize(values.size());
	for (std::size_t i = 0; i < values.size(); ++i) {
		result.points[i].value = values[i];
	}
	std::filesystem::create_directories(out_dir);

	const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
	const std::size_t workers = std::min({values.size(), hw, std::size_t{4}});
	if (workers <= 1) {
		for (std::size_t i = 0; i < values.size(); ++i) {
			run_sweep_point(base, axis, out_dir, i, result.points[i]);
		}
		return result;
	}
	std::atomic<std::size_t> next{0};
	std::vector<std::thread> pool;
	for (std::size_t w = 0; w < workers; ++w) {
		pool.emplace_back([&] {
			for (;;) {
				const std::size_t i = next.fetch_add(1);
				if (i >= values.size()) return;
				run_sweep_point(base, axis, out_dir, i, result.points[i]);
			}
		});
	}
	for (std::thread &th : pool) th.join();
	return result;
}

impact_report impact_test(const sim_config &cfg, double periods,
                          const std::string &out_dir) {
	impact_report report;
	sim_config local = cfg;
	local.topo = topo_kind::flat;

	const faraday_scales scales =
	    compute_faraday_scales(local.fluid, local.forcing, local.depth);
	const nondim_groups groups =
	    compute_nondim_groups(local.fluid, local.forcing, scales, local.depth);
	const grid g = make_grid(local.resolution, local.domain_size);
	const fourier_basis basis(g);
	const topography topo = make_flat(g, 1.0);
	simulator sim(basis, topo, groups, local.numerics);

	wave_state w = sim.make_state();
	droplet_state drop;
	drop.x = 0.5 * g.l;
	drop.y = 0.5 * g.l;

	const auto total_steps = static_cast<std::size_t>(
	    std::llround(periods / local.numerics.dt));
	const auto impact_steps = static_cast<std::size_t>(
	    std::llround(1.0 / local.numerics.dt)); // droplet present one period
	const bool with_droplet = local.droplet.enabled;
	for (std::size_t s = 0; s < total_steps; ++s) {
		if (with_droplet && s < impact_steps) {
			sim.step(w, &drop);
		} else {
			sim.step(w, nullptr);
		}
	}

	fft_engine fft(g.n);
	rfield eta = inverse_real(fft, w.eta_hat);
	double peak = 0.0;
	for (double v : eta) peak = std::max(peak, std::abs(v));
	if (peak < 1e-14) {
		report.no_wave = true;
		return report;
	}

	// fourfold symmetry about the center cell: quarter-turn index map
	const std::size_t n = g.n;
	double asym = 0.0;
	for (std::size_t iy = 0; iy < n; ++iy) {
		for (std::size_t ix = 0; ix < n; ++ix) {
			const std::size_t rx = (n - iy) % n;
			const std::size_t ry = ix;
			asym = std::max(asym,
			                std::abs(eta[g.idx(ix, iy)] - eta[g.idx(rx, ry)]));
		}
	}
	report.asymmetry = asym / peak;

	// angular-averaged radial profile, sampled far finer than the grid
	const double dr = 0.005;
	const auto steps_r = static_cast<std::size_t>(0.45 * g.l / dr);
	std::vector<double> profile(steps_r, 0.0);
	const int n_angles = 16;
	for (std::size_t ir = 0; ir < steps_r; ++ir) {
		const double r = static_cast<double>(ir) * dr;
		double acc = 0.0;
		for (int ia = 0; ia < n_angles; ++ia) {
			const double th = 2.0 * std::acos(-1.0) * ia / n_angles;
			acc += eval_at(basis, w.eta_hat, drop.x + r * std::cos(th),
			               drop.y + r * std::sin(th));
		}
		profile[ir] = acc / n_angles;
	}
	// first two interior maxima of |profile| mark consecutive crests
	std::vector<double> crest_r;
	for (std::size_t ir = 1; ir + 1 < steps_r && crest_r.size() < 2; ++ir) {
		const double a = std::abs(profile[ir]);
		if (a > std::abs(profile[ir - 1]) && a >= std::abs(profile[ir + 1]) &&
		    a > 1e-9 * peak && static_cast<double>(ir) * dr > 0.05) {
			crest_r.push_back(static_cast<double>(ir) * dr);
		}
	}
	if (crest_r.size() == 2) {
		report.crest_r1 = crest_r[0];
		report.crest_r2 = crest_r[1];
		report.crest_spacing = crest_r[1] - crest_r[0];
	}

	if (!out_dir.empty()) {
		std::filesystem::create_directories(out_dir);
		snapshot snap;
		snap.n = g.n;
		snap.l = g.l;
		snap.t = w.t;
		snap.names = {"eta", "phi"};
		snap.fields = {eta, inverse_real(fft, w.phi_hat)};
		report.snapshot_path = out_dir + "/impact.pwf";
		write_snapshot(report.snapshot_path, snap);
	}
	return report;
}

dispersion_report dispersion_test(const sim_config &cfg,
                                  const std::vector<std::pair<int, int>> &mode_indices,
                                  double periods_per_mode) {
	dispersion_report report;
	sim_config local = cfg;
	local.topo = topo_kind::flat;
	local.forcing.gamma = 0.0;

	const faraday_scales scales =
	    compute_faraday_scales(local.fluid, local.forcing, local.depth);
	nondim_groups groups =
	    compute_nondim_groups(local.fluid, local.forcing, scales, local.depth);
	groups.re = 0.0; // undamped: frequencies are clean, amplitudes conserved

	const grid g = make_grid(local.resolution, local.domain_size);
	const fourier_basis basis(g);
	const topography topo = make_flat(g, 1.0);

	for (const auto &[mx, my] : mode_indices) {
		dispersion_mode_result mode;
		const auto ux = static_cast<std::size_t>((mx % static_cast<int>(g.n) +
		                                          static_cast<int>(g.n)) %
		                                         static_cast<int>(g.n));
		const auto uy = static_cast<std::size_t>((my % static_cast<int>(g.n) +
		                                          static_cast<int>(g.n)) %
		                                         static_cast<int>(g.n));
		const std::size_t at = g.idx(ux, uy);
		mode.kx = basis.kx(at);
		mode.ky = basis.ky(at);
		mode.k_abs = basis.kabs(at);
		if (mode.k_abs <= 0.0) {
			throw config_error("dispersion check needs a nonzero mode");
		}
		const double om2 = (groups.g_group * mode.k_abs +
		                    groups.bo * mode.k_abs * mode.k_abs * mode.k_abs) *
		                   std::tanh(groups.mu * mode.k_abs);
		mode.omega_analytic = std::sqrt(om2);

		const double t_mode = 2.0 * std::acos(-1.0) / mode.omega_analytic;
		const auto per_unit = static_cast<std::size_t>(
		    std::ceil(256.0 / std::min(t_mode, 1.0)));
		step_config sc = local.numerics;
		sc.dt = 1.0 / static_cast<double>(per_unit);
		simulator sim(basis, topo, groups, sc);

		wave_state w = sim.make_state();
		const double amp = 1e-6;
		w.eta_hat[at] = amp / 2.0;
		w.eta_hat[basis.conj_index(at)] += amp / 2.0;

		const auto steps = static_cast<std::size_t>(
		    std::llround(periods_per_mode * t_mode / sc.dt));
		std::vector<double> cross_t;
		double prev_v = w.eta_hat[at].real();
		double prev_t = w.t;
		bool blew_up = false;
		for (std::size_t s = 0; s < steps; ++s) {
			sim.wave_step(w);
			const double v = w.eta_hat[at].real();
			if (std::abs(v) > 1e3 * amp) {
				blew_up = true;
				break;
			}
			if ((prev_v < 0.0 && v >= 0.0) || (prev_v > 0.0 && v <= 0.0)) {
				const double frac = prev_v / (prev_v - v);
				cross_t.push_back(prev_t + frac * (w.t - prev_t));
			}
			prev_v = v;
			prev_t = w.t;
		}
		mode.blew_up = blew_up;
		if (!blew_up && cross_t.size() >= 3) {
			const double span = cross_t.back() - cross_t.front();
			const double half_periods =
			    static_cast<double>(cross_t.size() - 1);
			mode.omega_measured = std::acos(-1.0) * half_periods / span;
			mode.rel_error = std::abs(mode.omega_measured - mode.omega_analytic) /
			                 mode.omega_analytic;
		} else if (!blew_up) {
			mode.rel_error = 1.0; // not enough crossings to measure
		}
		report.max_rel_error = std::max(report.max_rel_error, mode.rel_error);
		report.any_blowup = report.any_blowup || blew_up;
		report.modes.push_back(mode);
	}
	return report;
}

} // namespace pw
