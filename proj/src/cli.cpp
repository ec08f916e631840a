#include "pw/cli.hpp"

#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "pw/config.hpp"
#include "pw/errors.hpp"
#include "pw/experiments.hpp"
#include "pw/io.hpp"
#include "pw/params.hpp"
#include "pw/run.hpp"

namespace pw {

namespace {

std::vector<double> parse_value_list(const std::string &text) {
	std::vector<double> out;
	std::size_t at = 0;
	while (at <= text.size()) {
		const std::size_t comma = text.find(',', at);
		const std::string item =
		    text.substr(at, comma == std::string::npos ? comma : comma - at);
		if (!item.empty()) {
			try {
				out.push_back(std::stod(item));
			} catch (const std::exception &) {
				throw config_error("bad number in value list: '" + item + "'");
			}
		}
		if (comma == std::string::npos) break;
		at = comma + 1;
	}
	if (out.empty()) throw config_error("empty value list");
	return out;
}

std::vector<std::pair<int, int>> parse_mode_list(const std::string &text) {
	// "1,0;2,1;0,3" -> {(1,0),(2,1),(0,3)}
	std::vector<std::pair<int, int>> out;
	std::size_t at = 0;
	while (at <= text.size()) {
		const std::size_t semi = text.find(';', at);
		const std::string item =
		    text.substr(at, semi == std::string::npos ? semi : semi - at);
		if (!item.empty()) {
			const std::size_t comma = item.find(',');
			if (comma == std::string::npos) {
				throw config_error("mode list entries look like kx,ky: '" +
				                   item + "'");
			}
			try {
				out.emplace_back(std::stoi(item.substr(0, comma)),
				                 std::stoi(item.substr(comma + 1)));
			} catch (const std::exception &) {
				throw config_error("bad mode indices: '" + item + "'");
			}
		}
		if (semi == std::string::npos) break;
		at = semi + 1;
	}
	if (out.empty()) throw config_error("empty mode list");
	return out;
}

void print_occupancy(const occupancy_stats &stats) {
	std::printf("crossings: %zu  rate: %s per minute  span: %s periods\n",
	            stats.total_crossings,
	            format_double(stats.crossing_rate_per_min).c_str(),
	            format_double(stats.span).c_str());
	for (const auto &[cavity, dwell] : stats.dwell) {
		const double frac = stats.span > 0.0 ? dwell / stats.span : 0.0;
		std::printf("  cavity %d dwell %.1f%%\n", cavity, 100.0 * frac);
	}
	for (const edge_count &e : stats.edges) {
		std::printf("  edge %d-%d: %zu%s\n", e.from, e.to, e.count,
		            e.diagonal ? " (diagonal)" : "");
	}
}

int guarded(const std::function<int()> &body) {
	try {
		return body();
	} catch (const numerical_error &e) {
		std::fprintf(stderr, "numerical failure: %s\n", e.what());
		return 3;
	} catch (const config_error &e) {
		std::fprintf(stderr, "config error: %s\n", e.what());
		return 2;
	} catch (const format_error &e) {
		std::fprintf(stderr, "file format error: %s\n", e.what());
		return 2;
	} catch (const std::exception &e) {
		std::fprintf(stderr, "error: %s\n", e.what());
		return 1;
	}
}

} // namespace

int cli_main(int argc, const char *const *argv) {
	CLI::App app{"pilot-wave bath simulator"};
	app.require_subcommand(1);

	std::string config_path;
	std::string out_dir;
	std::string axis_name = "gamma";
	std::string values_text;
	std::string modes_text = "1,0;0,2;3,3;5,0;4,2";
	std::string trajectory_path;
	double periods = 8.0;

	auto *c_simulate = app.add_subcommand("simulate", "run a configured simulation");
	c_simulate->add_option("--config", config_path, "config file")->required();
	c_simulate->add_option("--out", out_dir, "override run.out_dir");

	auto *c_impact = app.add_subcommand(
	    "impact-test", "single-impact ring pattern on a flat bath");
	c_impact->add_option("--config", config_path, "config file")->required();
	c_impact->add_option("--periods", periods, "evolution length in periods");
	c_impact->add_option("--out", out_dir, "snapshot directory");

	auto *c_dispersion = app.add_subcommand(
	    "dispersion-test", "undamped free-wave frequency check");
	c_dispersion->add_option("--config", config_path, "config file")->required();
	c_dispersion->add_option("--modes", modes_text,
	                         "semicolon-separated kx,ky integer pairs");
	c_dispersion->add_option("--periods", periods, "periods per mode");

	auto *c_sweep = app.add_subcommand("sweep", "run one simulation per value");
	c_sweep->add_option("--config", config_path, "base config file")->required();
	c_sweep->add_option("--axis", axis_name,
	                    "gamma|well_width|barrier_width|depth_ratio");
	c_sweep->add_option("--values", values_text, "comma-separated values")
	    ->required();
	c_sweep->add_option("--out", out_dir, "sweep output directory");

	auto *c_stats = app.add_subcommand(
	    "stats", "recompute crossing statistics from a saved trajectory");
	c_stats->add_option("--config", config_path, "config file")->required();
	c_stats->add_option("--trajectory", trajectory_path, "trajectory CSV")
	    ->required();

	auto *c_validate = app.add_subcommand("validate", "check a config file");
	c_validate->add_option("--config", config_path, "config file")->required();

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : 1;
	}

	if (c_simulate->parsed()) {
		return guarded([&] {
			const sim_config cfg = load_config(config_path);
			const run_artifacts art = run_simulation(cfg, out_dir);
			for (const std::string &wmsg : art.warnings) {
				std::fprintf(stderr, "warning: %s\n", wmsg.c_str());
			}
			std::printf("artifacts: %s\n", art.out_dir.c_str());
			std::printf("trajectory rows: %zu\n", art.trajectory.size());
			std::printf("mean speed (last 10 periods): %s\n",
			            format_double(art.mean_speed_last10).c_str());
			return 0;
		});
	}
	if (c_impact->parsed()) {
		return guarded([&] {
			const sim_config cfg = load_config(config_path);
			const impact_report rep =
			    impact_test(cfg, periods, out_dir.empty() ? "out" : out_dir);
			if (rep.no_wave) {
				std::printf("no wave excited\n");
				return 0;
			}
			std::printf("asymmetry (quarter turn, relative): %s\n",
			            format_double(rep.asymmetry).c_str());
			std::printf("crest radii: %s, %s  spacing: %s\n",
			            format_double(rep.crest_r1).c_str(),
			            format_double(rep.crest_r2).c_str(),
			            format_double(rep.crest_spacing).c_str());
			if (!rep.snapshot_path.empty()) {
				std::printf("snapshot: %s\n", rep.snapshot_path.c_str());
			}
			return 0;
		});
	}
	if (c_dispersion->parsed()) {
		return guarded([&] {
			const sim_config cfg = load_config(config_path);
			const dispersion_report rep =
			    dispersion_test(cfg, parse_mode_list(modes_text), periods);
			for (const dispersion_mode_result &m : rep.modes) {
				if (m.blew_up) {
					std::printf("mode (%g, %g): blew up\n", m.kx, m.ky);
				} else {
					std::printf(
					    "mode (%g, %g): analytic %s  measured %s  rel err %s\n",
					    m.kx, m.ky, format_double(m.omega_analytic).c_str(),
					    format_double(m.omega_measured).c_str(),
					    format_double(m.rel_error).c_str());
				}
			}
			std::printf("max relative error: %s\n",
			            format_double(rep.max_rel_error).c_str());
			return rep.any_blowup ? 3 : 0;
		});
	}
	if (c_sweep->parsed()) {
		return guarded([&] {
			const sim_config cfg = load_config(config_path);
			const sweep_result res =
			    sweep(cfg, parse_sweep_axis(axis_name),
			          parse_value_list(values_text),
			          out_dir.empty() ? "out/sweep" : out_dir);
			bool any_failed = false;
			for (const sweep_point &p : res.points) {
				if (p.failed) {
					any_failed = true;
					std::printf("%s = %s: FAILED (%s)\n", axis_name.c_str(),
					            format_double(p.value).c_str(), p.error.c_str());
				} else {
					std::printf(
					    "%s = %s: crossings %zu  rate %s/min  speed %s\n",
					    axis_name.c_str(), format_double(p.value).c_str(),
					    p.crossings,
					    format_double(p.crossing_rate_per_min).c_str(),
					    format_double(p.mean_speed).c_str());
				}
			}
			return any_failed ? 3 : 0;
		});
	}
	if (c_stats->parsed()) {
		return guarded([&] {
			const sim_config cfg = load_config(config_path);
			const topography topo = build_topography(cfg);
			const cavity_map map = label_cavities(
			    topo,
			    resolve_cavity_threshold(topo, cfg.run.cavity_threshold));
			const auto rows = read_trajectory_csv(trajectory_path);
			const auto events = detect_crossings(rows, map);
			const faraday_scales scales =
			    compute_faraday_scales(cfg.fluid, cfg.forcing, cfg.depth);
			const nondim_groups groups = compute_nondim_groups(
			    cfg.fluid, cfg.forcing, scales, cfg.depth);
			print_occupancy(occupancy(rows, events, map, groups));
			return 0;
		});
	}
	if (c_validate->parsed()) {
		return guarded([&] {
			const sim_config cfg = load_config(config_path);
			const validation_report rep = validate(cfg);
			for (const std::string &wmsg : rep.warnings) {
				std::printf("warning: %s\n", wmsg.c_str());
			}
			const faraday_scales scales =
			    compute_faraday_scales(cfg.fluid, cfg.forcing, cfg.depth);
			const nondim_groups groups = compute_nondim_groups(
			    cfg.fluid, cfg.forcing, scales, cfg.depth);
			std::printf("ok\n");
			std::printf("faraday period: %s s  wavelength: %s m\n",
			            format_double(scales.t_f).c_str(),
			            format_double(scales.lambda_f).c_str());
			std::printf("depth ratio: %s  gravity: %s  capillarity: %s\n",
			            format_double(groups.mu).c_str(),
			            format_double(groups.g_group).c_str(),
			            format_double(groups.bo).c_str());
			std::printf("damping: %s  drive: %s  mass: %s\n",
			            format_double(groups.re).c_str(),
			            format_double(groups.gamma).c_str(),
			            format_double(groups.m_group).c_str());
			return 0;
		});
	}
	return 1;
}

} // namespace pw
