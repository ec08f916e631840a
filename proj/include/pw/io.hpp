#pragma once

/// \file
/// On-disk artifact formats.
///
/// Snapshot container (.pwf): little-endian binary, layout
///   magic "PWF1" | u32 version | u32 N | f64 L | f64 t | u32 field_count |
///   field_count x (u32 name_len | name bytes) | field_count x N*N f64
/// payloads row-major. Field payloads round-trip bit-exactly.
///
/// Trajectory / stats / events are CSV with shortest-round-trip float
/// formatting, so re-reading reproduces the doubles exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "pw/dynamics.hpp"
#include "pw/experiments.hpp"
#include "pw/spectral.hpp"

namespace pw {

struct snapshot {
	std::uint32_t version = 1;
	std::uint32_t n = 0;
	double l = 0.0;
	double t = 0.0;
	std::vector<std::string> names;
	std::vector<rfield> fields; // one N*N payload per name
};

void write_snapshot(const std::string &path, const snapshot &snap);
snapshot read_snapshot(const std::string &path);

/// canonical shortest-digits text for a double (round-trips exactly)
std::string format_double(double v);

void write_trajectory_csv(const std::string &path,
                          const std::vector<trajectory_row> &rows);
std::vector<trajectory_row> read_trajectory_csv(const std::string &path);

void write_events_csv(const std::string &path,
                      const std::vector<crossing_event> &events);
std::vector<crossing_event> read_events_csv(const std::string &path);

void write_stats_csv(const std::string &path, const occupancy_stats &stats);
occupancy_stats read_stats_csv(const std::string &path);

/// dwell-fraction matrix plus per-edge counts as a small text report
void write_heatmap_txt(const std::string &path, const occupancy_stats &stats,
                       const cavity_map &map);

/// Debug export of a dense complex matrix as readable text: a "<name> RxC"
/// header line, then one row per line of re+imi / re-imi entries in the
/// canonical double format.
void write_matrix_debug(const std::string &path, const std::string &name,
                        const std::vector<double> &re, const std::vector<double> &im,
                        std::size_t rows, std::size_t cols);

} // namespace pw
