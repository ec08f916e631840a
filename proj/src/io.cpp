#include "pw/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pw/errors.hpp"

namespace pw {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts need byte swaps");
static_assert(sizeof(double) == 8);

namespace {

constexpr char k_magic[4] = {'P', 'W', 'F', '1'};
constexpr std::uint32_t k_version = 1;

void put_u32(std::ostream &out, std::uint32_t v) {
	out.write(reinterpret_cast<const char *>(&v), 4);
}

void put_f64(std::ostream &out, double v) {
	out.write(reinterpret_cast<const char *>(&v), 8);
}

std::uint32_t get_u32(std::istream &in, const std::string &what) {
	std::uint32_t v = 0;
	in.read(reinterpret_cast<char *>(&v), 4);
	if (!in) throw format_error("truncated snapshot while reading " + what);
	return v;
}

double get_f64(std::istream &in, const std::string &what) {
	double v = 0.0;
	in.read(reinterpret_cast<char *>(&v), 8);
	if (!in) throw format_error("truncated snapshot while reading " + what);
	return v;
}

} // namespace

std::string format_double(double v) {
	char buf[32];
	auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
	if (ec != std::errc()) throw format_error("number formatting failed");
	return std::string(buf, ptr);
}

void write_snapshot(const std::string &path, const snapshot &snap) {
	if (snap.names.size() != snap.fields.size()) {
		throw format_error("snapshot field/name count mismatch");
	}
	const std::size_t cells = snap.n * snap.n;
	for (const rfield &f : snap.fields) {
		if (f.size() != cells) {
			throw format_error("snapshot field size does not match resolution");
		}
	}
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out) throw format_error("cannot open for writing: " + path);
	out.write(k_magic, 4);
	put_u32(out, k_version);
	put_u32(out, static_cast<std::uint32_t>(snap.n));
	put_f64(out, snap.l);
	put_f64(out, snap.t);
	put_u32(out, static_cast<std::uint32_t>(snap.fields.size()));
	for (std::size_t i = 0; i < snap.fields.size(); ++i) {
		const std::string &name = snap.names[i];
		put_u32(out, static_cast<std::uint32_t>(name.size()));
		out.write(name.data(), static_cast<std::streamsize>(name.size()));
		out.write(reinterpret_cast<const char *>(snap.fields[i].data()),
		          static_cast<std::streamsize>(cells * 8));
	}
	if (!out) throw format_error("write failed: " + path);
}

snapshot read_snapshot(const std::string &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw format_error("cannot open snapshot: " + path);
	char magic[4] = {};
	in.read(magic, 4);
	if (!in || std::memcmp(magic, k_magic, 4) != 0) {
		throw format_error("bad snapshot magic in " + path);
	}
	snapshot snap;
	snap.version = get_u32(in, "version");
	if (snap.version != k_version) {
		throw format_error("unsupported snapshot version " +
		                   std::to_string(snap.version));
	}
	snap.n = get_u32(in, "resolution");
	snap.l = get_f64(in, "domain size");
	snap.t = get_f64(in, "time");
	const std::uint32_t field_count = get_u32(in, "field count");
	const std::size_t cells = snap.n * snap.n;
	for (std::uint32_t i = 0; i < field_count; ++i) {
		const std::uint32_t name_len = get_u32(in, "name length");
		std::string name(name_len, '\0');
		in.read(name.data(), name_len);
		if (!in) throw format_error("truncated snapshot name in " + path);
		rfield f(cells);
		in.read(reinterpret_cast<char *>(f.data()),
		        static_cast<std::streamsize>(cells * 8));
		if (!in) throw format_error("truncated snapshot field in " + path);
		snap.names.push_back(std::move(name));
		snap.fields.push_back(std::move(f));
	}
	return snap;
}

void write_trajectory_csv(const std::string &path,
                          const std::vector<trajectory_row> &rows) {
	std::ofstream out(path, std::ios::trunc);
	if (!out) throw format_error("cannot open for writing: " + path);
	out << "t,x,y,vx,vy,in_contact,cavity\n";
	for (const trajectory_row &r : rows) {
		out << format_double(r.t) << ',' << format_double(r.x) << ','
		    << format_double(r.y) << ',' << format_double(r.vx) << ','
		    << format_double(r.vy) << ',' << (r.in_contact ? 1 : 0) << ','
		    << r.cavity << '\n';
	}
	if (!out) throw format_error("write failed: " + path);
}

std::vector<trajectory_row> read_trajectory_csv(const std::string &path) {
	std::ifstream in(path);
	if (!in) throw format_error("cannot open trajectory: " + path);
	std::string line;
	if (!std::getline(in, line)) throw format_error("empty trajectory: " + path);
	std::vector<trajectory_row> rows;
	while (std::getline(in, line)) {
		if (line.empty()) continue;
		std::istringstream ls(line);
		std::string cell;
		trajectory_row r;
		double *slots[5] = {&r.t, &r.x, &r.y, &r.vx, &r.vy};
		for (double *slot : slots) {
			if (!std::getline(ls, cell, ',')) {
				throw format_error("short trajectory row in " + path);
			}
			const char *b = cell.data(), *e = cell.data() + cell.size();
			if (auto [p, ec] = std::from_chars(b, e, *slot);
			    ec != std::errc() || p != e) {
				throw format_error("bad number '" + cell + "' in " + path);
			}
		}
		if (std::getline(ls, cell, ',')) r.in_contact = (cell == "1");
		if (std::getline(ls, cell, ',')) r.cavity = std::stoi(cell);
		rows.push_back(r);
	}
	return rows;
}

void write_events_csv(const std::string &path,
                      const std::vector<crossing_event> &events) {
	std::ofstream out(path, std::ios::trunc);
	if (!out) throw format_error("cannot open for writing: " + path);
	out << "t,from,to,x,y,diagonal\n";
	for (const crossing_event &e : events) {
		out << format_double(e.t) << ',' << e.from << ',' << e.to << ','
		    << format_double(e.x) << ',' << format_double(e.y) << ','
		    << (e.diagonal ? 1 : 0) << '\n';
	}
	if (!out) throw format_error("write failed: " + path);
}

namespace {

std::vector<std::string> split_cells(const std::string &line) {
	std::vector<std::string> cells;
	std::istringstream ls(line);
	std::string cell;
	while (std::getline(ls, cell, ',')) cells.push_back(cell);
	return cells;
}

double parse_num(const std::string &cell, const std::string &path) {
	double v = 0.0;
	const char *b = cell.data(), *e = cell.data() + cell.size();
	if (auto [p, ec] = std::from_chars(b, e, v); ec != std::errc() || p != e) {
		throw format_error("bad number '" + cell + "' in " + path);
	}
	return v;
}

} // namespace

std::vector<crossing_event> read_events_csv(const std::string &path) {
	std::ifstream in(path);
	if (!in) throw format_error("cannot open events: " + path);
	std::string line;
	if (!std::getline(in, line)) throw format_error("empty events file: " + path);
	std::vector<crossing_event> events;
	while (std::getline(in, line)) {
		if (line.empty()) continue;
		const auto cells = split_cells(line);
		if (cells.size() < 6) {
			throw format_error("short event row in " + path);
		}
		crossing_event e;
		e.t = parse_num(cells[0], path);
		e.from = static_cast<int>(parse_num(cells[1], path));
		e.to = static_cast<int>(parse_num(cells[2], path));
		e.x = parse_num(cells[3], path);
		e.y = parse_num(cells[4], path);
		e.diagonal = cells[5] == "1";
		events.push_back(e);
	}
	return events;
}

void write_stats_csv(const std::string &path, const occupancy_stats &stats) {
	std::ofstream out(path, std::ios::trunc);
	if (!out) throw format_error("cannot open for writing: " + path);
	out << "cavity,dwell_periods\n";
	for (const auto &[cavity, dwell] : stats.dwell) {
		out << cavity << ',' << format_double(dwell) << '\n';
	}
	out << "\nmetric,value\n";
	out << "total_crossings," << stats.total_crossings << '\n';
	out << "span," << format_double(stats.span) << '\n';
	out << "crossing_rate_per_min," << format_double(stats.crossing_rate_per_min)
	    << '\n';
	out << "mean_speed_last10," << format_double(stats.mean_speed_last10) << '\n';
	out << "\nfrom,to,count,diagonal\n";
	for (const edge_count &e : stats.edges) {
		out << e.from << ',' << e.to << ',' << e.count << ','
		    << (e.diagonal ? 1 : 0) << '\n';
	}
	if (!out) throw format_error("write failed: " + path);
}

occupancy_stats read_stats_csv(const std::string &path) {
	std::ifstream in(path);
	if (!in) throw format_error("cannot open stats: " + path);
	occupancy_stats stats;
	// three header-introduced sections in fixed order
	enum class section { dwell, metrics, edges } sec = section::dwell;
	std::string line;
	if (!std::getline(in, line) || line != "cavity,dwell_periods") {
		throw format_error("unexpected stats header in " + path);
	}
	while (std::getline(in, line)) {
		if (line.empty()) continue;
		if (line == "metric,value") {
			sec = section::metrics;
			continue;
		}
		if (line == "from,to,count,diagonal") {
			sec = section::edges;
			continue;
		}
		const auto cells = split_cells(line);
		switch (sec) {
		case section::dwell:
			if (cells.size() != 2) {
				throw format_error("bad dwell row in " + path);
			}
			stats.dwell[static_cast<int>(parse_num(cells[0], path))] =
			    parse_num(cells[1], path);
			break;
		case section::metrics: {
			if (cells.size() != 2) {
				throw format_error("bad metric row in " + path);
			}
			const double v = parse_num(cells[1], path);
			if (cells[0] == "total_crossings") {
				stats.total_crossings = static_cast<std::size_t>(v);
			} else if (cells[0] == "span") {
				stats.span = v;
			} else if (cells[0] == "crossing_rate_per_min") {
				stats.crossing_rate_per_min = v;
			} else if (cells[0] == "mean_speed_last10") {
				stats.mean_speed_last10 = v;
			} else {
				throw format_error("unknown stats metric '" + cells[0] + "' in " +
				                   path);
			}
			break;
		}
		case section::edges:
			if (cells.size() != 4) {
				throw format_error("bad edge row in " + path);
			}
			edge_count e;
			e.from = static_cast<int>(parse_num(cells[0], path));
			e.to = static_cast<int>(parse_num(cells[1], path));
			e.count = static_cast<std::size_t>(parse_num(cells[2], path));
			e.diagonal = cells[3] == "1";
			stats.edges.push_back(e);
			break;
		}
	}
	return stats;
}

void write_heatmap_txt(const std::string &path, const occupancy_stats &stats,
                       const cavity_map &map) {
	std::ofstream out(path, std::ios::trunc);
	if (!out) throw format_error("cannot open for writing: " + path);
	out << "cavities: " << map.count << "  crossings: " << stats.total_crossings
	    << "  span: " << format_double(stats.span) << " periods\n\n";
	out << "dwell fraction by cavity\n";
	for (int c = 1; c <= map.count; ++c) {
		double dwell = 0.0;
		if (auto it = stats.dwell.find(c); it != stats.dwell.end()) {
			dwell = it->second;
		}
		const double frac = stats.span > 0.0 ? dwell / stats.span : 0.0;
		out << "  " << c << ": " << format_double(frac) << '\n';
	}
	out << "\ncrossing counts by edge\n";
	for (const edge_count &e : stats.edges) {
		out << "  " << e.from << "-" << e.to << ": " << e.count
		    << (e.diagonal ? " (diagonal)" : "") << '\n';
	}
	if (!out) throw format_error("write failed: " + path);
}

void write_matrix_debug(const std::string &path, const std::string &name,
                        const std::vector<double> &re,
                        const std::vector<double> &im, std::size_t rows,
                        std::size_t cols) {
	if (re.size() != rows * cols || im.size() != rows * cols) {
		throw format_error("matrix debug size mismatch");
	}
	std::ofstream out(path, std::ios::trunc);
	if (!out) throw format_error("cannot open for writing: " + path);
	out << name << " " << rows << "x" << cols << '\n';
	for (std::size_t r = 0; r < rows; ++r) {
		for (std::size_t c = 0; c < cols; ++c) {
			if (c) out << ' ';
			const std::size_t at = r * cols + c;
			out << format_double(re[at]);
			const double iv = im[at];
			out << (iv < 0.0 ? "-" : "+") << format_double(std::abs(iv)) << 'i';
		}
		out << '\n';
	}
	if (!out) throw format_error("write failed: " + path);
}

} // namespace pw
