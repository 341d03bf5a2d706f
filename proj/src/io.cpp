#include "cubefm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace cubefm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& s, std::size_t line_no) {
  if (s == "nan") return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) parse_error(line_no, "not a number: '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s, std::size_t line_no) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    parse_error(line_no, "not an integer: '" + s + "'");
  }
  return v;
}

// Calls row(fields, line_no) for every non-empty data line after checking the header.
template <typename F>
void read_table(std::istream& in, const std::vector<std::string>& header, F&& row) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (!have_header) {
      if (fields != header) parse_error(line_no, "unexpected header '" + trim(line) + "'");
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      parse_error(line_no, "expected " + std::to_string(header.size()) + " fields");
    }
    row(fields, line_no);
  }
  if (!have_header) parse_error(line_no, "missing header");
}

void write_header(std::ostream& out, const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
}

const std::vector<std::string> kCorrHeader{"x1", "x2", "x3", "y1", "y2", "y3"};
const std::vector<std::string> kWorldHeader{"p1", "p2", "p3", "p4"};
const std::vector<std::string> kSweepHeader{"trial",    "noise",  "algo",      "angle_rad",
                                            "residual", "failed", "cube_seed", "cam_seed"};
const std::vector<std::string> kSummaryHeader{"noise",        "algo",         "mean_angle_rad",
                                              "median_angle_rad", "failure_rate", "count"};
const std::vector<std::string> kRegionHeader{"u", "v", "class", "n_plus", "n_minus", "n_zero"};

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Correspondences read_correspondences(std::istream& in) {
  Correspondences c;
  read_table(in, kCorrHeader, [&](const std::vector<std::string>& f, std::size_t n) {
    c.X.emplace_back(parse_double(f[0], n), parse_double(f[1], n), parse_double(f[2], n));
    c.Y.emplace_back(parse_double(f[3], n), parse_double(f[4], n), parse_double(f[5], n));
  });
  return c;
}

std::vector<HomPoint3> read_world_points(std::istream& in) {
  std::vector<HomPoint3> pts;
  read_table(in, kWorldHeader, [&](const std::vector<std::string>& f, std::size_t n) {
    pts.emplace_back(parse_double(f[0], n), parse_double(f[1], n), parse_double(f[2], n),
                     parse_double(f[3], n));
  });
  return pts;
}

void write_correspondences(std::ostream& out, const Correspondences& c) {
  if (c.X.size() != c.Y.size()) throw Error(Errc::LengthMismatch, "X and Y differ in length");
  write_header(out, kCorrHeader);
  for (std::size_t i = 0; i < c.X.size(); ++i) {
    for (int k = 0; k < 3; ++k) out << format_double(c.X[i][k]) << ',';
    out << format_double(c.Y[i][0]) << ',' << format_double(c.Y[i][1]) << ','
        << format_double(c.Y[i][2]) << '\n';
  }
}

void write_world_points(std::ostream& out, std::span<const HomPoint3> pts) {
  write_header(out, kWorldHeader);
  for (const auto& p : pts) {
    out << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(p[2]) << ','
        << format_double(p[3]) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  write_header(out, kSweepHeader);
  for (const auto& r : rows) {
    out << r.trial << ',' << format_double(r.noise) << ',' << to_string(r.algo) << ','
        << format_double(r.angle_rad) << ',' << format_double(r.residual) << ','
        << (r.failed ? 1 : 0) << ',' << r.cube_seed << ',' << r.cam_seed << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  read_table(in, kSweepHeader, [&](const std::vector<std::string>& f, std::size_t n) {
    SweepRow r;
    r.trial = parse_int<int>(f[0], n);
    r.noise = parse_double(f[1], n);
    try {
      r.algo = parse_algo(f[2]);
    } catch (const Error& e) {
      parse_error(n, e.what());
    }
    r.angle_rad = parse_double(f[3], n);
    r.residual = parse_double(f[4], n);
    r.failed = parse_int<int>(f[5], n) != 0;
    r.cube_seed = parse_int<std::uint64_t>(f[6], n);
    r.cam_seed = parse_int<std::uint64_t>(f[7], n);
    rows.push_back(r);
  });
  return rows;
}

void write_summary_csv(std::ostream& out, std::span<const LevelSummary> summary) {
  write_header(out, kSummaryHeader);
  for (const auto& s : summary) {
    out << format_double(s.noise) << ',' << to_string(s.algo) << ',' << format_double(s.mean_angle)
        << ',' << format_double(s.median_angle) << ',' << format_double(s.failure_rate) << ','
        << s.count << '\n';
  }
}

std::vector<LevelSummary> read_summary_csv(std::istream& in) {
  std::vector<LevelSummary> out;
  read_table(in, kSummaryHeader, [&](const std::vector<std::string>& f, std::size_t n) {
    LevelSummary s;
    s.noise = parse_double(f[0], n);
    try {
      s.algo = parse_algo(f[1]);
    } catch (const Error& e) {
      parse_error(n, e.what());
    }
    s.mean_angle = parse_double(f[2], n);
    s.median_angle = parse_double(f[3], n);
    s.failure_rate = parse_double(f[4], n);
    s.count = parse_int<int>(f[5], n);
    out.push_back(s);
  });
  return out;
}

void write_region_csv(std::ostream& out, const RegionGrid& grid) {
  write_header(out, kRegionHeader);
  for (const auto& c : grid.cells) {
    out << format_double(c.u) << ',' << format_double(c.v) << ',' << to_string(c.cls.tag) << ','
        << c.cls.n_plus << ',' << c.cls.n_minus << ',' << c.cls.n_zero << '\n';
  }
}

}  // namespace cubefm
