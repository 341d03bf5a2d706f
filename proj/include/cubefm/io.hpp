#pragma once

// CSV formats shared by the command-line tool and the tests.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cubefm/core.hpp"
#include "cubefm/harness.hpp"
#include "cubefm/quadrics.hpp"

namespace cubefm {

struct Correspondences {
  std::vector<HomPoint2> X;
  std::vector<HomPoint2> Y;
};

// Header x1,x2,x3,y1,y2,y3; one homogeneous pair per row.
Correspondences read_correspondences(std::istream& in);

// Header p1,p2,p3,p4.
std::vector<HomPoint3> read_world_points(std::istream& in);

void write_correspondences(std::ostream& out, const Correspondences& c);
void write_world_points(std::ostream& out, std::span<const HomPoint3> pts);

// Doubles are written with 17 significant digits so reading back is exact.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

void write_summary_csv(std::ostream& out, std::span<const LevelSummary> summary);
std::vector<LevelSummary> read_summary_csv(std::istream& in);

void write_region_csv(std::ostream& out, const RegionGrid& grid);

std::string format_double(double x);

}  // namespace cubefm
