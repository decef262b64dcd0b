#include "oldreg/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace oldreg {

namespace {

void write_value(std::ostream& os, double v, bool first) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  if (!first) os << ' ';
  os << buf;
}

// Writes `rows` lines of `cols` values from the logical index window starting
// at (i0, j0).
void write_section(std::ostream& os, const char* label, const Array2D& a, int i0, int j0, int cols,
                   int rows) {
  os << label << '\n';
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) write_value(os, a(i0 + i, j0 + j), i == 0);
    os << '\n';
  }
}

void read_section(std::istream& is, const char* label, Array2D& a, int i0, int j0, int cols,
                  int rows, const std::string& path) {
  std::string got;
  if (!(is >> got) || got != label)
    throw CheckpointError(path + ": expected section '" + std::string(label) + "', got '" + got +
                          "'");
  for (int j = 0; j < rows; ++j)
    for (int i = 0; i < cols; ++i)
      if (!(is >> a(i0 + i, j0 + j)))
        throw CheckpointError(path + ": truncated section '" + std::string(label) + "'");
}

}  // namespace

void write_checkpoint(const std::string& path, const State& s, const Grid& g) {
  std::ofstream os(path);
  if (!os) throw CheckpointError("cannot open '" + path + "' for writing");
  os << "OLDREG1 " << g.nx << ' ' << g.ny;
  write_value(os, g.lx, false);
  write_value(os, g.ly, false);
  write_value(os, s.time, false);
  os << '\n';
  write_section(os, "u", s.vel.u, 0, 0, g.nx + 1, g.ny);
  write_section(os, "v", s.vel.v, 0, 0, g.nx, g.ny + 1);
  write_section(os, "pressure", s.pressure, 0, 0, g.nx, g.ny);
  write_section(os, "T11", s.stress.t11, 0, 0, g.nx, g.ny);
  write_section(os, "T12", s.stress.t12, 0, 0, g.nx, g.ny);
  write_section(os, "T22", s.stress.t22, 0, 0, g.nx, g.ny);
  if (!os) throw CheckpointError("write failed for '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CheckpointError("cannot open checkpoint '" + path + "'");
  std::string magic;
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0, time = 0.0;
  if (!(is >> magic >> nx >> ny >> lx >> ly >> time) || magic != "OLDREG1")
    throw CheckpointError(path + ": not an OLDREG1 checkpoint");
  if (nx < 4 || ny < 4 || !(lx > 0.0) || !(ly > 0.0))
    throw CheckpointError(path + ": invalid grid header");

  Checkpoint cp;
  cp.grid = Grid(nx, ny, lx, ly);
  cp.state = State(cp.grid);
  cp.state.time = time;
  read_section(is, "u", cp.state.vel.u, 0, 0, nx + 1, ny, path);
  read_section(is, "v", cp.state.vel.v, 0, 0, nx, ny + 1, path);
  read_section(is, "pressure", cp.state.pressure, 0, 0, nx, ny, path);
  read_section(is, "T11", cp.state.stress.t11, 0, 0, nx, ny, path);
  read_section(is, "T12", cp.state.stress.t12, 0, 0, nx, ny, path);
  read_section(is, "T22", cp.state.stress.t22, 0, 0, nx, ny, path);
  apply_boundary(cp.state, cp.grid);
  return cp;
}

}  // namespace oldreg
