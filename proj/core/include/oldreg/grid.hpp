#pragma once

#include <vector>

#include "oldreg/tensor.hpp"

// 2D MAC staggering on a closed rectangular box with no-slip walls:
//   u lives on vertical faces,   logical index (i,j), i in [0,nx], j in [-1,ny]
//   v lives on horizontal faces, logical index (i,j), i in [-1,nx], j in [0,ny]
//   cell-centred tensors/scalars carry one ghost ring, i,j in [-1,nx].
// The extra rows/columns are ghost values; faces sitting on the boundary
// (u at i=0,nx and v at j=0,ny) are genuine degrees of freedom pinned to 0.

namespace oldreg {

struct Grid {
  int nx = 0, ny = 0;      // interior cells per direction, >= 4
  double lx = 1.0, ly = 1.0;
  double hx = 0.0, hy = 0.0;

  Grid() = default;
  Grid(int nx_, int ny_, double lx_, double ly_)
      : nx(nx_), ny(ny_), lx(lx_), ly(ly_), hx(lx_ / nx_), hy(ly_ / ny_) {}

  double cell_area() const { return hx * hy; }
  double area() const { return lx * ly; }
  // Coordinates: cell centre (xc, yc), face positions follow from staggering.
  double xc(int i) const { return (i + 0.5) * hx; }
  double yc(int j) const { return (j + 0.5) * hy; }
  double xf(int i) const { return i * hx; }
  double yf(int j) const { return j * hy; }
};

// Dense 2D array with logical ghost offsets: valid indices are
// i in [-ox, sx-ox), j in [-oy, sy-oy).
class Array2D {
public:
  Array2D() = default;
  Array2D(int sx, int sy, int ox, int oy)
      : sx_(sx), sy_(sy), ox_(ox), oy_(oy), a_(static_cast<std::size_t>(sx) * sy, 0.0) {}

  double operator()(int i, int j) const { return a_[idx(i, j)]; }
  double& operator()(int i, int j) { return a_[idx(i, j)]; }

  int size_x() const { return sx_; }
  int size_y() const { return sy_; }
  int lo_x() const { return -ox_; }
  int lo_y() const { return -oy_; }
  int hi_x() const { return sx_ - ox_; }  // exclusive
  int hi_y() const { return sy_ - oy_; }

  void fill(double v) { a_.assign(a_.size(), v); }
  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j + oy_) * sx_ + (i + ox_);
  }
  int sx_ = 0, sy_ = 0, ox_ = 0, oy_ = 0;
  std::vector<double> a_;
};

struct StaggeredVelocityField {
  Array2D u, v;

  StaggeredVelocityField() = default;
  explicit StaggeredVelocityField(const Grid& g)
      : u(g.nx + 1, g.ny + 2, 0, 1), v(g.nx + 2, g.ny + 1, 1, 0) {}
};

// Cell-centred symmetric tensor field, components stored separately.
struct SymTensorField {
  Array2D t11, t12, t22;

  SymTensorField() = default;
  explicit SymTensorField(const Grid& g)
      : t11(g.nx + 2, g.ny + 2, 1, 1), t12(g.nx + 2, g.ny + 2, 1, 1),
        t22(g.nx + 2, g.ny + 2, 1, 1) {}

  SymTensor2 at(int i, int j) const {
    SymTensor2 t;
    t.at(0, 0) = t11(i, j);
    t.at(0, 1) = t12(i, j);
    t.at(1, 1) = t22(i, j);
    return t;
  }
  void set(int i, int j, const SymTensor2& t) {
    t11(i, j) = t(0, 0);
    t12(i, j) = t(0, 1);
    t22(i, j) = t(1, 1);
  }
};

// No-slip ghost fill: boundary faces are set to exactly 0; tangential ghost
// values reflect (ghost = -mirror) so the interpolated wall velocity vanishes;
// stress ghosts copy the adjacent interior cell (first-order zero-flux wall).
void apply_velocity_boundary(StaggeredVelocityField& vel, const Grid& g);
void apply_stress_boundary(SymTensorField& ts, const Grid& g);

// Area-weighted mean of the interior cells (the grid is uniform, so this is
// the plain average).
SymTensor2 stress_mean(const SymTensorField& ts, const Grid& g);

// max_cells |div_h v| of the interior cell divergence.
double max_divergence(const StaggeredVelocityField& vel, const Grid& g);

}  // namespace oldreg
