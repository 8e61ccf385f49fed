#pragma once

// Ellipses around [-1, 1], complex grid functions, the Wirtinger derivative
// and a direct Cauchy-transform solver for dbar v = w.

#include <complex>
#include <cstddef>
#include <vector>

namespace carleman {

using cplx = std::complex<double>;

struct EllipseDomain {
  double eps = 0.0;

  double a() const;  // cosh eps
  double b() const;  // sinh eps
  bool contains(cplx z) const;
};

// s with z on the boundary of the ellipse of parameter s: |z-1| + |z+1| = 2 cosh s
double elliptic_radius(cplx z);
// gradient of the elliptic radius as dbar s = (s_x + i s_y)/2
cplx dbar_elliptic_radius(cplx z);

double dist_to_interval(cplx z);

// Uniform square grid: nodes x_i = -X + i h (i < nx), y_j = -Y + j h (j < ny),
// y = 0 is always a node.
struct Grid {
  std::size_t nx = 0, ny = 0;
  double X = 0.0, Y = 0.0, h = 0.0;

  // `cells` intervals across [-X, X]; Y is the smallest multiple of h >= Ymin.
  static Grid make(double X, double Ymin, std::size_t cells);
  // box around the closure of the ellipse of parameter eps0
  static Grid for_ellipse(double eps0, std::size_t cells);

  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
  double x(std::size_t i) const { return -X + double(i) * h; }
  double y(std::size_t j) const { return -Y + double(j) * h; }
  cplx z(std::size_t i, std::size_t j) const { return {x(i), y(j)}; }
  cplx z(std::size_t k) const { return z(k % nx, k / nx); }
  std::size_t j_axis() const { return (ny - 1) / 2; }  // row of y = 0
};

struct GridFn {
  Grid grid;
  std::vector<cplx> v;

  GridFn() = default;
  explicit GridFn(const Grid& g) : grid(g), v(g.size(), cplx{}) {}

  cplx& operator[](std::size_t k) { return v[k]; }
  const cplx& operator[](std::size_t k) const { return v[k]; }
  cplx& at(std::size_t i, std::size_t j) { return v[grid.index(i, j)]; }
  const cplx& at(std::size_t i, std::size_t j) const { return v[grid.index(i, j)]; }
};

// grid indices inside the open ellipse of parameter eps
std::vector<std::size_t> ellipse_nodes(const Grid& g, double eps);
// nodes on y = 0 with |x| <= 1
std::vector<std::size_t> interval_nodes(const Grid& g);

double sup_norm(const GridFn& f, const std::vector<std::size_t>& nodes);

struct GeometryConstants {
  double C = 0.0;  // sup d(z, [-1,1])/eps over the boundaries
  double E = 0.0;  // largest E with disk(x, E(1-b) eps) inside the eps/2 ellipse
};

GeometryConstants geometry_constants(double epsmax);

// Exp-based smooth step of the elliptic radius: 1 for s <= s0, 0 for s >= s1.
struct RadialStep {
  double s0 = 0.0, s1 = 0.0;

  double value(cplx z) const;
  cplx dbar(cplx z) const;
};

// RadialStep{eps/2, 0.9 eps}
double cutoff_value(double eps, cplx z);
cplx cutoff_dbar(double eps, cplx z);

struct Cutoff {
  GridFn phi;
  double max_grad = 0.0;  // max |grad phi| = 2 max |dbar phi| on the grid
};

// Throws GridTooCoarse unless the minor-axis gap between the eps/2 and eps
// ellipses spans at least 8 cells.
Cutoff cutoff_phi(const Grid& g, double eps);

// (F_x + i F_y)/2 with centered differences, one-sided at the box edge.
GridFn dbar(const GridFn& F);
// F_z = (F_x - i F_y)/2, same stencils
GridFn dz(const GridFn& F);

struct DbarSolution {
  GridFn v;                 // zero outside the evaluated targets
  double bound = 0.0;       // 2 |w|_sup sqrt(area/pi)
  double w_sup = 0.0;
  double support_area = 0.0;
};

// v(z) = -(h^2/pi) sum_zeta w(zeta)/(zeta - z), singular cell omitted, at the
// given targets (all nodes when empty). Throws SupportTouchesEdge if w is
// nonzero on the outer ring of the box.
DbarSolution solve_dbar(const GridFn& w, const std::vector<std::size_t>& targets = {});

}  // namespace carleman
