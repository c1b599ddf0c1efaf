#pragma once

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace cerashape {

/// Smallest thickness a candidate shape may have anywhere along x [m].
inline constexpr double kMinThickness = 1e-4;

/// Fixed x-stations of the structured grid. The x positions are never
/// design variables.
struct GridSpec {
  int n_x = 0;
  int n_y = 0;
  std::vector<double> x_coords;

  static GridSpec equidistant(int n_x, int n_y, double x_begin, double x_end);

  double length() const { return x_coords.back() - x_coords.front(); }
  void validate() const;
};

/// Meanline and thickness values at every x-station.
struct ShapeParams {
  Eigen::VectorXd ml;
  Eigen::VectorXd th;
};

using Edge = std::array<int, 2>;
using Triangle = std::array<int, 3>;

struct Mesh {
  int n_x = 0;
  int n_y = 0;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<Triangle> elements;          // counterclockwise
  std::vector<int> dirichlet_nodes;        // column i = 0
  std::vector<Edge> neumann_fixed_edges;   // column i = n_x - 1
  std::vector<Edge> free_edges_upper;
  std::vector<Edge> free_edges_lower;

  int node_index(int i, int j) const { return i * n_y + j; }
  double element_area(int e) const;
};

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c);

/// Vertical position of grid point (i, j), zero-based, for the given shape.
double grid_y(const ShapeParams& rho, int i, int j, int n_y);

/// Builds the n_x by n_y node grid. Every cell is cut along its
/// lower-left to upper-right diagonal.
Mesh build_grid(const ShapeParams& rho, const GridSpec& spec);

/// (meanline, thickness) -> (upper, lower) boundary heights.
std::pair<Eigen::VectorXd, Eigen::VectorXd> ml_th_to_ul(const ShapeParams& rho);
ShapeParams ul_to_ml_th(const Eigen::VectorXd& upper, const Eigen::VectorXd& lower);

/// Text dump: "nodes N elements M", then "i j x y" per node, then "a b c".
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace cerashape
