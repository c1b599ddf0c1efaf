#include "cerashape/geometry.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "cerashape/error.hpp"
#include "format.hpp"

namespace cerashape {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveThickness: return "NonPositiveThickness";
    case ErrorCode::DegenerateCell: return "DegenerateCell";
    case ErrorCode::DegenerateElement: return "DegenerateElement";
    case ErrorCode::DegenerateFacet: return "DegenerateFacet";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::NonIntegerM: return "NonIntegerM";
    case ErrorCode::AllRatiosUndefined: return "AllRatiosUndefined";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

GridSpec GridSpec::equidistant(int n_x, int n_y, double x_begin, double x_end) {
  if (n_x < 2 || n_y < 2) {
    throw Error(ErrorCode::InvalidArgument, "grid needs n_x >= 2 and n_y >= 2");
  }
  if (!(x_end > x_begin)) {
    throw Error(ErrorCode::InvalidArgument, "grid x-range must be increasing");
  }
  GridSpec spec;
  spec.n_x = n_x;
  spec.n_y = n_y;
  spec.x_coords.resize(static_cast<std::size_t>(n_x));
  const double h = (x_end - x_begin) / (n_x - 1);
  for (int i = 0; i < n_x; ++i) {
    spec.x_coords[static_cast<std::size_t>(i)] = x_begin + h * i;
  }
  spec.x_coords.back() = x_end;
  return spec;
}

void GridSpec::validate() const {
  if (n_x < 2 || n_y < 2) {
    throw Error(ErrorCode::InvalidArgument, "grid needs n_x >= 2 and n_y >= 2");
  }
  if (static_cast<int>(x_coords.size()) != n_x) {
    throw Error(ErrorCode::InvalidArgument, "x_coords length differs from n_x");
  }
  const double h = (x_coords.back() - x_coords.front()) / (n_x - 1);
  for (int i = 1; i < n_x; ++i) {
    const double step = x_coords[i] - x_coords[i - 1];
    if (!(step > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "x_coords must be strictly increasing");
    }
    if (std::abs(step - h) > 1e-12 * std::max(1.0, std::abs(h)) * n_x) {
      throw Error(ErrorCode::InvalidArgument, "x_coords must be equidistant");
    }
  }
}

double Mesh::element_area(int e) const {
  const auto& t = elements[static_cast<std::size_t>(e)];
  return signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
}

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double grid_y(const ShapeParams& rho, int i, int j, int n_y) {
  // zero-based j: offset j - (n_y - 1)/2 equals the one-based j - (n_y + 1)/2
  const double offset = static_cast<double>(j) - 0.5 * static_cast<double>(n_y - 1);
  return rho.ml[i] + rho.th[i] / static_cast<double>(n_y - 1) * offset;
}

Mesh build_grid(const ShapeParams& rho, const GridSpec& spec) {
  spec.validate();
  if (rho.ml.size() != spec.n_x || rho.th.size() != spec.n_x) {
    throw Error(ErrorCode::InvalidArgument, "shape parameter length differs from n_x");
  }
  for (int i = 0; i < spec.n_x; ++i) {
    if (!(rho.th[i] > 0.0)) {
      throw Error(ErrorCode::NonPositiveThickness,
                  "thickness at station " + std::to_string(i) + " is " + format_double(rho.th[i]));
    }
  }

  Mesh mesh;
  mesh.n_x = spec.n_x;
  mesh.n_y = spec.n_y;
  const int nx = spec.n_x;
  const int ny = spec.n_y;
  mesh.nodes.resize(static_cast<std::size_t>(nx * ny));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      mesh.nodes[mesh.node_index(i, j)] = {spec.x_coords[i], grid_y(rho, i, j, ny)};
    }
  }

  mesh.elements.reserve(static_cast<std::size_t>(2 * (nx - 1) * (ny - 1)));
  for (int i = 0; i + 1 < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      const int ll = mesh.node_index(i, j);
      const int lr = mesh.node_index(i + 1, j);
      const int ur = mesh.node_index(i + 1, j + 1);
      const int ul = mesh.node_index(i, j + 1);
      mesh.elements.push_back({ll, lr, ur});
      mesh.elements.push_back({ll, ur, ul});
    }
  }
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    if (!(mesh.element_area(e) > 0.0)) {
      throw Error(ErrorCode::DegenerateCell, "triangle " + std::to_string(e) + " has nonpositive area");
    }
  }

  for (int j = 0; j < ny; ++j) {
    mesh.dirichlet_nodes.push_back(mesh.node_index(0, j));
  }
  for (int j = 0; j + 1 < ny; ++j) {
    mesh.neumann_fixed_edges.push_back({mesh.node_index(nx - 1, j), mesh.node_index(nx - 1, j + 1)});
  }
  for (int i = 0; i + 1 < nx; ++i) {
    mesh.free_edges_upper.push_back({mesh.node_index(i + 1, ny - 1), mesh.node_index(i, ny - 1)});
    mesh.free_edges_lower.push_back({mesh.node_index(i, 0), mesh.node_index(i + 1, 0)});
  }
  return mesh;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> ml_th_to_ul(const ShapeParams& rho) {
  return {rho.ml + 0.5 * rho.th, rho.ml - 0.5 * rho.th};
}

ShapeParams ul_to_ml_th(const Eigen::VectorXd& upper, const Eigen::VectorXd& lower) {
  if (upper.size() != lower.size()) {
    throw Error(ErrorCode::InvalidArgument, "upper and lower boundaries differ in length");
  }
  for (Eigen::Index i = 0; i < upper.size(); ++i) {
    if (!(upper[i] > lower[i])) {
      throw Error(ErrorCode::NonPositiveThickness, "upper <= lower at station " + std::to_string(i));
    }
  }
  return {0.5 * (upper + lower), upper - lower};
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "nodes " << mesh.nodes.size() << " elements " << mesh.elements.size() << '\n';
  for (int i = 0; i < mesh.n_x; ++i) {
    for (int j = 0; j < mesh.n_y; ++j) {
      const auto& p = mesh.nodes[mesh.node_index(i, j)];
      out << i << ' ' << j << ' ' << format_double(p.x()) << ' ' << format_double(p.y()) << '\n';
    }
  }
  for (const auto& t : mesh.elements) {
    out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
}

}  // namespace cerashape
