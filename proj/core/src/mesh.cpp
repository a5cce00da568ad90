#include "rholab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rholab/error.hpp"

namespace rholab {

const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::even: return "even";
    case Symmetry::odd: return "odd";
    case Symmetry::none: return "none";
  }
  return "none";
}

Symmetry parse_symmetry(std::string_view text) {
  if (text == "even") return Symmetry::even;
  if (text == "odd") return Symmetry::odd;
  if (text == "none") return Symmetry::none;
  throw Error(ErrorKind::unknown_name, "unknown symmetry '" + std::string(text) + "'");
}

Grid::Grid(int n, std::vector<int> cells, bool half, Symmetry symmetry)
    : n_(n), half_(half), symmetry_(symmetry) {
  if (n != 1 && n != 2) throw Error(ErrorKind::out_of_range, "x-dimension must be 1 or 2");
  if (static_cast<int>(cells.size()) != n + 1) {
    throw Error(ErrorKind::inconsistent_flags, "need one cell count per axis");
  }
  for (int d = 0; d <= n; ++d) {
    if (cells[d] < 4) throw Error(ErrorKind::out_of_range, "at least 4 cells per axis");
    cells_[d] = cells[d];
    lo_[d] = -1.0;
    h_[d] = 2.0 / cells[d];
  }
  if (half) {
    lo_[n] = 0.0;
    h_[n] = 1.0 / cells[n];
    if (symmetry == Symmetry::none) {
      throw Error(ErrorKind::inconsistent_flags, "half grids need even or odd symmetry");
    }
  } else {
    if (symmetry != Symmetry::none) {
      throw Error(ErrorKind::inconsistent_flags,
                  "full grids carry no symmetry; use a half grid for even/odd problems");
    }
    if (cells[n] % 2 != 0) {
      throw Error(ErrorKind::inconsistent_flags, "full grids need an even y cell count");
    }
  }
  std::size_t s = 1;
  for (int d = 0; d <= n; ++d) {
    stride_[d] = s;
    s *= static_cast<std::size_t>(cells_[d]);
  }
  size_ = s;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int d = 0; d <= n_; ++d) v *= h_[d];
  return v;
}

std::size_t Grid::index(const std::array<int, 3>& ijk) const {
  std::size_t idx = 0;
  for (int d = 0; d <= n_; ++d) idx += static_cast<std::size_t>(ijk[d]) * stride_[d];
  return idx;
}

std::array<int, 3> Grid::coords(std::size_t idx) const {
  std::array<int, 3> ijk{};
  for (int d = 0; d <= n_; ++d) {
    ijk[d] = static_cast<int>(idx % static_cast<std::size_t>(cells_[d]));
    idx /= static_cast<std::size_t>(cells_[d]);
  }
  return ijk;
}

Point Grid::center(std::size_t idx) const {
  const auto ijk = coords(idx);
  Point z{};
  for (int d = 0; d <= n_; ++d) z[d] = center(d, ijk[d]);
  return z;
}

std::vector<char> Grid::ball_mask(double r) const {
  std::vector<char> mask(size_, 0);
  for (std::size_t i = 0; i < size_; ++i) {
    const Point z = center(i);
    if (z[n_] <= 0.0) continue;
    double s = 0.0;
    for (int d = 0; d <= n_; ++d) s += z[d] * z[d];
    mask[i] = s < r * r;
  }
  return mask;
}

std::vector<char> Grid::sphere_mask(double r) const {
  std::vector<char> mask(size_, 0);
  for (std::size_t i = 0; i < size_; ++i) {
    const Point z = center(i);
    if (z[n_] <= 0.0) continue;
    double near = 0.0;
    double far = 0.0;
    for (int d = 0; d <= n_; ++d) {
      const double lo = z[d] - 0.5 * h_[d];
      const double hi = z[d] + 0.5 * h_[d];
      const double c = std::clamp(0.0, lo, hi);
      near += c * c;
      far += std::max(lo * lo, hi * hi);
    }
    mask[i] = near < r * r && far > r * r;
  }
  return mask;
}

std::vector<std::size_t> Grid::sigma_faces(double r) const {
  std::vector<std::size_t> out;
  const int row = sigma_row();
  const int nx0 = cells_[0];
  const int nx1 = n_ == 2 ? cells_[1] : 1;
  for (int j = 0; j < nx1; ++j) {
    for (int i = 0; i < nx0; ++i) {
      std::array<int, 3> ijk{i, 0, 0};
      double s = center(0, i) * center(0, i);
      if (n_ == 2) {
        ijk[1] = j;
        s += center(1, j) * center(1, j);
      }
      ijk[n_] = row;
      if (s < r * r) out.push_back(index(ijk));
    }
  }
  return out;
}

GridPtr build_grid(int n, std::vector<int> cells, bool half, Symmetry symmetry) {
  return std::make_shared<const Grid>(n, std::move(cells), half, symmetry);
}

Field::Field(GridPtr g, double fill) : grid(std::move(g)), values(grid->size(), fill) {}

Field::Field(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) {
    throw Error(ErrorKind::inconsistent_flags, "field size does not match its grid");
  }
}

Field sample(GridPtr grid, const PointFunction& f) {
  Field out(grid);
  const int dim = grid->dim();
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Point z = grid->center(i);
    out[i] = f(std::span<const double>(z.data(), dim));
  }
  return out;
}

Field reflect(const Field& field, Symmetry mode) {
  const Grid& g = *field.grid;
  if (!g.half()) throw Error(ErrorKind::inconsistent_flags, "reflect needs a half-grid field");
  if (mode == Symmetry::none) throw Error(ErrorKind::inconsistent_flags, "reflect needs even or odd");
  std::vector<int> cells(g.dim());
  for (int d = 0; d < g.dim(); ++d) cells[d] = g.cells(d);
  const int ny = g.cells(g.yaxis());
  cells[g.yaxis()] = 2 * ny;
  auto full = build_grid(g.n(), cells, false, Symmetry::none);
  Field out(full);
  const double sign = mode == Symmetry::odd ? -1.0 : 1.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto ijk = g.coords(i);
    const int j = ijk[g.yaxis()];
    ijk[g.yaxis()] = ny + j;
    out[full->index(ijk)] = field[i];
    ijk[g.yaxis()] = ny - 1 - j;
    out[full->index(ijk)] = sign * field[i];
  }
  return out;
}

Field restrict_to_half(const Field& field, Symmetry mode) {
  const Grid& g = *field.grid;
  if (g.half()) throw Error(ErrorKind::inconsistent_flags, "restrict needs a full-grid field");
  std::vector<int> cells(g.dim());
  for (int d = 0; d < g.dim(); ++d) cells[d] = g.cells(d);
  const int ny = g.cells(g.yaxis()) / 2;
  cells[g.yaxis()] = ny;
  auto half = build_grid(g.n(), cells, true, mode);
  Field out(half);
  for (std::size_t i = 0; i < half->size(); ++i) {
    auto ijk = half->coords(i);
    ijk[g.yaxis()] += ny;
    out[i] = field[g.index(ijk)];
  }
  return out;
}

double max_abs_difference(const Field& u, const Field& v) {
  if (u.size() != v.size()) throw Error(ErrorKind::inconsistent_flags, "field sizes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

}  // namespace rholab
