#pragma once

// Cell-centered tensor grids on [-1,1]^n x [0,1] (half) or [-1,1]^(n+1)
// (full), n in {1,2}. The last axis is always y; the face at y = 0 plays the
// role of the characteristic hyperplane.

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace rholab {

enum class Symmetry { even, odd, none };

const char* to_string(Symmetry s);
Symmetry parse_symmetry(std::string_view text);

/// A point (x_1, ..., x_n, y); only the first dim() entries are meaningful.
using Point = std::array<double, 3>;

class Grid {
 public:
  Grid(int n, std::vector<int> cells, bool half, Symmetry symmetry);

  int n() const { return n_; }
  int dim() const { return n_ + 1; }
  int yaxis() const { return n_; }
  bool half() const { return half_; }
  Symmetry symmetry() const { return symmetry_; }

  int cells(int axis) const { return cells_[axis]; }
  double h(int axis) const { return h_[axis]; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return lo_[axis] + cells_[axis] * h_[axis]; }
  std::size_t size() const { return size_; }
  double cell_volume() const;

  /// Linear index; axis 0 runs fastest, y slowest.
  std::size_t index(const std::array<int, 3>& ijk) const;
  std::array<int, 3> coords(std::size_t idx) const;
  double center(int axis, int i) const { return lo_[axis] + (i + 0.5) * h_[axis]; }
  Point center(std::size_t idx) const;
  std::size_t stride(int axis) const { return stride_[axis]; }

  /// Row index whose lower face is y = 0 (0 on half grids, Ny/2 on full grids).
  int sigma_row() const { return half_ ? 0 : cells_[n_] / 2; }

  /// Cells whose center lies in the open ball |z| < r (upper half on full grids).
  std::vector<char> ball_mask(double r) const;
  /// Cells of the upper half that the sphere |z| = r cuts through.
  std::vector<char> sphere_mask(double r) const;
  /// Cells directly above a y = 0 face whose center satisfies |x| < r.
  std::vector<std::size_t> sigma_faces(double r) const;

 private:
  int n_;
  bool half_;
  Symmetry symmetry_;
  std::array<int, 3> cells_{};
  std::array<double, 3> h_{};
  std::array<double, 3> lo_{};
  std::array<std::size_t, 3> stride_{};
  std::size_t size_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validates cell counts (>= 4 per axis, even y-count on full grids) and the
/// symmetry flag (half grids take even/odd, full grids take none).
GridPtr build_grid(int n, std::vector<int> cells, bool half, Symmetry symmetry);

struct Field {
  GridPtr grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(GridPtr g, double fill = 0.0);
  Field(GridPtr g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

using PointFunction = std::function<double(std::span<const double>)>;

/// Field of f evaluated at the cell centers.
Field sample(GridPtr grid, const PointFunction& f);

/// Half-grid field extended to the full box with u(x,-y) = +-u(x,y).
Field reflect(const Field& field, Symmetry mode);

/// Upper half of a full-grid field, tagged with the given symmetry.
Field restrict_to_half(const Field& field, Symmetry mode);

double max_abs_difference(const Field& u, const Field& v);

}  // namespace rholab
