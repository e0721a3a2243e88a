#include "entropia/grid.hpp"

#include "entropia/error.hpp"

#include <algorithm>
#include <cmath>

namespace entropia {

Grid::Grid(StateSpace space, unsigned g) : space_(std::move(space)), g_(g) {
  if (g == 0 || g * space_.dim() > 40)
    throw Error(ErrorKind::parameter_out_of_range, "grid exponent out of range");
  step_ = std::ldexp(1.0, -static_cast<int>(g));
  size_ = 1;
  for (std::size_t a = 0; a < space_.dim(); ++a) {
    std::int64_t n = (std::int64_t{1} << g) + (space_.coord(a) == CoordKind::interval ? 1 : 0);
    counts_.push_back(n);
    size_ *= n;
  }
}

double Grid::covering_radius() const {
  return std::sqrt(static_cast<double>(dim())) / 2.0 * step_;
}

void Grid::coords_of(std::int64_t index, std::span<std::int64_t> out) const {
  for (std::size_t a = dim(); a-- > 0;) {
    out[a] = index % counts_[a];
    index /= counts_[a];
  }
}

std::int64_t Grid::index_of(std::span<const std::int64_t> coords) const {
  std::int64_t idx = 0;
  for (std::size_t a = 0; a < dim(); ++a) {
    std::int64_t c = coords[a];
    if (space_.coord(a) == CoordKind::periodic) {
      c %= counts_[a];
      if (c < 0) c += counts_[a];
    } else if (c < 0 || c >= counts_[a]) {
      return -1;
    }
    idx = idx * counts_[a] + c;
  }
  return idx;
}

std::vector<std::int64_t> Grid::window(std::int64_t centre, double radius) const {
  const std::size_t m = dim();
  std::vector<std::int64_t> c(m), lo(m), hi(m), cur(m);
  coords_of(centre, c);
  const auto w = static_cast<std::int64_t>(std::ceil(radius / step_ - 1e-9));
  for (std::size_t a = 0; a < m; ++a) {
    if (space_.coord(a) == CoordKind::periodic) {
      if (2 * w + 1 >= counts_[a]) {
        lo[a] = 0;
        hi[a] = counts_[a] - 1;
      } else {
        lo[a] = c[a] - w;
        hi[a] = c[a] + w;
      }
    } else {
      lo[a] = std::max<std::int64_t>(0, c[a] - w);
      hi[a] = std::min<std::int64_t>(counts_[a] - 1, c[a] + w);
    }
  }
  std::vector<std::int64_t> out;
  cur = lo;
  while (true) {
    out.push_back(index_of(cur));
    std::size_t a = m;
    bool done = true;
    while (a-- > 0) {
      if (++cur[a] <= hi[a]) {
        done = false;
        break;
      }
      cur[a] = lo[a];
    }
    if (done) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Grid::point(std::int64_t index, std::span<double> out) const {
  for (std::size_t a = dim(); a-- > 0;) {
    out[a] = static_cast<double>(index % counts_[a]) * step_;
    index /= counts_[a];
  }
}

Point Grid::point(std::int64_t index) const {
  Point p(dim());
  point(index, p);
  return p;
}

std::int64_t Grid::nearest(std::span<const double> p) const {
  std::vector<std::int64_t> c(dim());
  for (std::size_t a = 0; a < dim(); ++a) {
    c[a] = static_cast<std::int64_t>(std::llround(p[a] / step_));
    if (space_.coord(a) == CoordKind::interval) c[a] = std::clamp<std::int64_t>(c[a], 0, counts_[a] - 1);
  }
  return index_of(c);
}

Region::Region(const Grid& grid) : grid_(&grid), full_(true) {
  indices_.resize(static_cast<std::size_t>(grid.size()));
  for (std::int64_t i = 0; i < grid.size(); ++i) indices_[static_cast<std::size_t>(i)] = i;
}

Region::Region(const Grid& grid, std::vector<std::int64_t> indices)
    : grid_(&grid), indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (!indices_.empty() && (indices_.front() < 0 || indices_.back() >= grid.size()))
    throw Error(ErrorKind::precondition, "region index outside the grid");
  full_ = static_cast<std::int64_t>(indices_.size()) == grid.size();
  if (!full_) {
    lookup_.assign(static_cast<std::size_t>(grid.size()), -1);
    for (std::size_t p = 0; p < indices_.size(); ++p)
      lookup_[static_cast<std::size_t>(indices_[p])] = static_cast<std::int32_t>(p);
  }
}

std::int64_t Region::position(std::int64_t grid_index) const {
  if (full_) return grid_index;
  return lookup_[static_cast<std::size_t>(grid_index)];
}

}  // namespace entropia
