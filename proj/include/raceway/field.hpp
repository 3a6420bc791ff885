#pragma once

#include <cassert>
#include <vector>

namespace raceway {

/// Ghost columns on each side of a layered field; two are needed for the
/// limited reconstruction stencil.
inline constexpr int kGhost = 2;

/// Dense (layer, cell) array with ghost columns. Cells of one layer are
/// contiguous so the flux kernels can run down a layer row.
class Field {
 public:
  Field() = default;
  Field(int n_layers, int n_cells, double init = 0.0)
      : nl_(n_layers), nc_(n_cells), stride_(n_cells + 2 * kGhost),
        v_(static_cast<size_t>(n_layers) * stride_, init) {}

  int layers() const { return nl_; }
  int cells() const { return nc_; }
  int stride() const { return stride_; }

  /// i ranges over [-kGhost, n_cells + kGhost).
  double& at(int layer, int i) { return v_[idx(layer, i)]; }
  double at(int layer, int i) const { return v_[idx(layer, i)]; }

  double* row(int layer) { return v_.data() + static_cast<size_t>(layer) * stride_ + kGhost; }
  const double* row(int layer) const {
    return v_.data() + static_cast<size_t>(layer) * stride_ + kGhost;
  }

  void fill(double x) { v_.assign(v_.size(), x); }

 private:
  size_t idx(int layer, int i) const {
    assert(layer >= 0 && layer < nl_);
    assert(i >= -kGhost && i < nc_ + kGhost);
    return static_cast<size_t>(layer) * stride_ + (i + kGhost);
  }
  int nl_ = 0, nc_ = 0, stride_ = 0;
  std::vector<double> v_;
};

}  // namespace raceway
