#include <fftw3.h>

#include <mutex>
#include <vector>

#include "nldirac/errors.hpp"
#include "nldirac/torus.hpp"

namespace nld {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Collocation::Collocation(const TorusGrid& grid, int rank) : grid_(&grid), rank_(rank) {
  std::vector<int> dims(grid.dim(), grid.n_grid());
  std::vector<cplx> scratch(grid.point_count() * rank);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_many_dft(grid.dim(), dims.data(), rank, as_fftw(scratch.data()), nullptr,
                            rank, 1, as_fftw(scratch.data()), nullptr, rank, 1, FFTW_FORWARD,
                            flags);
  bwd_ = fftw_plan_many_dft(grid.dim(), dims.data(), rank, as_fftw(scratch.data()), nullptr,
                            rank, 1, as_fftw(scratch.data()), nullptr, rank, 1, FFTW_BACKWARD,
                            flags);
  if (!fwd_ || !bwd_) throw Error("collocation: FFTW planning failed");
}

Collocation::~Collocation() {
  std::lock_guard lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Collocation::forward_inplace(GridValues& v) const {
  if (static_cast<std::size_t>(v.size()) != grid_->point_count() * rank_)
    throw ShapeError("collocation: grid size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), as_fftw(v.data()), as_fftw(v.data()));
}

void Collocation::backward_inplace(GridValues& v) const {
  if (static_cast<std::size_t>(v.size()) != grid_->point_count() * rank_)
    throw ShapeError("collocation: grid size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), as_fftw(v.data()), as_fftw(v.data()));
}

GridValues Collocation::to_grid(const SpinorField& f) const {
  if (f.modes() != grid_->mode_count() || f.rank() != rank_)
    throw ShapeError("collocation: field does not match grid");
  GridValues v = GridValues::Zero(static_cast<Eigen::Index>(grid_->point_count()) * rank_);
  for (std::size_t i = 0; i < f.modes(); ++i) {
    const cplx* src = f.mode_data(i);
    cplx* dst = v.data() + grid_->fft_offset(i) * rank_;
    for (int a = 0; a < rank_; ++a) dst[a] = src[a];
  }
  backward_inplace(v);
  return v;
}

SpinorField Collocation::from_grid(const GridValues& values) const {
  GridValues v = values;
  forward_inplace(v);
  const double scale = 1.0 / static_cast<double>(grid_->point_count());
  SpinorField f(grid_->mode_count(), rank_);
  for (std::size_t i = 0; i < f.modes(); ++i) {
    const cplx* src = v.data() + grid_->fft_offset(i) * rank_;
    cplx* dst = f.mode_data(i);
    for (int a = 0; a < rank_; ++a) dst[a] = scale * src[a];
  }
  return f;
}

}  // namespace nld
