#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "nldirac/clifford.hpp"

namespace nld {

using cplx = std::complex<double>;

// Fourier modes |k_j| <= K of the torus R^m / (2 pi Z)^m, sorted by (|k|^2, k).
class TorusGrid {
 public:
  TorusGrid(int m, int K, int n_grid = 0);

  int dim() const noexcept { return m_; }
  int cutoff() const noexcept { return K_; }
  int n_grid() const noexcept { return n_; }
  double volume() const noexcept { return volume_; }
  double cell_volume() const noexcept { return cell_; }
  std::size_t mode_count() const noexcept { return ksq_.size(); }
  std::size_t point_count() const noexcept { return points_; }

  std::span<const int> k(std::size_t mode) const {
    return {k_.data() + mode * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
  }
  int k_sq(std::size_t mode) const { return ksq_[mode]; }
  // flat row-major index of mode k on the n^m collocation grid
  std::size_t fft_offset(std::size_t mode) const { return offset_[mode]; }
  // coordinate x_axis of collocation point `point` (row-major, last axis fastest)
  double coordinate(std::size_t point, int axis) const;

  // smallest even 2^a 3^b 5^c >= 4K+2
  static int default_grid(int K);

 private:
  int m_;
  int K_;
  int n_;
  double volume_;
  double cell_;
  std::size_t points_;
  std::vector<int> k_;
  std::vector<int> ksq_;
  std::vector<std::size_t> offset_;
};

// Fourier coefficients c_k in C^N, psi(x) = sum_k c_k e^{i k.x}; storage is mode-major.
class SpinorField {
 public:
  SpinorField() = default;
  SpinorField(std::size_t modes, int rank)
      : c_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(modes) * rank)),
        modes_(modes),
        rank_(rank) {}

  std::size_t modes() const noexcept { return modes_; }
  int rank() const noexcept { return rank_; }
  Eigen::VectorXcd& coeffs() noexcept { return c_; }
  const Eigen::VectorXcd& coeffs() const noexcept { return c_; }

  cplx* mode_data(std::size_t mode) { return c_.data() + mode * rank_; }
  const cplx* mode_data(std::size_t mode) const { return c_.data() + mode * rank_; }
  Eigen::Map<Eigen::VectorXcd> mode(std::size_t i) { return {mode_data(i), rank_}; }
  Eigen::Map<const Eigen::VectorXcd> mode(std::size_t i) const { return {mode_data(i), rank_}; }

  bool same_shape(const SpinorField& o) const noexcept {
    return modes_ == o.modes_ && rank_ == o.rank_;
  }

  SpinorField& operator+=(const SpinorField& o);
  SpinorField& operator-=(const SpinorField& o);
  SpinorField& operator*=(cplx a) {
    c_ *= a;
    return *this;
  }
  SpinorField& axpy(cplx a, const SpinorField& x);

  friend SpinorField operator+(SpinorField a, const SpinorField& b) { return a += b; }
  friend SpinorField operator-(SpinorField a, const SpinorField& b) { return a -= b; }
  friend SpinorField operator*(cplx a, SpinorField b) { return b *= a; }
  friend SpinorField operator*(double a, SpinorField b) { return b *= a; }

 private:
  Eigen::VectorXcd c_;
  std::size_t modes_ = 0;
  int rank_ = 0;
};

// Collocation values: point-major, N components per point.
using GridValues = Eigen::VectorXcd;

class Collocation {
 public:
  Collocation(const TorusGrid& grid, int rank);
  ~Collocation();
  Collocation(const Collocation&) = delete;
  Collocation& operator=(const Collocation&) = delete;

  GridValues to_grid(const SpinorField& f) const;
  // forward transform truncated to the active modes
  SpinorField from_grid(const GridValues& v) const;
  // forward transform of every grid frequency (n^m modes, FFT layout)
  void forward_inplace(GridValues& v) const;
  void backward_inplace(GridValues& v) const;

 private:
  const TorusGrid* grid_;
  int rank_;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

struct SpectrumEntry {
  double value;
  long long multiplicity;
};

struct ModeBlock {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXcd basis;       // columns are eigenvectors
};

// Exact spectrum of D = sum e_j d_j, which acts on e^{ik.x}s as i k.gamma.
class EigenTable {
 public:
  EigenTable(int m, int K, int n_grid = 0);

  const TorusGrid& grid() const { return impl_->grid; }
  const CliffordRep& rep() const { return impl_->rep; }
  int rank() const { return impl_->rep.N; }
  std::size_t modes() const { return impl_->grid.mode_count(); }
  const std::vector<SpectrumEntry>& spectrum() const { return impl_->spectrum; }
  const Collocation& collocation() const { return *impl_->colloc; }

  SpinorField zeros() const { return SpinorField(modes(), rank()); }

  Eigen::MatrixXcd symbol(std::size_t mode) const;
  ModeBlock block(std::size_t mode) const;

  // out = a_plus P+ in + a_minus P- in on one mode (zero mode: P+ = I)
  void apply_mode(std::size_t mode, const cplx* in, cplx* out, double a_plus,
                  double a_minus) const;

 private:
  struct Impl {
    Impl(int m, int K, int n_grid);
    CliffordRep rep;
    TorusGrid grid;
    std::vector<SpectrumEntry> spectrum;
    std::vector<cplx> igamma;  // i e_j, row-major N x N each
    std::unique_ptr<Collocation> colloc;
  };
  std::shared_ptr<const Impl> impl_;
};

EigenTable assemble(int m, int K, int n_grid = 0);

}  // namespace nld
