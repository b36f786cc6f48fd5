#ifndef QOC_TYPES_HPP
#define QOC_TYPES_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qoc {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct dim_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense complex matrix, row-major.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw dim_error("matrix shape mismatch");
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

class ComplexVector {
public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t dim) : data_(dim) {}
  ComplexVector(std::initializer_list<cplx> init) : data_(init) {}

  std::size_t dim() const { return data_.size(); }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }
  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }

  ComplexVector& operator+=(const ComplexVector& o) {
    if (dim() != o.dim()) throw dim_error("vector dim mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexVector& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

private:
  std::vector<cplx> data_;
};

/// M x N real grid of control values (M controls, N time steps), row-major.
class RealGrid {
public:
  RealGrid() = default;
  RealGrid(std::size_t controls, std::size_t steps)
      : controls_(controls), steps_(steps), data_(controls * steps, 0.0) {}

  std::size_t controls() const { return controls_; }
  std::size_t steps() const { return steps_; }
  double& operator()(std::size_t k, std::size_t j) { return data_[k * steps_ + j]; }
  const double& operator()(std::size_t k, std::size_t j) const { return data_[k * steps_ + j]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  RealGrid& operator+=(const RealGrid& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  RealGrid& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

private:
  std::size_t controls_ = 0, steps_ = 0;
  std::vector<double> data_;
};

}  // namespace qoc

#endif
