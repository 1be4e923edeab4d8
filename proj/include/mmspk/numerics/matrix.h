// Copyright (c) 2026 The mmspk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMSPK_NUMERICS_MATRIX_H_
#define MMSPK_NUMERICS_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace mmspk {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Used for layer weights, similarity
// tables, and classifier columns alike.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  // Takes ownership of row-major `data`; throws ShapeError if the size does
  // not equal rows * cols.
  Matrix(size_t rows, size_t cols, std::vector<double> data);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double &operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> Row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> Row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  void SetZero();
  bool SameShape(const Matrix &other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  // True when every entry is finite.
  bool AllFinite() const;

  static Matrix Identity(size_t n);

  friend bool operator==(const Matrix &, const Matrix &) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

double Dot(std::span<const double> a, std::span<const double> b);
double L2Norm(std::span<const double> v);

// Returns v / ||v||. Throws DegenerateInputError for empty or all-zero input.
Vector L2Normalize(std::span<const double> v);

// cos(a, b) = a.b / (||a|| ||b||), clamped to [-1, 1].
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

// y = M x, M is rows x cols.
Vector MatVec(const Matrix &m, std::span<const double> x);
// y = M^T x.
Vector MatTVec(const Matrix &m, std::span<const double> x);
// M += scale * a b^T.
void AddOuter(double scale, std::span<const double> a,
              std::span<const double> b, Matrix *m);
// y += scale * x.
void Axpy(double scale, std::span<const double> x, std::span<double> y);

// Jacobian-transpose of x -> x / ||x|| applied to `grad_out`:
// (grad_out - y (y . grad_out)) / ||x||, where y is the normalized vector.
Vector BackpropNormalize(std::span<const double> normalized, double norm,
                         std::span<const double> grad_out);

// Logsumexp with max-shift.
double LogSumExp(std::span<const double> v);

// Index of the first maximal entry.
size_t ArgMax(std::span<const double> v);

}  // namespace mmspk

#endif  // MMSPK_NUMERICS_MATRIX_H_
