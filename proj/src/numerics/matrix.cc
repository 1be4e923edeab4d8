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

#include "mmspk/numerics/matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmspk/numerics/errors.h"

namespace mmspk {

Matrix::Matrix(size_t rows, size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw ShapeError("Matrix: " + std::to_string(data_.size()) +
                     " entries for shape " + std::to_string(rows_) + "x" +
                     std::to_string(cols_));
}

void Matrix::SetZero() { std::fill(data_.begin(), data_.end(), 0.0); }

bool Matrix::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

Matrix Matrix::Identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ShapeError("Dot: length " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double L2Norm(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

Vector L2Normalize(std::span<const double> v) {
  if (v.empty()) throw DegenerateInputError("L2Normalize: empty vector");
  double norm = L2Norm(v);
  if (norm == 0.0) throw DegenerateInputError("L2Normalize: zero vector");
  if (!std::isfinite(norm)) throw NumericError("L2Normalize: non-finite input");
  Vector out(v.begin(), v.end());
  for (double &x : out) x /= norm;
  return out;
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ShapeError("CosineSimilarity: length " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
  double na = L2Norm(a), nb = L2Norm(b);
  if (na == 0.0 || nb == 0.0)
    throw DegenerateInputError("CosineSimilarity: zero vector");
  return std::clamp(Dot(a, b) / (na * nb), -1.0, 1.0);
}

Vector MatVec(const Matrix &m, std::span<const double> x) {
  if (x.size() != m.cols())
    throw ShapeError("MatVec: matrix has " + std::to_string(m.cols()) +
                     " columns, vector has " + std::to_string(x.size()));
  Vector y(m.rows(), 0.0);
  for (size_t r = 0; r < m.rows(); ++r) {
    auto row = m.Row(r);
    double sum = 0.0;
    for (size_t c = 0; c < row.size(); ++c) sum += row[c] * x[c];
    y[r] = sum;
  }
  return y;
}

Vector MatTVec(const Matrix &m, std::span<const double> x) {
  if (x.size() != m.rows())
    throw ShapeError("MatTVec: matrix has " + std::to_string(m.rows()) +
                     " rows, vector has " + std::to_string(x.size()));
  Vector y(m.cols(), 0.0);
  for (size_t r = 0; r < m.rows(); ++r) {
    if (x[r] == 0.0) continue;
    auto row = m.Row(r);
    for (size_t c = 0; c < row.size(); ++c) y[c] += row[c] * x[r];
  }
  return y;
}

void AddOuter(double scale, std::span<const double> a,
              std::span<const double> b, Matrix *m) {
  if (m->rows() != a.size() || m->cols() != b.size())
    throw ShapeError("AddOuter: shape mismatch");
  for (size_t r = 0; r < a.size(); ++r) {
    double ar = scale * a[r];
    if (ar == 0.0) continue;
    auto row = m->Row(r);
    for (size_t c = 0; c < b.size(); ++c) row[c] += ar * b[c];
  }
}

void Axpy(double scale, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw ShapeError("Axpy: length mismatch");
  for (size_t i = 0; i < x.size(); ++i) y[i] += scale * x[i];
}

Vector BackpropNormalize(std::span<const double> normalized, double norm,
                         std::span<const double> grad_out) {
  double radial = Dot(normalized, grad_out);
  Vector g(grad_out.size());
  for (size_t i = 0; i < g.size(); ++i)
    g[i] = (grad_out[i] - normalized[i] * radial) / norm;
  return g;
}

double LogSumExp(std::span<const double> v) {
  if (v.empty()) throw DegenerateInputError("LogSumExp: empty input");
  double mx = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - mx);
  return mx + std::log(sum);
}

size_t ArgMax(std::span<const double> v) {
  if (v.empty()) throw DegenerateInputError("ArgMax: empty input");
  return static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace mmspk
