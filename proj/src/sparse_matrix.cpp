// Copyright 2026 the lpfap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lpfap/sparse_matrix.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>

namespace lpfap {

SparseMatrix SparseMatrix::fromTriplets(int numRows, int numCols,
                                        std::vector<Triplet> entries) {
  if (numRows < 0 || numCols < 0)
    throw std::out_of_range("negative matrix dimension");
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= numRows || t.col < 0 || t.col >= numCols)
      throw std::out_of_range("matrix entry (" + std::to_string(t.row) + "," +
                              std::to_string(t.col) + ") outside shape");
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  SparseMatrix m;
  m.numRows_ = numRows;
  m.numCols_ = numCols;
  m.rowStart_.assign(numRows + 1, 0);
  m.rowIndex_.reserve(entries.size());
  m.rowValue_.reserve(entries.size());

  std::size_t k = 0;
  for (int i = 0; i < numRows; ++i) {
    while (k < entries.size() && entries[k].row == i) {
      const int col = entries[k].col;
      double sum = 0.0;
      // duplicates are summed in input order
      while (k < entries.size() && entries[k].row == i &&
             entries[k].col == col) {
        sum += entries[k].value;
        ++k;
      }
      if (sum != 0.0) {
        m.rowIndex_.push_back(col);
        m.rowValue_.push_back(sum);
      }
    }
    m.rowStart_[i + 1] = static_cast<int>(m.rowIndex_.size());
  }
  m.buildColumnView();
  return m;
}

void SparseMatrix::buildColumnView() {
  colStart_.assign(numCols_ + 1, 0);
  for (int c : rowIndex_) ++colStart_[c + 1];
  for (int j = 0; j < numCols_; ++j) colStart_[j + 1] += colStart_[j];
  colIndex_.resize(rowIndex_.size());
  colValue_.resize(rowValue_.size());
  std::vector<int> fill(colStart_.begin(), colStart_.end() - 1);
  for (int i = 0; i < numRows_; ++i) {
    for (int k = rowStart_[i]; k < rowStart_[i + 1]; ++k) {
      const int pos = fill[rowIndex_[k]]++;
      colIndex_[pos] = i;
      colValue_[pos] = rowValue_[k];
    }
  }
}

SparseVectorView SparseMatrix::row(int i) const {
  assert(i >= 0 && i < numRows_);
  const auto begin = static_cast<std::size_t>(rowStart_[i]);
  const auto len = static_cast<std::size_t>(rowStart_[i + 1] - rowStart_[i]);
  return {std::span<const int>(rowIndex_).subspan(begin, len),
          std::span<const double>(rowValue_).subspan(begin, len)};
}

SparseVectorView SparseMatrix::col(int j) const {
  assert(j >= 0 && j < numCols_);
  const auto begin = static_cast<std::size_t>(colStart_[j]);
  const auto len = static_cast<std::size_t>(colStart_[j + 1] - colStart_[j]);
  return {std::span<const int>(colIndex_).subspan(begin, len),
          std::span<const double>(colValue_).subspan(begin, len)};
}

void SparseMatrix::multiply(std::span<const double> x,
                            std::span<double> out) const {
  if (x.size() != static_cast<std::size_t>(numCols_) ||
      out.size() != static_cast<std::size_t>(numRows_))
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  for (int i = 0; i < numRows_; ++i) {
    double sum = 0.0;
    for (int k = rowStart_[i]; k < rowStart_[i + 1]; ++k)
      sum += rowValue_[k] * x[rowIndex_[k]];
    out[i] = sum;
  }
}

void SparseMatrix::multiplyTransposed(std::span<const double> y,
                                      std::span<double> out) const {
  if (y.size() != static_cast<std::size_t>(numRows_) ||
      out.size() != static_cast<std::size_t>(numCols_))
    throw std::invalid_argument(
        "SparseMatrix::multiplyTransposed: dimension mismatch");
  for (int j = 0; j < numCols_; ++j) {
    double sum = 0.0;
    for (int k = colStart_[j]; k < colStart_[j + 1]; ++k)
      sum += colValue_[k] * y[colIndex_[k]];
    out[j] = sum;
  }
}

SparseMatrix SparseMatrix::scaled(std::span<const double> rowScale,
                                  std::span<const double> colScale) const {
  assert(rowScale.size() == static_cast<std::size_t>(numRows_));
  assert(colScale.size() == static_cast<std::size_t>(numCols_));
  SparseMatrix m = *this;
  for (int i = 0; i < numRows_; ++i)
    for (int k = rowStart_[i]; k < rowStart_[i + 1]; ++k)
      m.rowValue_[k] *= rowScale[i] * colScale[rowIndex_[k]];
  for (int j = 0; j < numCols_; ++j)
    for (int k = colStart_[j]; k < colStart_[j + 1]; ++k)
      m.colValue_[k] *= rowScale[colIndex_[k]] * colScale[j];
  return m;
}

std::vector<SparseMatrix::Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (int i = 0; i < numRows_; ++i)
    for (int k = rowStart_[i]; k < rowStart_[i + 1]; ++k)
      out.push_back({i, rowIndex_[k], rowValue_[k]});
  return out;
}

bool SparseMatrix::operator==(const SparseMatrix& other) const {
  return numRows_ == other.numRows_ && numCols_ == other.numCols_ &&
         rowStart_ == other.rowStart_ && rowIndex_ == other.rowIndex_ &&
         rowValue_ == other.rowValue_;
}

}  // namespace lpfap
