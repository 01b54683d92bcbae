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

#ifndef LPFAP_SPARSE_MATRIX_HPP
#define LPFAP_SPARSE_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace lpfap {

/// Read-only view of one row or one column of a SparseMatrix.
struct SparseVectorView {
  std::span<const int> index;
  std::span<const double> value;

  std::size_t size() const { return index.size(); }
};

/// Sparse matrix held simultaneously in row-major (CSR) and column-major
/// (CSC) form. Both views are built together and always encode the same
/// matrix; entries inside a row are sorted by column and vice versa.
///
/// All products run in a fixed sequential order so results are
/// bit-reproducible.
class SparseMatrix {
 public:
  struct Triplet {
    int row;
    int col;
    double value;
  };

  SparseMatrix() = default;

  /// Builds a matrix from coordinate entries. Duplicate (row, col) entries
  /// are summed; entries summing to exactly zero are dropped.
  /// Throws std::out_of_range for indices outside the given shape.
  static SparseMatrix fromTriplets(int numRows, int numCols,
                                   std::vector<Triplet> entries);

  int numRows() const { return numRows_; }
  int numCols() const { return numCols_; }
  std::size_t nnz() const { return rowValue_.size(); }

  SparseVectorView row(int i) const;
  SparseVectorView col(int j) const;

  /// out = A x
  void multiply(std::span<const double> x, std::span<double> out) const;
  /// out = A^T y
  void multiplyTransposed(std::span<const double> y,
                          std::span<double> out) const;

  /// Returns D_r A D_c.
  SparseMatrix scaled(std::span<const double> rowScale,
                      std::span<const double> colScale) const;

  std::vector<Triplet> triplets() const;

  bool operator==(const SparseMatrix& other) const;

 private:
  void buildColumnView();

  int numRows_ = 0;
  int numCols_ = 0;
  std::vector<int> rowStart_{0};
  std::vector<int> rowIndex_;  // column index per CSR entry
  std::vector<double> rowValue_;
  std::vector<int> colStart_{0};
  std::vector<int> colIndex_;  // row index per CSC entry
  std::vector<double> colValue_;
};

}  // namespace lpfap

#endif  // LPFAP_SPARSE_MATRIX_HPP
