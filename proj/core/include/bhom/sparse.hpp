#pragma once

#include <string>
#include <vector>

namespace bhom {

/// Row-compressed sparse matrix. Indices are sorted within each row and
/// duplicate-free after construction; building from triplets accumulates in a
/// fixed order so assembly is bit-deterministic.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(int n) : n_(n), row_ptr_(n + 1, 0) {}

  static SparseMatrix from_triplets(int n, std::vector<int> rows, std::vector<int> cols,
                                    std::vector<double> vals);

  int n() const { return n_; }
  int nnz() const { return static_cast<int>(val_.size()); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return val_; }

  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

  double coeff(int i, int j) const;  // 0 when absent
  std::vector<double> diagonal() const;

  /// Entrywise sum; patterns may differ.
  SparseMatrix add(const SparseMatrix& o) const;
  SparseMatrix transpose() const;

  /// x' A y
  double quad_form(const std::vector<double>& x, const std::vector<double>& y) const;

  /// max_i sum_j |A_ij - A_ji| (exact symmetry check helper).
  double symmetry_defect() const;

  /// Coordinate text dump (row col value per line), for debugging.
  void dump(const std::string& path) const;

 private:
  int n_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> val_;
};

/// Triplet accumulator used by the assemblers.
struct TripletList {
  int n = 0;
  std::vector<int> rows, cols;
  std::vector<double> vals;

  explicit TripletList(int n = 0) : n(n) {}
  void add(int r, int c, double v) {
    rows.push_back(r);
    cols.push_back(c);
    vals.push_back(v);
  }
  SparseMatrix build() const { return SparseMatrix::from_triplets(n, rows, cols, vals); }
};

}  // namespace bhom
