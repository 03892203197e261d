#include "bhom/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "bhom/errors.hpp"

namespace bhom {

SparseMatrix SparseMatrix::from_triplets(int n, std::vector<int> rows,
                                         std::vector<int> cols,
                                         std::vector<double> vals) {
  SparseMatrix m(n);
  const std::size_t nt = vals.size();
  std::vector<std::size_t> order(nt);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Stable order: (row, col), then insertion order, so accumulation of
  // duplicates is bit-deterministic.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a] != rows[b] ? rows[a] < rows[b] : cols[a] < cols[b];
  });
  m.col_idx_.reserve(nt);
  m.val_.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t i = order[t];
    if (rows[i] < 0 || rows[i] >= n || cols[i] < 0 || cols[i] >= n)
      throw Error(Errc::internal_error, "triplet index out of bounds");
    if (!m.val_.empty() && rows[i] == rows[order[t - 1]] && cols[i] == cols[order[t - 1]]) {
      m.val_.back() += vals[i];
    } else {
      m.row_ptr_[rows[i] + 1]++;
      m.col_idx_.push_back(cols[i]);
      m.val_.push_back(vals[i]);
    }
  }
  for (int r = 0; r < n; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

void SparseMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(n_, 0.0);
  for (int r = 0; r < n_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += val_[k] * x[col_idx_[k]];
    y[r] = s;
  }
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y;
  multiply(x, y);
  return y;
}

double SparseMatrix::coeff(int i, int j) const {
  for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
    if (col_idx_[k] == j) return val_[k];
  return 0.0;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (int r = 0; r < n_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      if (col_idx_[k] == r) d[r] = val_[k];
  return d;
}

SparseMatrix SparseMatrix::add(const SparseMatrix& o) const {
  if (n_ != o.n_) throw Error(Errc::internal_error, "matrix size mismatch in add");
  SparseMatrix m(n_);
  m.col_idx_.reserve(nnz() + o.nnz());
  m.val_.reserve(nnz() + o.nnz());
  for (int r = 0; r < n_; ++r) {
    int ka = row_ptr_[r], kb = o.row_ptr_[r];
    const int ea = row_ptr_[r + 1], eb = o.row_ptr_[r + 1];
    while (ka < ea || kb < eb) {
      int c;
      double v;
      if (kb >= eb || (ka < ea && col_idx_[ka] < o.col_idx_[kb])) {
        c = col_idx_[ka];
        v = val_[ka++];
      } else if (ka >= ea || o.col_idx_[kb] < col_idx_[ka]) {
        c = o.col_idx_[kb];
        v = o.val_[kb++];
      } else {
        c = col_idx_[ka];
        v = val_[ka++] + o.val_[kb++];
      }
      m.col_idx_.push_back(c);
      m.val_.push_back(v);
    }
    m.row_ptr_[r + 1] = static_cast<int>(m.val_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix m(n_);
  m.col_idx_.resize(val_.size());
  m.val_.resize(val_.size());
  std::vector<int> count(n_ + 1, 0);
  for (int c : col_idx_) count[c + 1]++;
  for (int r = 0; r < n_; ++r) count[r + 1] += count[r];
  m.row_ptr_ = count;
  std::vector<int> next = count;
  for (int r = 0; r < n_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int pos = next[col_idx_[k]]++;
      m.col_idx_[pos] = r;
      m.val_[pos] = val_[k];
    }
  return m;
}

double SparseMatrix::quad_form(const std::vector<double>& x,
                               const std::vector<double>& y) const {
  double s = 0.0;
  for (int r = 0; r < n_; ++r) {
    double row = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) row += val_[k] * y[col_idx_[k]];
    s += x[r] * row;
  }
  return s;
}

double SparseMatrix::symmetry_defect() const {
  const SparseMatrix t = transpose();
  double worst = 0.0;
  for (int r = 0; r < n_; ++r) {
    double s = 0.0;
    int ka = row_ptr_[r], kb = t.row_ptr_[r];
    const int ea = row_ptr_[r + 1], eb = t.row_ptr_[r + 1];
    while (ka < ea || kb < eb) {
      if (kb >= eb || (ka < ea && col_idx_[ka] < t.col_idx_[kb]))
        s += std::fabs(val_[ka++]);
      else if (ka >= ea || t.col_idx_[kb] < col_idx_[ka])
        s += std::fabs(t.val_[kb++]);
      else
        s += std::fabs(val_[ka++] - t.val_[kb++]);
    }
    worst = std::max(worst, s);
  }
  return worst;
}

void SparseMatrix::dump(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  char buf[96];
  for (int r = 0; r < n_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r, col_idx_[k], val_[k]);
      out << buf;
    }
}

}  // namespace bhom
