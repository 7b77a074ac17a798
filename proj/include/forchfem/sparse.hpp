#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace forchfem {

/// Structural or numerical singularity detected during factorization.
/// Distinct from dimension/index errors, which are std::invalid_argument.
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Coordinate-format accumulation buffer. Duplicate entries are allowed and
/// summed on compression.
struct TripletBuffer {
  int dimension = 0;
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<double> values;

  explicit TripletBuffer(int dim = 0) : dimension(dim) {}

  void add(int r, int c, double v) {
    rows.push_back(r);
    cols.push_back(c);
    values.push_back(v);
  }
  std::size_t size() const { return values.size(); }
  void clear() {
    rows.clear();
    cols.clear();
    values.clear();
  }
};

/// Compressed sparse row storage, square. Column indices strictly increasing
/// within each row.
struct SparseMatrix {
  int dimension = 0;
  std::vector<int> row_offsets;  // size dimension + 1, nondecreasing
  std::vector<int> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }

  /// Entry lookup (binary search within the row); zero if not stored.
  double coeff(int r, int c) const {
    auto lo = col_indices.begin() + row_offsets[r];
    auto hi = col_indices.begin() + row_offsets[r + 1];
    auto it = std::lower_bound(lo, hi, c);
    if (it == hi || *it != c) return 0.0;
    return values[static_cast<std::size_t>(it - col_indices.begin())];
  }
};

inline SparseMatrix compress(const TripletBuffer& buf) {
  const int n = buf.dimension;
  for (std::size_t k = 0; k < buf.size(); ++k) {
    if (buf.rows[k] < 0 || buf.rows[k] >= n || buf.cols[k] < 0 || buf.cols[k] >= n)
      throw std::invalid_argument("compress: triplet index out of range");
  }
  // Counting sort by row, then per-row sort by column with duplicate merge.
  std::vector<int> count(n + 1, 0);
  for (int r : buf.rows) ++count[r + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<int> order(buf.size());
  {
    std::vector<int> next(count.begin(), count.end() - 1);
    for (std::size_t k = 0; k < buf.size(); ++k) order[next[buf.rows[k]]++] = static_cast<int>(k);
  }
  SparseMatrix m;
  m.dimension = n;
  m.row_offsets.assign(n + 1, 0);
  m.col_indices.reserve(buf.size());
  m.values.reserve(buf.size());
  std::vector<std::pair<int, double>> row_entries;
  for (int r = 0; r < n; ++r) {
    row_entries.clear();
    for (int k = count[r]; k < count[r + 1]; ++k) {
      int idx = order[k];
      row_entries.push_back({buf.cols[idx], buf.values[idx]});
    }
    std::stable_sort(row_entries.begin(), row_entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [c, v] : row_entries) {
      bool same_row = static_cast<int>(m.col_indices.size()) > m.row_offsets[r];
      if (same_row && m.col_indices.back() == c) {
        m.values.back() += v;
      } else {
        m.col_indices.push_back(c);
        m.values.push_back(v);
      }
    }
    m.row_offsets[r + 1] = static_cast<int>(m.col_indices.size());
  }
  return m;
}

/// Max-norm of A x - rhs.
inline double residual_norm(const SparseMatrix& a, std::span<const double> x,
                            std::span<const double> rhs) {
  if (static_cast<int>(x.size()) != a.dimension || static_cast<int>(rhs.size()) != a.dimension)
    throw std::invalid_argument("residual_norm: dimension mismatch");
  double worst = 0.0;
  for (int r = 0; r < a.dimension; ++r) {
    double s = -rhs[r];
    for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
      s += a.values[k] * x[a.col_indices[k]];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

namespace detail {
inline Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& a) {
  Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> map(
      a.dimension, a.dimension, static_cast<Eigen::Index>(a.nnz()), a.row_offsets.data(),
      a.col_indices.data(), a.values.data());
  return Eigen::SparseMatrix<double>(map);
}
}  // namespace detail

/// Direct sparse solve (LU with pivoting). Deterministic for identical input.
inline std::vector<double> solve(const SparseMatrix& a, const std::vector<double>& rhs) {
  if (static_cast<int>(rhs.size()) != a.dimension)
    throw std::invalid_argument("solve: rhs size does not match matrix dimension");
  Eigen::SparseMatrix<double> m = detail::to_eigen(a);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(m);
  lu.factorize(m);
  if (lu.info() != Eigen::Success)
    throw SingularMatrixError("solve: factorization failed (" + lu.lastErrorMessage() + ")");
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), a.dimension);
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw SingularMatrixError("solve: backsubstitution failed");
  return std::vector<double>(x.data(), x.data() + a.dimension);
}

/// Direct solver for the penalized saddle-point systems
///   [ A  B ] [u]   [F]
///   [ C  D ] [p] = [G]
/// with C = s * B^T (s = +1 or -1) and one exactly invertible block:
///   - leading_block_2x2: A is 2x2-block diagonal (velocity block of the
///     grad-p scheme); elimination leaves S = B^T A^{-1} B - s*D on the
///     trailing unknowns, which is SPD up to the overall sign.
///   - trailing_diagonal: D is diagonal (penalized pressure block of the
///     mixed scheme); elimination leaves S = A - s * B D^{-1} B^T, SPD.
/// The Schur complement is factorized with a sparse Cholesky (LDLT); its
/// symbolic analysis is done once and reused across value updates, matching
/// the fixed sparsity pattern of the Picard iteration.
class SchurComplementSolver {
 public:
  enum class Mode { leading_block_2x2, trailing_diagonal };

  SchurComplementSolver(Mode mode, int leading_size, int coupling_sign)
      : mode_(mode), n_lead_(leading_size), sign_(coupling_sign) {
    if (coupling_sign != 1 && coupling_sign != -1)
      throw std::invalid_argument("SchurComplementSolver: coupling sign must be +-1");
  }

  /// Factorize `a`; the first call fixes the sparsity pattern, later calls
  /// must pass a matrix with the identical pattern (values may differ).
  void factorize(const SparseMatrix& a) {
    if (!analyzed_) {
      analyze(a);
      analyzed_ = true;
    } else if (a.col_indices.size() != pattern_nnz_ || a.dimension != dim_) {
      throw std::invalid_argument("SchurComplementSolver: sparsity pattern changed");
    }
    if (mode_ == Mode::leading_block_2x2)
      factorize_leading(a);
    else
      factorize_trailing(a);
    ldlt_.factorize(schur_);
    if (ldlt_.info() != Eigen::Success)
      throw SingularMatrixError("SchurComplementSolver: Schur factorization failed");
  }

  std::vector<double> solve(std::span<const double> rhs) const {
    if (static_cast<int>(rhs.size()) != dim_)
      throw std::invalid_argument("SchurComplementSolver: rhs dimension mismatch");
    return mode_ == Mode::leading_block_2x2 ? solve_leading(rhs) : solve_trailing(rhs);
  }

 private:
  void analyze(const SparseMatrix& a) {
    dim_ = a.dimension;
    pattern_nnz_ = a.col_indices.size();
    n_trail_ = dim_ - n_lead_;
    if (n_lead_ <= 0 || n_trail_ <= 0)
      throw std::invalid_argument("SchurComplementSolver: bad block split");
    if (mode_ == Mode::leading_block_2x2 && n_lead_ % 2 != 0)
      throw std::invalid_argument("SchurComplementSolver: leading block size must be even");

    // Split the rows once, recording value positions in the CSR array.
    lead_rows_.assign(n_lead_, {});
    trail_rows_.assign(n_trail_, {});
    for (int r = 0; r < dim_; ++r) {
      for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
        int c = a.col_indices[k];
        Entry ent{c, k};
        if (r < n_lead_)
          lead_rows_[r].push_back(ent);
        else
          trail_rows_[r - n_lead_].push_back(ent);
      }
    }
    if (mode_ == Mode::leading_block_2x2) {
      for (int r = 0; r < n_lead_; ++r)
        for (const Entry& e : lead_rows_[r])
          if (e.col < n_lead_ && e.col / 2 != r / 2)
            throw std::invalid_argument(
                "SchurComplementSolver: leading block is not 2x2-block diagonal");
    } else {
      for (int r = 0; r < n_trail_; ++r)
        for (const Entry& e : trail_rows_[r])
          if (e.col >= n_lead_ && e.col - n_lead_ != r)
            throw std::invalid_argument("SchurComplementSolver: trailing block is not diagonal");
    }

    // Schur pattern via one symbolic pass, then LDLT symbolic analysis.
    std::vector<Eigen::Triplet<double>> trips = schur_triplets(a);
    int n_s = mode_ == Mode::leading_block_2x2 ? n_trail_ : n_lead_;
    schur_.resize(n_s, n_s);
    schur_.setFromTriplets(trips.begin(), trips.end());
    ldlt_.analyzePattern(schur_);

    // Map each triplet to its slot in the compressed Schur matrix so value
    // updates avoid re-sorting.
    slot_of_.resize(trips.size());
    for (std::size_t i = 0; i < trips.size(); ++i) {
      int col = trips[i].col(), row = trips[i].row();
      const int* begin = schur_.innerIndexPtr() + schur_.outerIndexPtr()[col];
      const int* end = schur_.innerIndexPtr() + schur_.outerIndexPtr()[col + 1];
      const int* it = std::lower_bound(begin, end, row);
      slot_of_[i] = static_cast<std::size_t>(it - schur_.innerIndexPtr());
    }
  }

  // One triplet list evaluation; reused for the symbolic pass and (through
  // slot_of_) for every numeric refresh.
  std::vector<Eigen::Triplet<double>> schur_triplets(const SparseMatrix& a) const {
    std::vector<Eigen::Triplet<double>> trips;
    if (mode_ == Mode::leading_block_2x2) {
      // S = B^T A^{-1} B - s D on trailing dofs (SPD with the scheme's signs).
      for (int b = 0; b < n_lead_ / 2; ++b) {
        double blk[2][2] = {{0, 0}, {0, 0}};
        for (int lr = 0; lr < 2; ++lr)
          for (const Entry& e : lead_rows_[2 * b + lr])
            if (e.col < n_lead_) blk[lr][e.col - 2 * b] = a.values[e.pos];
        double det = blk[0][0] * blk[1][1] - blk[0][1] * blk[1][0];
        if (det == 0.0)
          throw SingularMatrixError("SchurComplementSolver: singular 2x2 velocity block");
        double inv[2][2] = {{blk[1][1] / det, -blk[0][1] / det},
                            {-blk[1][0] / det, blk[0][0] / det}};
        // Gather the two B rows of this block (trailing columns).
        std::array<std::vector<std::pair<int, double>>, 2> brow;
        for (int lr = 0; lr < 2; ++lr)
          for (const Entry& e : lead_rows_[2 * b + lr])
            if (e.col >= n_lead_) brow[lr].push_back({e.col - n_lead_, a.values[e.pos]});
        // S += B_blk^T inv B_blk
        for (int lr = 0; lr < 2; ++lr)
          for (const auto& [ci, vi] : brow[lr])
            for (int lc = 0; lc < 2; ++lc)
              for (const auto& [cj, vj] : brow[lc])
                trips.emplace_back(ci, cj, vi * inv[lr][lc] * vj);
      }
      for (int r = 0; r < n_trail_; ++r)
        for (const Entry& e : trail_rows_[r])
          if (e.col >= n_lead_) trips.emplace_back(r, e.col - n_lead_, -sign_ * a.values[e.pos]);
    } else {
      // S = A - s * sum_j (1/d_j) c_j c_j^T built from the trailing rows C.
      for (int r = 0; r < n_lead_; ++r)
        for (const Entry& e : lead_rows_[r])
          if (e.col < n_lead_) trips.emplace_back(r, e.col, a.values[e.pos]);
      for (int j = 0; j < n_trail_; ++j) {
        double dj = 0.0;
        for (const Entry& e : trail_rows_[j])
          if (e.col >= n_lead_) dj = a.values[e.pos];
        if (dj == 0.0)
          throw SingularMatrixError("SchurComplementSolver: zero diagonal in trailing block");
        for (const Entry& ei : trail_rows_[j]) {
          if (ei.col >= n_lead_) continue;
          for (const Entry& ej : trail_rows_[j]) {
            if (ej.col >= n_lead_) continue;
            trips.emplace_back(ei.col, ej.col,
                               -sign_ * a.values[ei.pos] * a.values[ej.pos] / dj);
          }
        }
      }
    }
    return trips;
  }

  void refresh_schur(const SparseMatrix& a) {
    std::vector<Eigen::Triplet<double>> trips = schur_triplets(a);
    double* v = schur_.valuePtr();
    std::fill(v, v + schur_.nonZeros(), 0.0);
    for (std::size_t i = 0; i < trips.size(); ++i) v[slot_of_[i]] += trips[i].value();
  }

  void factorize_leading(const SparseMatrix& a) {
    values_ = &a;
    block_inv_.assign(static_cast<std::size_t>(n_lead_ / 2) * 4, 0.0);
    for (int b = 0; b < n_lead_ / 2; ++b) {
      double blk[2][2] = {{0, 0}, {0, 0}};
      for (int lr = 0; lr < 2; ++lr)
        for (const Entry& e : lead_rows_[2 * b + lr])
          if (e.col < n_lead_) blk[lr][e.col - 2 * b] = a.values[e.pos];
      double det = blk[0][0] * blk[1][1] - blk[0][1] * blk[1][0];
      if (det == 0.0) throw SingularMatrixError("SchurComplementSolver: singular velocity block");
      double* inv = &block_inv_[static_cast<std::size_t>(b) * 4];
      inv[0] = blk[1][1] / det;
      inv[1] = -blk[0][1] / det;
      inv[2] = -blk[1][0] / det;
      inv[3] = blk[0][0] / det;
    }
    refresh_schur(a);
  }

  void factorize_trailing(const SparseMatrix& a) {
    values_ = &a;
    diag_inv_.assign(n_trail_, 0.0);
    for (int j = 0; j < n_trail_; ++j)
      for (const Entry& e : trail_rows_[j])
        if (e.col >= n_lead_) diag_inv_[j] = 1.0 / a.values[e.pos];
    refresh_schur(a);
  }

  std::vector<double> solve_leading(std::span<const double> rhs) const {
    const SparseMatrix& a = *values_;
    // w = A^{-1} F blockwise; Schur rhs = s*(B^T w) - G ... with C = s B^T:
    // S p = C A^{-1} F - G  where S = C A^{-1} B - D (sign absorbed, see ctor).
    std::vector<double> w(n_lead_);
    for (int b = 0; b < n_lead_ / 2; ++b) {
      const double* inv = &block_inv_[static_cast<std::size_t>(b) * 4];
      w[2 * b] = inv[0] * rhs[2 * b] + inv[1] * rhs[2 * b + 1];
      w[2 * b + 1] = inv[2] * rhs[2 * b] + inv[3] * rhs[2 * b + 1];
    }
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n_trail_);
    for (int j = 0; j < n_trail_; ++j) {
      double s = -rhs[n_lead_ + j];
      for (const Entry& e : trail_rows_[j])
        if (e.col < n_lead_) s += a.values[e.pos] * w[e.col];
      r[j] = sign_ > 0 ? s : -s;  // divide through by s so S stays SPD
    }
    Eigen::VectorXd p = ldlt_.solve(r);
    if (ldlt_.info() != Eigen::Success)
      throw SingularMatrixError("SchurComplementSolver: Schur solve failed");
    std::vector<double> x(dim_);
    for (int j = 0; j < n_trail_; ++j) x[n_lead_ + j] = p[j];
    // u = A^{-1} (F - B p)
    std::vector<double> f2(n_lead_);
    for (int rr = 0; rr < n_lead_; ++rr) {
      double s = rhs[rr];
      for (const Entry& e : lead_rows_[rr])
        if (e.col >= n_lead_) s -= a.values[e.pos] * p[e.col - n_lead_];
      f2[rr] = s;
    }
    for (int b = 0; b < n_lead_ / 2; ++b) {
      const double* inv = &block_inv_[static_cast<std::size_t>(b) * 4];
      x[2 * b] = inv[0] * f2[2 * b] + inv[1] * f2[2 * b + 1];
      x[2 * b + 1] = inv[2] * f2[2 * b] + inv[3] * f2[2 * b + 1];
    }
    return x;
  }

  std::vector<double> solve_trailing(std::span<const double> rhs) const {
    const SparseMatrix& a = *values_;
    // S u = F - B D^{-1} G with B = s C^T, assembled from the trailing rows.
    Eigen::VectorXd r(n_lead_);
    for (int i = 0; i < n_lead_; ++i) r[i] = rhs[i];
    for (int j = 0; j < n_trail_; ++j) {
      double gj = rhs[n_lead_ + j] * diag_inv_[j];
      for (const Entry& e : trail_rows_[j])
        if (e.col < n_lead_) r[e.col] -= sign_ * a.values[e.pos] * gj;
    }
    Eigen::VectorXd u = ldlt_.solve(r);
    if (ldlt_.info() != Eigen::Success)
      throw SingularMatrixError("SchurComplementSolver: Schur solve failed");
    std::vector<double> x(dim_);
    for (int i = 0; i < n_lead_; ++i) x[i] = u[i];
    // p = D^{-1} (G - C u)
    for (int j = 0; j < n_trail_; ++j) {
      double s = rhs[n_lead_ + j];
      for (const Entry& e : trail_rows_[j])
        if (e.col < n_lead_) s -= a.values[e.pos] * u[e.col];
      x[n_lead_ + j] = s * diag_inv_[j];
    }
    return x;
  }

  struct Entry {
    int col;
    int pos;  // index into SparseMatrix::values
  };

  Mode mode_;
  int n_lead_ = 0;
  int sign_ = 1;
  int dim_ = 0;
  int n_trail_ = 0;
  std::size_t pattern_nnz_ = 0;
  bool analyzed_ = false;
  std::vector<std::vector<Entry>> lead_rows_;
  std::vector<std::vector<Entry>> trail_rows_;
  std::vector<double> block_inv_;
  std::vector<double> diag_inv_;
  std::vector<std::size_t> slot_of_;
  const SparseMatrix* values_ = nullptr;
  Eigen::SparseMatrix<double> schur_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

}  // namespace forchfem
