#include "rbig/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <queue>
#include <span>

#include "rbig/errors.hpp"

namespace rbig::kernels {
namespace {

std::span<double> column(DataMatrix& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

std::span<const double> column(const DataMatrix& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

// Captures the first exception thrown inside an OpenMP region so it can be
// rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

MarginalMap fit_column(DataMatrix& data, Eigen::Index j) {
  auto col = column(data, j);
  std::vector<double> scratch(col.begin(), col.end());
  try {
    return MarginalMap::fit_transform(scratch, col);
  } catch (const DegenerateMarginalError& e) {
    throw DegenerateMarginalError("column " + std::to_string(j) + ": " + e.what(), j);
  }
}

}  // namespace

std::vector<MarginalMap> fit_gaussianize_columns(DataMatrix& data, bool keep_maps) {
  const Eigen::Index d = data.cols();
  std::vector<MarginalMap> maps(static_cast<std::size_t>(d));
  ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index j = 0; j < d; ++j) {
    slot.run([&] {
      MarginalMap m = fit_column(data, j);
      if (keep_maps) maps[static_cast<std::size_t>(j)] = std::move(m);
    });
  }
  slot.rethrow();
  if (!keep_maps) maps.clear();
  return maps;
}

std::vector<MarginalMap> fit_gaussianize_columns_serial(DataMatrix& data, bool keep_maps) {
  std::vector<MarginalMap> maps;
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    MarginalMap m = fit_column(data, j);
    if (keep_maps) maps.push_back(std::move(m));
  }
  return maps;
}

std::vector<double> column_entropies(const DataMatrix& data, const EntropyOptions& options) {
  const Eigen::Index d = data.cols();
  std::vector<double> out(static_cast<std::size_t>(d));
  ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < d; ++j) {
    slot.run([&] { out[static_cast<std::size_t>(j)] = marginal_entropy(column(data, j), options); });
  }
  slot.rethrow();
  return out;
}

std::vector<double> column_entropies_serial(const DataMatrix& data, const EntropyOptions& options) {
  std::vector<double> out;
  for (Eigen::Index j = 0; j < data.cols(); ++j) out.push_back(marginal_entropy(column(data, j), options));
  return out;
}

void apply_marginals(const std::vector<MarginalMap>& maps, DataMatrix& data, bool inverse) {
  if (static_cast<Eigen::Index>(maps.size()) != data.cols()) throw DataError("apply_marginals: dimension mismatch");
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  ExceptionSlot slot;
  // Rows are independent; parallelize over the flattened (column, row block)
  // space so small D still spreads across threads.
  constexpr Eigen::Index kBlock = 1024;
  const Eigen::Index blocks = (n + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < d * blocks; ++t) {
    const Eigen::Index j = t / blocks;
    const Eigen::Index begin = (t % blocks) * kBlock;
    const Eigen::Index end = std::min(n, begin + kBlock);
    slot.run([&] {
      const MarginalMap& m = maps[static_cast<std::size_t>(j)];
      for (Eigen::Index i = begin; i < end; ++i) data(i, j) = inverse ? m.inverse(data(i, j)) : m.forward(data(i, j));
    });
  }
  slot.rethrow();
}

void apply_marginals_serial(const std::vector<MarginalMap>& maps, DataMatrix& data, bool inverse) {
  if (static_cast<Eigen::Index>(maps.size()) != data.cols()) throw DataError("apply_marginals: dimension mismatch");
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    auto col = column(data, j);
    if (inverse) {
      maps[static_cast<std::size_t>(j)].inverse(col, col);
    } else {
      maps[static_cast<std::size_t>(j)].forward(col, col);
    }
  }
}

namespace {

void check_knn_args(const DataMatrix& queries, const DataMatrix& reference, int k, bool exclude_self) {
  if (queries.cols() != reference.cols()) throw DataError("knn: dimension mismatch");
  if (k < 1) throw DomainError("knn: k must be >= 1");
  const Eigen::Index available = reference.rows() - (exclude_self ? 1 : 0);
  if (available < k) throw DataError("knn: fewer reference points than k");
  if (exclude_self && queries.rows() != reference.rows()) throw DataError("knn: exclude_self needs queries == reference");
}

// k smallest squared distances kept in a bounded max-heap.
class KSmallest {
 public:
  explicit KSmallest(int k) : k_(static_cast<std::size_t>(k)) {}
  void push(double v) {
    if (heap_.size() < k_) {
      heap_.push(v);
    } else if (v < heap_.top()) {
      heap_.pop();
      heap_.push(v);
    }
  }
  double kth() const { return heap_.top(); }

 private:
  std::size_t k_;
  std::priority_queue<double> heap_;
};

}  // namespace

std::vector<double> knn_distances_serial(const DataMatrix& queries, const DataMatrix& reference, int k,
                                         bool exclude_self) {
  check_knn_args(queries, reference, k, exclude_self);
  std::vector<double> out(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    KSmallest best(k);
    for (Eigen::Index r = 0; r < reference.rows(); ++r) {
      if (exclude_self && r == i) continue;
      best.push((queries.row(i) - reference.row(r)).squaredNorm());
    }
    out[static_cast<std::size_t>(i)] = std::sqrt(best.kth());
  }
  return out;
}

std::vector<double> knn_distances(const DataMatrix& queries, const DataMatrix& reference, int k,
                                  bool exclude_self) {
  check_knn_args(queries, reference, k, exclude_self);
  const Eigen::Index nq = queries.rows();
  const Eigen::Index nr = reference.rows();
  // Row-major copies give contiguous points for the exact distance pass.
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor q = queries;
  const RowMajor r = reference;
  const Vector r_norms = reference.rowwise().squaredNorm();
  const Vector q_norms = queries.rowwise().squaredNorm();
  std::vector<double> out(static_cast<std::size_t>(nq));

  // Candidate selection uses |a|^2 + |b|^2 - 2 a.b on blocks of queries; the
  // chosen k-th neighbour distance is then recomputed exactly. A small pool of
  // extra candidates absorbs rounding in the Gram form.
  constexpr Eigen::Index kBlock = 256;
  const int pool = k + 8;
  const Eigen::Index blocks = (nq + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index begin = b * kBlock;
    const Eigen::Index rows = std::min(kBlock, nq - begin);
    const Matrix cross = queries.middleRows(begin, rows) * reference.transpose();
    std::vector<std::pair<double, Eigen::Index>> cand;
    for (Eigen::Index t = 0; t < rows; ++t) {
      const Eigen::Index i = begin + t;
      cand.clear();
      for (Eigen::Index j = 0; j < nr; ++j) {
        if (exclude_self && j == i) continue;
        cand.emplace_back(q_norms(i) + r_norms(j) - 2.0 * cross(t, j), j);
      }
      const auto take = std::min<std::size_t>(static_cast<std::size_t>(pool), cand.size());
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end());
      KSmallest best(k);
      for (std::size_t c = 0; c < take; ++c) {
        const Eigen::Index j = cand[c].second;
        double s = 0.0;
        for (Eigen::Index m = 0; m < q.cols(); ++m) {
          const double diff = q(i, m) - r(j, m);
          s += diff * diff;
        }
        best.push(s);
      }
      out[static_cast<std::size_t>(i)] = std::sqrt(best.kth());
    }
  }
  return out;
}

}  // namespace rbig::kernels
