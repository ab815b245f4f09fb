#pragma once

// Data-parallel kernels. Each has an OpenMP version (the default) and a
// serial reference with identical semantics; tests check that the two agree
// and rbig_kernels_bench compares their speed.

#include <vector>

#include "rbig/marginal.hpp"
#include "rbig/types.hpp"

namespace rbig::kernels {

/// Fits one MarginalMap per column and replaces each column by its forward
/// image. With keep_maps == false the returned vector is empty. A constant
/// column throws DegenerateMarginalError carrying the column index.
std::vector<MarginalMap> fit_gaussianize_columns(DataMatrix& data, bool keep_maps = true);
std::vector<MarginalMap> fit_gaussianize_columns_serial(DataMatrix& data, bool keep_maps = true);

/// marginal_entropy of every column.
std::vector<double> column_entropies(const DataMatrix& data, const EntropyOptions& options);
std::vector<double> column_entropies_serial(const DataMatrix& data, const EntropyOptions& options);

/// Applies per-column maps in place (forward or inverse).
void apply_marginals(const std::vector<MarginalMap>& maps, DataMatrix& data, bool inverse);
void apply_marginals_serial(const std::vector<MarginalMap>& maps, DataMatrix& data, bool inverse);

/// Euclidean distance from each row of `queries` to its k-th nearest row of
/// `reference`. With exclude_self the queries are the reference set and each
/// point's own row is skipped.
std::vector<double> knn_distances(const DataMatrix& queries, const DataMatrix& reference, int k,
                                  bool exclude_self);
std::vector<double> knn_distances_serial(const DataMatrix& queries, const DataMatrix& reference,
                                         int k, bool exclude_self);

}  // namespace rbig::kernels
