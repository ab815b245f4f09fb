#pragma once

#include <Eigen/Dense>

namespace rbig {

/// N samples (rows) by D dimensions (columns). Column-major, so each
/// marginal is contiguous.
using DataMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Natural-log information unit.
using Nats = double;

}  // namespace rbig
