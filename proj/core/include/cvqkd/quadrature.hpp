#pragma once

#include <vector>

namespace cvqkd {

/// Tensor-product Gauss-Hermite grid adapted to N(0,sigma2) x N(0,sigma2).
/// Weights carry the probabilist normalization (they sum to 1); the node
/// set is symmetric under (x,y) -> (-x,-y).
struct QuadratureGrid {
    struct Node {
        double x;
        double y;
        double w;
    };

    std::vector<Node> nodes;
    int order = 0;
    double sigma2 = 0.0;
};

/// 1D Gauss-Hermite rule for weight e^{-t^2}, via the Jacobi matrix.
/// Returned weights are normalized to sum 1 and the node set is exactly
/// symmetric about zero.
void gauss_hermite(int order, std::vector<double>& nodes,
                   std::vector<double>& weights);

/// Builds the 2D grid. order must be even and in [8, 256].
QuadratureGrid build_grid(double sigma2, int order);

} // namespace cvqkd
