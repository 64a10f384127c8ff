#pragma once

#include <vector>

#include "wavebranch/solver.hpp"

namespace wavebranch::detail {

CutBasis make_cut_basis(const std::vector<double>& coords, const std::vector<bool>& dirichlet,
                        const std::vector<int>& unknowns, LateralBc lateral, double width);

std::vector<cplx> axial_phases(const Eigen::VectorXd& mu, double k, double ha);

}  // namespace wavebranch::detail
