#pragma once

// Double-description method on integer data: generators of the polyhedral
// cone { y in R^d : a·y >= 0 for every row a }.

#include "coh/rational.hpp"

#include <vector>

namespace coh::detail {

struct ConeGenerators {
  std::vector<IntVector> lineality;  // basis of the lineality space
  std::vector<IntVector> rays;       // extreme rays modulo lineality, primitive
};

ConeGenerators cone_generators(std::size_t dim, const std::vector<IntVector>& rows);

// Rank of a set of rational vectors (Gaussian elimination).
std::size_t rank(std::vector<std::vector<ExactRational>> rows);

// Reduced row echelon form, zero rows dropped.
std::vector<std::vector<ExactRational>> rref(std::vector<std::vector<ExactRational>> rows);

// Basis of { x : M x = 0 } in reduced echelon form (rows of the result).
std::vector<std::vector<ExactRational>> nullspace(
    const std::vector<std::vector<ExactRational>>& m, std::size_t cols);

}  // namespace coh::detail
