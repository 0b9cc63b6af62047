#pragma once

// Dense linear algebra over GF(p): row reduction, rank, span membership,
// nullspaces. Matrices are row-major vectors of rows; all entries reduced.

#include <cstdint>
#include <optional>
#include <vector>

namespace hofa {

using GfRow = std::vector<std::uint32_t>;
using GfMatrix = std::vector<GfRow>;

// Reduced row echelon form; returns pivot column indices.
std::vector<std::size_t> gf_rref(GfMatrix& rows, std::uint32_t p);

std::size_t gf_rank(const GfMatrix& rows, std::uint32_t p);

// Coefficients expressing v in the span of basis rows, if any.
std::optional<GfRow> gf_in_span(const GfRow& v, const GfMatrix& basis, std::uint32_t p);

// Basis of {x : A x = 0}, one row per basis vector.
GfMatrix gf_nullspace(const GfMatrix& a, std::uint32_t p);

// One solution of A x = b, if consistent.
std::optional<GfRow> gf_solve(const GfMatrix& a, const GfRow& b, std::uint32_t p);

// Canonical matrix whose row space is the span of the given rows:
// RREF with zero rows dropped. Equal spans compare equal.
GfMatrix gf_row_space_canonical(GfMatrix rows, std::uint32_t p);

}  // namespace hofa
