#include "hofa/gf.hpp"

#include "hofa/errors.hpp"
#include "hofa/fp.hpp"

namespace hofa {

std::vector<std::size_t> gf_rref(GfMatrix& rows, std::uint32_t p) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t ncols = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != ncols) throw ValidationError("ragged matrix");
  }
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < ncols && pivot_row < rows.size(); ++col) {
    std::size_t sel = pivot_row;
    while (sel < rows.size() && rows[sel][col] % p == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[pivot_row]);
    const std::uint32_t inv = mod_inverse(rows[pivot_row][col] % p, p);
    for (auto& x : rows[pivot_row]) {
      x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x % p) * inv % p);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == pivot_row) continue;
      const std::uint32_t factor = rows[r][col] % p;
      if (factor == 0) continue;
      for (std::size_t c = 0; c < ncols; ++c) {
        std::uint64_t sub = static_cast<std::uint64_t>(factor) * rows[pivot_row][c] % p;
        rows[r][c] = static_cast<std::uint32_t>((rows[r][c] % p + p - sub) % p);
      }
    }
    pivots.push_back(col);
    ++pivot_row;
  }
  return pivots;
}

std::size_t gf_rank(const GfMatrix& rows, std::uint32_t p) {
  GfMatrix work = rows;
  return gf_rref(work, p).size();
}

std::optional<GfRow> gf_in_span(const GfRow& v, const GfMatrix& basis, std::uint32_t p) {
  // Solve B^T c = v for the coefficient vector c.
  if (basis.empty()) {
    for (std::uint32_t x : v) {
      if (x % p != 0) return std::nullopt;
    }
    return GfRow{};
  }
  const std::size_t ncols = basis[0].size();
  if (v.size() != ncols) throw ValidationError("in_span: length mismatch");
  GfMatrix a(ncols, GfRow(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t c = 0; c < ncols; ++c) a[c][i] = basis[i][c] % p;
  }
  return gf_solve(a, v, p);
}

GfMatrix gf_nullspace(const GfMatrix& a, std::uint32_t p) {
  if (a.empty()) return {};
  const std::size_t ncols = a[0].size();
  GfMatrix work = a;
  std::vector<std::size_t> pivots = gf_rref(work, p);
  std::vector<bool> is_pivot(ncols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  GfMatrix basis;
  for (std::size_t free_col = 0; free_col < ncols; ++free_col) {
    if (is_pivot[free_col]) continue;
    GfRow x(ncols, 0);
    x[free_col] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      const std::uint32_t coeff = work[r][free_col] % p;
      x[pivots[r]] = (p - coeff) % p;
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<GfRow> gf_solve(const GfMatrix& a, const GfRow& b, std::uint32_t p) {
  if (a.size() != b.size()) throw ValidationError("solve: row count mismatch");
  if (a.empty()) return GfRow{};
  const std::size_t ncols = a[0].size();
  GfMatrix aug = a;
  for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b[r] % p);
  std::vector<std::size_t> pivots = gf_rref(aug, p);
  // Inconsistent iff a pivot lands in the augmented column.
  if (!pivots.empty() && pivots.back() == ncols) return std::nullopt;
  GfRow x(ncols, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][ncols];
  return x;
}

GfMatrix gf_row_space_canonical(GfMatrix rows, std::uint32_t p) {
  std::size_t rank = gf_rref(rows, p).size();
  rows.resize(rank);
  return rows;
}

}  // namespace hofa
