#include "sheafctx/linalg.hpp"

#include <stdexcept>

namespace sheafctx {

namespace {

// Splits a flat index over the factor chain into per-factor digits.
void decompose(long index, const std::vector<int>& dims, std::vector<int>& digits) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    digits[k] = static_cast<int>(index % dims[k]);
    index /= dims[k];
  }
}

}  // namespace

CMatrix embed_operator(const CMatrix& op, const std::vector<int>& positions,
                       const std::vector<int>& factor_dims) {
  long selected_dim = 1;
  for (int p : positions) selected_dim *= factor_dims.at(p);
  if (op.rows() != selected_dim || op.cols() != selected_dim) {
    throw std::invalid_argument("embed_operator: operator dimension mismatch");
  }
  long total = 1;
  for (int d : factor_dims) total *= d;

  CMatrix out = CMatrix::Zero(total, total);
  std::vector<int> row_digits(factor_dims.size()), col_digits(factor_dims.size());
  for (long r = 0; r < total; ++r) {
    decompose(r, factor_dims, row_digits);
    for (long c = 0; c < total; ++c) {
      decompose(c, factor_dims, col_digits);
      bool rest_diagonal = true;
      for (size_t k = 0; k < factor_dims.size() && rest_diagonal; ++k) {
        bool selected = false;
        for (int p : positions) {
          if (static_cast<size_t>(p) == k) { selected = true; break; }
        }
        if (!selected && row_digits[k] != col_digits[k]) rest_diagonal = false;
      }
      if (!rest_diagonal) continue;
      long op_row = 0, op_col = 0;
      for (int p : positions) {
        op_row = op_row * factor_dims[p] + row_digits[p];
        op_col = op_col * factor_dims[p] + col_digits[p];
      }
      out(r, c) = op(op_row, op_col);
    }
  }
  return out;
}

}  // namespace sheafctx
