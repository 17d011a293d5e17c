#include "swb/smith.hpp"

#include <cstdlib>
#include <utility>

namespace swb {
namespace {

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in multiply");
  return r;
}

long long checked_sub(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in subtract");
  return r;
}

// row[i] -= q * row[k], columnwise variant handled by the caller
void row_op(IntMat& m, int i, int k, long long q) {
  for (std::size_t c = 0; c < m[i].size(); ++c)
    m[i][c] = checked_sub(m[i][c], checked_mul(q, m[k][c]));
}

void col_op(IntMat& m, int j, int k, long long q) {
  for (std::size_t r = 0; r < m.size(); ++r)
    m[r][j] = checked_sub(m[r][j], checked_mul(q, m[r][k]));
}

}  // namespace

SmithResult smith_normal_form(IntMat m) {
  SmithResult out;
  if (m.empty() || m[0].empty()) return out;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());

  int t = 0;
  while (t < rows && t < cols) {
    // locate the entry of smallest nonzero magnitude in the remaining block
    int pr = -1, pc = -1;
    long long best = 0;
    for (int r = t; r < rows; ++r)
      for (int c = t; c < cols; ++c) {
        long long v = m[r][c] < 0 ? -m[r][c] : m[r][c];
        if (v != 0 && (pr < 0 || v < best)) {
          best = v;
          pr = r;
          pc = c;
        }
      }
    if (pr < 0) break;  // all zero, done
    std::swap(m[t], m[pr]);
    for (int r = 0; r < rows; ++r) std::swap(m[r][t], m[r][pc]);

    bool clean = true;
    for (int r = t + 1; r < rows; ++r)
      if (m[r][t] != 0) {
        long long q = m[r][t] / m[t][t];
        row_op(m, r, t, q);
        if (m[r][t] != 0) clean = false;
      }
    for (int c = t + 1; c < cols; ++c)
      if (m[t][c] != 0) {
        long long q = m[t][c] / m[t][t];
        col_op(m, c, t, q);
        if (m[t][c] != 0) clean = false;
      }
    if (!clean) continue;  // remainders left, rerun with a smaller pivot

    // divisibility: fold any entry the pivot does not divide into column t
    bool retry = false;
    for (int r = t + 1; r < rows && !retry; ++r)
      for (int c = t + 1; c < cols && !retry; ++c)
        if (m[r][c] % m[t][t] != 0) {
          for (int cc = t; cc < cols; ++cc)
            m[t][cc] = checked_sub(m[t][cc], checked_mul(-1, m[r][cc]));
          retry = true;
        }
    if (retry) continue;

    if (m[t][t] < 0) m[t][t] = -m[t][t];
    ++t;
  }

  for (int i = 0; i < t; ++i) out.diagonal.push_back(m[i][i]);
  out.rank = t;
  return out;
}

HomologySummary homology_from_boundaries(int dim, const IntMat& d_out, const IntMat& d_in) {
  HomologySummary h;
  const SmithResult out_snf = smith_normal_form(d_out);
  const SmithResult in_snf = smith_normal_form(d_in);
  const int cycles = dim - out_snf.rank;
  h.free_rank = cycles - in_snf.rank;
  for (long long d : in_snf.diagonal)
    if (d > 1) h.torsion.push_back(d);
  return h;
}

}  // namespace swb
