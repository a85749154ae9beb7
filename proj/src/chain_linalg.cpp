#include "hasse/chain_linalg.hpp"

#include <algorithm>
#include <utility>

#include "hasse/error.hpp"

namespace hasse {

namespace {

void axpy(const FiniteField& F, Vec& y, Elem a, const Vec& x) {
  if (a == 0) return;
  for (std::size_t t = 0; t < y.size(); ++t)
    if (x[t] != 0) y[t] = F.add(y[t], F.mul(a, x[t]));
}

void scale_vec(const FiniteField& F, Vec& y, Elem a) {
  for (Elem& v : y) v = F.mul(a, v);
}

struct Rref {
  std::vector<Vec> rows;
  std::vector<std::size_t> pivots;
  std::vector<Vec> transforms;  // rows[i] = sum transforms[i][t] * input[t]
};

// Gauss-Jordan on the given row vectors; zero rows are dropped.
Rref rref(const FiniteField& F, std::vector<Vec> rows, std::size_t ncols, bool track) {
  const std::size_t m = rows.size();
  std::vector<Vec> tr;
  if (track) {
    tr.assign(m, Vec(m, 0));
    for (std::size_t i = 0; i < m; ++i) tr[i][i] = 1;
  }
  std::size_t lead = 0;
  std::vector<std::size_t> piv;
  for (std::size_t c = 0; c < ncols && lead < m; ++c) {
    std::size_t r = lead;
    while (r < m && rows[r][c] == 0) ++r;
    if (r == m) continue;
    std::swap(rows[r], rows[lead]);
    if (track) std::swap(tr[r], tr[lead]);
    const Elem inv = F.inv(rows[lead][c]);
    scale_vec(F, rows[lead], inv);
    if (track) scale_vec(F, tr[lead], inv);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == lead || rows[i][c] == 0) continue;
      const Elem factor = F.neg(rows[i][c]);
      axpy(F, rows[i], factor, rows[lead]);
      if (track) axpy(F, tr[i], factor, tr[lead]);
    }
    piv.push_back(c);
    ++lead;
  }
  rows.resize(lead);
  if (track) tr.resize(lead);
  return Rref{std::move(rows), std::move(piv), std::move(tr)};
}

KMatrix rows_to_matrix(const std::vector<Vec>& rows, std::size_t ncols) {
  KMatrix m(rows.size(), ncols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < ncols; ++c) m(r, c) = rows[r][c];
  return m;
}

// Orthogonal complement for the standard dot product.
Subspace orth(const FiniteField& F, const Subspace& s) {
  return kernel(F, rows_to_matrix(s.basis(), s.ambient()));
}

void check_same_ring(const Matrix& x, const Matrix& y) {
  if (x.tag != y.tag) throw Error(ErrorKind::Precondition, "matrices over different rings");
}

}  // namespace

// ---------------------------------------------------------------------------
// KMatrix

Vec KMatrix::column(std::size_t c) const {
  Vec v(rows);
  for (std::size_t r = 0; r < rows; ++r) v[r] = (*this)(r, c);
  return v;
}

KMatrix KMatrix::identity(std::size_t n) {
  KMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

KMatrix KMatrix::from_columns(std::size_t rows, const std::vector<Vec>& columns) {
  KMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw Error(ErrorKind::Precondition, "column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

KMatrix kmul(const FiniteField& F, const KMatrix& x, const KMatrix& y) {
  if (x.cols != y.rows) throw Error(ErrorKind::Precondition, "kmul: dimension mismatch");
  KMatrix out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t l = 0; l < x.cols; ++l) {
      const Elem a = x(i, l);
      if (a == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j)
        if (y(l, j) != 0) out(i, j) = F.add(out(i, j), F.mul(a, y(l, j)));
    }
  return out;
}

Vec kapply(const FiniteField& F, const KMatrix& m, const Vec& v) {
  if (m.cols != v.size()) throw Error(ErrorKind::Precondition, "kapply: dimension mismatch");
  Vec out(m.rows, 0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    Elem acc = 0;
    for (std::size_t j = 0; j < m.cols; ++j)
      if (v[j] != 0 && m(i, j) != 0) acc = F.add(acc, F.mul(m(i, j), v[j]));
    out[i] = acc;
  }
  return out;
}

KMatrix ktranspose(const KMatrix& m) {
  KMatrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

KMatrix kfrobenius(const FiniteField& F, const KMatrix& m, long power) {
  KMatrix out = m;
  for (Elem& a : out.a) a = F.frob(a, power);
  return out;
}

Vec vfrobenius(const FiniteField& F, const Vec& v, long power) {
  Vec out = v;
  for (Elem& a : out) a = F.frob(a, power);
  return out;
}

Elem determinant(const FiniteField& F, KMatrix m) {
  if (m.rows != m.cols) throw Error(ErrorKind::Precondition, "determinant of a non-square matrix");
  const std::size_t n = m.rows;
  Elem det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && m(r, c) == 0) ++r;
    if (r == n) return 0;
    if (r != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(r, j), m(c, j));
      det = F.neg(det);
    }
    const Elem piv = m(c, c);
    det = F.mul(det, piv);
    const Elem inv = F.inv(piv);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      const Elem factor = F.neg(F.mul(m(i, c), inv));
      for (std::size_t j = c; j < n; ++j) m(i, j) = F.add(m(i, j), F.mul(factor, m(c, j)));
    }
  }
  return det;
}

std::size_t rank(const FiniteField& F, KMatrix m) {
  std::vector<Vec> rows(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) rows[r] = Vec(m.a.begin() + r * m.cols, m.a.begin() + (r + 1) * m.cols);
  return rref(F, std::move(rows), m.cols, false).rows.size();
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](Elem a) { return a == 0; });
}

// ---------------------------------------------------------------------------
// Subspace

Subspace Subspace::full(std::size_t n) {
  Subspace s(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec v(n, 0);
    v[i] = 1;
    s.rows_.push_back(std::move(v));
    s.pivots_.push_back(i);
  }
  return s;
}

Subspace Subspace::span(const FiniteField& F, std::size_t n, const std::vector<Vec>& vectors) {
  for (const Vec& v : vectors)
    if (v.size() != n) throw Error(ErrorKind::Precondition, "span: vector length mismatch");
  Rref r = rref(F, vectors, n, false);
  Subspace s(n);
  s.rows_ = std::move(r.rows);
  s.pivots_ = std::move(r.pivots);
  return s;
}

Vec Subspace::reduce(const FiniteField& F, Vec v) const {
  if (v.size() != n_) throw Error(ErrorKind::Precondition, "reduce: vector length mismatch");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Elem c = v[pivots_[i]];
    if (c != 0) axpy(F, v, F.neg(c), rows_[i]);
  }
  return v;
}

bool Subspace::contains(const FiniteField& F, const Vec& v) const { return is_zero(reduce(F, v)); }

bool is_subset(const FiniteField& F, const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) return false;
  return std::all_of(a.basis().begin(), a.basis().end(), [&](const Vec& v) { return b.contains(F, v); });
}

Subspace sum(const FiniteField& F, const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw Error(ErrorKind::Precondition, "sum: ambient mismatch");
  std::vector<Vec> all = a.basis();
  all.insert(all.end(), b.basis().begin(), b.basis().end());
  return Subspace::span(F, a.ambient(), all);
}

Subspace intersect(const FiniteField& F, const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw Error(ErrorKind::Precondition, "intersect: ambient mismatch");
  return orth(F, sum(F, orth(F, a), orth(F, b)));
}

Subspace kernel(const FiniteField& F, const KMatrix& m) {
  std::vector<Vec> rows(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) rows[r] = Vec(m.a.begin() + r * m.cols, m.a.begin() + (r + 1) * m.cols);
  Rref red = rref(F, std::move(rows), m.cols, false);
  std::vector<bool> is_pivot(m.cols, false);
  for (std::size_t c : red.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t fc = 0; fc < m.cols; ++fc) {
    if (is_pivot[fc]) continue;
    Vec v(m.cols, 0);
    v[fc] = 1;
    for (std::size_t i = 0; i < red.rows.size(); ++i) v[red.pivots[i]] = F.neg(red.rows[i][fc]);
    basis.push_back(std::move(v));
  }
  return Subspace::span(F, m.cols, basis);
}

Subspace image(const FiniteField& F, const KMatrix& m) {
  std::vector<Vec> cols(m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) cols[c] = m.column(c);
  return Subspace::span(F, m.rows, cols);
}

Subspace apply(const FiniteField& F, const KMatrix& m, const Subspace& s) {
  if (m.cols != s.ambient()) throw Error(ErrorKind::Precondition, "apply: dimension mismatch");
  std::vector<Vec> imgs;
  for (const Vec& v : s.basis()) imgs.push_back(kapply(F, m, v));
  return Subspace::span(F, m.rows, imgs);
}

Subspace preimage(const FiniteField& F, const KMatrix& m, const Subspace& t) {
  if (m.rows != t.ambient()) throw Error(ErrorKind::Precondition, "preimage: dimension mismatch");
  const Subspace cond = orth(F, t);
  KMatrix c = rows_to_matrix(cond.basis(), t.ambient());
  return kernel(F, kmul(F, c, m));
}

Subspace frobenius(const FiniteField& F, const Subspace& s, long power) {
  std::vector<Vec> rows;
  for (const Vec& v : s.basis()) rows.push_back(vfrobenius(F, v, power));
  return Subspace::span(F, s.ambient(), rows);
}

Subspace annihilator(const FiniteField& F, const Subspace& s, const KMatrix& gram) {
  KMatrix rows = kmul(F, rows_to_matrix(s.basis(), s.ambient()), gram);
  return kernel(F, rows);
}

// ---------------------------------------------------------------------------
// QuotientPresentation

QuotientPresentation QuotientPresentation::make(const FiniteField& F, const Subspace& num, const Subspace& den) {
  if (!is_subset(F, den, num)) throw Error(ErrorKind::NotNested, "denominator is not contained in numerator");
  std::vector<Vec> reduced;
  for (const Vec& v : num.basis()) reduced.push_back(den.reduce(F, v));
  QuotientPresentation q;
  q.num_ = num;
  q.den_ = den;
  q.basis_ = rref(F, std::move(reduced), num.ambient(), false).rows;
  q.build_solver(F);
  return q;
}

QuotientPresentation QuotientPresentation::with_basis(const FiniteField& F, const Subspace& num,
                                                      const Subspace& den, std::vector<Vec> basis) {
  if (!is_subset(F, den, num)) throw Error(ErrorKind::NotNested, "denominator is not contained in numerator");
  if (basis.size() + den.dim() != num.dim())
    throw Error(ErrorKind::InvariantViolation, "quotient basis has the wrong size");
  for (const Vec& v : basis)
    if (v.size() != num.ambient() || !num.contains(F, v))
      throw Error(ErrorKind::InvariantViolation, "quotient basis vector outside the numerator");
  if (sum(F, den, Subspace::span(F, num.ambient(), basis)).dim() != num.dim())
    throw Error(ErrorKind::InvariantViolation, "quotient basis is linearly dependent modulo the denominator");
  QuotientPresentation q;
  q.num_ = num;
  q.den_ = den;
  q.basis_ = std::move(basis);
  q.build_solver(F);
  return q;
}

void QuotientPresentation::build_solver(const FiniteField& F) {
  std::vector<Vec> rows;
  for (const Vec& v : basis_) rows.push_back(den_.reduce(F, v));
  Rref r = rref(F, std::move(rows), num_.ambient(), true);
  if (r.rows.size() != basis_.size())
    throw Error(ErrorKind::InvariantViolation, "quotient basis is linearly dependent modulo the denominator");
  ech_ = std::move(r.rows);
  ech_pivots_ = std::move(r.pivots);
  transform_ = std::move(r.transforms);
}

std::optional<Vec> QuotientPresentation::coordinates(const FiniteField& F, const Vec& v) const {
  Vec r = den_.reduce(F, v);
  Vec c(basis_.size(), 0);
  for (std::size_t i = 0; i < ech_.size(); ++i) {
    const Elem coef = r[ech_pivots_[i]];
    if (coef == 0) continue;
    axpy(F, r, F.neg(coef), ech_[i]);
    axpy(F, c, coef, transform_[i]);
  }
  if (!is_zero(r)) return std::nullopt;
  return c;
}

QuotientPresentation frobenius(const FiniteField& F, const QuotientPresentation& q, long power) {
  std::vector<Vec> basis;
  for (const Vec& v : q.basis()) basis.push_back(vfrobenius(F, v, power));
  return QuotientPresentation::with_basis(F, frobenius(F, q.numerator(), power), frobenius(F, q.denominator(), power),
                                          std::move(basis));
}

KMatrix induced_map(const FiniteField& F, const KMatrix& map, const QuotientPresentation& src,
                    const QuotientPresentation& dst) {
  if (map.cols != src.ambient() || map.rows != dst.ambient())
    throw Error(ErrorKind::Precondition, "induced_map: dimension mismatch");
  for (const Vec& v : src.denominator().basis())
    if (!dst.denominator().contains(F, kapply(F, map, v)))
      throw Error(ErrorKind::WellDefinednessViolation, "map does not send denominator into denominator");
  KMatrix out(dst.dim(), src.dim());
  for (std::size_t c = 0; c < src.dim(); ++c) {
    const auto coords = dst.coordinates(F, kapply(F, map, src.basis()[c]));
    if (!coords) throw Error(ErrorKind::WellDefinednessViolation, "map does not send numerator into numerator");
    for (std::size_t r = 0; r < dst.dim(); ++r) out(r, c) = (*coords)[r];
  }
  return out;
}

Elem induced_determinant(const FiniteField& F, const KMatrix& map, const QuotientPresentation& src,
                         const QuotientPresentation& dst) {
  return determinant(F, induced_map(F, map, src, dst));
}

KMatrix top_coefficient_gram(std::size_t h, int e) {
  const std::size_t ue = static_cast<std::size_t>(e);
  KMatrix g(h * ue, h * ue);
  for (std::size_t s = 0; s < h; ++s)
    for (std::size_t r = 0; r < ue; ++r) g(s * ue + r, s * ue + (ue - 1 - r)) = 1;
  return g;
}

Elem pairing(const FiniteField& F, const KMatrix& gram, const Vec& x, const Vec& y) {
  const Vec gy = kapply(F, gram, y);
  Elem acc = 0;
  for (std::size_t t = 0; t < x.size(); ++t) acc = F.add(acc, F.mul(x[t], gy[t]));
  return acc;
}

// ---------------------------------------------------------------------------
// Chain-ring matrices

Matrix Matrix::zero(const ChainRing& ring, std::size_t rows, std::size_t cols) {
  return Matrix{ring.tag(), rows, cols, std::vector<RingElement>(rows * cols, ring.zero())};
}

Matrix Matrix::identity(const ChainRing& ring, std::size_t n) {
  Matrix m = zero(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ring.one();
  return m;
}

Matrix Matrix::diagonal(const ChainRing& ring, const std::vector<RingElement>& diag) {
  Matrix m = zero(ring, diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.at(i, i) = diag[i];
  return m;
}

Matrix mat_mul(const ChainRing& ring, const Matrix& x, const Matrix& y) {
  check_same_ring(x, y);
  if (x.cols != y.rows) throw Error(ErrorKind::Precondition, "mat_mul: dimension mismatch");
  Matrix out = Matrix::zero(ring, x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t l = 0; l < x.cols; ++l) {
      const RingElement& a = x.at(i, l);
      if (ring.is_zero(a)) continue;
      for (std::size_t j = 0; j < y.cols; ++j)
        if (!ring.is_zero(y.at(l, j))) out.at(i, j) = ring.add(out.at(i, j), ring.mul(a, y.at(l, j)));
    }
  return out;
}

Matrix mat_add(const ChainRing& ring, const Matrix& x, const Matrix& y) {
  check_same_ring(x, y);
  if (x.rows != y.rows || x.cols != y.cols) throw Error(ErrorKind::Precondition, "mat_add: dimension mismatch");
  Matrix out = x;
  for (std::size_t t = 0; t < out.entries.size(); ++t) out.entries[t] = ring.add(x.entries[t], y.entries[t]);
  return out;
}

Matrix mat_sub(const ChainRing& ring, const Matrix& x, const Matrix& y) {
  check_same_ring(x, y);
  if (x.rows != y.rows || x.cols != y.cols) throw Error(ErrorKind::Precondition, "mat_sub: dimension mismatch");
  Matrix out = x;
  for (std::size_t t = 0; t < out.entries.size(); ++t) out.entries[t] = ring.sub(x.entries[t], y.entries[t]);
  return out;
}

Matrix mat_scale(const ChainRing& ring, const Matrix& x, const RingElement& c) {
  Matrix out = x;
  for (RingElement& a : out.entries) a = ring.mul(c, a);
  return out;
}

Matrix mat_transpose(const Matrix& x) {
  Matrix t{x.tag, x.cols, x.rows, std::vector<RingElement>(x.entries.size())};
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) t.at(j, i) = x.at(i, j);
  return t;
}

Matrix mat_frobenius(const ChainRing& ring, const Matrix& x, long power) {
  Matrix out = x;
  for (RingElement& a : out.entries) a = ring.frobenius(a, power);
  return out;
}

std::vector<RingElement> mat_apply(const ChainRing& ring, const Matrix& m, const std::vector<RingElement>& v) {
  if (m.cols != v.size()) throw Error(ErrorKind::Precondition, "mat_apply: dimension mismatch");
  std::vector<RingElement> out(m.rows, ring.zero());
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out[i] = ring.add(out[i], ring.mul(m.at(i, j), v[j]));
  return out;
}

std::optional<Matrix> mat_inverse(const ChainRing& ring, const Matrix& x) {
  if (x.rows != x.cols) throw Error(ErrorKind::Precondition, "inverse of a non-square matrix");
  const std::size_t n = x.rows;
  Matrix a = x;
  Matrix inv = Matrix::identity(ring, n);
  auto swap_rows = [n](Matrix& m, std::size_t r, std::size_t s) {
    for (std::size_t j = 0; j < n; ++j) std::swap(m.at(r, j), m.at(s, j));
  };
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && !ring.is_unit(a.at(r, c))) ++r;
    if (r == n) return std::nullopt;
    swap_rows(a, r, c);
    swap_rows(inv, r, c);
    const RingElement u = ring.inverse(a.at(c, c));
    for (std::size_t j = 0; j < n; ++j) {
      a.at(c, j) = ring.mul(u, a.at(c, j));
      inv.at(c, j) = ring.mul(u, inv.at(c, j));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || ring.is_zero(a.at(i, c))) continue;
      const RingElement factor = a.at(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a.at(i, j) = ring.sub(a.at(i, j), ring.mul(factor, a.at(c, j)));
        inv.at(i, j) = ring.sub(inv.at(i, j), ring.mul(factor, inv.at(c, j)));
      }
    }
  }
  return inv;
}

bool mat_is_invertible(const ChainRing& ring, const Matrix& x) { return mat_inverse(ring, x).has_value(); }

Matrix mat_reduce(const RingTower& tower, const Matrix& x) {
  Matrix out = x;
  for (RingElement& a : out.entries) a = tower.reduce(a);
  if (x.tag == RingTag::What) out.tag = RingTag::R;
  else if (x.tag == RingTag::W2) out.tag = RingTag::k;
  return out;
}

Matrix mat_lift(const RingTower& tower, const Matrix& x) {
  Matrix out = x;
  for (RingElement& a : out.entries) a = tower.lift(a);
  if (x.tag == RingTag::R) out.tag = RingTag::What;
  else if (x.tag == RingTag::k) out.tag = RingTag::W2;
  return out;
}

SmithForm smith_normal_form(const ChainRing& ring, const Matrix& m) {
  if (ring.tag() != RingTag::R && ring.tag() != RingTag::What)
    throw Error(ErrorKind::Precondition, "Smith form needs a chain ring with a uniformizer");
  SmithForm s{Matrix::identity(ring, m.rows), m, Matrix::identity(ring, m.cols), {}};
  Matrix& D = s.D;
  const std::size_t steps = std::min(m.rows, m.cols);
  const int cap = ring.capacity();
  for (std::size_t t = 0; t < steps; ++t) {
    int best = cap;
    std::size_t br = t, bc = t;
    for (std::size_t c = t; c < m.cols && best > 0; ++c)
      for (std::size_t r = t; r < m.rows; ++r) {
        const int v = ring.valuation(D.at(r, c));
        if (v < best) {
          best = v;
          br = r;
          bc = c;
          if (v == 0) break;
        }
      }
    if (best == cap) {
      s.valuations.resize(steps, cap);
      break;
    }
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(D.at(t, j), D.at(br, j));
    for (std::size_t j = 0; j < m.rows; ++j) std::swap(s.U.at(t, j), s.U.at(br, j));
    for (std::size_t i = 0; i < m.rows; ++i) std::swap(D.at(i, t), D.at(i, bc));
    for (std::size_t i = 0; i < m.cols; ++i) std::swap(s.W.at(i, t), s.W.at(i, bc));

    const RingElement uinv = ring.inverse(ring.valuation_split(D.at(t, t)).unit_part);
    for (std::size_t j = 0; j < m.cols; ++j) D.at(t, j) = ring.mul(uinv, D.at(t, j));
    for (std::size_t j = 0; j < m.rows; ++j) s.U.at(t, j) = ring.mul(uinv, s.U.at(t, j));

    for (std::size_t r = t + 1; r < m.rows; ++r) {
      const Valuation v = ring.valuation_split(D.at(r, t));
      if (v.val >= cap) continue;
      const RingElement factor = ring.mul(v.unit_part, ring.pi_power(v.val - best));
      for (std::size_t j = 0; j < m.cols; ++j) D.at(r, j) = ring.sub(D.at(r, j), ring.mul(factor, D.at(t, j)));
      for (std::size_t j = 0; j < m.rows; ++j) s.U.at(r, j) = ring.sub(s.U.at(r, j), ring.mul(factor, s.U.at(t, j)));
    }
    for (std::size_t c = t + 1; c < m.cols; ++c) {
      const Valuation v = ring.valuation_split(D.at(t, c));
      if (v.val >= cap) continue;
      const RingElement factor = ring.mul(v.unit_part, ring.pi_power(v.val - best));
      for (std::size_t i = 0; i < m.rows; ++i) D.at(i, c) = ring.sub(D.at(i, c), ring.mul(factor, D.at(i, t)));
      for (std::size_t i = 0; i < m.cols; ++i) s.W.at(i, c) = ring.sub(s.W.at(i, c), ring.mul(factor, s.W.at(i, t)));
    }
    s.valuations.push_back(best);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Restriction of scalars

KMatrix restrict_scalars(const RingTower& tower, const Matrix& m) {
  if (m.tag != RingTag::R) throw Error(ErrorKind::Precondition, "restriction of scalars needs an R-matrix");
  const std::size_t e = static_cast<std::size_t>(tower.spec().e);
  KMatrix K(m.rows * e, m.cols * e);
  for (std::size_t so = 0; so < m.rows; ++so)
    for (std::size_t si = 0; si < m.cols; ++si) {
      const auto a = tower.slots(m.at(so, si));
      for (std::size_t ri = 0; ri < e; ++ri)
        for (std::size_t ro = ri; ro < e; ++ro) K(so * e + ro, si * e + ri) = a[ro - ri];
    }
  return K;
}

Vec to_kvector(const RingTower& tower, const std::vector<RingElement>& v) {
  Vec out;
  out.reserve(v.size() * static_cast<std::size_t>(tower.spec().e));
  for (const RingElement& a : v) {
    if (a.tag != RingTag::R) throw Error(ErrorKind::Precondition, "to_kvector needs R-entries");
    const auto s = tower.slots(a);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::vector<RingElement> from_kvector(const RingTower& tower, const Vec& v) {
  const std::size_t e = static_cast<std::size_t>(tower.spec().e);
  if (v.size() % e != 0) throw Error(ErrorKind::Precondition, "k-vector length is not a multiple of e");
  std::vector<RingElement> out;
  for (std::size_t s = 0; s < v.size() / e; ++s)
    out.push_back(tower.from_slots(std::span<const Elem>(v.data() + s * e, e)));
  return out;
}

KMatrix pi_power_map(const RingTower& tower, std::size_t h, int n) {
  const std::size_t e = static_cast<std::size_t>(tower.spec().e);
  KMatrix K(h * e, h * e);
  if (n < 0) throw Error(ErrorKind::Precondition, "negative pi power");
  for (std::size_t s = 0; s < h; ++s)
    for (std::size_t r = 0; r + static_cast<std::size_t>(n) < e; ++r) K(s * e + r + n, s * e + r) = 1;
  return K;
}

KMatrix pi_division_map(const RingTower& tower, std::size_t h, int n) {
  const std::size_t e = static_cast<std::size_t>(tower.spec().e);
  KMatrix K(h * e, h * e);
  if (n < 0) throw Error(ErrorKind::Precondition, "negative pi power");
  for (std::size_t s = 0; s < h; ++s)
    for (std::size_t r = static_cast<std::size_t>(n); r < e; ++r) K(s * e + r - n, s * e + r) = 1;
  return K;
}

// ---------------------------------------------------------------------------
// Submodules

Submodule Submodule::from_generators(const RingTower& tower, const Matrix& generators) {
  if (generators.tag != RingTag::R) throw Error(ErrorKind::Precondition, "submodule generators must lie in R");
  const FiniteField& F = tower.field();
  const std::size_t n = generators.rows;
  const KMatrix pi = pi_power_map(tower, n, 1);
  std::vector<Vec> vecs;
  for (std::size_t c = 0; c < generators.cols; ++c) {
    std::vector<RingElement> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = generators.at(r, c);
    Vec v = to_kvector(tower, col);
    for (int t = 0; t < tower.spec().e; ++t) {
      vecs.push_back(v);
      v = kapply(F, pi, v);
    }
  }
  return Submodule(n, Subspace::span(F, n * static_cast<std::size_t>(tower.spec().e), vecs));
}

Submodule Submodule::zero(const RingTower& tower, std::size_t rank) {
  return Submodule(rank, Subspace::zero(rank * static_cast<std::size_t>(tower.spec().e)));
}

Submodule Submodule::full(const RingTower& tower, std::size_t rank) {
  return Submodule(rank, Subspace::full(rank * static_cast<std::size_t>(tower.spec().e)));
}

Matrix Submodule::generators(const RingTower& tower) const {
  const FiniteField& F = tower.field();
  const Subspace pis = apply(F, pi_power_map(tower, rank_, 1), span_);
  const QuotientPresentation top = QuotientPresentation::make(F, span_, pis);
  Matrix g = Matrix::zero(tower.R(), rank_, top.dim());
  for (std::size_t c = 0; c < top.dim(); ++c) {
    const auto col = from_kvector(tower, top.basis()[c]);
    for (std::size_t r = 0; r < rank_; ++r) g.at(r, c) = col[r];
  }
  return g;
}

std::vector<int> Submodule::type(const RingTower& tower) const {
  std::vector<int> t = smith_normal_form(tower.R(), generators(tower)).valuations;
  t.resize(rank_, tower.spec().e);
  return t;
}

SemilinearMap compose(const ChainRing& ring, const SemilinearMap& x, const SemilinearMap& y) {
  return SemilinearMap{mat_mul(ring, x.matrix, mat_frobenius(ring, y.matrix, x.twist)), x.twist + y.twist};
}

std::vector<RingElement> apply(const ChainRing& ring, const SemilinearMap& phi, const std::vector<RingElement>& v) {
  std::vector<RingElement> tv;
  for (const RingElement& a : v) tv.push_back(ring.frobenius(a, phi.twist));
  return mat_apply(ring, phi.matrix, tv);
}

Submodule kernel(const RingTower& tower, const SemilinearMap& phi) {
  const FiniteField& F = tower.field();
  const Subspace lin = kernel(F, restrict_scalars(tower, phi.matrix));
  return Submodule(phi.domain_rank(), frobenius(F, lin, -phi.twist));
}

Submodule image(const RingTower& tower, const SemilinearMap& phi) {
  return Submodule(phi.codomain_rank(), image(tower.field(), restrict_scalars(tower, phi.matrix)));
}

Submodule preimage(const RingTower& tower, const SemilinearMap& phi, const Submodule& t) {
  if (t.rank() != phi.codomain_rank()) throw Error(ErrorKind::Precondition, "preimage: rank mismatch");
  const FiniteField& F = tower.field();
  const Subspace lin = preimage(F, restrict_scalars(tower, phi.matrix), t.span());
  return Submodule(phi.domain_rank(), frobenius(F, lin, -phi.twist));
}

Submodule sum(const RingTower& tower, const Submodule& a, const Submodule& b) {
  if (a.rank() != b.rank()) throw Error(ErrorKind::Precondition, "sum: rank mismatch");
  return Submodule(a.rank(), sum(tower.field(), a.span(), b.span()));
}

Submodule intersect(const RingTower& tower, const Submodule& a, const Submodule& b) {
  if (a.rank() != b.rank()) throw Error(ErrorKind::Precondition, "intersect: rank mismatch");
  return Submodule(a.rank(), intersect(tower.field(), a.span(), b.span()));
}

QuotientPresentation quotient(const RingTower& tower, const Submodule& num, const Submodule& den) {
  if (num.rank() != den.rank()) throw Error(ErrorKind::Precondition, "quotient: rank mismatch");
  return QuotientPresentation::make(tower.field(), num.span(), den.span());
}

Submodule twist(const RingTower& tower, const Submodule& s, long power) {
  return Submodule(s.rank(), frobenius(tower.field(), s.span(), power));
}

Subspace restrict_scalars(const Submodule& s) { return s.span(); }

}  // namespace hasse
