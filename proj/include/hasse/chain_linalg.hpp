#pragma once

// Exact linear algebra for the project.
//
// Two layers live here.  The k-layer (KMatrix, Subspace, QuotientPresentation)
// is plain linear algebra over the residue field and carries every rank,
// kernel and determinant computation.  The chain-ring layer (Matrix,
// Submodule, SemilinearMap, Smith form) speaks in R- and W^-modules and
// hands its questions down to the k-layer by restriction of scalars: a
// vector of R^h is stored as the e*h residue-field coefficients, index
// s*e + r holding the pi^r coefficient of entry s.

#include <cstddef>
#include <optional>
#include <vector>

#include "hasse/ring_tower.hpp"

namespace hasse {

using Elem = FiniteField::Elem;
using Vec = std::vector<Elem>;

struct KMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> a;

  KMatrix() = default;
  KMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

  Elem& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  Elem operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  Vec column(std::size_t c) const;
  static KMatrix identity(std::size_t n);
  static KMatrix from_columns(std::size_t rows, const std::vector<Vec>& columns);

  bool operator==(const KMatrix&) const = default;
};

KMatrix kmul(const FiniteField& F, const KMatrix& x, const KMatrix& y);
Vec kapply(const FiniteField& F, const KMatrix& m, const Vec& v);
KMatrix ktranspose(const KMatrix& m);
KMatrix kfrobenius(const FiniteField& F, const KMatrix& m, long power);
Vec vfrobenius(const FiniteField& F, const Vec& v, long power);
Elem determinant(const FiniteField& F, KMatrix m);
std::size_t rank(const FiniteField& F, KMatrix m);
bool is_zero(const Vec& v);

/// A k-subspace of k^n kept in reduced row echelon form, which is its
/// unique normal form: two subspaces are equal iff their forms are equal.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : n_(ambient) {}

  static Subspace zero(std::size_t n) { return Subspace(n); }
  static Subspace full(std::size_t n);
  static Subspace span(const FiniteField& F, std::size_t n, const std::vector<Vec>& vectors);

  std::size_t ambient() const noexcept { return n_; }
  std::size_t dim() const noexcept { return rows_.size(); }
  const std::vector<Vec>& basis() const noexcept { return rows_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  /// v minus the combination of basis rows that clears every pivot column.
  Vec reduce(const FiniteField& F, Vec v) const;
  bool contains(const FiniteField& F, const Vec& v) const;

  bool operator==(const Subspace& o) const { return n_ == o.n_ && rows_ == o.rows_; }

 private:
  std::size_t n_ = 0;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

bool is_subset(const FiniteField& F, const Subspace& a, const Subspace& b);
Subspace sum(const FiniteField& F, const Subspace& a, const Subspace& b);
Subspace intersect(const FiniteField& F, const Subspace& a, const Subspace& b);
/// {x : m x = 0}
Subspace kernel(const FiniteField& F, const KMatrix& m);
/// Column space of m.
Subspace image(const FiniteField& F, const KMatrix& m);
/// m(s)
Subspace apply(const FiniteField& F, const KMatrix& m, const Subspace& s);
/// {x : m x in t}
Subspace preimage(const FiniteField& F, const KMatrix& m, const Subspace& t);
Subspace frobenius(const FiniteField& F, const Subspace& s, long power);
/// {y : x^T gram y = 0 for all x in s}
Subspace annihilator(const FiniteField& F, const Subspace& s, const KMatrix& gram);

/// numerator / denominator with an ordered lifted basis.
class QuotientPresentation {
 public:
  QuotientPresentation() = default;

  /// Basis by the pivot-complement rule: numerator basis reduced modulo the
  /// denominator, then row-reduced.  Throws NotNested.
  static QuotientPresentation make(const FiniteField& F, const Subspace& num, const Subspace& den);
  /// Caller-supplied lifts; throws InvariantViolation unless they form a basis.
  static QuotientPresentation with_basis(const FiniteField& F, const Subspace& num, const Subspace& den,
                                         std::vector<Vec> basis);

  const Subspace& numerator() const noexcept { return num_; }
  const Subspace& denominator() const noexcept { return den_; }
  const std::vector<Vec>& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  std::size_t ambient() const noexcept { return num_.ambient(); }

  /// Coordinates of v modulo the denominator; nullopt when v is not in the numerator.
  std::optional<Vec> coordinates(const FiniteField& F, const Vec& v) const;

 private:
  void build_solver(const FiniteField& F);

  Subspace num_;
  Subspace den_;
  std::vector<Vec> basis_;
  std::vector<Vec> ech_;
  std::vector<std::size_t> ech_pivots_;
  std::vector<Vec> transform_;
};

QuotientPresentation frobenius(const FiniteField& F, const QuotientPresentation& q, long power);

/// Matrix (dst.dim x src.dim) of the map induced by `map` between the
/// quotients.  Throws WellDefinednessViolation when map(src.num) is not in
/// dst.num or map(src.den) is not in dst.den.
KMatrix induced_map(const FiniteField& F, const KMatrix& map, const QuotientPresentation& src,
                    const QuotientPresentation& dst);
Elem induced_determinant(const FiniteField& F, const KMatrix& map, const QuotientPresentation& src,
                         const QuotientPresentation& dst);

/// Gram matrix of the pairing <x, y> = coefficient of pi^(e-1) in sum x_s y_s
/// on the restriction of scalars of R^h.
KMatrix top_coefficient_gram(std::size_t h, int e);
Elem pairing(const FiniteField& F, const KMatrix& gram, const Vec& x, const Vec& y);

// ---------------------------------------------------------------------------
// Chain-ring layer

struct Matrix {
  RingTag tag = RingTag::R;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<RingElement> entries;  // row-major

  RingElement& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  const RingElement& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

  static Matrix zero(const ChainRing& ring, std::size_t rows, std::size_t cols);
  static Matrix identity(const ChainRing& ring, std::size_t n);
  static Matrix diagonal(const ChainRing& ring, const std::vector<RingElement>& diag);

  bool operator==(const Matrix&) const = default;
};

Matrix mat_mul(const ChainRing& ring, const Matrix& x, const Matrix& y);
Matrix mat_add(const ChainRing& ring, const Matrix& x, const Matrix& y);
Matrix mat_sub(const ChainRing& ring, const Matrix& x, const Matrix& y);
Matrix mat_scale(const ChainRing& ring, const Matrix& x, const RingElement& c);
Matrix mat_transpose(const Matrix& x);
Matrix mat_frobenius(const ChainRing& ring, const Matrix& x, long power);
std::vector<RingElement> mat_apply(const ChainRing& ring, const Matrix& m, const std::vector<RingElement>& v);
/// Gauss-Jordan with unit pivots; nullopt when the matrix is singular.
std::optional<Matrix> mat_inverse(const ChainRing& ring, const Matrix& x);
bool mat_is_invertible(const ChainRing& ring, const Matrix& x);
Matrix mat_reduce(const RingTower& tower, const Matrix& x);
Matrix mat_lift(const RingTower& tower, const Matrix& x);

/// U * m * W = D with U, W invertible and D = diag(pi^a_1, pi^a_2, ...),
/// a_1 <= a_2 <= ...; zero diagonal entries have a = capacity.
struct SmithForm {
  Matrix U;
  Matrix D;
  Matrix W;
  std::vector<int> valuations;
};

SmithForm smith_normal_form(const ChainRing& ring, const Matrix& m);

/// Restriction of scalars R -> k for an R-matrix (e*rows x e*cols).
KMatrix restrict_scalars(const RingTower& tower, const Matrix& m);
Vec to_kvector(const RingTower& tower, const std::vector<RingElement>& v);
std::vector<RingElement> from_kvector(const RingTower& tower, const Vec& v);
/// Multiplication by pi^n on R^h.
KMatrix pi_power_map(const RingTower& tower, std::size_t h, int n);
/// A k-linear section of multiplication by pi^n on pi^n R^h: shifts the
/// pi-adic coefficients down by n and drops the lowest n.
KMatrix pi_division_map(const RingTower& tower, std::size_t h, int n);

/// An R-submodule of R^rank.  The k-span is the normal form; the R-generator
/// set is derived from it.
class Submodule {
 public:
  Submodule() = default;
  Submodule(std::size_t rank, Subspace span) : rank_(rank), span_(std::move(span)) {}

  static Submodule from_generators(const RingTower& tower, const Matrix& generators);
  static Submodule zero(const RingTower& tower, std::size_t rank);
  static Submodule full(const RingTower& tower, std::size_t rank);

  std::size_t rank() const noexcept { return rank_; }
  const Subspace& span() const noexcept { return span_; }
  std::size_t dim_k() const noexcept { return span_.dim(); }

  /// Minimal generating set: lifts of the pivot-rule basis of S / pi S.
  Matrix generators(const RingTower& tower) const;
  /// Valuations of the Smith diagonal of the generator matrix, padded with e
  /// to length rank (so R^rank has type (0,...,0) and zero has (e,...,e)).
  std::vector<int> type(const RingTower& tower) const;

  bool operator==(const Submodule& o) const { return rank_ == o.rank_ && span_ == o.span_; }

 private:
  std::size_t rank_ = 0;
  Subspace span_;
};

/// x -> matrix * sigma^twist(x), coordinatewise in fixed bases.
struct SemilinearMap {
  Matrix matrix;
  int twist = 0;

  std::size_t domain_rank() const noexcept { return matrix.cols; }
  std::size_t codomain_rank() const noexcept { return matrix.rows; }

  bool operator==(const SemilinearMap&) const = default;
};

/// (A, a) o (B, b) = (A sigma^a(B), a + b)
SemilinearMap compose(const ChainRing& ring, const SemilinearMap& x, const SemilinearMap& y);
std::vector<RingElement> apply(const ChainRing& ring, const SemilinearMap& phi, const std::vector<RingElement>& v);

Submodule kernel(const RingTower& tower, const SemilinearMap& phi);
Submodule image(const RingTower& tower, const SemilinearMap& phi);
Submodule preimage(const RingTower& tower, const SemilinearMap& phi, const Submodule& t);
Submodule sum(const RingTower& tower, const Submodule& a, const Submodule& b);
Submodule intersect(const RingTower& tower, const Submodule& a, const Submodule& b);
QuotientPresentation quotient(const RingTower& tower, const Submodule& num, const Submodule& den);
/// Entrywise sigma^power on the generators.
Submodule twist(const RingTower& tower, const Submodule& s, long power);
/// Underlying k-space with its deterministic basis.
Subspace restrict_scalars(const Submodule& s);

}  // namespace hasse
