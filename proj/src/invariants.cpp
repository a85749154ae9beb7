#include "hasse/invariants.hpp"

#include "hasse/error.hpp"
#include "hasse/filtration.hpp"

namespace hasse {

namespace {

using QP = QuotientPresentation;

std::string label(const std::string& base, int i) { return base + "_" + std::to_string(i); }
std::string label(const std::string& base, int i, int j) {
  return base + "^[" + std::to_string(j) + "]_" + std::to_string(i);
}

Elem sign_power(const FiniteField& K, long n) { return n % 2 == 0 ? K.from_int(1) : K.from_int(-1); }

LineSection section(const FiniteField& K, const KMatrix& map, const QP& src, long src_twist,
                    const std::string& src_label, const QP& dst, long dst_twist, const std::string& dst_label) {
  if (src.dim() != dst.dim())
    throw Error(ErrorKind::InvariantViolation, "determinant of a map between spaces of dimensions " +
                                                   std::to_string(src.dim()) + " and " + std::to_string(dst.dim()));
  const QP s = src_twist != 0 ? frobenius(K, src, src_twist) : src;
  const QP d = dst_twist != 0 ? frobenius(K, dst, dst_twist) : dst;
  LineSection out;
  out.matrix = induced_map(K, map, s, d);
  out.scalar = determinant(K, out.matrix);
  out.line = {{dst_label, 1, dst_twist}, {src_label, -1, src_twist}};
  out.bases = {{"source", src_twist, src.basis()}, {"target", dst_twist, dst.basis()}};
  return out;
}

Elem det_of(const FiniteField& K, const KMatrix& map, const QP& src, const QP& dst) {
  if (src.dim() != dst.dim()) throw Error(ErrorKind::InvariantViolation, "dimension mismatch in a comparison map");
  return induced_determinant(K, map, src, dst);
}

Elem pairing_det(const FiniteField& K, const KMatrix& gram, const std::vector<Vec>& q, const std::vector<Vec>& beta) {
  if (q.size() != beta.size()) throw Error(ErrorKind::InvariantViolation, "pairing between spaces of unequal dimension");
  KMatrix S(q.size(), beta.size());
  for (std::size_t s = 0; s < q.size(); ++s)
    for (std::size_t t = 0; t < beta.size(); ++t) S(s, t) = pairing(K, gram, q[s], beta[t]);
  return determinant(K, S);
}

Elem det_columns(const FiniteField& K, const QP& A, const std::vector<Vec>& first, const std::vector<Vec>& second) {
  std::vector<Vec> cols;
  for (const auto* part : {&first, &second})
    for (const Vec& v : *part) {
      auto c = A.coordinates(K, v);
      if (!c) throw Error(ErrorKind::NotNested, "basis vector outside the ambient quotient");
      cols.push_back(std::move(*c));
    }
  return determinant(K, KMatrix::from_columns(A.dim(), cols));
}

struct Workspace {
  const DieudonneDatum& D;
  const RingTower& t;
  const FiniteField& K;
  int e;
  int f;
  std::size_t h1;
  std::size_t n;
  KMatrix gram;
  KMatrix pi;
  std::vector<KMatrix> A;
  std::vector<KMatrix> B;
  std::vector<Flag> ext;
  std::vector<Flag> conj;

  explicit Workspace(const DieudonneDatum& d)
      : D(d), t(*d.tower), K(d.field()), e(d.params.e()), f(d.f()), h1(static_cast<std::size_t>(d.params.h1)),
        n(h1 * static_cast<std::size_t>(e)), gram(pairing_gram(d)), pi(pi_power_map(t, h1, 1)) {
    for (int i = 0; i < f; ++i) {
      A.push_back(restrict_scalars(t, D.A(i)));
      B.push_back(restrict_scalars(t, D.B(i)));
      ext.push_back(extended_hodge_flag(D, i));
    }
    for (int i = 0; i < f; ++i) conj.push_back(conjugate_flag(D, i));
  }

  int prev(int i) const { return D.prev(i); }
  const Subspace& F(int i, int l) const { return ext.at(i).levels.at(l).span(); }
  const Subspace& Ft(int i, int l) const { return conj.at(i).levels.at(l).span(); }
  Subspace aux(int i, int j) const { return preimage(K, pi, F(i, j)); }
  QP graded(int i, int j) const { return QP::make(K, F(i, j), F(i, j - 1)); }
  Subspace zero() const { return Subspace::zero(n); }
  Subspace full() const { return Subspace::full(n); }
  KMatrix pi_pow(int m) const { return pi_power_map(t, h1, m); }

  std::vector<Vec> adapted(int i) const {
    std::vector<Vec> out;
    for (int j = 1; j <= e; ++j) {
      const QP g = graded(i, j);
      out.insert(out.end(), g.basis().begin(), g.basis().end());
    }
    return out;
  }
  QP adapted_qp(int i) const { return QP::with_basis(K, F(i, e), zero(), adapted(i)); }
};

void check_index(const Workspace& w, int i) {
  if (i < 0 || i >= w.f) throw Error(ErrorKind::Precondition, "embedding index out of range");
}

// The ha / ha_i shape: V from X to sigma Y with Hodge spaces omega and the
// conjugate space of X.
struct HodgeSetting {
  std::size_t nX = 0;
  std::size_t nY = 0;
  QP omegaX;
  QP omegaY;
  Subspace conjX;
  KMatrix V;
  KMatrix Fm;
  KMatrix gramX;
  KMatrix gramY;
  std::string labelX;
  std::string labelY;
};

struct HodgeParts {
  LineSection section;
  PropDualSections pd;
  Elem delta = 0;
  Elem phi = 0;
  Elem ha_dual_map = 0;
  std::vector<Vec> qX;
  std::vector<Vec> qY;
};

HodgeParts hodge_parts(const FiniteField& K, const HodgeSetting& s) {
  HodgeParts out;
  out.section = section(K, s.V, s.omegaX, 0, s.labelX, s.omegaY, 1, s.labelY);
  const Subspace EX = Subspace::full(s.nX), EY = Subspace::full(s.nY);
  const Subspace zX = Subspace::zero(s.nX);
  const QP C = QP::make(K, s.conjX, zX);
  out.pd = prop_dual_sections(K, QP::make(K, EX, zX), s.omegaX, C);
  out.delta = det_of(K, s.V, QP::make(K, EX, s.conjX), frobenius(K, s.omegaY, 1));
  const QP quotY = QP::make(K, EY, s.omegaY.numerator());
  const QP quotX = QP::make(K, EX, s.omegaX.numerator());
  out.phi = det_of(K, s.Fm, frobenius(K, quotY, 1), C);
  out.ha_dual_map = det_of(K, s.Fm, frobenius(K, quotY, 1), quotX);
  out.qX = quotX.basis();
  out.qY = quotY.basis();
  return out;
}

bool hodge_natural(const FiniteField& K, const HodgeParts& p) {
  return p.section.scalar == K.mul(p.delta, p.pd.y.scalar) && p.ha_dual_map == K.mul(p.pd.x.scalar, p.phi);
}

Elem hodge_canonical(const FiniteField& K, const HodgeSetting& s, const HodgeParts& p, const LineSection& dual) {
  const Elem SX = pairing_det(K, s.gramX, p.qX, dual.basis("source").vectors);
  const Elem SY = pairing_det(K, s.gramY, p.qY, dual.basis("target").vectors);
  const Elem den = K.mul(K.mul(p.pd.iso, p.phi), SX);
  if (den == 0) throw Error(ErrorKind::InvariantViolation, "degenerate identification in the Hodge duality");
  return K.div(K.mul(p.delta, K.frob(SY, 1)), den);
}

HodgeSetting partial_setting(const Workspace& w, int i) {
  check_index(w, i);
  HodgeSetting s;
  s.nX = s.nY = w.n;
  s.omegaX = w.adapted_qp(i);
  s.omegaY = w.adapted_qp(w.prev(i));
  s.conjX = w.Ft(i, w.e);
  s.V = w.B[i];
  s.Fm = w.A[i];
  s.gramX = s.gramY = w.gram;
  s.labelX = label("omega", i);
  s.labelY = label("omega", w.prev(i));
  return s;
}

Vec embed(const Vec& v, std::size_t block, std::size_t n, std::size_t total) {
  Vec out(total, 0);
  for (std::size_t r = 0; r < n; ++r) out[block * n + r] = v[r];
  return out;
}

void put_block(KMatrix& m, std::size_t bi, std::size_t bj, const KMatrix& blk) {
  for (std::size_t r = 0; r < blk.rows; ++r)
    for (std::size_t c = 0; c < blk.cols; ++c) m(bi * blk.rows + r, bj * blk.cols + c) = blk(r, c);
}

HodgeSetting total_setting(const Workspace& w) {
  const std::size_t n = w.n, N = n * static_cast<std::size_t>(w.f);
  HodgeSetting s;
  s.nX = s.nY = N;
  std::vector<Vec> omega_basis, conj_vecs;
  s.V = KMatrix(N, N);
  s.Fm = KMatrix(N, N);
  s.gramX = KMatrix(N, N);
  for (int i = 0; i < w.f; ++i) {
    const std::size_t bi = static_cast<std::size_t>(i), bp = static_cast<std::size_t>(w.prev(i));
    for (const Vec& v : w.adapted(i)) omega_basis.push_back(embed(v, bi, n, N));
    for (const Vec& v : w.Ft(i, w.e).basis()) conj_vecs.push_back(embed(v, bi, n, N));
    put_block(s.V, bp, bi, w.B[i]);
    put_block(s.Fm, bi, bp, w.A[i]);
    put_block(s.gramX, bi, bi, w.gram);
  }
  s.gramY = s.gramX;
  const Subspace omega = Subspace::span(w.K, N, omega_basis);
  s.omegaX = QP::with_basis(w.K, omega, Subspace::zero(N), omega_basis);
  s.omegaY = s.omegaX;
  s.conjX = Subspace::span(w.K, N, conj_vecs);
  s.labelX = s.labelY = "omega";
  return s;
}

// m^[j]_i with everything its duality statement needs.
struct MParts {
  LineSection section;
  PropDualSections pd;
  Elem delta = 0;
  Elem alpha_prev = 0;
  Elem alpha_cur = 0;
  Elem mv = 0;
  QP Uj;
  QP Ujm1;
};

void check_m_range(const Workspace& w, int i, int j) {
  check_index(w, i);
  if (w.e < 2 || j < 2 || j > w.e) throw Error(ErrorKind::Precondition, "m^[j] needs e >= 2 and 2 <= j <= e");
}

LineSection m_section(const Workspace& w, int i, int j) {
  check_m_range(w, i, j);
  return section(w.K, w.pi, w.graded(i, j), 0, label("gr omega", i, j), w.graded(i, j - 1), 0,
                 label("gr omega", i, j - 1));
}

MParts m_parts(const Workspace& w, int i, int j) {
  MParts out;
  out.section = m_section(w, i, j);
  const FiniteField& K = w.K;
  const int e = w.e;
  const Subspace a1 = w.aux(i, j - 1), a2 = w.aux(i, j - 2);
  const QP C = QP::make(K, a2, w.F(i, j - 1));
  out.pd = prop_dual_sections(K, QP::make(K, a1, w.F(i, j - 1)), w.graded(i, j), C);
  out.delta = det_of(K, w.pi, QP::make(K, a1, a2), w.graded(i, j - 1));
  out.Uj = QP::make(K, w.F(i, 2 * e + 1 - j), w.F(i, 2 * e - j));
  out.Ujm1 = QP::make(K, w.F(i, 2 * e + 2 - j), w.F(i, 2 * e + 1 - j));
  out.alpha_prev = det_of(K, w.pi_pow(e - j + 1), out.Ujm1, C);
  out.alpha_cur = det_of(K, w.pi_pow(e - j), out.Uj, QP::make(K, a1, w.F(i, j)));
  out.mv = det_of(K, w.pi, out.Ujm1, out.Uj);
  return out;
}

bool m_natural(const FiniteField& K, const MParts& p) {
  return p.section.scalar == K.mul(p.delta, p.pd.y.scalar) &&
         K.mul(p.mv, p.alpha_cur) == K.mul(p.pd.x.scalar, p.alpha_prev);
}

Elem m_canonical(const Workspace& w, const MParts& p, const LineSection& dual) {
  const FiniteField& K = w.K;
  const Elem Sj = pairing_det(K, w.gram, p.Uj.basis(), dual.basis("source").vectors);
  const Elem Sjm1 = pairing_det(K, w.gram, p.Ujm1.basis(), dual.basis("target").vectors);
  const Elem den = K.mul(K.mul(p.alpha_prev, p.pd.iso), Sj);
  if (den == 0) throw Error(ErrorKind::InvariantViolation, "degenerate identification in the m duality");
  return K.div(K.mul(K.mul(p.delta, p.alpha_cur), Sjm1), den);
}

struct HasseParts {
  LineSection section;
  PropDualSections pd;
  Elem delta = 0;
  Elem rho = 0;
  Elem phi = 0;
  Elem hv = 0;
  QP W;
  QP Uy;
};

LineSection hasse_section(const Workspace& w, int i) {
  check_index(w, i);
  if (w.e < 2) throw Error(ErrorKind::Precondition, "hasse_i needs e >= 2");
  const Subspace torsion = kernel(w.K, w.pi);
  if (!is_subset(w.K, w.F(i, 1), torsion))
    throw Error(ErrorKind::InvariantViolation, "F^[1] is not killed by pi; division by pi^{e-1} undefined");
  const KMatrix L = kmul(w.K, w.B[i], pi_division_map(w.t, w.h1, w.e - 1));
  return section(w.K, L, w.graded(i, 1), 0, label("gr omega", i, 1), w.graded(w.prev(i), w.e), 1,
                 label("gr omega", w.prev(i), w.e));
}

HasseParts hasse_parts(const Workspace& w, int i) {
  HasseParts out;
  out.section = hasse_section(w, i);
  const FiniteField& K = w.K;
  const int e = w.e, ip = w.prev(i);
  const Subspace torsion = kernel(K, w.pi);
  const KMatrix div = pi_division_map(w.t, w.h1, e - 1);
  const KMatrix L = kmul(K, w.B[i], div);
  const QP C = QP::make(K, w.Ft(i, 1), w.zero());
  out.pd = prop_dual_sections(K, QP::make(K, torsion, w.zero()), w.graded(i, 1), C);
  out.delta = det_of(K, L, QP::make(K, torsion, w.Ft(i, 1)), frobenius(K, w.graded(ip, e), 1));
  out.W = QP::make(K, w.full(), w.F(i, 2 * e - 1));
  out.rho = det_of(K, w.pi_pow(e - 1), out.W, QP::make(K, torsion, w.F(i, 1)));
  out.Uy = QP::make(K, w.F(ip, e + 1), w.F(ip, e));
  out.phi = det_of(K, w.A[i], frobenius(K, out.Uy, 1), C);
  out.hv = det_of(K, kmul(K, div, w.A[i]), frobenius(K, out.Uy, 1), out.W);
  return out;
}

bool hasse_natural(const FiniteField& K, const HasseParts& p) {
  return p.section.scalar == K.mul(p.delta, p.pd.y.scalar) && K.mul(p.rho, p.hv) == K.mul(p.pd.x.scalar, p.phi);
}

Elem hasse_canonical(const Workspace& w, const HasseParts& p, const LineSection& dual) {
  const FiniteField& K = w.K;
  const Elem SX = pairing_det(K, w.gram, p.W.basis(), dual.basis("source").vectors);
  const Elem SY = pairing_det(K, w.gram, p.Uy.basis(), dual.basis("target").vectors);
  const Elem den = K.mul(K.mul(p.phi, p.pd.iso), SX);
  if (den == 0) throw Error(ErrorKind::InvariantViolation, "degenerate identification in the hasse duality");
  return K.div(K.mul(K.mul(p.delta, p.rho), K.frob(SY, 1)), den);
}

LineSection pr_section(const Workspace& w, int i, int j) {
  check_index(w, i);
  if (j < 1 || j > w.e) throw Error(ErrorKind::Precondition, "ha^[j] needs 1 <= j <= e");
  return section(w.K, w.B[i], w.graded(i, j), 0, label("gr omega", i, j), w.graded(w.prev(i), j), 1,
                 label("gr omega", w.prev(i), j));
}

// sigma M_{i-1}^[j+1] ... sigma M_{i-1}^[e] Hasse_i M_i^[2] ... M_i^[j] as a matrix.
KMatrix factorized_matrix(const Workspace& w, int i, int j) {
  const FiniteField& K = w.K;
  KMatrix acc = hasse_section(w, i).matrix;
  for (int l = 2; l <= j; ++l) acc = kmul(K, acc, m_section(w, i, l).matrix);
  for (int l = w.e; l >= j + 1; --l) acc = kmul(K, kfrobenius(K, m_section(w, w.prev(i), l).matrix, 1), acc);
  return acc;
}

Elem factorized_scalar(const Workspace& w, int i, int j) {
  const FiniteField& K = w.K;
  Elem acc = hasse_section(w, i).scalar;
  for (int l = 2; l <= j; ++l) acc = K.mul(acc, m_section(w, i, l).scalar);
  for (int l = j + 1; l <= w.e; ++l) acc = K.mul(acc, K.frob(m_section(w, w.prev(i), l).scalar, 1));
  return acc;
}

bool is_name(const std::string& name) {
  for (const auto& n : invariant_names())
    if (n == name) return true;
  return false;
}

// Runs the part of a verdict that needs the pointwise lemma; a
// WellDefinednessViolation there means the datum has no lift.
template <class Body>
bool lift_dependent(DualityVerdict& v, Body&& body) {
  try {
    body();
    return true;
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::WellDefinednessViolation) throw;
    v.applicable = false;
    v.equal = false;
    v.detail = std::string("identification undefined without a lift: ") + err.what();
    return false;
  }
}

// Both sides of one duality statement.
struct Pair {
  const Workspace& g;
  const Workspace& d;

  Elem canonical_m(int i, int j) const {
    return m_canonical(g, m_parts(g, i, j), m_section(d, i, j));
  }
  Elem canonical_hasse(int i) const { return hasse_canonical(g, hasse_parts(g, i), hasse_section(d, i)); }

  DualityVerdict verdict(const std::string& name, int i, int j) const {
    const FiniteField& K = g.K;
    DualityVerdict v;
    v.name = name;
    v.i = i;
    v.j = j;
    if (name == "ha") {
      const HodgeSetting s = total_setting(g);
      const HodgeParts p = hodge_parts(K, s);
      const HodgeParts q = hodge_parts(K, total_setting(d));
      v.scalar_G = p.section.scalar;
      v.scalar_GD = q.section.scalar;
      v.canonical_iso = hodge_canonical(K, s, p, q.section);
      v.natural_agrees = hodge_natural(K, p) && hodge_natural(K, q);
    } else if (name == "ha_i") {
      const HodgeSetting s = partial_setting(g, i);
      const HodgeParts p = hodge_parts(K, s);
      const HodgeParts q = hodge_parts(K, partial_setting(d, i));
      v.scalar_G = p.section.scalar;
      v.scalar_GD = q.section.scalar;
      v.canonical_iso = hodge_canonical(K, s, p, q.section);
      v.natural_agrees = hodge_natural(K, p) && hodge_natural(K, q);
    } else if (name == "m") {
      const MParts p = m_parts(g, i, j);
      const MParts q = m_parts(d, i, j);
      v.scalar_G = p.section.scalar;
      v.scalar_GD = q.section.scalar;
      v.canonical_iso = m_canonical(g, p, q.section);
      v.natural_agrees = m_natural(K, p) && m_natural(K, q);
    } else if (name == "hasse") {
      v.scalar_G = hasse_section(g, i).scalar;
      v.scalar_GD = hasse_section(d, i).scalar;
      if (!lift_dependent(v, [&] {
            const HasseParts p = hasse_parts(g, i);
            const HasseParts q = hasse_parts(d, i);
            v.canonical_iso = hasse_canonical(g, p, q.section);
            v.natural_agrees = hasse_natural(K, p) && hasse_natural(K, q);
          }))
        return v;
    } else if (name == "ha_pr") {
      v.scalar_G = pr_section(g, i, j).scalar;
      v.scalar_GD = pr_section(d, i, j).scalar;
      if (g.e == 1) {
        const HodgeSetting s = partial_setting(g, i);
        const HodgeParts p = hodge_parts(K, s);
        const HodgeParts q = hodge_parts(K, partial_setting(d, i));
        v.canonical_iso = hodge_canonical(K, s, p, q.section);
        v.natural_agrees = v.scalar_G == p.section.scalar && v.scalar_GD == q.section.scalar;
      } else if (!lift_dependent(v, [&] {
                   Elem c = canonical_hasse(i);
                   for (int l = 2; l <= j; ++l) c = K.mul(c, canonical_m(i, l));
                   for (int l = j + 1; l <= g.e; ++l) c = K.mul(c, K.frob(canonical_m(g.prev(i), l), 1));
                   v.canonical_iso = c;
                   v.natural_agrees =
                       v.scalar_G == factorized_scalar(g, i, j) && v.scalar_GD == factorized_scalar(d, i, j);
                 })) {
        return v;
      }
    } else {
      throw Error(ErrorKind::Precondition, "unknown invariant " + name);
    }
    v.equal = v.scalar_G == K.mul(v.canonical_iso, v.scalar_GD);
    return v;
  }
};

}  // namespace

const LabeledBasis& LineSection::basis(const std::string& lbl) const {
  for (const auto& b : bases)
    if (b.label == lbl) return b;
  throw Error(ErrorKind::Precondition, "section has no basis labelled " + lbl);
}

PropDualSections prop_dual_sections(const FiniteField& K, const QP& A, const QP& B, const QP& C) {
  if (!(A.denominator() == B.denominator()) || !(A.denominator() == C.denominator()))
    throw Error(ErrorKind::NotComplementary, "B, C and A must share a denominator");
  if (B.dim() + C.dim() != A.dim())
    throw Error(ErrorKind::NotComplementary, "dim B + dim C = " + std::to_string(B.dim() + C.dim()) +
                                                 " but dim A = " + std::to_string(A.dim()));
  if (!is_subset(K, B.numerator(), A.numerator()) || !is_subset(K, C.numerator(), A.numerator()))
    throw Error(ErrorKind::NotNested, "B and C must lie in A");
  const QP qB = QP::make(K, A.numerator(), B.numerator());
  const QP qC = QP::make(K, A.numerator(), C.numerator());
  const KMatrix id = KMatrix::identity(A.ambient());
  PropDualSections out;
  out.x = section(K, id, C, 0, "C", qB, 0, "A/B");
  out.y = section(K, id, B, 0, "B", qC, 0, "A/C");
  out.x.bases.push_back({"A", 0, A.basis()});
  out.y.bases.push_back({"A", 0, A.basis()});
  const long s = static_cast<long>(B.dim()), r = static_cast<long>(A.dim());
  const Elem bq = det_columns(K, A, B.basis(), qB.basis());
  const Elem cq = det_columns(K, A, C.basis(), qC.basis());
  out.iso = K.mul(sign_power(K, s * (r - s)), K.div(cq, bq));
  return out;
}

std::vector<Vec> adapted_hodge_basis(const DieudonneDatum& D, int i) {
  const Workspace w(D);
  check_index(w, i);
  return w.adapted(i);
}

LineSection hasse_invariant(const DieudonneDatum& D) {
  const Workspace w(D);
  LineSection s = hodge_parts(w.K, total_setting(w)).section;
  return s;
}

LineSection partial_hasse(const DieudonneDatum& D, int i) {
  const Workspace w(D);
  return hodge_parts(w.K, partial_setting(w, i)).section;
}

LineSection primitive_m(const DieudonneDatum& D, int i, int j) { return m_section(Workspace(D), i, j); }

LineSection primitive_hasse(const DieudonneDatum& D, int i) { return hasse_section(Workspace(D), i); }

LineSection primitive_hasse(const LiftedDatum& L, int i) { return primitive_hasse(reduce(L), i); }

LineSection partial_hasse_pr(const DieudonneDatum& D, int i, int j) { return pr_section(Workspace(D), i, j); }

bool factorization_check(const DieudonneDatum& D, int i, int j) {
  const Workspace w(D);
  if (w.e < 2) throw Error(ErrorKind::Precondition, "factorization needs e >= 2");
  return factorized_matrix(w, i, j) == pr_section(w, i, j).matrix;
}

const std::vector<std::string>& invariant_names() {
  static const std::vector<std::string> names{"ha", "ha_i", "m", "hasse", "ha_pr"};
  return names;
}

NaturalMapCheck natural_map_check(const std::string& name, const DieudonneDatum& D, int i, int j) {
  const Workspace w(D);
  const FiniteField& K = w.K;
  NaturalMapCheck out;
  if (name == "ha" || name == "ha_i") {
    const HodgeParts p = hodge_parts(K, name == "ha" ? total_setting(w) : partial_setting(w, i));
    out.definition = p.section.scalar;
    out.natural = K.mul(p.delta, p.pd.y.scalar);
    out.agree = hodge_natural(K, p);
  } else if (name == "m") {
    const MParts p = m_parts(w, i, j);
    out.definition = p.section.scalar;
    out.natural = K.mul(p.delta, p.pd.y.scalar);
    out.agree = m_natural(K, p);
  } else if (name == "hasse") {
    const HasseParts p = hasse_parts(w, i);
    out.definition = p.section.scalar;
    out.natural = K.mul(p.delta, p.pd.y.scalar);
    out.agree = hasse_natural(K, p);
  } else if (name == "ha_pr") {
    out.definition = pr_section(w, i, j).scalar;
    if (w.e == 1) {
      const HodgeParts p = hodge_parts(K, partial_setting(w, i));
      out.natural = K.mul(p.delta, p.pd.y.scalar);
      out.agree = out.definition == out.natural && hodge_natural(K, p);
    } else {
      out.natural = factorized_scalar(w, i, j);
      out.agree = out.definition == out.natural;
    }
  } else {
    throw Error(ErrorKind::Precondition, "unknown invariant " + name);
  }
  return out;
}

DualityVerdict duality_check(const std::string& name, const DieudonneDatum& D, const DieudonneDatum& dual, int i,
                             int j) {
  if (!is_name(name)) throw Error(ErrorKind::Precondition, "unknown invariant " + name);
  const Workspace g(D), d(dual);
  return Pair{g, d}.verdict(name, i, j);
}

DualityVerdict duality_check(const std::string& name, const DieudonneDatum& D, int i, int j) {
  return duality_check(name, D, dualize(D), i, j);
}

std::vector<Cell> invariant_cells(const Params& params) {
  const int f = params.f(), e = params.e();
  std::vector<Cell> out{{"ha", 0, 0}};
  for (int i = 0; i < f; ++i) out.push_back({"ha_i", i, 0});
  for (int i = 0; i < f; ++i)
    for (int j = 2; j <= e; ++j) out.push_back({"m", i, j});
  if (e >= 2)
    for (int i = 0; i < f; ++i) out.push_back({"hasse", i, 0});
  for (int i = 0; i < f; ++i)
    for (int j = 1; j <= e; ++j) out.push_back({"ha_pr", i, j});
  return out;
}

LineSection invariant_section(const Cell& cell, const DieudonneDatum& D) {
  const Workspace w(D);
  if (cell.name == "ha") return hodge_parts(w.K, total_setting(w)).section;
  if (cell.name == "ha_i") return hodge_parts(w.K, partial_setting(w, cell.i)).section;
  if (cell.name == "m") return m_section(w, cell.i, cell.j);
  if (cell.name == "hasse") return hasse_section(w, cell.i);
  if (cell.name == "ha_pr") return pr_section(w, cell.i, cell.j);
  throw Error(ErrorKind::Precondition, "unknown invariant " + cell.name);
}

std::vector<DualityVerdict> all_duality_verdicts(const DieudonneDatum& D, const DieudonneDatum& dual) {
  const Workspace g(D), d(dual);
  const Pair pair{g, d};
  std::vector<DualityVerdict> out;
  for (const Cell& c : invariant_cells(D.params)) out.push_back(pair.verdict(c.name, c.i, c.j));
  return out;
}

std::vector<DualityVerdict> all_duality_verdicts(const DieudonneDatum& D) {
  return all_duality_verdicts(D, dualize(D));
}

ProductIdentity product_identity(const DieudonneDatum& D) {
  const Workspace w(D);
  const FiniteField& K = w.K;
  ProductIdentity out;
  out.ha = hodge_parts(K, total_setting(w)).section.scalar;
  out.sign = sign_power(K, static_cast<long>(D.params.d0()) * (w.f - 1));
  out.product_partial = K.from_int(1);
  out.product_pr = K.from_int(1);
  bool ok = true;
  for (int i = 0; i < w.f; ++i) {
    const Elem hi = hodge_parts(K, partial_setting(w, i)).section.scalar;
    Elem prod = K.from_int(1);
    for (int j = 1; j <= w.e; ++j) prod = K.mul(prod, pr_section(w, i, j).scalar);
    out.partial.push_back(hi);
    out.partial_products.push_back(prod);
    out.product_partial = K.mul(out.product_partial, hi);
    out.product_pr = K.mul(out.product_pr, prod);
    ok = ok && hi == prod;
  }
  out.holds = ok && out.ha == K.mul(out.sign, out.product_partial);
  return out;
}

}  // namespace hasse
