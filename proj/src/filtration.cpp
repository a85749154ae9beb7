#include "hasse/filtration.hpp"

#include <random>
#include <sstream>

#include "hasse/error.hpp"
#include "hasse/random.hpp"

namespace hasse {

namespace {

void require(bool ok, const Flag& flag, const std::string& what) {
  if (ok) return;
  std::ostringstream os;
  os << to_string(flag.kind) << " flag at i=" << flag.i << ": " << what;
  throw Error(ErrorKind::InvariantViolation, os.str());
}

void check_levels(const DieudonneDatum& D, const Flag& flag, const std::vector<std::size_t>& dims, bool pi_stable) {
  const FiniteField& K = D.field();
  const KMatrix pi = pi_power_map(*D.tower, static_cast<std::size_t>(D.params.h1), 1);
  for (std::size_t j = 0; j < flag.levels.size(); ++j) {
    require(flag.levels[j].dim_k() == dims[j], flag,
            "level " + std::to_string(j) + " has dimension " + std::to_string(flag.levels[j].dim_k()) +
                ", expected " + std::to_string(dims[j]));
    if (j == 0) continue;
    require(is_subset(K, flag.levels[j - 1].span(), flag.levels[j].span()), flag,
            "level " + std::to_string(j - 1) + " not contained in level " + std::to_string(j));
    if (pi_stable)
      require(is_subset(K, apply(K, pi, flag.levels[j].span()), flag.levels[j - 1].span()), flag,
              "pi * level " + std::to_string(j) + " not contained in level " + std::to_string(j - 1));
  }
}

Submodule pi_preimage(const DieudonneDatum& D, const Submodule& s, int n) {
  const std::size_t h1 = static_cast<std::size_t>(D.params.h1);
  return Submodule(h1, preimage(D.field(), pi_power_map(*D.tower, h1, n), s.span()));
}

}  // namespace

const char* to_string(FlagKind kind) {
  switch (kind) {
    case FlagKind::pi_torsion: return "pi_torsion";
    case FlagKind::hodge_extended: return "hodge_extended";
    case FlagKind::hodge_aux: return "hodge_aux";
    case FlagKind::conjugate: return "conjugate";
  }
  return "unknown";
}

Submodule pi_torsion(const DieudonneDatum& D, int /*i*/, int j) {
  if (j < 0 || j > D.params.e()) throw Error(ErrorKind::Precondition, "pi_torsion: j out of range");
  const std::size_t h1 = static_cast<std::size_t>(D.params.h1);
  return Submodule(h1, kernel(D.field(), pi_power_map(*D.tower, h1, j)));
}

Flag pi_torsion_flag(const DieudonneDatum& D, int i) {
  Flag flag{i, FlagKind::pi_torsion, {}};
  std::vector<std::size_t> dims;
  for (int j = 0; j <= D.params.e(); ++j) {
    flag.levels.push_back(pi_torsion(D, i, j));
    dims.push_back(static_cast<std::size_t>(j * D.params.h1));
  }
  check_levels(D, flag, dims, true);
  return flag;
}

Flag extended_hodge_flag(const DieudonneDatum& D, int i) {
  const int e = D.params.e(), h1 = D.params.h1, d1 = D.params.d1;
  Flag flag{i, FlagKind::hodge_extended, D.pr_flag.at(i)};
  for (int j = 1; j <= e; ++j) flag.levels.push_back(pi_preimage(D, flag.levels[e - j], j));
  std::vector<std::size_t> dims;
  for (int j = 0; j <= e; ++j) dims.push_back(static_cast<std::size_t>(j * d1));
  for (int j = 1; j <= e; ++j) dims.push_back(static_cast<std::size_t>(j * h1 + (e - j) * d1));
  check_levels(D, flag, dims, true);
  return flag;
}

Flag hodge_aux_flag(const DieudonneDatum& D, int i) {
  const int e = D.params.e(), h1 = D.params.h1, d1 = D.params.d1;
  Flag flag{i, FlagKind::hodge_aux, {}};
  std::vector<std::size_t> dims;
  for (int j = 0; j < e; ++j) {
    flag.levels.push_back(pi_preimage(D, D.pr_flag.at(i).at(j), 1));
    dims.push_back(static_cast<std::size_t>(h1 + j * d1));
  }
  check_levels(D, flag, dims, false);
  for (int j = 0; j < e; ++j)
    require(is_subset(D.field(), D.pr_flag[i][j].span(), flag.levels[j].span()), flag,
            "PR level " + std::to_string(j) + " not contained in its pi-preimage");
  return flag;
}

Submodule twisted_image(const DieudonneDatum& D, const KMatrix& map, const Submodule& s, long power) {
  return Submodule(s.rank(), apply(D.field(), map, frobenius(D.field(), s.span(), power)));
}

Flag conjugate_flag(const DieudonneDatum& D, int i) {
  const int e = D.params.e(), h1 = D.params.h1, d1 = D.params.d1;
  const RingTower& t = *D.tower;
  const FiniteField& K = t.field();
  const Flag ext = extended_hodge_flag(D, D.prev(i));
  const KMatrix A = restrict_scalars(t, D.A(i));
  const KMatrix B = restrict_scalars(t, D.B(i));
  Flag flag{i, FlagKind::conjugate, {}};
  for (int j = 0; j <= e; ++j) flag.levels.push_back(twisted_image(D, A, ext.levels[e + j], 1));
  for (int j = 1; j <= e; ++j)
    flag.levels.emplace_back(static_cast<std::size_t>(h1), preimage(K, B, frobenius(K, ext.levels[j].span(), 1)));
  std::vector<std::size_t> dims;
  for (int j = 0; j <= e; ++j) dims.push_back(static_cast<std::size_t>((h1 - d1) * j));
  for (int j = 1; j <= e; ++j) dims.push_back(static_cast<std::size_t>(e * (h1 - d1) + j * d1));
  check_levels(D, flag, dims, true);
  require(flag.levels[e] == conjugate(D, i), flag, "middle level differs from ker V");
  require(Submodule(static_cast<std::size_t>(h1), preimage(K, B, Subspace::zero(B.rows))) == flag.levels[e], flag,
          "V^{-1}(0) differs from F(sigma E)");
  return flag;
}

bool graded_isomorphisms_hold(const DieudonneDatum& D, int i) {
  const int e = D.params.e();
  const RingTower& t = *D.tower;
  const FiniteField& K = t.field();
  const Flag ext = extended_hodge_flag(D, D.prev(i));
  const Flag conj = conjugate_flag(D, i);
  const KMatrix A = restrict_scalars(t, D.A(i));
  const KMatrix B = restrict_scalars(t, D.B(i));
  try {
    for (int j = 1; j <= e; ++j) {
      const auto fs = frobenius(K, QuotientPresentation::make(K, ext.levels[e + j].span(), ext.levels[e + j - 1].span()), 1);
      const auto fd = QuotientPresentation::make(K, conj.levels[j].span(), conj.levels[j - 1].span());
      if (fs.dim() != fd.dim() || determinant(K, induced_map(K, A, fs, fd)) == 0) return false;
      const auto vs = QuotientPresentation::make(K, conj.levels[e + j].span(), conj.levels[e + j - 1].span());
      const auto vd = frobenius(K, QuotientPresentation::make(K, ext.levels[j].span(), ext.levels[j - 1].span()), 1);
      if (vs.dim() != vd.dim() || determinant(K, induced_map(K, B, vs, vd)) == 0) return false;
    }
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::WellDefinednessViolation) return false;
    throw;
  }
  return true;
}

bool pi_divisibility_holds(const DieudonneDatum& D, int i, int j) {
  const int e = D.params.e();
  if (j < 1 || j > e - 1) throw Error(ErrorKind::Precondition, "pi-divisibility needs 1 <= j <= e-1");
  const Flag conj = conjugate_flag(D, i);
  const KMatrix pij = pi_power_map(*D.tower, static_cast<std::size_t>(D.params.h1), j);
  return apply(D.field(), pij, conj.levels[e + j].span()) == conj.levels[e - j].span();
}

PiDivisibilityReport pi_divisibility_not_applicable() {
  PiDivisibilityReport r;
  r.applicable = false;
  r.detail = "not applicable (no lift)";
  return r;
}

PiDivisibilityReport check_pi_divisibility(const LiftedDatum& L, int i, int j, std::uint64_t seed) {
  return check_pi_divisibility(L, reduce(L), i, j, seed);
}

PiDivisibilityReport check_pi_divisibility(const LiftedDatum& L, const DieudonneDatum& D, int i, int j,
                                           std::uint64_t seed) {
  const int e = D.params.e();
  if (j < 1 || j > e - 1) throw Error(ErrorKind::Precondition, "pi-divisibility needs 1 <= j <= e-1");
  const RingTower& t = *D.tower;
  const FiniteField& K = t.field();
  const ChainRing& W = t.What();
  const std::size_t h1 = static_cast<std::size_t>(D.params.h1);

  PiDivisibilityReport rep;
  rep.submodule_equal = pi_divisibility_holds(D, i, j);

  const KMatrix A = restrict_scalars(t, D.A(i));
  const KMatrix B = restrict_scalars(t, D.B(i));
  const Subspace domain = preimage(K, A, pi_torsion(D, i, e - j).span());
  const Subspace modulus =
      frobenius(K, apply(K, pi_power_map(t, h1, e - j), hodge(D, D.prev(i)).span()), 1);
  const RingElement scalar_w = W.mul(W.pi_power(e - j), t.unit_u());
  const KMatrix scalar_k = restrict_scalars(
      t, mat_scale(t.R(), Matrix::identity(t.R(), h1), t.reduce(scalar_w)));
  const KMatrix div = pi_division_map(t, h1, j);
  const KMatrix pij = pi_power_map(t, h1, j);
  const Matrix& Ahat = L.F.at(i).matrix;
  const Matrix Bhat = mat_frobenius(W, L.V.at(i).matrix, 1);

  std::vector<Vec> points = domain.basis();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int s = 0; s < 20; ++s) {
    Vec x(domain.ambient(), 0);
    for (const Vec& b : domain.basis()) {
      const Elem c = static_cast<Elem>(uniform_below(rng, K.order()));
      for (std::size_t t2 = 0; t2 < x.size(); ++t2) x[t2] = K.add(x[t2], K.mul(c, b[t2]));
    }
    points.push_back(std::move(x));
  }

  for (const Vec& x : points) {
    ++rep.points_checked;
    // Residue level: any pi^j-division of F x, then V, modulo sigma(pi^{e-j} omega).
    const Vec ax = kapply(K, A, x);
    const Vec z = kapply(K, div, ax);
    if (kapply(K, pij, z) != ax) {
      rep.lemma_holds = false;
      rep.detail = "F x is not divisible by pi^j";
      break;
    }
    Vec r = kapply(K, B, z);
    const Vec ux = kapply(K, scalar_k, x);
    for (std::size_t t2 = 0; t2 < r.size(); ++t2) r[t2] = K.sub(r[t2], ux[t2]);
    if (!modulus.contains(K, r)) {
      rep.lemma_holds = false;
      rep.detail = "V(F x / pi^j) differs from pi^(e-j) u x modulo sigma(pi^(e-j) omega)";
      break;
    }
    // Lift level: exact division in W^, then compare reductions.
    std::vector<RingElement> x0;
    for (const RingElement& a : from_kvector(t, x)) x0.push_back(t.lift(a));
    std::vector<RingElement> z0 = mat_apply(W, Ahat, x0);
    bool divisible = true;
    for (RingElement& a : z0) {
      const Valuation v = W.valuation_split(a);
      if (v.val < j) {
        divisible = false;
        break;
      }
      a = v.val >= W.capacity() ? W.zero() : W.mul(v.unit_part, W.pi_power(v.val - j));
    }
    if (!divisible) {
      rep.lemma_holds = false;
      rep.detail = "lifted F x is not divisible by pi^j";
      break;
    }
    const std::vector<RingElement> lhs = mat_apply(W, Bhat, z0);
    for (std::size_t s = 0; s < h1; ++s) {
      if (t.reduce(lhs[s]) != t.reduce(W.mul(scalar_w, x0[s]))) {
        rep.lemma_holds = false;
        rep.detail = "lifted V(F x / pi^j) differs from pi^(e-j) u x";
        break;
      }
    }
    if (!rep.lemma_holds) break;
  }
  if (!rep.submodule_equal && rep.detail.empty()) rep.detail = "pi^j conj^[e+j] differs from conj^[e-j]";
  return rep;
}

}  // namespace hasse
