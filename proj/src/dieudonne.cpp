#include "hasse/dieudonne.hpp"

#include <cstdlib>
#include <sstream>

#include "hasse/error.hpp"
#include "hasse/filtration.hpp"

namespace hasse {

namespace {

std::string label(const char* what, int i) {
  std::ostringstream os;
  os << what << " at i=" << i;
  return os.str();
}

// First basis vector of a that is not in b, as an R-vector.
std::optional<std::vector<RingElement>> not_contained(const RingTower& t, const Subspace& a, const Subspace& b) {
  for (const Vec& v : a.basis())
    if (!b.contains(t.field(), v)) return from_kvector(t, v);
  return std::nullopt;
}

void compare(ValidationReport& rep, const RingTower& t, const std::string& axiom, int i, const Submodule& x,
             const Submodule& y) {
  AxiomCheck c{axiom, i, -1, true, "", std::nullopt};
  if (!(x == y)) {
    c.pass = false;
    if (auto w = not_contained(t, x.span(), y.span())) {
      c.witness = w;
      c.detail = "vector in the left side but not the right";
    } else {
      c.witness = not_contained(t, y.span(), x.span());
      c.detail = "vector in the right side but not the left";
    }
  }
  rep.checks.push_back(std::move(c));
}

bool map_shape_ok(const SemilinearMap& m, const Params& P, int twist) {
  return m.matrix.tag == RingTag::R && m.matrix.rows == static_cast<std::size_t>(P.h1) &&
         m.matrix.cols == static_cast<std::size_t>(P.h1) &&
         m.matrix.entries.size() == static_cast<std::size_t>(P.h1 * P.h1) && m.twist == twist;
}

bool lifted_shape_ok(const SemilinearMap& m, const Params& P, int twist) {
  return m.matrix.tag == RingTag::What && m.matrix.rows == static_cast<std::size_t>(P.h1) &&
         m.matrix.cols == static_cast<std::size_t>(P.h1) && m.twist == twist;
}

}  // namespace

void Params::check() const {
  spec.check();
  if (!(0 < d1 && d1 < h1)) throw Error(ErrorKind::InvalidSpec, "need 0 < d1 < h1");
  if (spec.f * spec.e * h1 > size_limit())
    throw Error(ErrorKind::InvalidSpec, "f*e*h1 exceeds the configured size limit");
}

int Params::size_limit() {
  if (const char* env = std::getenv("HASSE_FORGE_LIMIT")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return 96;
}

Matrix DieudonneDatum::B(int i) const {
  return mat_frobenius(tower->R(), V.at(static_cast<std::size_t>(i)).matrix, 1);
}

bool ValidationReport::valid() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::vector<AxiomCheck> ValidationReport::failures() const {
  std::vector<AxiomCheck> out;
  for (const auto& c : checks)
    if (!c.pass) out.push_back(c);
  return out;
}

Submodule hodge(const DieudonneDatum& D, int i) { return image(*D.tower, D.V.at(D.next(i))); }

Submodule conjugate(const DieudonneDatum& D, int i) { return kernel(*D.tower, D.V.at(i)); }

KMatrix pairing_gram(const DieudonneDatum& D) {
  return top_coefficient_gram(static_cast<std::size_t>(D.params.h1), D.params.e());
}

ValidationReport validate(const DieudonneDatum& D) {
  ValidationReport rep;
  const Params& P = D.params;
  const int f = P.f();
  const int e = P.e();
  bool shapes = D.tower && D.tower->spec() == P.spec && static_cast<int>(D.F.size()) == f &&
                static_cast<int>(D.V.size()) == f && static_cast<int>(D.pr_flag.size()) == f && 0 < P.d1 &&
                P.d1 < P.h1;
  for (int i = 0; shapes && i < f; ++i) {
    shapes = map_shape_ok(D.F[i], P, 1) && map_shape_ok(D.V[i], P, -1) &&
             static_cast<int>(D.pr_flag[i].size()) == e + 1;
    for (const auto& s : D.pr_flag[i])
      shapes = shapes && s.rank() == static_cast<std::size_t>(P.h1) &&
               s.span().ambient() == static_cast<std::size_t>(P.h1 * e);
  }
  rep.checks.push_back({"shape", 0, -1, shapes, shapes ? "" : "matrix sizes, twists, ring tags or flag lengths", {}});
  if (!shapes) return rep;

  const RingTower& t = *D.tower;
  const FiniteField& K = t.field();
  for (int i = 0; i < f; ++i) {
    compare(rep, t, label("ker F = im V", i), i, kernel(t, D.F[i]), image(t, D.V[i]));
    compare(rep, t, label("ker V = im F", i), i, kernel(t, D.V[i]), image(t, D.F[i]));
  }
  const std::size_t ue = static_cast<std::size_t>(e);
  const KMatrix pi = pi_power_map(t, static_cast<std::size_t>(P.h1), 1);
  for (int i = 0; i < f; ++i) {
    const Submodule w = hodge(D, i);
    const bool dim_ok = w.dim_k() == ue * static_cast<std::size_t>(P.d1);
    rep.checks.push_back({label("dim hodge = e*d1", i), i, -1, dim_ok,
                          dim_ok ? "" : "dim_k hodge = " + std::to_string(w.dim_k()), {}});
    const auto& flag = D.pr_flag[i];
    {
      const bool ok = flag[0].dim_k() == 0;
      rep.checks.push_back({label("PR level 0 is zero", i), i, 0, ok, "", {}});
    }
    compare(rep, t, label("PR top level = hodge", i), i, flag[ue], w);
    for (int j = 1; j <= e; ++j) {
      const Submodule& lo = flag[j - 1];
      const Submodule& hi = flag[j];
      AxiomCheck inc{label("PR increasing", i), i, j, true, "", not_contained(t, lo.span(), hi.span())};
      inc.pass = !inc.witness.has_value();
      rep.checks.push_back(std::move(inc));
      const bool rank_ok = hi.dim_k() == lo.dim_k() + static_cast<std::size_t>(P.d1) &&
                           hi.dim_k() == static_cast<std::size_t>(j * P.d1);
      rep.checks.push_back({label("PR graded rank d1", i), i, j, rank_ok,
                            rank_ok ? "" : "dim_k level = " + std::to_string(hi.dim_k()), {}});
      AxiomCheck stab{label("PR pi-stability", i), i, j, true, "", std::nullopt};
      for (const Vec& v : hi.span().basis()) {
        const Vec pv = kapply(K, pi, v);
        if (!lo.span().contains(K, pv)) {
          stab.pass = false;
          stab.witness = from_kvector(t, v);
          stab.detail = "pi * witness is not in the previous level";
          break;
        }
      }
      rep.checks.push_back(std::move(stab));
    }
  }
  return rep;
}

ValidationReport validate(const LiftedDatum& L) {
  ValidationReport rep;
  const Params& P = L.params;
  const int f = P.f();
  bool shapes = L.tower && L.tower->spec() == P.spec && static_cast<int>(L.F.size()) == f &&
                static_cast<int>(L.V.size()) == f && static_cast<int>(L.pr_flag.size()) == f;
  for (int i = 0; shapes && i < f; ++i)
    shapes = lifted_shape_ok(L.F[i], P, 1) && lifted_shape_ok(L.V[i], P, -1);
  rep.checks.push_back({"lift shape", 0, -1, shapes, "", {}});
  if (!shapes) return rep;
  const ChainRing& W = L.tower->What();
  const Matrix pI = mat_scale(W, Matrix::identity(W, static_cast<std::size_t>(P.h1)), W.from_int(P.p()));
  for (int i = 0; i < f; ++i) {
    const SemilinearMap fv = compose(W, L.F[i], L.V[i]);
    const SemilinearMap vf = compose(W, L.V[i], L.F[i]);
    rep.checks.push_back({label("F V = p", i), i, -1, fv.matrix == pI && fv.twist == 0, "", {}});
    rep.checks.push_back({label("V F = p", i), i, -1, vf.matrix == pI && vf.twist == 0, "", {}});
  }
  if (!rep.valid()) return rep;
  DieudonneDatum D{P, L.tower, {}, {}, L.pr_flag};
  for (int i = 0; i < f; ++i) {
    D.F.push_back({mat_reduce(*L.tower, L.F[i].matrix), 1});
    D.V.push_back({mat_reduce(*L.tower, L.V[i].matrix), -1});
  }
  for (auto& c : validate(D).checks) {
    c.axiom = "reduction: " + c.axiom;
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

DieudonneDatum reduce(const LiftedDatum& L) {
  DieudonneDatum D{L.params, L.tower, {}, {}, L.pr_flag};
  for (int i = 0; i < L.f(); ++i) {
    D.F.push_back({mat_reduce(*L.tower, L.F.at(i).matrix), 1});
    D.V.push_back({mat_reduce(*L.tower, L.V.at(i).matrix), -1});
  }
  const ValidationReport rep = validate(D);
  if (!rep.valid()) throw Error(ErrorKind::InvalidLift, "reduction fails: " + rep.failures().front().axiom);
  return D;
}

DieudonneDatum dualize(const DieudonneDatum& D) {
  const ValidationReport rep = validate(D);
  if (!rep.valid()) throw Error(ErrorKind::InvalidDatum, "cannot dualize: " + rep.failures().front().axiom);
  const RingTower& t = *D.tower;
  const ChainRing& R = t.R();
  const KMatrix gram = pairing_gram(D);
  const int e = D.params.e();
  DieudonneDatum out;
  out.params = D.params;
  out.params.d1 = D.params.h1 - D.params.d1;
  out.tower = D.tower;
  for (int i = 0; i < D.f(); ++i) {
    out.F.push_back({mat_transpose(D.B(i)), 1});
    out.V.push_back({mat_frobenius(R, mat_transpose(D.A(i)), -1), -1});
    const Flag ext = extended_hodge_flag(D, i);
    std::vector<Submodule> levels;
    for (int j = 0; j <= e; ++j)
      levels.emplace_back(static_cast<std::size_t>(D.params.h1),
                          annihilator(t.field(), ext.levels[static_cast<std::size_t>(2 * e - j)].span(), gram));
    out.pr_flag.push_back(std::move(levels));
  }
  const ValidationReport back = validate(out);
  if (!back.valid())
    throw Error(ErrorKind::InvariantViolation, "dual datum fails validation: " + back.failures().front().axiom);
  return out;
}

LiftedDatum dualize(const LiftedDatum& L) {
  const DieudonneDatum dual = dualize(reduce(L));
  const ChainRing& W = L.tower->What();
  LiftedDatum out;
  out.params = dual.params;
  out.tower = L.tower;
  out.pr_flag = dual.pr_flag;
  for (int i = 0; i < L.f(); ++i) {
    out.F.push_back({mat_transpose(mat_frobenius(W, L.V[i].matrix, 1)), 1});
    out.V.push_back({mat_frobenius(W, mat_transpose(L.F[i].matrix), -1), -1});
  }
  return out;
}

}  // namespace hasse
