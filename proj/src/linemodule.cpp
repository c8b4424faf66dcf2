#include "mlines/linemodule.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace mlines {

namespace {

SparseRow full_row(const EchelonBasis& E, size_t i) {
  SparseRow r;
  const SparseRow& tail = E.row(int(i));
  r.t.reserve(tail.t.size() + 1);
  r.t.push_back({E.pivot(int(i)), 1});
  r.t.insert(r.t.end(), tail.t.begin(), tail.t.end());
  return r;
}

SparseRow shifted(const SparseRow& r, const std::vector<int>& map) {
  SparseRow s;
  s.t.reserve(r.t.size());
  for (const auto& [i, c] : r.t) s.t.push_back({map[i], c});
  return s;
}

// product of an ambient row of degree n with a form in the line coordinates
SparseRow ambient_form_mul(const Ring& R, const SparseRow& v, int n,
                           const Form2& e) {
  const Fp& F = R.field();
  std::unordered_map<int, uint64_t> acc;
  SparseRow wpow = v; // v * w^i as i advances
  for (int i = 0; i <= e.deg; ++i) {
    if (e.c[i] != 0) {
      SparseRow t = wpow; // then multiply by z^(deg-i)
      for (int k = n + i; k < n + e.deg; ++k) t = shifted(t, R.shift(k, 2));
      for (const auto& [col, c] : t.t) acc[col] += uint64_t(e.c[i]) * c;
    }
    if (i < e.deg) wpow = shifted(wpow, R.shift(n + i, 3));
  }
  SparseRow out;
  out.t.reserve(acc.size());
  for (const auto& [col, x] : acc) {
    uint32_t c = F.reduce64(x);
    if (c != 0) out.t.push_back({col, c});
  }
  out.sort_terms();
  return out;
}

// basis of a complement of T inside V: V's rows inserted into a copy of T,
// the surviving residuals are the representatives
struct Complement {
  EchelonBasis combined;
  std::vector<SparseRow> reps;
  std::vector<int> positions; // row index in combined of each representative
  explicit Complement(EchelonBasis base) : combined(std::move(base)) {}
};

Complement complement_of(const EchelonBasis& T, const EchelonBasis& V) {
  Complement c(T);
  for (size_t i = 0; i < V.rows().size(); ++i)
    if (c.combined.insert(full_row(V, i))) {
      c.positions.push_back(int(c.combined.rows().size()) - 1);
      c.reps.push_back(full_row(c.combined, c.combined.rows().size() - 1));
    }
  return c;
}

} // namespace

SliceChain ideal_chain(const GradedIdeal& I, int lo, int hi) {
  SliceChain c;
  c.lo = lo;
  c.E.reserve(hi - lo + 1);
  for (int n = lo; n <= hi; ++n) c.E.push_back(I.slice(n));
  return c;
}

SliceChain full_chain(const Ring& R, int lo, int hi) {
  SliceChain c;
  c.lo = lo;
  for (int n = lo; n <= hi; ++n) {
    EchelonBasis E(R.dim(n), R.field());
    for (int i = 0; i < R.dim(n); ++i) {
      SparseRow r;
      r.t.push_back({i, 1});
      E.insert(r);
    }
    c.E.push_back(std::move(E));
  }
  return c;
}

SliceChain zero_chain(const Ring& R, int lo, int hi) {
  SliceChain c;
  c.lo = lo;
  for (int n = lo; n <= hi; ++n) c.E.push_back(EchelonBasis(R.dim(n), R.field()));
  return c;
}

ModulePresentation subquotient_module(const Ring& R, const SliceChain& V,
                                      const SliceChain& W) {
  if (V.lo != W.lo || V.E.size() != W.E.size())
    throw std::invalid_argument("subquotient chains must share the window");
  ModulePresentation P;
  P.mod.lo = V.lo;
  int len = int(V.E.size());
  std::vector<Complement> comps;
  comps.reserve(len);
  for (int i = 0; i < len; ++i) {
    comps.push_back(complement_of(W.E[i], V.E[i]));
    P.mod.dims.push_back(int(comps[i].reps.size()));
    P.reps.push_back(comps[i].reps);
  }
  for (int i = 0; i + 1 < len; ++i) {
    int n = V.lo + i;
    int d0 = P.mod.dims[i], d1 = P.mod.dims[i + 1];
    MatF Zm(d0, d1), Wm(d0, d1);
    // positions of module basis rows inside the next combined echelon
    std::vector<int> slot(comps[i + 1].combined.rows().size(), -1);
    for (int j = 0; j < d1; ++j) slot[comps[i + 1].positions[j]] = j;
    for (int j = 0; j < d0; ++j)
      for (int v = 2; v < 4; ++v) {
        SparseRow img = shifted(comps[i].reps[j], R.shift(n, v));
        auto coords = comps[i + 1].combined.coordinates(img);
        if (!coords)
          throw std::logic_error("chain is not multiplication stable");
        MatF& M = v == 2 ? Zm : Wm;
        for (size_t r = 0; r < coords->size(); ++r)
          if ((*coords)[r] != 0 && slot[r] >= 0) M.at(j, slot[r]) = (*coords)[r];
      }
    P.mod.Z.push_back(std::move(Zm));
    P.mod.W.push_back(std::move(Wm));
  }
  return P;
}

namespace {

// candidate annihilator forms from rank drops of the multiplication pencil
// z + t w at one degree; an irreducible factor sum(u_i t^i) of the projected
// determinant corresponds to the form sum(u_i (-z)^i w^(k-i))
std::vector<Form2> pencil_candidates(const Ring& R, const SliceChain& V,
                                     const SliceChain& T, int n, Rng& rng,
                                     bool* inconclusive) {
  const Fp& F = R.field();
  std::vector<Form2> out;
  Complement c0 = complement_of(T.at(n), V.at(n));
  int D = int(c0.reps.size());
  if (D == 0) return out;
  // module maps into the next degree, compressed over the complement there
  Complement c1 = complement_of(T.at(n + 1), V.at(n + 1));
  int D1 = int(c1.reps.size());
  if (D1 == 0) {
    // everything above dies; the downward sweep handles this degree
    return out;
  }
  std::vector<int> slot(c1.combined.rows().size(), -1);
  for (int j = 0; j < D1; ++j) slot[c1.positions[j]] = j;
  MatF Zm(D, D1), Wm(D, D1);
  for (int j = 0; j < D; ++j)
    for (int v = 2; v < 4; ++v) {
      SparseRow img = shifted(c0.reps[j], R.shift(n, v));
      auto coords = c1.combined.coordinates(img);
      if (!coords) throw std::logic_error("chain is not multiplication stable");
      MatF& M = v == 2 ? Zm : Wm;
      for (size_t r = 0; r < coords->size(); ++r)
        if ((*coords)[r] != 0 && slot[r] >= 0) M.at(j, slot[r]) = (*coords)[r];
    }
  for (int attempt = 0; attempt < 4; ++attempt) {
    MatF P(D1, D);
    for (int i = 0; i < D1; ++i)
      for (int j = 0; j < D; ++j) P.at(i, j) = rng.field_elt(F);
    std::vector<std::pair<uint32_t, uint32_t>> pts;
    bool all_zero = true;
    for (uint32_t t = 0; t <= uint32_t(D); ++t) {
      MatF Mt(D, D1);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D1; ++j)
          Mt.at(i, j) = F.add(Zm.at(i, j), F.mul(t, Wm.at(i, j)));
      uint32_t dv = det(mat_mul(Mt, P, F), F);
      all_zero = all_zero && dv == 0;
      pts.push_back({t, dv});
    }
    if (all_zero) continue;
    Poly1 delta = p1_interpolate(pts, F);
    for (const Poly1& u : p1_factor(delta, F, rng)) {
      Form2 e;
      e.deg = u.deg();
      e.c.assign(e.deg + 1, 0);
      for (int i = 0; i <= u.deg(); ++i) {
        uint32_t v = u.c[i];
        if (i % 2 == 1) v = F.neg(v);
        e.c[e.deg - i] = v;
      }
      if (!e.is_zero()) out.push_back(e);
    }
    return out;
  }
  if (inconclusive) *inconclusive = true;
  return out;
}

// add to T every complement vector of degree n killed into T at degree n+k
// by the form; returns whether T grew
bool colon_at(const Ring& R, SliceChain& T, const SliceChain& V, int n,
              const Form2& e) {
  const Fp& F = R.field();
  int k = e.deg;
  Complement c = complement_of(T.at(n), V.at(n));
  int D = int(c.reps.size());
  if (D == 0) return false;
  const EchelonBasis& target = T.at(n + k);
  std::vector<int> np = target.nonpivots();
  std::vector<int> pos(R.dim(n + k), -1);
  for (int j = 0; j < int(np.size()); ++j) pos[np[j]] = j;
  // columns index the complement basis, so the kernel consists of the
  // coefficient vectors of elements sent into T
  MatF M(int(np.size()), D);
  for (int j = 0; j < D; ++j) {
    SparseRow img = ambient_form_mul(R, c.reps[j], n, e);
    SparseRow res = target.reduce(img);
    for (const auto& [col, cv] : res.t) M.at(pos[col], j) = cv;
  }
  auto [rk, K] = rank_kernel(std::move(M), F);
  (void)rk;
  bool grew = false;
  for (int r = 0; r < K.rows; ++r) {
    std::unordered_map<int, uint64_t> acc;
    for (int j = 0; j < D; ++j) {
      uint32_t f = K.at(r, j);
      if (f == 0) continue;
      for (const auto& [col, cv] : c.reps[j].t) acc[col] += uint64_t(f) * cv;
    }
    SparseRow row;
    for (const auto& [col, x] : acc) {
      uint32_t cv = F.reduce64(x);
      if (cv != 0) row.t.push_back({col, cv});
    }
    row.sort_terms();
    grew = T.at(n).insert(row) || grew;
  }
  return grew;
}

} // namespace

TorsionResult torsion_closure(const Ring& R, const SliceChain& V,
                              const SliceChain& W, Rng& rng) {
  if (V.lo != W.lo || V.E.size() != W.E.size())
    throw std::invalid_argument("torsion chains must share the window");
  if (V.E.size() < 3)
    throw std::invalid_argument("torsion window too small");
  TorsionResult res;
  res.closure = W;
  SliceChain& T = res.closure;
  int lo = V.lo, hi = V.hi();
  bool inconclusive = false;

  for (int round = 0; round < 200; ++round) {
    bool changed = false;

    // downward sweep: catch vectors killed into T by both line coordinates
    for (int n = hi - 1; n >= lo; --n) {
      Complement c = complement_of(T.at(n), V.at(n));
      int D = int(c.reps.size());
      if (D == 0) continue;
      const EchelonBasis& up = T.at(n + 1);
      std::vector<int> np = up.nonpivots();
      std::vector<int> pos(R.dim(n + 1), -1);
      for (int j = 0; j < int(np.size()); ++j) pos[np[j]] = j;
      MatF M(2 * int(np.size()), D);
      for (int j = 0; j < D; ++j)
        for (int v = 2; v < 4; ++v) {
          SparseRow res1 = up.reduce(shifted(c.reps[j], R.shift(n, v)));
          for (const auto& [col, cv] : res1.t)
            M.at((v - 2) * int(np.size()) + pos[col], j) = cv;
        }
      auto [rk, K] = rank_kernel(std::move(M), R.field());
      (void)rk;
      for (int r = 0; r < K.rows; ++r) {
        std::unordered_map<int, uint64_t> acc;
        for (int j = 0; j < D; ++j) {
          uint32_t f = K.at(r, j);
          if (f == 0) continue;
          for (const auto& [col, cv] : c.reps[j].t)
            acc[col] += uint64_t(f) * cv;
        }
        SparseRow row;
        for (const auto& [col, x] : acc) {
          uint32_t cv = R.field().reduce64(x);
          if (cv != 0) row.t.push_back({col, cv});
        }
        row.sort_terms();
        changed = T.at(n).insert(row) || changed;
      }
    }

    // upward completion keeps the chain multiplication stable
    for (int n = lo; n < hi; ++n)
      for (size_t i = 0; i < T.at(n).rows().size(); ++i) {
        SparseRow r = full_row(T.at(n), i);
        for (int v = 2; v < 4; ++v)
          changed = T.at(n + 1).insert(shifted(r, R.shift(n, v))) || changed;
      }

    // annihilator candidates: the two coordinates plus pencil rank drops
    std::vector<Form2> cands = {Form2::zpow(1), Form2::wpow(1)};
    for (int n = hi - 1; n >= std::max(lo, hi - 2); --n) {
      Rng sub = rng.fork(uint64_t(round) * 31 + n);
      for (Form2& e : pencil_candidates(R, V, T, n, sub, &inconclusive)) {
        bool dup = false;
        for (const Form2& f : cands)
          dup = dup || (f.deg == e.deg && f.c == e.c);
        if (!dup) cands.push_back(std::move(e));
      }
    }
    for (const Form2& e : cands)
      for (int n = hi - e.deg; n >= lo; --n)
        changed = colon_at(R, T, V, n, e) || changed;

    if (!changed) break;
    if (round == 199) throw std::runtime_error("torsion closure did not settle");
  }

  for (int n = lo; n <= hi; ++n) {
    int d = int(T.at(n).rows().size()) - int(W.at(n).rows().size());
    if (d > 0) res.torsion_dims[n] = d;
  }

  // quotient dimensions near the top must already grow linearly
  long long q[3];
  for (int i = 0; i < 3; ++i) {
    int n = hi - 2 + i;
    q[i] = (long long)(V.at(n).rows().size()) - (long long)(T.at(n).rows().size());
  }
  res.certified = !inconclusive && (q[1] - q[0] == q[2] - q[1]);
  return res;
}

LineModule section_completion(const LineModule& M, int down_to, const Fp& F) {
  if (M.dims.size() < 2) throw std::invalid_argument("window too small");
  LineModule out;
  int hi = M.hi();
  out.lo = std::min(down_to, hi - 1);
  int len = hi - out.lo + 1;
  out.dims.assign(len, 0);
  out.Z.assign(len - 1, MatF(0, 0));
  out.W.assign(len - 1, MatF(0, 0));
  auto idx = [&](int n) { return n - out.lo; };
  out.dims[idx(hi)] = M.dims.back();
  out.dims[idx(hi - 1)] = M.dims[int(M.dims.size()) - 2];
  out.Z[idx(hi - 1)] = M.Z.back();
  out.W[idx(hi - 1)] = M.W.back();
  for (int n = hi - 2; n >= out.lo; --n) {
    int d1 = out.dims[idx(n + 1)];
    const MatF& Zn = out.Z[idx(n + 1)];
    const MatF& Wn = out.W[idx(n + 1)];
    // pairs (a, b) in M(n+1)^2 with w a = z b glue to a section at degree n
    MatF Bt(Zn.cols, 2 * d1);
    for (int r = 0; r < Bt.rows; ++r)
      for (int j = 0; j < d1; ++j) {
        Bt.at(r, j) = Wn.at(j, r);
        Bt.at(r, d1 + j) = F.neg(Zn.at(j, r));
      }
    auto [rk, K] = rank_kernel(std::move(Bt), F);
    (void)rk;
    out.dims[idx(n)] = K.rows;
    MatF Za(K.rows, d1), Wa(K.rows, d1);
    for (int r = 0; r < K.rows; ++r)
      for (int j = 0; j < d1; ++j) {
        Za.at(r, j) = K.at(r, j);
        Wa.at(r, j) = K.at(r, d1 + j);
      }
    out.Z[idx(n)] = std::move(Za);
    out.W[idx(n)] = std::move(Wa);
  }
  return out;
}

std::map<int, int> generator_degrees(const LineModule& M, const Fp& F) {
  std::map<int, int> out;
  for (int i = 0; i < int(M.dims.size()); ++i) {
    int span = 0;
    if (i > 0 && M.dims[i - 1] > 0) {
      MatF S(2 * M.dims[i - 1], M.dims[i]);
      for (int r = 0; r < M.dims[i - 1]; ++r)
        for (int j = 0; j < M.dims[i]; ++j) {
          S.at(r, j) = M.Z[i - 1].at(r, j);
          S.at(M.dims[i - 1] + r, j) = M.W[i - 1].at(r, j);
        }
      span = rank(std::move(S), F);
    }
    if (M.dims[i] > span) out[M.lo + i] = M.dims[i] - span;
  }
  return out;
}

Splitting splitting_from_generators(const LineModule& M,
                                    const std::map<int, int>& gens) {
  Splitting s;
  for (const auto& [d, c] : gens)
    for (int i = 0; i < c; ++i) s.twists.push_back(-d);
  std::sort(s.twists.rbegin(), s.twists.rend());
  s.certified = true;
  for (int n = M.lo; n <= M.hi(); ++n) {
    long long expect = 0;
    for (int e : s.twists) expect += std::max(0, e + n + 1);
    s.certified = s.certified && expect == M.dim(n);
  }
  return s;
}

SheafAnalysis sheaf_splitting(const Ring& R, const SliceChain& V,
                              const SliceChain& W, Rng& rng) {
  SheafAnalysis out;
  TorsionResult tr = torsion_closure(R, V, W, rng);
  out.torsion_dims = tr.torsion_dims;
  out.torsion_certified = tr.certified;
  ModulePresentation P = subquotient_module(R, V, tr.closure);
  int hi = P.mod.hi();
  int top = P.mod.dims.back();
  if (top == 0) {
    out.splitting.certified = true;
    return out;
  }
  // the lowest generator of a free module sits no lower than hi - dim(hi)
  LineModule C = section_completion(P.mod, hi - top - 1, R.field());
  out.generator_counts = generator_degrees(C, R.field());
  out.splitting = splitting_from_generators(C, out.generator_counts);
  return out;
}

} // namespace mlines
