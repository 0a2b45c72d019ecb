"""Bounded chain complexes of finitely presented abelian groups.

Degrees are homological: the differential lowers degree by one.  A complex
stores a contiguous window of presentations starting at ``min_deg`` together
with the differentials inside that window; degrees outside the window are
zero.  Construction validates everything that can silently poison downstream
certificates: differential shapes, well-definedness modulo relations, and
d^2 = 0 modulo relations.

Homology is computed once per (complex, degree) pair and cached; all values
are immutable, so the cache is safe and cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .certificates import Certificate, bundle, failed, passed
from .errors import IllFormedMap, TorsionSource, ValidationError
from .exactalg import (
    FpAbelianGroup,
    GroupMap,
    IntegerMatrix,
    Presentation,
    block_diag,
    column_basis,
    integer_kernel,
    is_exact_pair,
    preimage_lattice,
    solve,
    solve_matrix,
    subgroup_presentation,
)


def _matrix_from_items(rows: int, cols: int, items) -> IntegerMatrix:
    ent = [0] * (rows * cols)
    for r, c, v in items:
        ent[r * cols + c] += v
    return IntegerMatrix(rows, cols, tuple(ent))


# ---------------------------------------------------------------------------
# complexes


@dataclass(frozen=True)
class ChainComplex:
    """min_deg plus a contiguous run of degree presentations; differentials[j]
    maps degree min_deg+j+1 to degree min_deg+j on generators."""

    min_deg: int
    degrees: tuple[Presentation, ...]
    differentials: tuple[IntegerMatrix, ...]

    def __post_init__(self):
        degs = tuple(self.degrees)
        diffs = tuple(self.differentials)
        if len(diffs) != max(0, len(degs) - 1):
            raise ValidationError("complex", "differential count must be degree count minus one")
        for j, d in enumerate(diffs):
            if d.rows != degs[j].generators or d.cols != degs[j + 1].generators:
                raise ValidationError(
                    f"degree {self.min_deg + j + 1}",
                    f"differential shape {d.rows}x{d.cols} does not match "
                    f"{degs[j].generators}x{degs[j + 1].generators}")
        # strip zero-generator degrees at both ends so equality is structural
        mn = self.min_deg
        while degs and degs[0].generators == 0:
            mn += 1
            degs = degs[1:]
            diffs = diffs[1:] if diffs else ()
        while degs and degs[-1].generators == 0:
            degs = degs[:-1]
            diffs = diffs[:-1] if diffs else ()
        if not degs:
            mn = 0
        object.__setattr__(self, "min_deg", mn)
        object.__setattr__(self, "degrees", degs)
        object.__setattr__(self, "differentials", diffs)

        for j, d in enumerate(diffs):
            carried = d @ degs[j + 1].relation_columns()
            if not degs[j].contains_in_relations(carried):
                raise ValidationError(
                    f"degree {mn + j + 1}",
                    "differential does not carry relations into relations")
        for j in range(len(diffs) - 1):
            square = diffs[j] @ diffs[j + 1]
            if not degs[j].contains_in_relations(square):
                raise ValidationError(
                    f"degree {mn + j + 2}", "d composed with d is nonzero")

    # -- shape helpers

    @property
    def top_deg(self) -> int:
        """Largest degree in the window; min_deg - 1 for the zero complex."""
        return self.min_deg + len(self.degrees) - 1

    def span(self) -> range:
        return range(self.min_deg, self.top_deg + 1)

    def pres_at(self, i: int) -> Presentation:
        if self.min_deg <= i <= self.top_deg:
            return self.degrees[i - self.min_deg]
        return Presentation.free(0)

    def diff_at(self, i: int) -> IntegerMatrix:
        """d_i : degree i -> degree i-1 (zero-shaped outside the window)."""
        if self.min_deg + 1 <= i <= self.top_deg:
            return self.differentials[i - self.min_deg - 1]
        return IntegerMatrix.zero(self.pres_at(i - 1).generators, self.pres_at(i).generators)

    @property
    def is_zero(self) -> bool:
        return not self.degrees

    @property
    def is_degreewise_free(self) -> bool:
        return all(p.relations.rows == 0 for p in self.degrees)

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = [f"{i}:{self.pres_at(i).group()}" for i in self.span()]
        return " | ".join(parts)


def zero_complex() -> ChainComplex:
    return ChainComplex(0, (), ())


def sphere_complex(n: int, rank: int = 1) -> ChainComplex:
    """Z^rank concentrated in degree n."""
    if rank == 0:
        return zero_complex()
    return ChainComplex(n, (Presentation.free(rank),), ())


def disk_complex(n: int) -> ChainComplex:
    """Z in degrees n and n-1 with the identity differential; acyclic."""
    return ChainComplex(n - 1, (Presentation.free(1), Presentation.free(1)),
                        (IntegerMatrix.identity(1),))


def moore_complex(t: int, n: int = 0) -> ChainComplex:
    """Z --t--> Z in degrees n+1, n; homology Z/t in degree n."""
    return ChainComplex(n, (Presentation.free(1), Presentation.free(1)),
                        (IntegerMatrix.from_rows([[t]]),))


# ---------------------------------------------------------------------------
# chain maps


@dataclass(frozen=True)
class ChainMap:
    """Degreewise map of complexes; components are stored over the source's
    window (outside it every component is forced zero).  Construction checks
    degreewise well-definedness and commutation with the differentials."""

    source: ChainComplex
    target: ChainComplex
    components: tuple[IntegerMatrix, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != len(self.source.degrees):
            raise IllFormedMap("one component per source degree required")
        object.__setattr__(self, "components", comps)
        for j, f in enumerate(comps):
            i = self.source.min_deg + j
            sp, tp = self.source.pres_at(i), self.target.pres_at(i)
            if f.rows != tp.generators or f.cols != sp.generators:
                raise IllFormedMap(
                    f"component at degree {i} has shape {f.rows}x{f.cols}, "
                    f"expected {tp.generators}x{sp.generators}")
            if not tp.contains_in_relations(f @ sp.relation_columns()):
                raise IllFormedMap(f"component at degree {i} does not respect relations")
        lo = min(self.source.min_deg, self.target.min_deg)
        hi = max(self.source.top_deg, self.target.top_deg)
        for i in range(lo + 1, hi + 1):
            walk_down = self.component_at(i - 1) @ self.source.diff_at(i)
            push_down = self.target.diff_at(i) @ self.component_at(i)
            if not self.target.pres_at(i - 1).contains_in_relations(walk_down - push_down):
                raise IllFormedMap(f"square at degree {i} does not commute")

    def component_at(self, i: int) -> IntegerMatrix:
        if self.source.min_deg <= i <= self.source.top_deg:
            return self.components[i - self.source.min_deg]
        return IntegerMatrix.zero(self.target.pres_at(i).generators,
                                  self.source.pres_at(i).generators)

    @staticmethod
    def identity(x: ChainComplex) -> "ChainMap":
        return ChainMap(x, x, tuple(IntegerMatrix.identity(p.generators) for p in x.degrees))

    @staticmethod
    def zero_map(source: ChainComplex, target: ChainComplex) -> "ChainMap":
        return ChainMap(source, target,
                        tuple(IntegerMatrix.zero(target.pres_at(source.min_deg + j).generators,
                                                 p.generators)
                              for j, p in enumerate(source.degrees)))

    def compose(self, inner: "ChainMap") -> "ChainMap":
        """self after inner."""
        if inner.target != self.source:
            raise IllFormedMap("composition mismatch")
        comps = tuple(self.component_at(inner.source.min_deg + j) @ f
                      for j, f in enumerate(inner.components))
        return ChainMap(inner.source, self.target, comps)


def chain_maps_agree(f: ChainMap, g: ChainMap) -> bool:
    """Equality of parallel chain maps modulo target relations."""
    for i in f.source.span():
        diff = f.component_at(i) - g.component_at(i)
        if not f.target.pres_at(i).contains_in_relations(diff):
            return False
    return True


# ---------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologyData:
    """Cycle basis plus a presentation of cycles/boundaries on that basis."""

    basis: IntegerMatrix          # columns: cycle-lattice basis in chain coords
    presentation: Presentation    # homology presented on the basis columns

    def group(self) -> FpAbelianGroup:
        return self.presentation.group()

    def coords_of(self, cycles: IntegerMatrix) -> IntegerMatrix:
        """Express cycle columns in the basis; raises if not cycles."""
        got = solve_matrix(self.basis, cycles)
        if got is None:
            raise ValueError("column is not a cycle")
        return got


@lru_cache(maxsize=None)
def homology_data(x: ChainComplex, i: int) -> HomologyData:
    pres = x.pres_at(i)
    below = x.pres_at(i - 1)
    cycles = preimage_lattice(x.diff_at(i), below.relation_columns())
    basis = column_basis(cycles)
    killers = x.diff_at(i + 1).hstack(pres.relation_columns())
    coords = solve_matrix(basis, killers)
    assert coords is not None  # boundaries and relations are always cycles
    relations = coords.transpose() if coords.cols else IntegerMatrix.zero(0, basis.cols)
    return HomologyData(basis, Presentation(basis.cols, relations))


def homology_group(x: ChainComplex, i: int) -> FpAbelianGroup:
    return homology_data(x, i).group()


@dataclass(frozen=True)
class HomologyProfile:
    """Degree -> group, zero groups omitted, sorted by degree."""

    entries: tuple[tuple[int, FpAbelianGroup], ...]

    @staticmethod
    def of(pairs) -> "HomologyProfile":
        kept = tuple(sorted((d, g) for d, g in pairs if not g.is_zero))
        return HomologyProfile(kept)

    def at(self, i: int) -> FpAbelianGroup:
        for d, g in self.entries:
            if d == i:
                return g
        return FpAbelianGroup.zero()

    def support(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.entries)

    def truncated(self, n: int) -> "HomologyProfile":
        return HomologyProfile(tuple((d, g) for d, g in self.entries if d <= n))

    def shifted(self, n: int) -> "HomologyProfile":
        return HomologyProfile(tuple((d + n, g) for d, g in self.entries))

    def __str__(self):
        if not self.entries:
            return "0"
        return ", ".join(f"H_{d} = {g}" for d, g in self.entries)


def homology(x: ChainComplex) -> HomologyProfile:
    return HomologyProfile.of((i, homology_group(x, i)) for i in x.span())


def induced_map(f: ChainMap, i: int) -> GroupMap:
    """H_i(f) between the cached homology presentations."""
    hx = homology_data(f.source, i)
    hy = homology_data(f.target, i)
    pushed = f.component_at(i) @ hx.basis
    return GroupMap(hx.presentation, hy.presentation, hy.coords_of(pushed))


def is_quasi_iso(f: ChainMap) -> Certificate:
    """Pass iff homology of f is an isomorphism in every degree; the witness
    carries the least failing degree."""
    lo = min(f.source.min_deg, f.target.min_deg)
    hi = max(f.source.top_deg, f.target.top_deg)
    for i in range(lo, hi + 1):
        if not induced_map(f, i).is_iso():
            return failed("quasi_iso", degree=i,
                          source=str(homology_group(f.source, i)),
                          target=str(homology_group(f.target, i)))
    return passed("quasi_iso")


# ---------------------------------------------------------------------------
# functorial constructions


def shift(x: ChainComplex, n: int) -> ChainComplex:
    """Suspension: degree i of the result is degree i-n of x; differentials
    pick up the usual (-1)^n sign."""
    sign = -1 if n % 2 else 1
    return ChainComplex(x.min_deg + n, x.degrees,
                        tuple(d.scale(sign) for d in x.differentials))


def direct_sum(x: ChainComplex, y: ChainComplex) -> ChainComplex:
    if x.is_zero:
        return y
    if y.is_zero:
        return x
    lo = min(x.min_deg, y.min_deg)
    hi = max(x.top_deg, y.top_deg)
    degs = tuple(x.pres_at(i).direct_sum(y.pres_at(i)) for i in range(lo, hi + 1))
    diffs = tuple(block_diag(x.diff_at(i), y.diff_at(i)) for i in range(lo + 1, hi + 1))
    return ChainComplex(lo, degs, diffs)


def direct_sum_map(f: ChainMap, g: ChainMap) -> ChainMap:
    """Blockwise f + g between the direct sums of sources and targets."""
    source = direct_sum(f.source, g.source)
    target = direct_sum(f.target, g.target)
    comps = tuple(block_diag(f.component_at(i), g.component_at(i)) for i in source.span())
    return ChainMap(source, target, comps)


def cotuple(f: ChainMap, g: ChainMap) -> ChainMap:
    """[f | g]: f on the first summand, g on the second, into a shared target."""
    if f.target != g.target:
        raise IllFormedMap("cotuple needs a shared target")
    source = direct_sum(f.source, g.source)
    comps = tuple(f.component_at(i).hstack(g.component_at(i)) for i in source.span())
    return ChainMap(source, f.target, comps)


def mapping_cone(f: ChainMap) -> ChainComplex:
    """Cone(f)_n = X_{n-1} + Y_n with d(x, y) = (-dx, dy - fx)."""
    x, y = f.source, f.target
    lo = min(x.min_deg + 1, y.min_deg)
    hi = max(x.top_deg + 1, y.top_deg)
    degs = []
    diffs = []
    for n in range(lo, hi + 1):
        degs.append(x.pres_at(n - 1).direct_sum(y.pres_at(n)))
        if n > lo:
            gx, gy = x.pres_at(n - 1).generators, y.pres_at(n).generators
            rx, ry = x.pres_at(n - 2).generators, y.pres_at(n - 1).generators
            dx = x.diff_at(n - 1)
            dy = y.diff_at(n)
            fm = f.component_at(n - 1)
            items = []
            for r in range(rx):
                for c in range(gx):
                    items.append((r, c, -dx.entry(r, c)))
            for r in range(ry):
                for c in range(gx):
                    items.append((rx + r, c, -fm.entry(r, c)))
                for c in range(gy):
                    items.append((rx + r, gx + c, dy.entry(r, c)))
            diffs.append(_matrix_from_items(rx + ry, gx + gy, items))
    return ChainComplex(lo, tuple(degs), tuple(diffs))


def hom_complex(m: ChainComplex, n: ChainComplex) -> ChainComplex:
    """Mapping complex: degree k holds the maps lowering degree by -k,
    i.e. families M_i -> N_{i+k}, with (df)(x) = d(f(x)) + (-1)^{k+1} f(d(x)).

    The source must be degreewise free; generator (i, a, b) sends generator a
    of M_i to generator b of N_{i+k}."""
    if not m.is_degreewise_free:
        raise TorsionSource("mapping complex requires a degreewise-free source")
    if m.is_zero or n.is_zero:
        return zero_complex()
    lo = n.min_deg - m.top_deg
    hi = n.top_deg - m.min_deg

    def layer(k):
        gens = []
        for i in m.span():
            for a in range(m.pres_at(i).generators):
                for b in range(n.pres_at(i + k).generators):
                    gens.append((i, a, b))
        return gens

    def layer_presentation(k, gens):
        rel_blocks = []
        for i in m.span():
            for a in range(m.pres_at(i).generators):
                rel_blocks.append(n.pres_at(i + k).relations)
        rel = block_diag(*rel_blocks) if rel_blocks else IntegerMatrix.zero(0, 0)
        if rel.cols != len(gens):
            rel = IntegerMatrix.zero(rel.rows, len(gens))
        return Presentation(len(gens), rel)

    layers = {k: layer(k) for k in range(lo, hi + 1)}
    degs = [layer_presentation(k, layers[k]) for k in range(lo, hi + 1)]
    diffs = []
    for k in range(lo + 1, hi + 1):
        src = layers[k]
        dst = layers[k - 1]
        pos = {g: r for r, g in enumerate(dst)}
        sign = -1 if (k + 1) % 2 else 1
        items = []
        for c, (i, a, b) in enumerate(src):
            dn = n.diff_at(i + k)
            for cc in range(dn.rows):
                v = dn.entry(cc, b)
                if v:
                    items.append((pos[(i, a, cc)], c, v))
            dm = m.diff_at(i + 1)
            for aa in range(dm.cols):
                v = dm.entry(a, aa)
                if v:
                    items.append((pos[(i + 1, aa, b)], c, sign * v))
        diffs.append(_matrix_from_items(len(dst), len(src), items))
    return ChainComplex(lo, tuple(degs), tuple(diffs))


# ---------------------------------------------------------------------------
# degreewise pullback / kernel / cokernel


def degreewise_pullback(f: ChainMap, g: ChainMap):
    """Fiber product of f: A -> C and g: B -> C, with projections."""
    if f.target != g.target:
        raise IllFormedMap("pullback legs must share a target")
    a, b, c = f.source, g.source, f.target
    lo = min(a.min_deg, b.min_deg)
    hi = max(a.top_deg, b.top_deg)
    presentations = []
    bases = []
    for i in range(lo, hi + 1):
        ambient = a.pres_at(i).direct_sum(b.pres_at(i))
        diff_map = f.component_at(i).hstack(-g.component_at(i))
        lat = preimage_lattice(diff_map, c.pres_at(i).relation_columns())
        pres, basis = subgroup_presentation(ambient, lat)
        presentations.append(pres)
        bases.append(basis)
    diffs = []
    for i in range(lo + 1, hi + 1):
        ambient_d = block_diag(a.diff_at(i), b.diff_at(i))
        pushed = ambient_d @ bases[i - lo]
        coords = solve_matrix(bases[i - lo - 1], pushed)
        if coords is None:
            raise IllFormedMap(f"pullback differential escapes the fiber product at degree {i}")
        diffs.append(coords)
    pb = ChainComplex(lo, tuple(presentations), tuple(diffs))
    ga = [a.pres_at(i).generators for i in range(lo, hi + 1)]
    p1 = ChainMap(pb, a, tuple(bases[j].take_rows(0, ga[j])
                               for j in range(pb.min_deg - lo, pb.top_deg - lo + 1)))
    p2 = ChainMap(pb, b, tuple(bases[j].take_rows(ga[j], bases[j].rows)
                               for j in range(pb.min_deg - lo, pb.top_deg - lo + 1)))
    return pb, p1, p2


def pullback_induced_map(p1: ChainMap, p2: ChainMap, f: ChainMap, g: ChainMap) -> ChainMap:
    """The map W -> pullback determined by f: W -> A and g: W -> B, where
    p1, p2 are the projections returned by degreewise_pullback.  The stacked
    projection components recover the subgroup basis, so solving against them
    yields exact coordinates."""
    if f.source != g.source:
        raise IllFormedMap("both legs must share a source")
    pb = p1.source
    w = f.source
    comps = []
    for i in w.span():
        basis = p1.component_at(i).vstack(p2.component_at(i))
        stacked = f.component_at(i).vstack(g.component_at(i))
        u = solve_matrix(basis, stacked)
        if u is None:
            raise IllFormedMap(f"legs do not land in the fiber product at degree {i}")
        comps.append(u)
    return ChainMap(w, pb, tuple(comps))


def degreewise_kernel(f: ChainMap):
    """(K, inclusion) with K_i the kernel of f_i as a subgroup of source_i."""
    x = f.source
    presentations = []
    bases = []
    for i in x.span():
        lat = preimage_lattice(f.component_at(i), f.target.pres_at(i).relation_columns())
        pres, basis = subgroup_presentation(x.pres_at(i), lat)
        presentations.append(pres)
        bases.append(basis)
    diffs = []
    for j in range(1, len(presentations)):
        pushed = x.differentials[j - 1] @ bases[j]
        coords = solve_matrix(bases[j - 1], pushed)
        if coords is None:
            raise IllFormedMap(f"kernel is not closed under d at degree {x.min_deg + j}")
        diffs.append(coords)
    ker = ChainComplex(x.min_deg, tuple(presentations), tuple(diffs))
    incl = ChainMap(ker, x, tuple(bases[i - x.min_deg] for i in ker.span()))
    return ker, incl


def cokernel_complex(j: ChainMap):
    """(Q, q) where Q_i = target_i / im(j_i) and q is the quotient map."""
    x = j.target
    degs = []
    for i in x.span():
        pres = x.pres_at(i)
        extra = j.component_at(i).transpose()
        degs.append(Presentation(pres.generators, pres.relations.vstack(extra)))
    quo = ChainComplex(x.min_deg, tuple(degs), x.differentials)
    q = ChainMap(x, quo, tuple(IntegerMatrix.identity(p.generators) for p in x.degrees))
    return quo, q


# ---------------------------------------------------------------------------
# long exact sequence of a degreewise short exact sequence


def connecting_map(j: ChainMap, q: ChainMap, i: int) -> GroupMap:
    """Snake map H_i(Q) -> H_{i-1}(C) for a degreewise-exact pair
    C --j--> X --q--> Q: lift a cycle through q, differentiate, pull back
    through j, and read off homology coordinates."""
    x = j.target
    c = j.source
    quo = q.target
    hq = homology_data(quo, i)
    hc = homology_data(c, i - 1)
    cols = []
    lift_system = q.component_at(i).hstack(quo.pres_at(i).relation_columns())
    pull_system = j.component_at(i - 1).hstack(x.pres_at(i - 1).relation_columns())
    for col in range(hq.basis.cols):
        lifted = solve(lift_system, hq.basis.col(col))
        if lifted is None:
            raise IllFormedMap(f"quotient map is not surjective at degree {i}")
        xi = lifted[: x.pres_at(i).generators]
        dx = x.diff_at(i).apply(xi)
        pulled = solve(pull_system, dx)
        if pulled is None:
            raise IllFormedMap(f"boundary does not come from the subcomplex at degree {i - 1}")
        cols.append(pulled[: c.pres_at(i - 1).generators])
    mat = IntegerMatrix.from_cols(cols, rows=c.pres_at(i - 1).generators)
    return GroupMap(hq.presentation, hc.presentation, hc.coords_of(mat))


def les_certificate(j: ChainMap, q: ChainMap) -> Certificate:
    """Exactness of the homology long exact sequence of 0 -> C -> X -> Q -> 0
    at every spot across the whole degree window."""
    c, x, quo = j.source, j.target, q.target
    lo = min(c.min_deg, x.min_deg, quo.min_deg)
    hi = max(c.top_deg, x.top_deg, quo.top_deg) + 1
    maps = []
    labels = []
    for i in range(hi, lo - 1, -1):
        maps.append(induced_map(j, i))
        labels.append(f"H_{i}(sub) -> H_{i}(total)")
        maps.append(induced_map(q, i))
        labels.append(f"H_{i}(total) -> H_{i}(quotient)")
        maps.append(connecting_map(j, q, i))
        labels.append(f"H_{i}(quotient) -> H_{i - 1}(sub)")
    checks = []
    for a, b, label in zip(maps, maps[1:], labels[1:]):
        ok, reason = is_exact_pair(a, b)
        checks.append(passed("exact_at", spot=label) if ok
                      else failed("exact_at", spot=label, reason=reason))
    return bundle("long_exact_sequence", checks)


# ---------------------------------------------------------------------------
# cofibrant replacement


def cofibrant_replacement(x: ChainComplex):
    """(F, q) with F degreewise free and q: F -> X a quasi-isomorphism.

    Already-free complexes are returned untouched with the identity.  The
    general case is the bounded-below stepwise free approximation: start from
    the free group on the bottom generators, then in each next degree adjoin
    one generator per cycle of X (to keep homology surjective) and one per
    kernel class downstairs (to make it injective)."""
    if x.is_degreewise_free:
        return x, ChainMap.identity(x)
    if x.is_zero:
        return x, ChainMap.identity(x)

    f_gens = [x.degrees[0].generators]
    f_diffs: list[IntegerMatrix] = []
    q_comps = [IntegerMatrix.identity(f_gens[0])]

    for step in range(1, len(x.degrees) + 1):
        n = x.min_deg + step
        prev_gens = f_gens[-1]
        dn = x.diff_at(n)
        rel_below = x.pres_at(n - 1).relation_columns()
        # kernel classes downstairs: dF z = 0 and q z dies in H_{n-1}(X)
        df_prev = f_diffs[-1] if f_diffs else IntegerMatrix.zero(0, prev_gens)
        top = df_prev.hstack(IntegerMatrix.zero(df_prev.rows, dn.cols + rel_below.cols))
        bottom = q_comps[-1].hstack(-dn).hstack(-rel_below)
        ker = integer_kernel(top.vstack(bottom))
        killers = column_basis(ker.take_rows(0, prev_gens))
        witness_system = dn.hstack(rel_below)
        witness_cols = []
        for jcol in range(killers.cols):
            target_vec = q_comps[-1].apply(killers.col(jcol))
            w = solve(witness_system, target_vec)
            assert w is not None
            witness_cols.append(w[: dn.cols])
        # cycles of X at degree n, one new free generator each
        zn = column_basis(preimage_lattice(dn, rel_below))
        count = killers.cols + zn.cols
        f_gens.append(count)
        d_cols = list(killers.columns()) + [(0,) * prev_gens] * zn.cols
        f_diffs.append(IntegerMatrix.from_cols(d_cols, rows=prev_gens))
        q_cols = witness_cols + list(zn.columns())
        q_comps.append(IntegerMatrix.from_cols(q_cols, rows=x.pres_at(n).generators))

    free = ChainComplex(
        x.min_deg,
        tuple(Presentation.free(g) for g in f_gens),
        tuple(f_diffs),
    )
    comps = tuple(q_comps[i - x.min_deg] for i in free.span())
    return free, ChainMap(free, x, comps)


def complex_from_homology(profile: HomologyProfile) -> ChainComplex:
    """A degreewise-free complex realizing the profile: one sphere summand per
    free rank, one two-term t-multiplication block per invariant factor."""
    out = zero_complex()
    for d, g in profile.entries:
        if g.rank:
            out = direct_sum(out, sphere_complex(d, g.rank))
        for t in g.torsion:
            out = direct_sum(out, moore_complex(t, d))
    return out
