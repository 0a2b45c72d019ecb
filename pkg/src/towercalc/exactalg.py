"""Exact integer linear algebra and finitely presented abelian groups.

Everything downstream reduces to lattice arithmetic in Z^n: Smith normal form
with unimodular transforms, integer kernels and linear solves, column-lattice
bases and membership, and subquotient presentations.  All arithmetic is plain
Python int (arbitrary precision); no floating point appears anywhere in this
package.

Conventions
-----------
Group elements are integer column vectors on a presentation's generators; a
map's matrix has shape (target generators x source generators) and acts on
the left.  A presentation's relation matrix stores one relation per ROW, so
the relation *lattice* is spanned by the columns of its transpose.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import gcd
from typing import ClassVar

from .errors import IllFormedMap, StabilizationViolated


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable row-major integer matrix."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @staticmethod
    def from_rows(rows_data) -> "IntegerMatrix":
        rows_data = [list(r) for r in rows_data]
        nrows = len(rows_data)
        ncols = len(rows_data[0]) if rows_data else 0
        if any(len(r) != ncols for r in rows_data):
            raise ValueError("ragged rows")
        flat = tuple(int(x) for r in rows_data for x in r)
        return IntegerMatrix(nrows, ncols, flat)

    @staticmethod
    def from_cols(cols_data, rows: int | None = None) -> "IntegerMatrix":
        cols_data = [list(c) for c in cols_data]
        if rows is None:
            if not cols_data:
                raise ValueError("cannot infer row count from zero columns")
            rows = len(cols_data[0])
        if any(len(c) != rows for c in cols_data):
            raise ValueError("ragged columns")
        flat = tuple(int(c[i]) for i in range(rows) for c in cols_data)
        return IntegerMatrix(rows, len(cols_data), flat)

    @staticmethod
    def identity(n: int) -> "IntegerMatrix":
        return IntegerMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> "IntegerMatrix":
        return IntegerMatrix(rows, cols, (0,) * (rows * cols))

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows,
                             tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        n, m, k = self.rows, other.cols, self.cols
        a, b = self.entries, other.entries
        out = [0] * (n * m)
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            base = i * m
            for t in range(k):
                av = arow[t]
                if av:
                    brow = b[t * m:(t + 1) * m]
                    for j in range(m):
                        out[base + j] += av * brow[j]
        return IntegerMatrix(n, m, tuple(out))

    def apply(self, vec) -> tuple[int, ...]:
        """Matrix times column vector."""
        vec = tuple(vec)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(self.entry(i, j) * vec[j] for j in range(self.cols)) for i in range(self.rows))

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntegerMatrix(self.rows, self.cols,
                             tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return self + (-other)

    def __neg__(self) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def scale(self, k: int) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, tuple(k * x for x in self.entries))

    def hstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        ent = []
        for i in range(self.rows):
            ent.extend(self.row(i))
            ent.extend(other.row(i))
        return IntegerMatrix(self.rows, self.cols + other.cols, tuple(ent))

    def vstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return IntegerMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def take_rows(self, start: int, stop: int) -> "IntegerMatrix":
        return IntegerMatrix(stop - start, self.cols, self.entries[start * self.cols:stop * self.cols])

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def max_abs(self) -> int:
        return max((abs(x) for x in self.entries), default=0)

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(self.row(i)) for i in range(n)]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __str__(self):
        return "[" + "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows)) + "]"


def block_diag(*mats: IntegerMatrix) -> IntegerMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r = c = 0
    for m in mats:
        for i in range(m.rows):
            row = m.row(i)
            for j in range(m.cols):
                out[r + i][c + j] = row[j]
        r += m.rows
        c += m.cols
    return IntegerMatrix.from_rows(out) if rows else IntegerMatrix.zero(0, cols)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfDecomposition:
    """U @ matrix @ V == diag(d) with U, V unimodular; d[i] | d[i+1] while
    nonzero, nonzero invariants first, all nonnegative."""

    d: tuple[int, ...]
    U: IntegerMatrix
    V: IntegerMatrix

    def diagonal_matrix(self, rows: int, cols: int) -> IntegerMatrix:
        out = [[0] * cols for _ in range(rows)]
        for i, di in enumerate(self.d):
            out[i][i] = di
        return IntegerMatrix.from_rows(out) if rows else IntegerMatrix.zero(0, cols)

    @property
    def rank(self) -> int:
        return sum(1 for x in self.d if x)


@lru_cache(maxsize=None)
def smith_normal_form(m: IntegerMatrix) -> SnfDecomposition:
    """Diagonalize over Z, tracking the unimodular row/column transforms.

    Pivoting picks the smallest nonzero magnitude in the remaining block and
    gcd-reduces its row and column; a divisibility fix-up folds any
    non-divisible remainder back into the pivot position, so the pivot
    magnitude strictly decreases and the invariant-factor chain comes out of
    the loop already ordered.
    """
    nr, nc = m.rows, m.cols
    a = [list(m.row(i)) for i in range(nr)]
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(nr):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(nc):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def addmul_row(dst, src, k):  # row_dst += k * row_src
        arow, asrc = a[dst], a[src]
        for j in range(nc):
            arow[j] += k * asrc[j]
        urow, usrc = u[dst], u[src]
        for j in range(nr):
            urow[j] += k * usrc[j]

    def addmul_col(dst, src, k):  # col_dst += k * col_src
        for r in range(nr):
            a[r][dst] += k * a[r][src]
        for r in range(nc):
            v[r][dst] += k * v[r][src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    lim = min(nr, nc)
    while t < lim:
        # smallest-magnitude nonzero pivot in the trailing block
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])
        if a[t][t] < 0:
            negate_row(t)

        while True:
            # clear column t; a nonzero remainder becomes the (smaller) pivot
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        addmul_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        addmul_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # divisibility chain: fold a bad entry into row t and restart
            piv = a[t][t]
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            addmul_row(t, bad, 1)

        t += 1

    d = tuple(a[i][i] for i in range(lim))
    return SnfDecomposition(d, IntegerMatrix.from_rows(u) if nr else IntegerMatrix.zero(0, 0),
                            IntegerMatrix.from_rows(v) if nc else IntegerMatrix.zero(0, 0))


def integer_kernel(m: IntegerMatrix) -> IntegerMatrix:
    """Columns form a basis of {x : m @ x = 0}."""
    snf = smith_normal_form(m)
    lim = min(m.rows, m.cols)
    free = [j for j in range(lim) if snf.d[j] == 0] + list(range(lim, m.cols))
    return IntegerMatrix.from_cols([snf.V.col(j) for j in free], rows=m.cols)


def solve(m: IntegerMatrix, b) -> tuple[int, ...] | None:
    """One integer solution of m @ x = b, or None."""
    b = tuple(b)
    if len(b) != m.rows:
        raise ValueError("rhs length mismatch")
    snf = smith_normal_form(m)
    ub = snf.U.apply(b)
    lim = min(m.rows, m.cols)
    y = [0] * m.cols
    for i in range(m.rows):
        if i < lim and snf.d[i]:
            if ub[i] % snf.d[i]:
                return None
            y[i] = ub[i] // snf.d[i]
        elif ub[i]:
            return None
    return snf.V.apply(y)


def solve_matrix(m: IntegerMatrix, b: IntegerMatrix) -> IntegerMatrix | None:
    """X with m @ X = b, or None.  Shares one SNF across all columns."""
    if b.rows != m.rows:
        raise ValueError("rhs rows mismatch")
    snf = smith_normal_form(m)
    lim = min(m.rows, m.cols)
    xcols = []
    for j in range(b.cols):
        ub = snf.U.apply(b.col(j))
        y = [0] * m.cols
        ok = True
        for i in range(m.rows):
            if i < lim and snf.d[i]:
                if ub[i] % snf.d[i]:
                    ok = False
                    break
                y[i] = ub[i] // snf.d[i]
            elif ub[i]:
                ok = False
                break
        if not ok:
            return None
        xcols.append(snf.V.apply(y))
    return IntegerMatrix.from_cols(xcols, rows=m.cols)


def column_basis(m: IntegerMatrix) -> IntegerMatrix:
    """Basis (as columns) of the column lattice of m, by gcd column echelon."""
    cols = [list(c) for c in m.columns() if any(c)]
    basis = []
    for r in range(m.rows):
        live = [c for c in cols if c[r]]
        if not live:
            continue
        # gcd-combine until a single column carries the pivot at row r
        while len(live) > 1:
            live.sort(key=lambda c: abs(c[r]))
            p = live[0]
            for c in live[1:]:
                q = c[r] // p[r]
                for i in range(m.rows):
                    c[i] -= q * p[i]
            live = [c for c in live if c[r]]
        p = live[0]
        basis.append(p)
        # every other column was reduced to zero at this row
        cols = [c for c in cols if c is not p and any(c)]
        assert all(c[r] == 0 for c in cols)
    return IntegerMatrix.from_cols(basis, rows=m.rows)


def lattice_contains(gens: IntegerMatrix, vectors: IntegerMatrix) -> bool:
    """Is every column of `vectors` in the column lattice of `gens`?"""
    return solve_matrix(gens, vectors) is not None


def lattice_eq(a: IntegerMatrix, b: IntegerMatrix) -> bool:
    return lattice_contains(a, b) and lattice_contains(b, a)


# ---------------------------------------------------------------------------
# abelian groups in invariant-factor normal form


def _factor(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _invariant_factors(orders) -> tuple[int, ...]:
    """Normalize a list of cyclic orders into an invariant-factor chain.

    Per prime, sort exponents descending; the k-th invariant factor (from the
    largest) multiplies the k-th largest exponent of every prime.  Avoids SNF
    on purpose so the closed-form route stays independent of it.
    """
    per_prime: dict[int, list[int]] = {}
    for n in orders:
        n = abs(n)
        if n in (0, 1):
            continue
        for p, e in _factor(n).items():
            per_prime.setdefault(p, []).append(e)
    if not per_prime:
        return ()
    for exps in per_prime.values():
        exps.sort(reverse=True)
    depth = max(len(e) for e in per_prime.values())
    factors = []
    for k in range(depth):
        t = 1
        for p, exps in per_prime.items():
            if k < len(exps):
                t *= p ** exps[k]
        factors.append(t)
    factors.reverse()  # chain t_1 | t_2 | ... | t_depth
    return tuple(factors)


@dataclass(frozen=True)
class FpAbelianGroup:
    """Z^rank + Z/t_1 + ... + Z/t_k with t_1 | t_2 | ..., each t_i >= 2."""

    rank: int
    torsion: tuple[int, ...]

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        for prev, cur in zip((1,) + self.torsion, self.torsion):
            if cur < 2:
                raise ValueError("invariant factors must be >= 2")
            if cur % prev:
                raise ValueError("invariant factors must form a divisibility chain")

    @staticmethod
    def free(rank: int) -> "FpAbelianGroup":
        return FpAbelianGroup(rank, ())

    @staticmethod
    def zero() -> "FpAbelianGroup":
        return FpAbelianGroup(0, ())

    @staticmethod
    def cyclic(n: int) -> "FpAbelianGroup":
        n = abs(n)
        if n == 0:
            return FpAbelianGroup(1, ())
        if n == 1:
            return FpAbelianGroup(0, ())
        return FpAbelianGroup(0, (n,))

    @staticmethod
    def from_orders(rank: int, orders) -> "FpAbelianGroup":
        return FpAbelianGroup(rank, _invariant_factors(orders))

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def torsion_order(self) -> int:
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def order(self) -> int | None:
        return None if self.rank else self.torsion_order

    def direct_sum(self, other: "FpAbelianGroup") -> "FpAbelianGroup":
        return FpAbelianGroup.from_orders(self.rank + other.rank, self.torsion + other.torsion)

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def group_from_presentation(relations: IntegerMatrix) -> FpAbelianGroup:
    """Quotient of Z^g (g = relations.cols) by the row span of `relations`."""
    snf = smith_normal_form(relations)
    invs = [x for x in snf.d if x > 1]
    rank = relations.cols - snf.rank
    return FpAbelianGroup.from_orders(rank, invs)


def hom_group(a: FpAbelianGroup, b: FpAbelianGroup) -> FpAbelianGroup:
    """Hom(Z,Z)=Z, Hom(Z/t,Z)=0, Hom(Z,Z/s)=Z/s, Hom(Z/t,Z/s)=Z/gcd(t,s)."""
    orders = [s for s in b.torsion for _ in range(a.rank)]
    orders += [gcd(t, s) for t in a.torsion for s in b.torsion]
    return FpAbelianGroup.from_orders(a.rank * b.rank, orders)


def ext_group(a: FpAbelianGroup, b: FpAbelianGroup) -> FpAbelianGroup:
    """Ext(Z,-)=0, Ext(Z/t,Z)=Z/t, Ext(Z/t,Z/s)=Z/gcd(t,s)."""
    orders = [t for t in a.torsion for _ in range(b.rank)]
    orders += [gcd(t, s) for t in a.torsion for s in b.torsion]
    return FpAbelianGroup.from_orders(0, orders)


def tensor_group(a: FpAbelianGroup, b: FpAbelianGroup) -> FpAbelianGroup:
    """Bilinear with Z/t (x) Z/s = Z/gcd(t,s)."""
    orders = [t for t in a.torsion for _ in range(b.rank)]
    orders += [s for s in b.torsion for _ in range(a.rank)]
    orders += [gcd(t, s) for t in a.torsion for s in b.torsion]
    return FpAbelianGroup.from_orders(a.rank * b.rank, orders)


# ---------------------------------------------------------------------------
# presentations, maps, subquotients


@dataclass(frozen=True)
class Presentation:
    """Z^generators modulo the row span of `relations`."""

    generators: int
    relations: IntegerMatrix

    def __post_init__(self):
        if self.relations.cols != self.generators:
            raise ValueError("relation width must equal generator count")

    @staticmethod
    def free(n: int) -> "Presentation":
        return Presentation(n, IntegerMatrix.zero(0, n))

    @staticmethod
    def of_group(g: FpAbelianGroup) -> "Presentation":
        """Canonical presentation: free generators first, then torsion."""
        n = g.rank + len(g.torsion)
        rows = []
        for i, t in enumerate(g.torsion):
            row = [0] * n
            row[g.rank + i] = t
            rows.append(row)
        return Presentation(n, IntegerMatrix.from_rows(rows) if rows else IntegerMatrix.zero(0, n))

    def relation_columns(self) -> IntegerMatrix:
        return self.relations.transpose()

    def group(self) -> FpAbelianGroup:
        return group_from_presentation(self.relations)

    def direct_sum(self, other: "Presentation") -> "Presentation":
        rel = block_diag(self.relations, other.relations)
        return Presentation(self.generators + other.generators, rel)

    def contains_in_relations(self, vectors: IntegerMatrix) -> bool:
        return lattice_contains(self.relation_columns(), vectors)


def _relations_from_columns(cols: IntegerMatrix, width: int) -> IntegerMatrix:
    return cols.transpose() if cols.cols else IntegerMatrix.zero(0, width)


def preimage_lattice(matrix: IntegerMatrix, target_rel_cols: IntegerMatrix) -> IntegerMatrix:
    """Basis of {v : matrix @ v lies in the column lattice of target_rel_cols}."""
    stacked = matrix.hstack(target_rel_cols)
    ker = integer_kernel(stacked)
    head = ker.take_rows(0, matrix.cols)
    return column_basis(head)


def subgroup_presentation(ambient: Presentation, lattice_gens: IntegerMatrix):
    """Present (lattice + relations)/relations as a group with chosen basis.

    Returns (presentation, basis) where basis columns express the subgroup's
    generators in ambient coordinates.
    """
    combined = lattice_gens.hstack(ambient.relation_columns())
    basis = column_basis(combined)
    coords = solve_matrix(basis, ambient.relation_columns())
    if coords is None:  # relations always lie inside the combined lattice
        raise AssertionError("ambient relations escaped their own lattice")
    pres = Presentation(basis.cols, _relations_from_columns(coords, basis.cols))
    return pres, basis


@dataclass(frozen=True)
class GroupMap:
    """Homomorphism between presented groups, given on generators.

    Construction verifies well-definedness: the matrix must carry every
    source relation into the target relation lattice.
    """

    source: Presentation
    target: Presentation
    matrix: IntegerMatrix

    def __post_init__(self):
        if self.matrix.cols != self.source.generators or self.matrix.rows != self.target.generators:
            raise IllFormedMap(
                f"matrix shape {self.matrix.rows}x{self.matrix.cols} does not match "
                f"{self.target.generators}x{self.source.generators}")
        carried = self.matrix @ self.source.relation_columns()
        if not self.target.contains_in_relations(carried):
            raise IllFormedMap("matrix does not carry source relations into target relations")

    @staticmethod
    def identity(p: Presentation) -> "GroupMap":
        return GroupMap(p, p, IntegerMatrix.identity(p.generators))

    @staticmethod
    def zero(source: Presentation, target: Presentation) -> "GroupMap":
        return GroupMap(source, target, IntegerMatrix.zero(target.generators, source.generators))

    def compose(self, inner: "GroupMap") -> "GroupMap":
        """self after inner."""
        if inner.target != self.source:
            raise IllFormedMap("composition mismatch")
        return GroupMap(inner.source, self.target, self.matrix @ inner.matrix)

    def kernel_lattice(self) -> IntegerMatrix:
        return preimage_lattice(self.matrix, self.target.relation_columns())

    def image_lattice(self) -> IntegerMatrix:
        return self.matrix.hstack(self.target.relation_columns())

    def kernel_data(self):
        """(presentation, basis into source generators) of the kernel."""
        return subgroup_presentation(self.source, self.kernel_lattice())

    def cokernel_presentation(self) -> Presentation:
        rel = self.target.relations.vstack(self.matrix.transpose())
        return Presentation(self.target.generators, rel)

    def is_injective(self) -> bool:
        pres, _ = self.kernel_data()
        return pres.group().is_zero

    def is_surjective(self) -> bool:
        return self.cokernel_presentation().group().is_zero

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()


def kernel_image_cokernel(f: GroupMap):
    """Normal forms of ker f, im f, coker f."""
    ker_pres, _ = f.kernel_data()
    image_rel = _relations_from_columns(f.kernel_lattice(), f.source.generators)
    image = group_from_presentation(image_rel)
    return ker_pres.group(), image, f.cokernel_presentation().group()


def is_exact_pair(f: GroupMap, g: GroupMap):
    """For composable f, g: does im(f) = ker(g) (and g∘f = 0)?

    Returns (ok, reason) with a witness string on failure.
    """
    if f.target != g.source:
        raise IllFormedMap("maps are not composable")
    composite = g.matrix @ f.matrix
    if not g.target.contains_in_relations(composite):
        return False, "composite is nonzero"
    im = f.image_lattice()
    ker = g.kernel_lattice()
    if not lattice_contains(ker, im):
        return False, "image not contained in kernel"
    if not lattice_contains(im, ker):
        return False, "kernel not contained in image"
    return True, ""


def pullback_group(f: GroupMap, g: GroupMap):
    """Fiber product {(a, b) : f(a) = g(b)} with its two projections."""
    if f.target != g.target:
        raise IllFormedMap("pullback legs must share a target")
    ambient = f.source.direct_sum(g.source)
    diff = f.matrix.hstack(-g.matrix)  # (a, b) |-> f(a) - g(b)
    lat = preimage_lattice(diff, f.target.relation_columns())
    pres, basis = subgroup_presentation(ambient, lat)
    p1 = GroupMap(pres, f.source, basis.take_rows(0, f.source.generators))
    p2 = GroupMap(pres, g.source, basis.take_rows(f.source.generators, ambient.generators))
    return pres.group(), p1, p2


# ---------------------------------------------------------------------------
# towers of groups


class Lim1Status(Enum):
    ZERO = "zero"


@dataclass(frozen=True)
class ImagesStabilizeBy:
    """Every image chain im(A_{i+k} -> A_i) is constant from `index` on."""

    index: int
    horizon: int
    stabilized: ClassVar[bool] = True


@dataclass(frozen=True)
class NotStabilizedWithin:
    """Some image chain was still strictly dropping at the horizon."""

    horizon: int
    index: ClassVar[None] = None
    stabilized: ClassVar[bool] = False


@dataclass(frozen=True)
class GroupTower:
    """A_0 <- A_1 <- ... <- A_m with a verified stabilization index.

    maps[i] : A_{i+1} -> A_i.  Construction checks that every map at or above
    the declared index is an isomorphism and rejects fakes.
    """

    bottom: Presentation
    maps: tuple[GroupMap, ...]
    stabilization_index: int

    def __post_init__(self):
        if self.maps and self.maps[0].target != self.bottom:
            raise IllFormedMap("first map must land in the bottom group")
        for i in range(len(self.maps) - 1):
            if self.maps[i].source != self.maps[i + 1].target:
                raise IllFormedMap(f"tower maps disagree between levels {i + 1} and {i + 2}")
        if not 0 <= self.stabilization_index <= len(self.maps):
            raise ValueError("stabilization index out of range")
        for i in range(self.stabilization_index, len(self.maps)):
            if not self.maps[i].is_iso():
                raise StabilizationViolated(i)

    @property
    def length(self) -> int:
        return len(self.maps)

    def presentation_at(self, i: int) -> Presentation:
        if i == 0:
            return self.bottom
        return self.maps[i - 1].source

    def groups(self) -> tuple[FpAbelianGroup, ...]:
        return tuple(self.presentation_at(i).group() for i in range(self.length + 1))


def tower_lim_lim1(t: GroupTower):
    """(lim, lim^1 status).  Stabilization makes the tower Mittag-Leffler,
    so lim is the stable value and lim^1 vanishes."""
    stable = t.presentation_at(t.stabilization_index).group()
    return stable, Lim1Status.ZERO


def mittag_leffler_diagnostic(maps, horizon: int) -> ImagesStabilizeBy | NotStabilizedWithin:
    """Inspect image chains im(A_{i+k} -> A_i) for k <= horizon.

    Reports the least k by which every image chain has become constant, or
    NotStabilizedWithin(horizon) when some chain is still strictly dropping
    at the horizon.  The prefix must be long enough to see `horizon` steps.
    """
    maps = tuple(maps)
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if len(maps) < horizon:
        raise ValueError("tower prefix shorter than the horizon")
    worst = 0
    for base in range(len(maps) - horizon + 1):
        target = maps[base].target
        chains = [IntegerMatrix.identity(target.generators).hstack(target.relation_columns())]
        composite = None
        for k in range(horizon):
            m = maps[base + k]
            composite = m.matrix if composite is None else composite @ m.matrix
            chains.append(composite.hstack(target.relation_columns()))
        # find least r with chain constant from r through horizon
        r = horizon
        while r > 0 and lattice_eq(chains[r - 1], chains[horizon]):
            r -= 1
        if r == horizon:  # still dropping at the last step
            return NotStabilizedWithin(horizon)
        worst = max(worst, r)
    return ImagesStabilizeBy(worst, horizon)
