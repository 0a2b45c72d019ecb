"""Homology localized at sets of primes, and the fracture square that glues
the localized pieces back together.

A finitely generated group is determined by its rank and invariant factors,
and inverting the primes outside J simply filters each invariant factor down
to its J-part (rationalizing erases torsion altogether).  That makes every
check in this module an exact computation: the short exact sequence

    0 -> A -> A_J + A_K -> A_Q -> 0

is built out of literal integer matrices and certified by kernel/image
comparisons, and the reassembly of A as the pullback of its localizations is
checked by actually computing the pullback group.

A word of warning before exporting this pattern elsewhere: the square glues
because the two localizations overlap in a common rationalization that is
nontrivial and receives an honest map from each leg.  Localization pairs
whose composite is trivial admit no such square.  The standard instance is
chromatic: the K(n)-localization of an E(n-1)-local spectrum vanishes, so in
the would-be fibered product over L_{n-1}L_{K(n)} every fibrant-cofibrant
section has a trivial comparison leg and nothing can be reassembled.  The
checks here are therefore deliberately scoped to complementary sets of
primes over Q, where the overlap never degenerates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .certificates import Certificate, bundle, failed, passed
from .complexes import (
    ChainComplex,
    ChainMap,
    direct_sum_map,
    homology,
    homology_group,
    induced_map,
    moore_complex,
    sphere_complex,
    zero_complex,
)
from .errors import PartitionTooSmall
from .exactalg import (
    FpAbelianGroup,
    GroupMap,
    IntegerMatrix,
    Presentation,
    is_exact_pair,
    kernel_image_cokernel,
    pullback_group,
)
from .sections import CospanSection, surjective_in_positive_degrees

# ---------------------------------------------------------------------------
# primes and partitions


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> dict[int, int]:
    """p -> multiplicity for n >= 1."""
    n = abs(n)
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def torsion_scope(groups) -> frozenset[int]:
    """All primes dividing any invariant factor of the given groups."""
    scope = set()
    for g in groups:
        for t in g.torsion:
            scope.update(prime_factors(t))
    return frozenset(scope)


@dataclass(frozen=True)
class PrimePartition:
    """Two disjoint finite sets of primes meant to cover a torsion scope."""

    j: frozenset[int]
    k: frozenset[int]

    def __init__(self, j, k):
        object.__setattr__(self, "j", frozenset(j))
        object.__setattr__(self, "k", frozenset(k))
        for p in self.j | self.k:
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
        if self.j & self.k:
            raise ValueError(f"sides overlap in {sorted(self.j & self.k)}")

    def require_covers(self, scope) -> None:
        missing = frozenset(scope) - self.j - self.k
        if missing:
            raise PartitionTooSmall(missing)


# ---------------------------------------------------------------------------
# localized groups


def _part_supported_on(t: int, primes: frozenset[int]) -> int:
    """The largest divisor of t using only the given primes."""
    out = 1
    for p, e in prime_factors(t).items():
        if p in primes:
            out *= p ** e
    return out


@dataclass(frozen=True)
class LocalizedGroup:
    """A finitely generated group over Z_J (primes outside J inverted) or,
    when `primes` is None, over Q.  Stored in invariant-factor normal form;
    rationalizing keeps only the rank."""

    primes: frozenset[int] | None
    rank: int
    torsion: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        if self.primes is None and self.torsion:
            raise ValueError("a rational group has no torsion")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if a < 2 or b % a:
                raise ValueError("torsion must be normalized invariant factors")
        if self.torsion and self.torsion[0] < 2:
            raise ValueError("torsion must be normalized invariant factors")
        if self.primes is not None:
            for t in self.torsion:
                stray = set(prime_factors(t)) - self.primes
                if stray:
                    raise ValueError(f"torsion primes {sorted(stray)} outside {sorted(self.primes)}")

    @property
    def ring(self) -> str:
        if self.primes is None:
            return "Q"
        return "Z_(" + ",".join(str(p) for p in sorted(self.primes)) + ")"

    def group_shadow(self) -> FpAbelianGroup:
        """The underlying f.g. abelian group, forgetting the ring tag."""
        return FpAbelianGroup(self.rank, self.torsion)

    def __str__(self):
        return f"{self.group_shadow()} over {self.ring}"


def localize_group(g: FpAbelianGroup, primes: frozenset[int] | None) -> LocalizedGroup:
    """g tensored with Z_J (primes = J) or with Q (primes = None)."""
    if primes is None:
        return LocalizedGroup(None, g.rank, ())
    primes = frozenset(primes)
    parts = tuple(u for t in g.torsion if (u := _part_supported_on(t, primes)) > 1)
    return LocalizedGroup(primes, g.rank, parts)


def localize_homology(x: ChainComplex, primes: frozenset[int] | None) -> dict[int, LocalizedGroup]:
    """Localized homology in every degree of the span."""
    return {i: localize_group(homology_group(x, i), primes) for i in x.span()}


# ---------------------------------------------------------------------------
# the algebraic fracture square


def _canonical_presentation(rank: int, torsion: tuple[int, ...]) -> Presentation:
    """Free generators first, then one generator of each invariant-factor
    order."""
    if not torsion:
        return Presentation.free(rank)
    gens = rank + len(torsion)
    rows = [[0] * rank + [t if i == j else 0 for j in range(len(torsion))]
            for i, t in enumerate(torsion)]
    return Presentation(gens, IntegerMatrix.from_rows(rows))


def _local_parts(torsion, primes):
    """(order, original index) pairs of the surviving localized factors."""
    return [(u, i) for i, t in enumerate(torsion)
            if (u := _part_supported_on(t, primes)) > 1]


def algebraic_fracture_check(a: FpAbelianGroup, p: PrimePartition) -> Certificate:
    """Exactness of 0 -> A -> A_J + A_K -> A_Q -> 0 plus reassembly of A as
    the pullback of its localizations over the rationalization."""
    p.require_covers(torsion_scope([a]))
    aj = localize_group(a, p.j)
    ak = localize_group(a, p.k)

    rank_cert = (passed if aj.rank == ak.rank == a.rank else failed)(
        "rank_bookkeeping", rank=a.rank)

    merged = FpAbelianGroup.from_orders(0, aj.torsion + ak.torsion)
    torsion_cert = (passed if merged == FpAbelianGroup(0, a.torsion) else failed)(
        "torsion_partition", j_part=str(FpAbelianGroup(0, aj.torsion)),
        k_part=str(FpAbelianGroup(0, ak.torsion)))

    # the sequence itself, as honest maps between presentations
    r, tors = a.rank, a.torsion
    pres_a = _canonical_presentation(r, tors)
    j_parts = _local_parts(tors, p.j)
    k_parts = _local_parts(tors, p.k)
    pres_j = _canonical_presentation(r, tuple(u for u, _ in j_parts))
    pres_k = _canonical_presentation(r, tuple(u for u, _ in k_parts))
    pres_q = Presentation.free(r)
    middle = pres_j.direct_sum(pres_k)

    off = pres_j.generators
    j_index = {orig: r + pos for pos, (_, orig) in enumerate(j_parts)}
    k_index = {orig: r + pos for pos, (_, orig) in enumerate(k_parts)}

    def basis_vec(positions):
        return [1 if c in positions else 0 for c in range(middle.generators)]

    left_cols = [basis_vec({f, off + f}) for f in range(r)]
    for i in range(len(tors)):
        hits = set()
        if i in j_index:
            hits.add(j_index[i])
        if i in k_index:
            hits.add(off + k_index[i])
        left_cols.append(basis_vec(hits))
    left = GroupMap(pres_a, middle,
                    IntegerMatrix.from_cols(left_cols, rows=middle.generators))

    right_cols = [[1 if q == f else 0 for q in range(r)] for f in range(r)]
    right_cols += [[0] * r for _ in j_parts]
    right_cols += [[-1 if q == f else 0 for q in range(r)] for f in range(r)]
    right_cols += [[0] * r for _ in k_parts]
    right = GroupMap(middle, pres_q, IntegerMatrix.from_cols(right_cols, rows=r))

    exact_mid, reason = is_exact_pair(left, right)
    ses_cert = bundle("localization_sequence", [
        passed("left_injective") if left.is_injective() else failed("left_injective"),
        passed("middle_exact") if exact_mid else failed("middle_exact", reason=reason),
        passed("right_surjective") if right.is_surjective() else failed("right_surjective"),
    ])

    def rationalize(pres: Presentation) -> GroupMap:
        cols = [[1 if q == f else 0 for q in range(r)] for f in range(r)]
        cols += [[0] * r for _ in range(pres.generators - r)]
        return GroupMap(pres, pres_q, IntegerMatrix.from_cols(cols, rows=r))

    reassembled, _, _ = pullback_group(rationalize(pres_j), rationalize(pres_k))
    pullback_cert = (passed if reassembled == a else failed)(
        "reassembly", value=str(reassembled), expected=str(a))

    return bundle("algebraic_fracture", [rank_cert, torsion_cert, ses_cert, pullback_cert],
                  primes_j=sorted(p.j), primes_k=sorted(p.k))


def arithmetic_square_check(x: ChainComplex, p: PrimePartition) -> Certificate:
    """Degreewise fracture of H_*(X) plus the observation that per-degree
    short exactness splices to a long exact sequence with zero connecting
    maps."""
    profile = homology(x)
    p.require_covers(torsion_scope(g for _, g in profile.entries))
    per_degree = [bundle("degree_fracture", [algebraic_fracture_check(g, p)], degree=d)
                  for d, g in profile.entries]
    broken = [c.witness["degree"] for c in per_degree if not c.passed]
    splice = (passed("zero_connecting_maps")
              if not broken else
              failed("zero_connecting_maps", degree=broken[0]))
    return bundle("arithmetic_square", per_degree + [splice],
                  primes_j=sorted(p.j), primes_k=sorted(p.k))


# ---------------------------------------------------------------------------
# cospan models


def _ring_tag(primes: frozenset[int]) -> str:
    if not primes:
        return "rational"
    return "local:" + ",".join(str(p) for p in sorted(primes))


def _parse_ring_tag(tag: str) -> frozenset[int] | None:
    """Primes allowed in torsion under this tag; None when malformed."""
    if tag == "rational":
        return frozenset()
    if tag.startswith("local:"):
        body = tag[len("local:"):]
        try:
            primes = frozenset(int(s) for s in body.split(","))
        except ValueError:
            return None
        if primes and all(_is_prime(q) for q in primes):
            return primes
    return None


def fracture_cospan(x: ChainComplex, p: PrimePartition) -> CospanSection:
    """The section (X_J-model -> X_Q-model <- X_K-model) built degreewise
    from localized homology: sphere summands carry the rank into the
    rationalization, multiplication blocks carry the local torsion and die
    there."""
    profile = homology(x)
    p.require_covers(torsion_scope(g for _, g in profile.entries))

    def leg(primes):
        acc = ChainMap.identity(zero_complex())
        for d, g in profile.entries:
            loc = localize_group(g, primes)
            if loc.rank:
                sph = sphere_complex(d, loc.rank)
                acc = direct_sum_map(acc, ChainMap.identity(sph))
            for t in loc.torsion:
                blk = moore_complex(t, d)
                acc = direct_sum_map(acc, ChainMap.zero_map(blk, zero_complex()))
        return acc

    left, right = leg(p.j), leg(p.k)
    return CospanSection(left.source, left.target, right.source, left, right,
                         tags=(_ring_tag(p.j), "rational", _ring_tag(p.k)))


def cospan_model_check(s: CospanSection) -> Certificate:
    """Fibrancy (legs surject in positive degrees) and fractured cofibrancy
    (each vertex carries only the torsion its ring tag allows, and both legs
    rationalize to isomorphisms on homology)."""
    allowed = tuple(_parse_ring_tag(t) for t in s.tags)
    if any(a is None for a in allowed) or allowed[1] != frozenset():
        return bundle("fracture_cospan_model", [
            failed("ring_tags", tags=list(s.tags),
                   reason="expected (local-or-rational, rational, local-or-rational)")])

    checks = [
        surjective_in_positive_degrees(s.left, "left leg"),
        surjective_in_positive_degrees(s.right, "right leg"),
    ]

    for name, cx, primes in (("x1", s.x1, allowed[0]),
                             ("x0", s.x0, allowed[1]),
                             ("x2", s.x2, allowed[2])):
        bad = None
        for d in cx.span():
            g = homology_group(cx, d)
            if torsion_scope([g]) - primes:
                bad = (d, g)
                break
        checks.append(passed("local_model", vertex=name) if bad is None else
                      failed("local_model", vertex=name, degree=bad[0], value=str(bad[1])))

    for name, leg in (("left", s.left), ("right", s.right)):
        witness = None
        for d in sorted(set(leg.source.span()) | set(leg.target.span())):
            ker, _, coker = kernel_image_cokernel(induced_map(leg, d))
            if ker.rank or coker.rank:
                witness = (d, str(ker), str(coker))
                break
        checks.append(passed("rational_equivalence", leg=name) if witness is None else
                      failed("rational_equivalence", leg=name, degree=witness[0],
                             kernel=witness[1], cokernel=witness[2]))

    return bundle("fracture_cospan_model", checks)
