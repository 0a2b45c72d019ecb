"""Sections of truncation towers and cospans of complexes.

A tower section is a finite prefix X_0, ..., X_m with structure maps
X_{i+1} -> X_i, where level i is declared to carry the i-truncated structure;
a cospan section is a diagram X_1 -> X_0 <- X_2 with a localization tag on
each vertex.  Morphisms are componentwise chain maps whose squares commute,
verified at construction.

The predicates below decide the model-structure classes that make sense
levelwise: weak equivalences and cofibrations are componentwise, fibrations
of towers are checked against the fiber-product condition level by level,
and fibrancy of a tower is computed through two independent characterizations
that must agree.
"""
from __future__ import annotations

from dataclasses import dataclass

from .certificates import Certificate, bundle, failed, passed
from .complexes import (
    ChainComplex,
    ChainMap,
    chain_maps_agree,
    cofibrant_replacement,
    degreewise_kernel,
    degreewise_pullback,
    is_quasi_iso,
    pullback_induced_map,
    zero_complex,
)
from .errors import CharacterizationMismatch, IllFormedMap, StabilizationViolated
from .exactalg import GroupMap, IntegerMatrix, Presentation, column_basis, solve_matrix
from .trunc import is_n_type, is_Pn_weq, postnikov_section

# ---------------------------------------------------------------------------
# section types


@dataclass(frozen=True)
class TowerSection:
    """Levels X_0 ... X_m with structure maps X_{i+1} -> X_i; all levels at or
    above the declared stabilization index must literally coincide, with
    identity structure maps between them."""

    complexes: tuple[ChainComplex, ...]
    structure_maps: tuple[ChainMap, ...]
    stabilization: int
    level_spec: str = "postnikov"

    def __post_init__(self):
        object.__setattr__(self, "complexes", tuple(self.complexes))
        object.__setattr__(self, "structure_maps", tuple(self.structure_maps))
        if len(self.complexes) != len(self.structure_maps) + 1:
            raise IllFormedMap("a tower of m+1 levels needs exactly m structure maps")
        for i, m in enumerate(self.structure_maps):
            if m.source != self.complexes[i + 1] or m.target != self.complexes[i]:
                raise IllFormedMap(f"structure map {i} does not go from level {i + 1} to level {i}")
        if not 0 <= self.stabilization <= self.length:
            raise IllFormedMap("stabilization index out of range")
        for i in range(self.stabilization, self.length):
            if (self.complexes[i + 1] != self.complexes[i]
                    or self.structure_maps[i] != ChainMap.identity(self.complexes[i])):
                raise StabilizationViolated(i, f"levels {i + 1} and {i} differ above the "
                                               "declared stabilization index")

    @property
    def length(self) -> int:
        return len(self.structure_maps)

    def level(self, i: int) -> ChainComplex:
        return self.complexes[i]


@dataclass(frozen=True)
class CospanSection:
    """x1 --left--> x0 <--right-- x2 with a localization tag per vertex,
    listed in the order (x1, x0, x2)."""

    x1: ChainComplex
    x0: ChainComplex
    x2: ChainComplex
    left: ChainMap
    right: ChainMap
    tags: tuple[str, str, str] = ("plain", "plain", "plain")

    def __post_init__(self):
        object.__setattr__(self, "tags", tuple(self.tags))
        if self.left.source != self.x1 or self.left.target != self.x0:
            raise IllFormedMap("left leg must map x1 to x0")
        if self.right.source != self.x2 or self.right.target != self.x0:
            raise IllFormedMap("right leg must map x2 to x0")
        if len(self.tags) != 3:
            raise IllFormedMap("one localization tag per vertex required")


@dataclass(frozen=True)
class SectionMorphism:
    """Componentwise chain maps between two tower sections or two cospan
    sections; every naturality square is verified at construction."""

    source: TowerSection | CospanSection
    target: TowerSection | CospanSection
    components: tuple[ChainMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if isinstance(self.source, TowerSection):
            if not isinstance(self.target, TowerSection):
                raise IllFormedMap("cannot map a tower section to a cospan section")
            if self.source.length != self.target.length:
                raise IllFormedMap("tower lengths differ")
            if len(self.components) != self.source.length + 1:
                raise IllFormedMap("one component per level required")
            for i, c in enumerate(self.components):
                if c.source != self.source.level(i) or c.target != self.target.level(i):
                    raise IllFormedMap(f"component {i} does not match the levels")
            for i in range(self.source.length):
                walk = self.components[i].compose(self.source.structure_maps[i])
                push = self.target.structure_maps[i].compose(self.components[i + 1])
                if not chain_maps_agree(walk, push):
                    raise IllFormedMap(f"square over structure map {i} does not commute")
        else:
            if not isinstance(self.target, CospanSection):
                raise IllFormedMap("cannot map a cospan section to a tower section")
            if len(self.components) != 3:
                raise IllFormedMap("a cospan morphism has exactly three components")
            m1, m0, m2 = self.components
            pairs = ((m1, self.source.x1, self.target.x1),
                     (m0, self.source.x0, self.target.x0),
                     (m2, self.source.x2, self.target.x2))
            for idx, (c, s, t) in enumerate(pairs):
                if c.source != s or c.target != t:
                    raise IllFormedMap(f"component {idx} does not match the vertices")
            if not chain_maps_agree(m0.compose(self.source.left), self.target.left.compose(m1)):
                raise IllFormedMap("left square does not commute")
            if not chain_maps_agree(m0.compose(self.source.right), self.target.right.compose(m2)):
                raise IllFormedMap("right square does not commute")


def identity_morphism(section) -> SectionMorphism:
    if isinstance(section, TowerSection):
        comps = tuple(ChainMap.identity(c) for c in section.complexes)
    else:
        comps = (ChainMap.identity(section.x1), ChainMap.identity(section.x0),
                 ChainMap.identity(section.x2))
    return SectionMorphism(section, section, comps)


def constant_tower(x: ChainComplex, m: int) -> TowerSection:
    """x at every level with identity structure maps."""
    return TowerSection((x,) * (m + 1), (ChainMap.identity(x),) * m, 0)


# ---------------------------------------------------------------------------
# componentwise classification


def _window(f: ChainMap) -> range:
    lo = min(f.source.min_deg, f.target.min_deg)
    hi = max(f.source.top_deg, f.target.top_deg)
    return range(lo, hi + 1)


def _degree_map(f: ChainMap, i: int) -> GroupMap:
    return GroupMap(f.source.pres_at(i), f.target.pres_at(i), f.component_at(i))


def classify_injective(phi: SectionMorphism) -> Certificate:
    """Componentwise weak-equivalence and cofibration verdicts, bundled; the
    witness records both flags and, per failed class, the first bad spot."""
    weq: Certificate = passed("componentwise_weq")
    for lvl, f in enumerate(phi.components):
        got = is_quasi_iso(f)
        if not got.passed:
            weq = failed("componentwise_weq", level=lvl, degree=got.witness["degree"])
            break

    cofib: Certificate = passed("componentwise_cofibration")
    for lvl, f in enumerate(phi.components):
        bad = None
        for i in _window(f):
            gm = _degree_map(f, i)
            if not gm.is_injective():
                bad = (i, "component is not injective")
                break
            if not gm.cokernel_presentation().group().is_free:
                bad = (i, "cokernel has torsion")
                break
        if bad is not None:
            cofib = failed("componentwise_cofibration", level=lvl,
                           degree=bad[0], reason=bad[1])
            break
    return bundle("injective_classification", [weq, cofib],
                  weq=weq.passed, cofib=cofib.passed)


# ---------------------------------------------------------------------------
# fibrations of towers


def surjective_in_positive_degrees(f: ChainMap, label: str) -> Certificate:
    for i in range(max(f.target.min_deg, 1), f.target.top_deg + 1):
        if not _degree_map(f, i).is_surjective():
            return failed("fibration", spot=label, degree=i)
    return passed("fibration", spot=label)


def is_tower_fibration(phi: SectionMorphism) -> Certificate:
    """phi is a fibration of towers iff its bottom component is degreewise
    surjective in positive degrees and each level-(i+1) component factors
    through the fiber product of the previous level surjectively (again in
    positive degrees)."""
    if not isinstance(phi.source, TowerSection):
        raise IllFormedMap("tower fibration check needs tower sections")
    checks = [surjective_in_positive_degrees(phi.components[0], "level 0")]
    for i in range(phi.source.length):
        pb, p1, p2 = degreewise_pullback(phi.target.structure_maps[i],
                                         phi.components[i])
        u = pullback_induced_map(p1, p2, phi.components[i + 1],
                                 phi.source.structure_maps[i])
        checks.append(surjective_in_positive_degrees(
            u, f"level {i + 1} into fiber product"))
    return bundle("tower_fibration", checks)


def is_post_fibrant(t: TowerSection) -> Certificate:
    """Fibrancy of a truncation tower, decided twice.

    Route one: the bottom level is a 0-type, every structure map is
    degreewise surjective in positive degrees, and the kernel of the map into
    level n is an (n+1)-type.  Route two: level n is an n-type and every
    structure map is degreewise surjective in positive degrees.  The two
    verdicts provably coincide; a disagreement is an implementation bug and
    raises instead of certifying.
    """
    base = is_n_type(t.level(0), 0)
    surj = [surjective_in_positive_degrees(m, f"level {i + 1} over {i}")
            for i, m in enumerate(t.structure_maps)]

    via_kernels = [base] + list(surj)
    for i, m in enumerate(t.structure_maps):
        ker, _ = degreewise_kernel(m)
        got = is_n_type(ker, i + 1)
        via_kernels.append(
            passed("kernel_type", level=i) if got.passed
            else failed("kernel_type", level=i, degree=got.witness.get("degree")))
    route_one = bundle("fibrant_via_kernels", via_kernels)

    via_types = [is_n_type(t.level(i), i) for i in range(t.length + 1)] + list(surj)
    route_two = bundle("fibrant_via_level_types", via_types)

    if route_one.passed != route_two.passed:
        raise CharacterizationMismatch(
            "the kernel-based and level-type fibrancy characterizations disagree")
    return bundle("postnikov_fibrant", [route_one, route_two])


# ---------------------------------------------------------------------------
# homotopy-cartesian and cofibrant sections


def _replaced_weq(structure_map: ChainMap, level, check_name: str) -> Certificate:
    free, rep = cofibrant_replacement(structure_map.source)
    comparison = structure_map.compose(rep)
    if level is None:
        got = is_quasi_iso(comparison)
    else:
        got = is_Pn_weq(comparison, level)
    if got.passed:
        return passed(check_name, level=level, via="cofibrant_replacement")
    detail = {k: v for k, v in got.witness.items() if k != "level"}
    return failed(check_name, level=level, via="cofibrant_replacement", **detail)


def is_homotopy_cartesian(section) -> Certificate:
    """Every structure map becomes an equivalence (at the level's truncation)
    after cofibrant replacement of its source."""
    if isinstance(section, TowerSection):
        checks = [_replaced_weq(m, i, "structure_map_weq")
                  for i, m in enumerate(section.structure_maps)]
        return bundle("homotopy_cartesian", checks)
    tag = section.tags[1]
    level = int(tag.split(":", 1)[1]) if tag.startswith("ptype:") else None
    checks = [_replaced_weq(section.left, level, "left_leg_weq"),
              _replaced_weq(section.right, level, "right_leg_weq")]
    return bundle("homotopy_cartesian", checks)


def is_tow_cofibrant(t: TowerSection) -> Certificate:
    """Pass iff every level is degreewise free and every structure map is
    already an equivalence through its level's truncation degree."""
    checks = []
    for i, c in enumerate(t.complexes):
        checks.append(passed("level_free", level=i) if c.is_degreewise_free
                      else failed("level_free", level=i))
    for i, m in enumerate(t.structure_maps):
        got = is_Pn_weq(m, i)
        detail = {k: v for k, v in got.witness.items() if k != "level"}
        checks.append(passed("structure_map_weq", level=i) if got.passed
                      else failed("structure_map_weq", level=i, **detail))
    return bundle("tower_cofibrant", checks)


# ---------------------------------------------------------------------------
# tower constructions


def postnikov_tower(x: ChainComplex, m: int) -> TowerSection:
    """The section (P_n x)_{n <= m} with its quotient structure maps; m must
    clear the top degree so the prefix reaches the stable range."""
    if m < x.top_deg:
        raise ValueError(f"length {m} does not reach the top degree {x.top_deg}")
    levels = [postnikov_section(x, n)[0] for n in range(m + 1)]
    maps = [postnikov_section(levels[n + 1], n)[1] for n in range(m)]
    stab = max(0, min(x.top_deg, m))
    return TowerSection(tuple(levels), tuple(maps), stab)


def free_postnikov_tower(x: ChainComplex, m: int):
    """(tower, comparison): a levelwise degreewise-free tower with strictly
    commuting structure maps, plus a levelwise quasi-isomorphism onto
    postnikov_tower(x, m).

    Level n keeps the free replacement of x through degree n and caps it at
    degree n+1 with a basis of the image of the differential, which is again
    free and kills all homology above n.
    """
    if m < x.top_deg:
        raise ValueError(f"length {m} does not reach the top degree {x.top_deg}")
    base = postnikov_tower(x, m)
    free, q = cofibrant_replacement(x)

    def level(n: int):
        """(complex, image basis at degree n+1 or None)."""
        if n >= free.top_deg:
            return free, None
        if n < free.min_deg:
            return zero_complex(), None
        cap = column_basis(free.diff_at(n + 1))
        degs = list(free.degrees[: n + 1 - free.min_deg])
        degs.append(Presentation.free(cap.cols))
        diffs = list(free.differentials[: n - free.min_deg]) + [cap]
        if cap.cols == 0:
            degs.pop()
            diffs.pop()
        return ChainComplex(free.min_deg, tuple(degs), tuple(diffs)), cap

    built = [level(n) for n in range(m + 1)]
    levels = [b[0] for b in built]

    maps = []
    for n in range(m):
        upper, _ = built[n + 1]
        lower, cap = built[n]
        if cap is None:
            maps.append(ChainMap.identity(lower) if upper == lower
                        else ChainMap.zero_map(upper, lower))
            continue
        comps = []
        for i in upper.span():
            if i <= n:
                comps.append(IntegerMatrix.identity(upper.pres_at(i).generators))
            elif i == n + 1:
                coords = solve_matrix(cap, free.diff_at(n + 1))
                assert coords is not None  # boundaries lie in the image lattice
                comps.append(coords)
            else:
                comps.append(IntegerMatrix.zero(0, upper.pres_at(i).generators))
        maps.append(ChainMap(upper, lower, tuple(comps)))

    stab = max(0, min(free.top_deg, m))
    tower = TowerSection(tuple(levels), tuple(maps), stab)

    comparisons = []
    for n in range(m + 1):
        lvl = levels[n]
        target = base.level(n)
        comps = []
        for i in lvl.span():
            if i <= n:
                comps.append(q.component_at(i))
            else:
                comps.append(IntegerMatrix.zero(target.pres_at(i).generators,
                                                lvl.pres_at(i).generators))
        comparisons.append(ChainMap(lvl, target, tuple(comps)))
    return tower, SectionMorphism(tower, base, tuple(comparisons))
