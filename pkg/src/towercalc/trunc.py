"""Good truncation from above and below, and the fiber sequence between them.

``postnikov_section(X, n)`` kills homology above n by quotienting degree n by
the incoming boundaries; ``connective_cover(X, k)`` kills homology at or
below k by restricting degree k+1 to the cycles.  The two fit into a
degreewise short exact sequence whose long exact homology sequence is checked
spot by spot, not assumed.
"""
from __future__ import annotations

from .certificates import Certificate, bundle, failed, passed
from .complexes import (
    ChainComplex,
    ChainMap,
    cokernel_complex,
    homology_group,
    induced_map,
    is_quasi_iso,
    les_certificate,
    zero_complex,
)
from .exactalg import IntegerMatrix, Presentation, preimage_lattice, solve_matrix, subgroup_presentation


def postnikov_section(x: ChainComplex, n: int):
    """(P, q): degrees above n dropped, degree n quotiented by boundaries,
    q the degreewise quotient map.  H_i(P) = H_i(X) for i <= n, zero above."""
    if x.is_zero or n < x.min_deg:
        p = zero_complex()
        return p, ChainMap.zero_map(x, p)
    cut = min(n, x.top_deg)
    degs = list(x.degrees[: cut - x.min_deg])
    boundary_rows = x.diff_at(cut + 1).transpose()
    top_pres = x.pres_at(cut)
    degs.append(Presentation(top_pres.generators,
                             top_pres.relations.vstack(boundary_rows)))
    p = ChainComplex(x.min_deg, tuple(degs), x.differentials[: cut - x.min_deg])
    comps = []
    for i in x.span():
        g = x.pres_at(i).generators
        comps.append(IntegerMatrix.identity(g) if i <= cut else IntegerMatrix.zero(0, g))
    return p, ChainMap(x, p, tuple(comps))


def is_n_type(x: ChainComplex, n: int) -> Certificate:
    """Pass iff homology vanishes strictly above degree n."""
    for i in x.span():
        if i > n:
            h = homology_group(x, i)
            if not h.is_zero:
                return failed("n_type", level=n, degree=i, homology=str(h))
    return passed("n_type", level=n)


def is_Pn_weq(f: ChainMap, n: int) -> Certificate:
    """Pass iff H_i(f) is an isomorphism for every i <= n."""
    lo = min(f.source.min_deg, f.target.min_deg)
    for i in range(lo, n + 1):
        if not induced_map(f, i).is_iso():
            return failed("truncated_weq", level=n, degree=i,
                          source=str(homology_group(f.source, i)),
                          target=str(homology_group(f.target, i)))
    return passed("truncated_weq", level=n)


def connective_cover(x: ChainComplex, k: int):
    """(C, j): degrees at or below k dropped, degree k+1 restricted to the
    cycles, j the evident inclusion.  H_i(C) = H_i(X) for i > k, zero below."""
    if k < x.min_deg:
        return x, ChainMap.identity(x)
    if x.is_zero or k + 1 > x.top_deg:
        c = zero_complex()
        return c, ChainMap.zero_map(c, x)
    cycles = preimage_lattice(x.diff_at(k + 1), x.pres_at(k).relation_columns())
    bottom_pres, basis = subgroup_presentation(x.pres_at(k + 1), cycles)
    degs = [bottom_pres] + list(x.degrees[k + 2 - x.min_deg:])
    diffs = []
    if k + 2 <= x.top_deg:
        coords = solve_matrix(basis, x.diff_at(k + 2))
        assert coords is not None  # d carries degree k+2 into the cycles
        diffs = [coords] + list(x.differentials[k + 2 - x.min_deg:])
    c = ChainComplex(k + 1, tuple(degs), tuple(diffs))
    comps = tuple(basis if i == k + 1 else IntegerMatrix.identity(x.pres_at(i).generators)
                  for i in c.span())
    return c, ChainMap(c, x, comps)


def fiber_sequence_check(x: ChainComplex, k: int) -> Certificate:
    """Certify the three layers of C_kX -> X -> P_kX being a fiber sequence:
    zero composite, quotient comparison, and the full long exact sequence."""
    cover, j = connective_cover(x, k)
    section, q = postnikov_section(x, k)

    composite = q.compose(j)
    zero_ok = all(
        section.pres_at(cover.min_deg + idx).contains_in_relations(m)
        for idx, m in enumerate(composite.components))
    zero_cert = (passed("composite_vanishes") if zero_ok
                 else failed("composite_vanishes"))

    quo, qq = cokernel_complex(j)
    comps = []
    for i in quo.span():
        g = quo.pres_at(i).generators
        comps.append(IntegerMatrix.identity(g) if i <= k
                     else IntegerMatrix.zero(section.pres_at(i).generators, g))
    natural = ChainMap(quo, section, tuple(comps))
    compare = is_quasi_iso(natural)
    compare_cert = (passed("quotient_matches_section") if compare.passed
                    else failed("quotient_matches_section", **compare.witness))

    les = les_certificate(j, qq)
    return bundle("fiber_sequence", [zero_cert, compare_cert, les], cut=k)


def layer(x: ChainComplex, k: int) -> ChainComplex:
    """The k-th Postnikov layer: cover at k of the section at k+1; homology
    is H_{k+1}(X) concentrated in degree k+1."""
    section, _ = postnikov_section(x, k + 1)
    cover, _ = connective_cover(section, k)
    return cover
