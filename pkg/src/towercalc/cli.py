"""Command-line surface.

Every subcommand loads flat-file documents (or draws seeded instances),
runs the corresponding library checks, and prints a report — human-readable
text by default, canonical machine JSON with ``--format machine``.  Machine
reports carry no timing and are byte-identical for identical inputs, seeds,
and flags.  Exit codes: 0 every check passed, 1 at least one check failed,
2 the input could not be used (parse error, broken document, unusable
arguments).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from dataclasses import dataclass

from . import serialize
from .certificates import Certificate, bundle, failed, passed
from .complexes import ChainComplex, hom_complex, homology_group
from .errors import (
    IllFormedMap,
    NotCofibrant,
    ParseError,
    PartitionTooSmall,
    StabilizationViolated,
    TorsionSource,
    ValidationError,
)
from .fracture import PrimePartition, arithmetic_square_check, cospan_model_check
from .gen import GenProfile, generate, random_complex
from .hofib import derived_counit_check, layer_equivalence_check
from .holim import hypercomplete_check, milnor_check, tower_limit, uct_ladder
from .sections import (
    CospanSection,
    TowerSection,
    is_homotopy_cartesian,
    is_post_fibrant,
    postnikov_tower,
    surjective_in_positive_degrees,
)
from .trunc import connective_cover, is_n_type, is_Pn_weq, layer, postnikov_section

_INPUT_ERRORS = (ParseError, ValidationError, TorsionSource, NotCofibrant,
                 PartitionTooSmall, StabilizationViolated, IllFormedMap, ValueError)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class RunReport:
    command: str
    inputs: dict
    checks: tuple[Certificate, ...]
    elapsed_ms: int

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.checks)

    def machine_doc(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "checks": [c.to_dict() for c in self.checks],
            "verdict": "pass" if self.verdict else "fail",
        }

    def machine_text(self) -> str:
        return json.dumps(self.machine_doc(), sort_keys=True,
                          separators=(",", ":")) + "\n"

    def text(self) -> str:
        lines = [f"command: {self.command}"]
        for key, value in self.inputs.items():
            lines.append(f"input {key}: {value}")
        for check in self.checks:
            _render(check, lines, 0)
        lines.append(f"verdict: {'pass' if self.verdict else 'fail'}")
        lines.append(f"elapsed: {self.elapsed_ms} ms")
        return "\n".join(lines) + "\n"


def _render(cert: Certificate, lines: list, depth: int) -> None:
    mark = "PASS" if cert.passed else "FAIL"
    doc = cert.to_dict()
    detail = ""
    if "witness" in doc:
        detail = " " + " ".join(f"{k}={json.dumps(v)}" if not isinstance(v, str)
                                else f"{k}={v}" for k, v in doc["witness"].items())
    lines.append(f"{'  ' * depth}[{mark}] {cert.check}{detail}")
    for child in cert.children:
        _render(child, lines, depth + 1)


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


# ---------------------------------------------------------------------------
# loading helpers


def _load_complex(path: str) -> ChainComplex:
    obj = serialize.load(path)
    if not isinstance(obj, ChainComplex):
        raise ValidationError(path, "expected a complex document")
    return obj


def _load_tower(path: str) -> TowerSection:
    obj = serialize.load(path)
    if not isinstance(obj, TowerSection):
        raise ValidationError(path, "expected a tower document")
    return obj


def _load_cospan(path: str) -> CospanSection:
    obj = serialize.load(path)
    if not isinstance(obj, CospanSection):
        raise ValidationError(path, "expected a cospan document")
    return obj


def _parse_primes(raw: str, flag: str) -> set:
    try:
        return {int(p) for p in raw.split(",") if p.strip()}
    except ValueError:
        raise ValueError(f"{flag} expects a comma-separated list of primes") from None


def _homology_listing(x: ChainComplex, name: str) -> Certificate:
    children = [passed("homology_degree", degree=i, value=str(homology_group(x, i)))
                for i in x.span()]
    return bundle(name, children)


# ---------------------------------------------------------------------------
# subcommand bodies: each returns (inputs, checks)


def _cmd_homology(args):
    x = _load_complex(args.file)
    return {os.path.basename(args.file): _digest(args.file)}, [_homology_listing(x, "homology")]


def _cmd_truncate(args):
    x = _load_complex(args.file)
    p, q = postnikov_section(x, args.n)
    checks = [bundle("truncation",
                     [is_n_type(p, args.n), is_Pn_weq(q, args.n),
                      _homology_listing(p, "truncated_homology")],
                     cut=args.n)]
    return {os.path.basename(args.file): _digest(args.file)}, checks


def _cmd_cover(args):
    x = _load_complex(args.file)
    c, _ = connective_cover(x, args.k)
    low = [passed("cover_vanishes", degree=i) if homology_group(c, i).is_zero
           else failed("cover_vanishes", degree=i, value=str(homology_group(c, i)))
           for i in c.span() if i <= args.k]
    high = [passed("cover_matches", degree=i, value=str(homology_group(c, i)))
            if homology_group(c, i) == homology_group(x, i)
            else failed("cover_matches", degree=i, cover=str(homology_group(c, i)),
                        total=str(homology_group(x, i)))
            for i in sorted(set(c.span()) | set(x.span())) if i > args.k]
    return ({os.path.basename(args.file): _digest(args.file)},
            [bundle("connective_cover", low + high, cut=args.k)])


def _cmd_layer(args):
    x = _load_complex(args.file)
    lay = layer(x, args.k)
    off = [i for i in lay.span() if i != args.k + 1 and not homology_group(lay, i).is_zero]
    conc = (passed("concentrated", degree=args.k + 1) if not off
            else failed("concentrated", degrees=off))
    value = passed("layer_value", value=str(homology_group(lay, args.k + 1)))
    return ({os.path.basename(args.file): _digest(args.file)},
            [bundle("layer", [conc, value], cut=args.k)])


def _cmd_homcx(args):
    m = _load_complex(args.source)
    n = _load_complex(args.target)
    h = hom_complex(m, n)
    inputs = {os.path.basename(args.source): _digest(args.source),
              os.path.basename(args.target): _digest(args.target)}
    return inputs, [_homology_listing(h, "hom_complex_homology")]


def _cmd_uct(args):
    m = _load_complex(args.source)
    n = _load_complex(args.target)
    report = uct_ladder(m, n, args.n)
    inputs = {os.path.basename(args.source): _digest(args.source),
              os.path.basename(args.target): _digest(args.target)}
    disc = passed("discrepancy", value=str(report.discrepancy))
    return inputs, [report.certificate, disc]


def _cmd_tower(args):
    t = _load_tower(args.file)
    limit, projections = tower_limit(t)
    checks = [_homology_listing(limit, "limit_homology"),
              passed("projections", count=len(projections))]
    return {os.path.basename(args.file): _digest(args.file)}, checks


def _instances(args):
    """Seeded instance stream for the batch subcommands."""
    rng = random.Random(args.seed)
    return [random_complex(rng) for _ in range(args.count)]


def _cmd_hypercomplete(args):
    if args.file:
        x = _load_complex(args.file)
        return ({os.path.basename(args.file): _digest(args.file)},
                [hypercomplete_check(x)])
    checks = [bundle("instance", [hypercomplete_check(x)], index=i)
              for i, x in enumerate(_instances(args))]
    suite = bundle("hypercompleteness_suite", checks,
                   seed=args.seed, count=args.count)
    return {"seed": str(args.seed), "count": str(args.count)}, [suite]


def _cmd_milnor(args):
    def tower_of(x: ChainComplex) -> TowerSection:
        return postnikov_tower(x, max(x.top_deg, 0))

    def all_degrees(t: TowerSection) -> Certificate:
        top = t.level(t.length)
        degrees = top.span() if not top.is_zero else range(0, 1)
        return bundle("milnor", [milnor_check(t, i) for i in degrees])

    if args.file:
        t = _load_tower(args.file)
        return {os.path.basename(args.file): _digest(args.file)}, [all_degrees(t)]
    checks = [bundle("instance", [all_degrees(tower_of(x))], index=i)
              for i, x in enumerate(_instances(args))]
    suite = bundle("milnor_suite", checks, seed=args.seed, count=args.count)
    return {"seed": str(args.seed), "count": str(args.count)}, [suite]


def _cmd_fracture(args):
    x = _load_complex(args.file)
    partition = PrimePartition(_parse_primes(args.primes_j, "--primes-j"),
                               _parse_primes(args.primes_k, "--primes-k"))
    return ({os.path.basename(args.file): _digest(args.file)},
            [arithmetic_square_check(x, partition)])


def _cmd_hofib(args):
    x = _load_complex(args.file)
    checks = [derived_counit_check(x, args.k), layer_equivalence_check(x, args.k)]
    return {os.path.basename(args.file): _digest(args.file)}, checks


def _cmd_section(args):
    inputs = {os.path.basename(args.file): _digest(args.file)}
    if args.mode == "check-tower":
        t = _load_tower(args.file)
        return inputs, [is_post_fibrant(t), is_homotopy_cartesian(t)]
    s = _load_cospan(args.file)
    checks = [bundle("leg_fibrations",
                     [surjective_in_positive_degrees(s.left, "left leg"),
                      surjective_in_positive_degrees(s.right, "right leg")])]
    if any(t == "rational" or t.startswith("local:") for t in s.tags):
        checks.append(cospan_model_check(s))
    elif s.tags[1].startswith("ptype:"):
        checks.append(is_homotopy_cartesian(s))
    return inputs, checks


def _cmd_generate(args):
    doc = generate(args.seed, GenProfile())
    digest = "sha256:" + hashlib.sha256(
        serialize.document_text(doc).encode("utf-8")).hexdigest()
    check = passed("generated", name=doc["name"], document=digest)
    return {"seed": str(args.seed)}, [check], doc


# ---------------------------------------------------------------------------
# wiring


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="PATH",
                        help="also write the machine-readable report here")
    common.add_argument("--format", choices=("text", "machine"), default="text",
                        help="stdout format (default text)")

    ap = argparse.ArgumentParser(
        prog="towercalc",
        description="exact truncation-tower checks for bounded complexes")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", parents=[common],
                       help="list the homology of a complex document")
    p.add_argument("file")

    p = sub.add_parser("truncate", parents=[common],
                       help="truncate above a degree and certify the result")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("cover", parents=[common],
                       help="connective cover below a degree")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("layer", parents=[common],
                       help="single truncation layer of a complex")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("homcx", parents=[common],
                       help="homology of the mapping complex of two documents")
    p.add_argument("source")
    p.add_argument("target")

    p = sub.add_parser("uct", parents=[common],
                       help="coefficient ladder of a mapping complex at a cut")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("tower", parents=[common],
                       help="limit of a tower document")
    p.add_argument("file")

    p = sub.add_parser("hypercomplete", parents=[common],
                       help="limit-reconstruction check, one file or a seeded batch")
    p.add_argument("file", nargs="?")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)

    p = sub.add_parser("milnor", parents=[common],
                       help="limit/lim1 exactness across all degrees")
    p.add_argument("file", nargs="?")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)

    p = sub.add_parser("fracture", parents=[common],
                       help="arithmetic square of a complex over a prime partition")
    p.add_argument("file")
    p.add_argument("--primes-j", default="", metavar="P,P,...")
    p.add_argument("--primes-k", default="", metavar="P,P,...")

    p = sub.add_parser("hofib", parents=[common],
                       help="homotopy-fiber checks at a cut")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("section", parents=[common],
                       help="model-structure checks for section documents")
    p.add_argument("mode", choices=("check-tower", "check-cospan"))
    p.add_argument("file")

    p = sub.add_parser("generate", parents=[common],
                       help="print a seeded random complex document")
    p.add_argument("--seed", type=int, default=0)

    return ap


_HANDLERS = {
    "homology": _cmd_homology,
    "truncate": _cmd_truncate,
    "cover": _cmd_cover,
    "layer": _cmd_layer,
    "homcx": _cmd_homcx,
    "uct": _cmd_uct,
    "tower": _cmd_tower,
    "hypercomplete": _cmd_hypercomplete,
    "milnor": _cmd_milnor,
    "fracture": _cmd_fracture,
    "hofib": _cmd_hofib,
    "section": _cmd_section,
    "generate": _cmd_generate,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        result = _HANDLERS[args.command](args)
    except _INPUT_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    inputs, checks = result[0], result[1]
    document = result[2] if len(result) > 2 else None
    elapsed = int((time.monotonic() - started) * 1000)
    report = RunReport(args.command, inputs, tuple(checks), elapsed)

    if document is not None:
        out = (serialize.document_text(document) if args.format == "text"
               else json.dumps(document, sort_keys=True, separators=(",", ":")) + "\n")
        sys.stdout.write(out)
    else:
        sys.stdout.write(report.text() if args.format == "text"
                         else report.machine_text())
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.machine_text())
    return 0 if report.verdict else 1


if __name__ == "__main__":
    sys.exit(main())
