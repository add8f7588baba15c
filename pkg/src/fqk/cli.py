"""Command-line front end.

Group specifications follow the grammar ``spec := factor ("*" factor)*`` with
``factor := "FO(" int ")" | "FU(" int ")" | "Z"``; whitespace is ignored.
Words are dot-separated letters ``<factor>:u<k>``, ``<factor>:z^<k>`` or
``<factor>:[atom,...]`` for embedded unitary letters; the factor prefix is
dropped for single-block rings and ``e`` denotes the trivial word.  Output is
aligned text by default, JSON with ``--json``; exit codes are 0 (success),
1 (domain error), 2 (syntax error).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fusion
from .fusion import (
    FO,
    FU,
    FreeProduct,
    FusionRing,
    Irrep,
    MalformedIrrepError,
    UnsupportedBlockSizeError,
    Z,
    make_ring,
)
from .intmatrix import IntMatrix, ModuleShapeError
from .ktheory import (
    CoefficientModule,
    KGroupReport,
    NotStabilizedError,
    k_of_tree_algebra,
    pv_k_groups,
    trivial_module,
)
from .subgroups import (
    CosetBudgetError,
    cosets_up_to,
    is_divisible,
    subgroup_from_token,
)
from .tensoralg import GroupPresentation, resolution_check
from .tree import build_tree, graph_json, verify_tree


class SpecSyntaxError(ValueError):
    """Syntax error with a byte offset and the expected tokens."""

    def __init__(self, offset: int, expected: str, text: str):
        super().__init__(
            "syntax error at offset %d: expected %s (in %r)"
            % (offset, expected, text)
        )
        self.offset = offset
        self.expected = expected


class SpecSemanticError(ValueError):
    """Well-formed specification with invalid parameters."""


DEFAULT_DEPTH = 4
DEFAULT_KTREE_DEPTH = 5
DEFAULT_DEGREE = 4


# ---------------------------------------------------------------------------
# Group-spec parsing


def parse_spec(text: str):
    """Parse a group specification into a ring descriptor.

    Returns FO/FU/Z for a single factor and FreeProduct otherwise; raises
    SpecSyntaxError (position annotated) or SpecSemanticError (sizes < 2).
    """
    stripped = []
    positions = []
    for i, ch in enumerate(text):
        if not ch.isspace():
            stripped.append(ch)
            positions.append(i)
    positions.append(len(text))
    s = "".join(stripped)

    factors = []
    pos = 0

    def fail(off, expected):
        raise SpecSyntaxError(positions[min(off, len(positions) - 1)], expected, text)

    while True:
        if s.startswith("FO(", pos) or s.startswith("FU(", pos):
            kind = s[pos : pos + 2]
            num_start = pos + 3
            num_end = num_start
            while num_end < len(s) and s[num_end].isdigit():
                num_end += 1
            if num_end == num_start:
                fail(num_start, "an integer")
            if num_end >= len(s) or s[num_end] != ")":
                fail(num_end, "')'")
            size = int(s[num_start:num_end])
            if size < 2:
                raise SpecSemanticError(
                    "block size must be >= 2, got %s(%d)" % (kind, size)
                )
            factors.append(FO(size) if kind == "FO" else FU(size))
            pos = num_end + 1
        elif s.startswith("Z", pos):
            factors.append(Z())
            pos += 1
        else:
            fail(pos, "'FO(', 'FU(' or 'Z'")
        if pos == len(s):
            break
        if s[pos] != "*":
            fail(pos, "'*' or end of input")
        pos += 1
        if pos == len(s):
            fail(pos, "a factor after '*'")
    if len(factors) == 1:
        return factors[0]
    return FreeProduct(*factors)


# ---------------------------------------------------------------------------
# Word parsing and rendering


def _parse_atom(atom: str, where: str):
    if atom.startswith("u"):
        body = atom[1:]
        if not body.isdigit():
            raise SpecSyntaxError(0, "u<int> in letter %r" % where, atom)
        return (0, int(body))
    if atom.startswith("z^"):
        body = atom[2:]
        try:
            return (1, int(body))
        except ValueError:
            raise SpecSyntaxError(0, "z^<int> in letter %r" % where, atom) from None
    if atom == "z":
        return (1, 1)
    raise SpecSyntaxError(0, "'u<int>' or 'z^<int>' in letter %r" % where, atom)


def parse_word(text: str, ring: FusionRing) -> Irrep:
    """Parse a word in the ring's letter syntax and validate its normal form."""
    text = text.strip()
    if text == "e" or text == "":
        return Irrep(())
    single = len(ring.blocks) == 1
    parts = [p.strip() for p in text.split(".")]
    letters = []
    for part in parts:
        if not part:
            raise SpecSyntaxError(0, "a letter between dots", text)
        factor = None
        body = part
        if ":" in part:
            head, body = part.split(":", 1)
            try:
                factor = int(head)
            except ValueError:
                raise SpecSyntaxError(
                    0, "a factor index before ':' in %r" % part, text
                ) from None
        if factor is None:
            if not single:
                raise SpecSyntaxError(
                    0, "'<factor>:' prefix in %r (multi-factor ring)" % part, text
                )
            factor = 0
        if not 0 <= factor < len(ring.blocks):
            raise MalformedIrrepError(
                "malformed irrep: no factor %d in %r" % (factor, ring)
            )
        blk = ring.blocks[factor]
        if body.startswith("[") and body.endswith("]"):
            if blk.kind != "FU":
                raise MalformedIrrepError(
                    "malformed irrep: bracketed letter %r on a non-unitary factor"
                    % part
                )
            atoms = [a.strip() for a in body[1:-1].split(",")]
            label = tuple(_parse_atom(a, part) for a in atoms)
            letters.append((factor, label))
            continue
        kind, value = _parse_atom(body, part)
        if blk.kind == "FO":
            if kind != 0:
                raise MalformedIrrepError(
                    "malformed irrep: letter %r does not fit factor %d"
                    % (part, factor)
                )
            if value == 0:
                if len(parts) == 1:
                    return Irrep(())  # u0 denotes the trivial corepresentation
                raise MalformedIrrepError(
                    "malformed irrep: trivial letter %r" % part
                )
            letters.append((factor, value))
        elif blk.kind == "Z":
            if kind != 1:
                raise MalformedIrrepError(
                    "malformed irrep: letter %r does not fit factor %d"
                    % (part, factor)
                )
            if value == 0:
                raise MalformedIrrepError(
                    "malformed irrep: trivial letter %r" % part
                )
            letters.append((factor, value))
        else:
            raise MalformedIrrepError(
                "malformed irrep: factor %d needs a bracketed unitary letter"
                % factor
            )
    return ring.validate(tuple(letters))


def render_word(ring: FusionRing, word) -> str:
    word = tuple(word)
    if not word:
        if len(ring.blocks) == 1 and ring.blocks[0].kind == "FO":
            return "u0"
        return "e"
    single = len(ring.blocks) == 1 and not ring.is_fu
    bits = []
    for j, lab in word:
        blk = ring.blocks[j]
        if blk.kind == "FO":
            body = "u%d" % lab
        elif blk.kind == "Z":
            body = "z^%d" % lab
        else:
            body = "[" + ",".join(
                "u%d" % v if k == 0 else "z^%d" % v for k, v in lab
            ) + "]"
        bits.append(body if single else "%d:%s" % (j, body))
    return ".".join(bits)


def render_sum(ring: FusionRing, fs) -> str:
    parts = []
    for w, c in fs.items():
        body = render_word(ring, w)
        parts.append(body if c == 1 else "%d*%s" % (c, body))
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Coefficient-module files


def load_module_file(path: str, pres: GroupPresentation) -> CoefficientModule:
    """Load a coefficient module from JSON:
    {k0_rank, k1_rank, actions: {gen: {k0: [[..]], k1: [[..]]}}, dims: {gen: int}}."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        k0_rank = int(data["k0_rank"])
        k1_rank = int(data["k1_rank"])
        actions_raw = data["actions"]
        dims = {str(k): int(v) for k, v in data["dims"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ModuleShapeError("module shape error: %s" % exc) from None
    labels0 = tuple("k0:%d" % i for i in range(k0_rank))
    labels1 = tuple("k1:%d" % i for i in range(k1_rank))
    actions = {}
    for g in pres.generator_names():
        if g not in actions_raw:
            raise ModuleShapeError("module shape error: missing generator %r" % g)
        entry = actions_raw[g]
        m0 = IntMatrix.from_rows(
            entry.get("k0", []), row_labels=labels0, col_labels=labels0
        )
        m1 = IntMatrix.from_rows(
            entry.get("k1", []), row_labels=labels1, col_labels=labels1
        )
        if m0.shape != (k0_rank, k0_rank) or m1.shape != (k1_rank, k1_rank):
            raise ModuleShapeError(
                "module shape error: action of %r has wrong shape" % g
            )
        actions[g] = (m0, m1)
    return CoefficientModule(
        k0_rank=k0_rank,
        k1_rank=k1_rank,
        actions=actions,
        dims=dims,
        k0_labels=labels0,
        k1_labels=labels1,
    )


def presentation_of(spec) -> GroupPresentation:
    """Presentation (FU sizes, FO sizes) of a spec made of FU/FO/Z factors;
    Z factors are not part of the generator alphabet and are rejected."""
    factors = spec.factors if isinstance(spec, FreeProduct) else (spec,)
    fu = []
    fo = []
    for f in factors:
        if isinstance(f, FU):
            fu.append(f.m)
        elif isinstance(f, FO):
            fo.append(f.n)
        else:
            raise SpecSemanticError(
                "the six-term route needs FU/FO factors only (no Z)"
            )
    return GroupPresentation(fu_sizes=tuple(fu), fo_sizes=tuple(fo))


# ---------------------------------------------------------------------------
# Commands


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(
            json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
        )
    else:
        sys.stdout.write(text + "\n")


def cmd_fuse(args) -> int:
    ring = make_ring(parse_spec(args.spec))
    r = parse_word(args.left, ring)
    s = parse_word(args.right, ring)
    out = ring.fuse(r, s)
    payload = {
        "terms": [
            {"word": render_word(ring, w), "mult": c} for w, c in out.items()
        ]
    }
    return _done(args, payload, render_sum(ring, out))


def cmd_conj(args) -> int:
    ring = make_ring(parse_spec(args.spec))
    r = parse_word(args.word, ring)
    out = ring.conj(r)
    return _done(args, {"word": render_word(ring, out)}, render_word(ring, out))


def cmd_dim(args) -> int:
    ring = make_ring(parse_spec(args.spec))
    r = parse_word(args.word, ring)
    d = ring.dim(r)
    return _done(args, {"dim": d}, str(d))


def cmd_irr(args) -> int:
    ring = make_ring(parse_spec(args.spec))
    words = ring.irreps_up_to(args.max_len)
    rendered = [render_word(ring, w) for w in words]
    return _done(args, {"irreps": rendered}, "\n".join(rendered))


def cmd_cosets(args) -> int:
    ring = make_ring(parse_spec(args.spec))
    subgroup = subgroup_from_token(args.subgroup)
    cosets = cosets_up_to(ring, subgroup, args.depth, side=args.side)
    payload = {
        "side": args.side,
        "depth": args.depth,
        "cosets": [
            {
                "representative": render_word(ring, c.representative),
                "size": len(c.members),
                "members": [render_word(ring, m) for m in c.members],
            }
            for c in cosets
        ],
    }
    lines = ["%d cosets at depth %d (%s)" % (len(cosets), args.depth, args.side)]
    for c in cosets:
        lines.append(
            "[%s]  (%d members)" % (render_word(ring, c.representative), len(c.members))
        )
    return _done(args, payload, "\n".join(lines))


def cmd_divisible(args) -> int:
    ring = make_ring(parse_spec(args.spec))
    subgroup = subgroup_from_token(args.subgroup)
    verdict = is_divisible(ring, subgroup, args.depth)
    payload = {
        "divisible": verdict.divisible,
        "depth": verdict.depth,
        "cosets": verdict.coset_count,
    }
    if verdict.divisible:
        payload["representatives"] = {
            render_word(ring, k): render_word(ring, v)
            for k, v in verdict.representatives.items()
        }
        text = "divisible up to depth %d  (%d cosets)" % (
            verdict.depth,
            verdict.coset_count,
        )
    else:
        payload["counterexample"] = render_word(
            ring, verdict.counterexample.representative
        )
        text = "not divisible  (coset of %s fails; %d cosets at depth %d)" % (
            render_word(ring, verdict.counterexample.representative),
            verdict.coset_count,
            verdict.depth,
        )
    return _done(args, payload, text)


def cmd_tree(args) -> int:
    spec = parse_spec(args.spec)
    if not isinstance(spec, FreeProduct) or len(spec.factors) != 2:
        raise SpecSemanticError("tree needs a two-factor free product")
    ring = make_ring(spec)
    graph = build_tree(spec.factors[0], spec.factors[1], args.depth)
    verdict = verify_tree(graph)
    render = lambda w: render_word(ring, w)
    if args.dot:
        sys.stdout.write(graph.to_dot(render) + "\n")
        return 0
    payload = graph.to_json_dict(render)
    payload["verdict"] = verdict.kind
    text = "vertices %d, edges %d: %s" % (
        graph.vertex_count,
        graph.edge_count,
        verdict.describe(),
    )
    return _done(args, payload, text)


def cmd_ktree(args) -> int:
    spec = parse_spec(args.spec)
    if not isinstance(spec, FreeProduct) or len(spec.factors) != 2:
        raise SpecSemanticError("ktree needs a two-factor free product")
    report = k_of_tree_algebra(spec.factors[0], spec.factors[1], args.depth)
    return _done(args, report.to_json_dict(), report.render_text())


def cmd_kpv(args) -> int:
    spec = parse_spec(args.spec)
    pres = presentation_of(spec)
    if args.module:
        module = load_module_file(args.module, pres)
    else:
        module = trivial_module(pres)
    report = pv_k_groups(pres, module)
    return _done(args, report.to_json_dict(), report.render_text())


def cmd_rescheck(args) -> int:
    spec = parse_spec(args.spec)
    pres = presentation_of(spec)
    verdict = resolution_check(pres, args.degree)
    payload = {
        "exact": verdict.exact,
        "degree": verdict.max_degree,
        "checks": verdict.checks,
    }
    if not verdict.exact:
        payload["witness"] = repr(verdict.witness)
        _emit(args, payload, verdict.describe())
        return 1
    return _done(args, payload, verdict.describe())


def _done(args, payload, text) -> int:
    _emit(args, payload, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fqk",
        description="Fusion rings and integer K-theory of free quantum groups.",
    )
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("fuse", help="decompose a tensor product")
    sp.add_argument("spec")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(func=cmd_fuse)

    sp = sub.add_parser("conj", help="conjugate irreducible")
    sp.add_argument("spec")
    sp.add_argument("word")
    sp.set_defaults(func=cmd_conj)

    sp = sub.add_parser("dim", help="classical dimension")
    sp.add_argument("spec")
    sp.add_argument("word")
    sp.set_defaults(func=cmd_dim)

    sp = sub.add_parser("irr", help="enumerate irreducibles")
    sp.add_argument("spec")
    sp.add_argument("--max-len", type=int, default=DEFAULT_DEPTH)
    sp.set_defaults(func=cmd_irr)

    sp = sub.add_parser("cosets", help="windowed coset spaces")
    sp.add_argument("spec")
    sp.add_argument("--subgroup", required=True)
    sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    sp.add_argument("--side", choices=("left", "right"), default="left")
    sp.set_defaults(func=cmd_cosets)

    sp = sub.add_parser("divisible", help="windowed divisibility verdict")
    sp.add_argument("spec")
    sp.add_argument("--subgroup", required=True)
    sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    sp.set_defaults(func=cmd_divisible)

    sp = sub.add_parser("tree", help="Bass-Serre graph of a two-factor product")
    sp.add_argument("spec")
    sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    sp.add_argument("--dot", action="store_true", help="emit DOT text")
    sp.set_defaults(func=cmd_tree)

    sp = sub.add_parser("ktree", help="K-groups of the coset complex")
    sp.add_argument("spec")
    sp.add_argument("--depth", type=int, default=DEFAULT_KTREE_DEPTH)
    sp.set_defaults(func=cmd_ktree)

    sp = sub.add_parser("kpv", help="K-groups via the six-term sequence")
    sp.add_argument("spec")
    sp.add_argument("--module", help="coefficient-module JSON file")
    sp.set_defaults(func=cmd_kpv)

    sp = sub.add_parser("rescheck", help="resolution exactness check")
    sp.add_argument("spec")
    sp.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    sp.set_defaults(func=cmd_rescheck)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecSyntaxError as exc:
        sys.stderr.write("fqk: %s\n" % exc)
        return 2
    except (
        SpecSemanticError,
        MalformedIrrepError,
        UnsupportedBlockSizeError,
        ModuleShapeError,
        NotStabilizedError,
        CosetBudgetError,
        ValueError,
        OSError,
    ) as exc:
        sys.stderr.write("fqk: %s\n" % exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
