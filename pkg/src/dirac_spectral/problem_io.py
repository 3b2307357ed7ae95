"""Read and write problem definition files.

The on-disk format is TOML::

    interval = [0.0, 3.141592653589793]
    weights = [1.0, 2.0]

    [boundary]
    a1 = [0.0]        # coefficient lists, constant term first
    a2 = [1.0]
    b1 = [0.0]
    b2 = [1.0]

    [[transmission]]
    xi = 1.5707963267948966
    theta = 2.0
    gamma = [0.0, 1.0]

    [[potential]]              # one block for the whole interval, or one
    kind = "constant"          # per weight subinterval
    p = 0.3
    q = 0.0
    r = 0.3

Potential kinds: ``zero``; ``constant`` with scalars p, q, r; ``poly`` with
p, q, r as x-coefficient lists (constant term first).

A file may additionally carry a reconstruction setup::

    [[unknown]]
    kind = "pr"            # "pr" | "p" | "q" | "r" | "theta"
    index = 0              # subinterval index (or transmission index)
    bounds = [-1.0, 1.0]
    start = 0.1            # optional

    [targets]
    main = [1.3, 2.3]
    aux = [0.8, 1.8]
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any

from .errors import DiracSpectralError
from .polynomial import RealPolynomial
from .problem import DiracProblem, PotentialPiece, PotentialSpec, TransmissionData
from .weyl import ReconstructionSpec, UnknownParameter


class ProblemFileError(DiracSpectralError):
    """The problem file is syntactically valid TOML but semantically malformed."""


def _poly(doc: dict, section: str, key: str) -> RealPolynomial:
    try:
        coeffs = doc[section][key]
    except KeyError:
        raise ProblemFileError(f"missing boundary polynomial {section}.{key}") from None
    return RealPolynomial(tuple(float(c) for c in coeffs))


def _potential_piece(block: dict, where: str) -> PotentialPiece:
    kind = block.get("kind", "zero")
    if kind == "zero":
        return PotentialPiece()
    if kind == "constant":
        return PotentialPiece(
            p=float(block.get("p", 0.0)),
            q=float(block.get("q", 0.0)),
            r=float(block.get("r", 0.0)),
        )
    if kind == "poly":
        def coeffs(key: str):
            v = block.get(key, [0.0])
            return tuple(float(c) for c in v)

        return PotentialPiece(p=coeffs("p"), q=coeffs("q"), r=coeffs("r"))
    raise ProblemFileError(f"unknown potential kind {kind!r} in {where}")


def parse_problem(doc: dict[str, Any]) -> DiracProblem:
    """Build a DiracProblem from a parsed TOML document."""
    try:
        a, b = (float(v) for v in doc["interval"])
        weights = tuple(float(w) for w in doc["weights"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemFileError(f"bad or missing interval/weights: {exc}") from None

    transmissions = []
    for i, block in enumerate(doc.get("transmission", []), start=1):
        try:
            transmissions.append(
                TransmissionData(
                    xi=float(block["xi"]),
                    theta=float(block["theta"]),
                    gamma=RealPolynomial(tuple(float(c) for c in block.get("gamma", []))),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemFileError(f"bad transmission block {i}: {exc}") from None

    pot_blocks = doc.get("potential", [])
    if not pot_blocks:
        potential = PotentialSpec.zero()
    else:
        pieces = tuple(
            _potential_piece(blk, f"potential block {j}")
            for j, blk in enumerate(pot_blocks, start=1)
        )
        if len(pieces) == 1:
            potential = PotentialSpec(pieces, ())
        elif len(pieces) == len(weights):
            potential = PotentialSpec(pieces, tuple(t.xi for t in transmissions))
        else:
            raise ProblemFileError(
                f"potential block count {len(pieces)} must be 1 or match "
                f"the {len(weights)} weight subintervals"
            )

    return DiracProblem(
        a=a,
        b=b,
        weights=weights,
        a1=_poly(doc, "boundary", "a1"),
        a2=_poly(doc, "boundary", "a2"),
        b1=_poly(doc, "boundary", "b1"),
        b2=_poly(doc, "boundary", "b2"),
        transmissions=tuple(transmissions),
        potential=potential,
    )


def parse_reconstruction(doc: dict[str, Any], problem: DiracProblem) -> ReconstructionSpec:
    """Build a ReconstructionSpec from the [[unknown]] and [targets] sections."""
    blocks = doc.get("unknown", [])
    if not blocks:
        raise ProblemFileError("no [[unknown]] blocks: nothing to reconstruct")
    unknowns = []
    for j, blk in enumerate(blocks, start=1):
        try:
            lo, hi = (float(v) for v in blk["bounds"])
            unknowns.append(
                UnknownParameter(
                    kind=str(blk["kind"]),
                    index=int(blk.get("index", 0)),
                    bounds=(lo, hi),
                    start=float(blk["start"]) if "start" in blk else None,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemFileError(f"bad unknown block {j}: {exc}") from None
    targets = doc.get("targets", {})
    main = tuple(float(v) for v in targets.get("main", []))
    aux = tuple(float(v) for v in targets.get("aux", []))
    return ReconstructionSpec(
        template=problem, unknowns=tuple(unknowns), targets_main=main, targets_aux=aux
    )


def load_problem(path: str | Path) -> DiracProblem:
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    return parse_problem(doc)


def load_document(path: str | Path) -> dict[str, Any]:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


# ---------------------------------------------------------------------------
# Serialization. tomllib has no writer; the format is small enough to emit
# by hand with round-trip precision.

def _fmt(v: float) -> str:
    s = f"{v:.17g}"
    # TOML floats need a decimal point or exponent.
    if not any(ch in s for ch in ".eE") and "inf" not in s and "nan" not in s:
        s += ".0"
    return s


def _fmt_list(vals) -> str:
    return "[" + ", ".join(_fmt(float(v)) for v in vals) + "]"


def _coeff_list(c) -> tuple[float, ...]:
    return c if isinstance(c, tuple) else (float(c),)


def dump_problem(problem: DiracProblem) -> str:
    """Serialize a problem as a TOML string readable by load_problem."""
    lines = [
        f"interval = {_fmt_list([problem.a, problem.b])}",
        f"weights = {_fmt_list(problem.weights)}",
        "",
        "[boundary]",
    ]
    for name in ("a1", "a2", "b1", "b2"):
        p: RealPolynomial = getattr(problem, name)
        lines.append(f"{name} = {_fmt_list(p.coeffs or (0.0,))}")
    for t in problem.transmissions:
        lines += [
            "",
            "[[transmission]]",
            f"xi = {_fmt(t.xi)}",
            f"theta = {_fmt(t.theta)}",
            f"gamma = {_fmt_list(t.gamma.coeffs or (0.0,))}",
        ]
    for piece in problem.potential.pieces:
        lines += ["", "[[potential]]"]
        if piece.is_zero:
            lines.append('kind = "zero"')
        elif piece.is_constant:
            lines.append('kind = "constant"')
            for name in ("p", "q", "r"):
                lines.append(f"{name} = {_fmt(getattr(piece, name))}")
        else:
            lines.append('kind = "poly"')
            for name in ("p", "q", "r"):
                c = getattr(piece, name)
                if callable(c):
                    raise ProblemFileError(
                        "callable potential entries cannot be serialized"
                    )
                lines.append(f"{name} = {_fmt_list(_coeff_list(c))}")
    return "\n".join(lines) + "\n"


def save_problem(problem: DiracProblem, path: str | Path) -> None:
    Path(path).write_text(dump_problem(problem))
