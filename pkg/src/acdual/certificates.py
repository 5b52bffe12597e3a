"""JSON certificates for contractions and homotopy equivalences.

Maps are stored as sparse triplets ``[row, col, scalar]`` per degree, with the
shape alongside.  Scalars use :func:`acdual.rings.format_scalar`: decimal
strings for integers and rationals, monomial maps for Laurent polynomials.
Output is deterministic (sorted keys, entries sorted by column then row).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .complexes import Complex
from .coxeter import members
from .cosets import Coset, SigmaCert
from .linalg import LinMap
from .rings import format_scalar

SCHEMA_VERSION = 1


def mask_to_list(mask: int) -> list[int]:
    return [s + 1 for s in members(mask)]


def encode_map(m: LinMap) -> dict:
    return {
        "shape": [m.nrows, m.ncols],
        "entries": [[r, c, format_scalar(v)] for r, c, v in m.entries()],
    }


def encode_graded(maps: dict[int, LinMap]) -> dict:
    return {str(d): encode_map(m) for d, m in sorted(maps.items())}


def encode_label(G, lab):
    """JSON form of a basis label; cosets become [[gens], [word]] (1-based)."""
    if isinstance(lab, Coset):
        return lab.label(G)
    if isinstance(lab, (tuple, list)):
        return [encode_label(G, x) for x in lab]
    if isinstance(lab, (int, str)):
        return lab
    raise TypeError(f"cannot encode label {lab!r}")


def encode_basis(G, x: Complex) -> dict:
    return {str(d): [encode_label(G, lab) for lab in labs] for d, labs in sorted(x.basis.items())}


def sigma_certificate(cert: SigmaCert) -> dict:
    sys = cert.system
    G = sys.group
    x = cert.complex
    return {
        "schema": SCHEMA_VERSION,
        "kind": "contraction",
        "group": str(G.type),
        "i0": mask_to_list(sys.i0),
        "order": [s + 1 for s in cert.order],
        "order_b": [s + 1 for s in cert.order_b],
        "reading": cert.reading,
        "basis": encode_basis(G, x),
        "maps": {"sigma": encode_graded(cert.contraction.maps)},
        "mcoeffs": [[a.label(G), b.label(G), format_scalar(c)] for (a, b), c in cert.coeffs() if c],
    }


def equivalence_certificate(*, algebra: str, theorem: str, group: str, i0: int, order, params,
                            labels_group, cert, source: Complex | None = None, phi=None,
                            psi=None) -> dict:
    """Certificate for Y ~ Y' given by (p, g, k), optionally with an iso X -> Y."""
    out = {
        "schema": SCHEMA_VERSION,
        "kind": "equivalence",
        "algebra": algebra,
        "theorem": theorem,
        "group": group,
        "i0": mask_to_list(i0),
        "order": [s + 1 for s in order],
        "params": list(params),
        "basis": {"Y": encode_basis(labels_group, cert.y), "Y'": encode_basis(labels_group, cert.yp)},
        "diffs": {"Y": encode_graded(cert.y.diff), "Y'": encode_graded(cert.yp.diff)},
        "maps": {"p": encode_graded(cert.p), "g": encode_graded(cert.g), "k": encode_graded(cert.k)},
    }
    if source is not None:
        out["basis"]["X"] = encode_basis(labels_group, source)
        out["diffs"]["X"] = encode_graded(source.diff)
        out["maps"]["phi"] = encode_graded(phi)
        out["maps"]["psi"] = encode_graded(psi)
    return out


def hecke_restriction_json(H, result, i0: int) -> dict:
    return equivalence_certificate(
        algebra="hecke", theorem="hecke-restriction", group=str(H.group.type), i0=i0, order=result.sigma.order,
        params=H.names, labels_group=H.group, cert=result.cert, source=result.x, phi=result.phi,
        psi=result.psi,
    )


def steinberg_restriction_json(bn, result, i0: int) -> dict:
    return equivalence_certificate(
        algebra="group", theorem="steinberg-restriction", group=bn.name, i0=i0, order=result.sigma.order, params=[],
        labels_group=bn.W, cert=result.cert,
    )


def levi_restriction_json(bn, result, i0: int) -> dict:
    return equivalence_certificate(
        algebra="group", theorem="levi-restriction", group=bn.name, i0=i0, order=result.sigma.order, params=[],
        labels_group=bn.W, cert=result.cert, source=result.xe, phi=result.phi, psi=result.psi,
    )


def dumps(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, separators=(",", ":")) + "\n"


def write(cert: dict, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(cert))


def read(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _bump(v):
    """v + 1 in serialized form."""
    if isinstance(v, dict):
        out = dict(v)
        out["1"] = out.get("1", 0) + 1
        if not out["1"]:
            del out["1"]
        return out
    f = Fraction(v) + 1
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def perturb(cert: dict, rng) -> tuple[dict, str]:
    """Copy of ``cert`` with one scalar entry increased by 1, and where it was changed.

    The position is drawn uniformly over every stored matrix cell (zero or
    not) and every m-coefficient.
    """
    out = json.loads(json.dumps(cert))
    slots = []
    for group in ("maps", "diffs"):
        for name, graded in out.get(group, {}).items():
            for d, m in graded.items():
                r, c = m["shape"]
                if r * c:
                    slots.append((group, name, d, r * c))
    if out.get("mcoeffs"):
        slots.append(("mcoeffs", None, None, len(out["mcoeffs"])))
    total = sum(s[3] for s in slots)
    pick = rng.randrange(total)
    for group, name, d, size in slots:
        if pick >= size:
            pick -= size
            continue
        if group == "mcoeffs":
            entry = out["mcoeffs"][pick]
            entry[2] = _bump(entry[2])
            return out, f"mcoeffs[{pick}]"
        m = out[group][name][d]
        ncols = m["shape"][1]
        r, c = divmod(pick, ncols)
        for e in m["entries"]:
            if e[0] == r and e[1] == c:
                e[2] = _bump(e[2])
                break
        else:
            m["entries"].append([r, c, "1"])
        return out, f"{group}.{name}[{d}][{r},{c}]"
    raise AssertionError("unreachable")
