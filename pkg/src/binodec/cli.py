"""Batch command line front end.

Usage examples::

    binodec subgraphs '1 -5 0; -1 1 -1; 0 3 1' --render
    binodec bounded-count 1 5 1 3
    binodec components '-2 -1 0; 3 0 1; 0 3 0; -1 -2 0; 0 0 -1'
    binodec solve '1 5; -1 -3' --format text

Exit codes: 0 success, 1 error, 2 degree budget exhausted without a
completeness certificate (the partial report is still printed).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import congruence as cg
from . import ideals as idl
from . import lattice as lat
from . import series as ser

SCHEMA_VERSION = 1
COMMANDS = (
    "subgraphs",
    "bounded-count",
    "decompose",
    "components",
    "solve",
    "snf",
    "characters",
    "verify-2x2",
)
DEFAULTS = {"budget": 50, "node_cap": cg.DEFAULT_NODE_CAP, "power": None, "truncate": None, "format": "json", "render": False}

EXIT_OK, EXIT_ERROR, EXIT_INCOMPLETE = 0, 1, 2


class UsageError(ValueError):
    code = "cli.usage"


class MatrixParseError(UsageError):
    code = "cli.parse"


# -- parsing -------------------------------------------------------------------

def parse_matrix(text: str) -> lat.IntMat:
    """Rows separated by ';' or newlines, entries by whitespace."""
    rows = [r for r in text.replace("\n", ";").split(";") if r.strip()]
    if not rows:
        raise MatrixParseError("empty matrix")
    out = []
    for i, r in enumerate(rows, 1):
        vals = []
        for j, tok in enumerate(r.split(), 1):
            try:
                vals.append(int(tok))
            except ValueError:
                raise MatrixParseError(f"row {i} col {j}: {tok!r} is not an integer") from None
        if out and len(vals) != len(out[0]):
            raise MatrixParseError(f"row {i} has {len(vals)} entries, expected {len(out[0])}")
        out.append(vals)
    return lat.IntMat.from_rows(out)


def format_matrix(M: lat.IntMat) -> str:
    return "; ".join(" ".join(str(x) for x in r) for r in M.rows)


@dataclass(frozen=True)
class JobSpec:
    command: str
    matrix: lat.IntMat
    abcd: tuple[int, ...] | None = None
    options: dict = field(default_factory=lambda: dict(DEFAULTS))

    def to_argv(self) -> list[str]:
        argv = [self.command]
        if self.abcd is not None:
            argv += [str(x) for x in self.abcd]
        else:
            argv.append(format_matrix(self.matrix))
        o = self.options
        argv += ["--budget", str(o["budget"]), "--node-cap", str(o["node_cap"]), "--format", o["format"]]
        if o["power"] is not None:
            argv += ["--power", str(o["power"])]
        if o["truncate"] is not None:
            argv += ["--truncate", str(o["truncate"])]
        if o["render"]:
            argv.append("--render")
        return argv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="binodec", description="Lattice-point combinatorics of binomial primary decomposition.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("args", nargs="*", help="matrix text, or a b c d for the 2x2 commands")
    p.add_argument("--input", help="JSON job file or plain-text matrix file")
    p.add_argument("--budget", type=int, default=DEFAULTS["budget"], help="maximal total degree for catalogs")
    p.add_argument("--node-cap", type=int, default=DEFAULTS["node_cap"], help="points per class exploration")
    p.add_argument("--power", type=int, default=None, help="exponent e of the auxiliary monomial ideal")
    p.add_argument("--truncate", type=int, default=None, help="truncation degree for unbounded classes")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--render", action="store_true", help="ASCII picture of the classes (q = 2 or 3)")
    return p


def parse_job(argv: Sequence[str], input_text: str | None = None) -> JobSpec:
    """Validate arguments into a JobSpec; raises UsageError on bad input."""
    ns = _build_parser().parse_args(list(argv))
    options = {
        "budget": ns.budget,
        "node_cap": ns.node_cap,
        "power": ns.power,
        "truncate": ns.truncate,
        "format": ns.format,
        "render": ns.render,
    }
    args = list(ns.args)
    if ns.input and input_text is None:
        with open(ns.input) as fh:
            input_text = fh.read()
    if input_text is not None:
        stripped = input_text.strip()
        if stripped.startswith("{"):
            try:
                data = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise UsageError(f"input file: {exc}") from None
            if data.get("command", ns.command) != ns.command:
                raise UsageError("command in input file differs from the command line")
            if "abcd" in data:
                args = [str(x) for x in data["abcd"]]
            elif "matrix" in data:
                m = data["matrix"]
                args = [m if isinstance(m, str) else "; ".join(" ".join(str(x) for x in r) for r in m)]
            for k, v in data.get("options", {}).items():
                if k not in options:
                    raise UsageError(f"unknown option {k!r} in input file")
                options[k] = v
        else:
            args = [stripped]
    for k in ("budget", "node_cap"):
        if options[k] < 0:
            raise UsageError(f"--{k.replace('_', '-')} must be nonnegative")

    abcd = None
    if ns.command in ("verify-2x2", "bounded-count") and len(args) == 4:
        try:
            abcd = tuple(int(a) for a in args)
        except ValueError:
            raise UsageError("expected four integers a b c d") from None
        if min(abcd) <= 0:
            raise UsageError("a, b, c, d must be positive")
        matrix = cg.two_by_two_matrix(*abcd)
    elif ns.command == "verify-2x2":
        raise UsageError("verify-2x2 takes four positive integers a b c d")
    elif len(args) == 1:
        matrix = parse_matrix(args[0])
    elif not args:
        raise UsageError("no matrix given")
    else:
        matrix = parse_matrix(" ".join(args))
    return JobSpec(ns.command, matrix, abcd, options)


# -- serialization helpers -------------------------------------------------------

def _pt(p) -> list[int]:
    return list(p)


def _certificate(c: cg.Certificate) -> dict:
    if isinstance(c, cg.CompleteAtDegree):
        return {"status": "complete", "degree": c.degree}
    return {"status": "incomplete", "max_degree": c.max_degree, "reason": c.reason}


def _catalog(cat: cg.BoundedClassCatalog) -> dict:
    out = {
        "classes": [
            {"index": i, "representative": _pt(c.representative), "size": len(c.elements), "elements": [_pt(p) for p in c.elements]}
            for i, c in enumerate(cat.classes)
        ],
        "sizes": cat.sizes(),
        "certificate": _certificate(cat.certificate),
    }
    if cat.complete:
        out["unbounded_min_gens"] = [_pt(g) for g in cg.min_gens_unbounded_ideal(cat).generators]
    return out


def _character(rho: lat.PartialCharacter) -> dict:
    return {
        "domain_basis": [_pt(v) for v in rho.domain.vectors()],
        "values": [list(v.as_pair()) for v in rho.values],
    }


def _decomposition(B, dec: idl.BlockDecomposition) -> dict:
    return {
        "q": dec.q,
        "p": dec.p,
        "rows_M": _pt(dec.rowsM),
        "cols_M": _pt(dec.colsM),
        "J": _pt(dec.J),
        "M": dec.M_block.tolist(),
        "label": idl.decomposition_label(dec),
    }


def _solution(M, G: ser.SeriesSolution) -> dict:
    chk = ser.check_solution(M, G)
    return {
        "base_point": _pt(G.base_point),
        "complete": G.complete,
        "truncation_degree": G.truncation_degree,
        "coefficients": [[_pt(u), str(c)] for u, c in G.coefficients.items()],
        "verified": chk.ok,
        "checked_terms": chk.checked,
        "excluded_boundary_terms": chk.excluded,
    }


# -- rendering -------------------------------------------------------------------

INFINITY = "∞"


def render_ascii(catalog: cg.BoundedClassCatalog, dims: int | None = None) -> str:
    """Label points by bounded class index, or the infinity sign otherwise.

    ``dims`` is the largest coordinate (q = 2) or degree (q = 3) drawn.
    Points beyond an incomplete catalog's degree budget print as '?'.
    """
    q = catalog.dimension
    if q not in (2, 3):
        return f"rendering unsupported for q = {q} (only q = 2 or 3)"
    cert = catalog.certificate
    known = cert.degree if isinstance(cert, cg.CompleteAtDegree) else cert.max_degree
    if dims is None:
        dims = known
    width = max(len(str(len(catalog.classes) - 1)) if catalog.classes else 1, 1)

    def glyph(p):
        lab = catalog.label(p)
        if lab is not None:
            s = str(lab)
        elif isinstance(cert, cg.CompleteAtDegree) or sum(p) <= known:
            s = INFINITY
        else:
            s = "?"
        return s.rjust(width)

    lines = []
    if q == 2:
        for t in range(dims, -1, -1):
            lines.append(f"{t:>3} | " + " ".join(glyph((s, t)) for s in range(dims + 1)))
        lines.append("    +-" + "-" * ((width + 1) * (dims + 1)))
        lines.append("      " + " ".join(str(s % 10).rjust(width) for s in range(dims + 1)))
    else:
        for n in range(dims + 1):
            lines.append(f"degree {n}:")
            for c in range(n, -1, -1):
                row = [glyph((a, n - c - a, c)) for a in range(n - c, -1, -1)]
                lines.append("  " + " " * ((width + 1) * c // 2) + " ".join(row))
    return "\n".join(lines)


# -- running -----------------------------------------------------------------------

@dataclass
class Report:
    command: str
    input: dict
    results: dict
    status: str
    timing: float = 0.0
    errors: list = field(default_factory=list)

    def payload(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "input": self.input,
            "status": self.status,
            "results": self.results,
        }
        if self.errors:
            out["errors"] = self.errors
        return out

    def to_json(self) -> str:
        return json.dumps(self.payload(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"command: {self.command}", f"status: {self.status}"]
        for e in self.errors:
            lines.append(f"error [{e['code']}]: {e['message']}")
        render = self.results.get("rendering")
        for k, v in self.results.items():
            if k == "rendering":
                continue
            lines.append(f"{k}: {json.dumps(v, ensure_ascii=False)}")
        if render:
            lines.append(render)
        return "\n".join(lines)


def _require_convention(B):
    idl.check_convention(B)


def _run_subgraphs(job, res):
    M = job.matrix
    moves = cg.moves_from_columns(M)
    K = cg.MonomialIdealSet.variable_powers(M.nrows, job.options["power"]) if job.options["power"] else None
    cat = cg.bounded_catalog(moves, K, job.options["budget"], job.options["node_cap"])
    res["moves"] = [_pt(w) for w in moves]
    res.update(_catalog(cat))
    if job.options["render"]:
        res["rendering"] = render_ascii(cat)
    return cat.complete


def _run_bounded_count(job, res):
    moves = cg.moves_from_columns(job.matrix)
    cat = cg.bounded_catalog(moves, None, job.options["budget"], job.options["node_cap"])
    res["count"] = len(cat.classes)
    res["certificate"] = _certificate(cat.certificate)
    if job.abcd is not None:
        a, b, c, d = job.abcd
        res["min_ad_bc"] = min(a * d, b * c)
    if job.options["render"]:
        res["rendering"] = render_ascii(cat)
    return cat.complete


def _run_decompose(job, res):
    B = job.matrix
    _require_convention(B)
    out = []
    for dec in idl.block_decompositions(B):
        entry = _decomposition(B, dec)
        lhs, rhs = idl.dimension_law(B, dec)
        entry["dimension_law"] = {"dim_bound": lhs, "rank_A_J": rhs}
        L, S = idl.lattice_pair(B, dec)
        entry["quotient_invariants"] = lat.quotient_invariants(L, S)
        out.append(entry)
    res["cokernel_A"] = lat.cokernel_matrix(B).tolist()
    res["decompositions"] = out
    return True


def _run_components(job, res):
    B = job.matrix
    _require_convention(B)
    decs = sorted((d for d in idl.block_decompositions(B) if idl.toral_filter(d)), key=lambda d: (d.q, d.rowsM))
    complete = True
    comps = []
    for dec in decs:
        for k, rho in enumerate(idl.characters_for_decomposition(B, dec)):
            entry = _decomposition(B, dec)
            entry["character_index"] = k
            entry["rho"] = _character(rho)
            try:
                comp = idl.toral_primary_component(
                    B, dec, rho, job.options["power"], job.options["budget"], node_cap=job.options["node_cap"]
                )
            except cg.IncompleteCatalogError as exc:
                complete = False
                entry["status"] = "incomplete"
                entry["certificate"] = _certificate(exc.certificate)
            else:
                entry["status"] = "complete"
                entry["U_min_gens"] = [_pt(g) for g in comp.U_min_gens.generators]
                entry["certificate_degree"] = comp.certificate_degree
                entry["K"] = [_pt(g) for g in comp.K_used.generators] if comp.K_used else None
            comps.append(entry)
    res["components"] = comps
    return complete


def _run_solve(job, res):
    M = job.matrix
    moves = cg.moves_from_columns(M)
    cat = cg.bounded_catalog(moves, None, job.options["budget"], job.options["node_cap"])
    res["certificate"] = _certificate(cat.certificate)
    res["polynomial_solutions"] = [_solution(M, ser.solve_class(c.representative, M, c)) for c in cat.classes]
    truncated = []
    if cat.complete:
        D = job.options["truncate"]
        if D is None:
            D = cat.certificate.degree + 2
        covered: set = set()
        for g in cg.min_gens_unbounded_ideal(cat).generators:
            if g in covered or sum(g) > D:
                continue
            rep = cg.explore_class(g, moves, None, job.options["node_cap"])
            if not isinstance(rep, cg.UnboundedWitness):
                continue
            G = ser.solve_class(g, M, rep, D)
            covered.update(G.coefficients)
            truncated.append(_solution(M, G))
    res["truncated_solutions"] = truncated
    return cat.complete


def _run_snf(job, res):
    M = job.matrix
    sd = lat.snf(M)
    H, U = lat.hnf(M)
    res.update(
        {
            "U": sd.U.tolist(),
            "S": sd.S.tolist(),
            "V": sd.V.tolist(),
            "invariant_factors": sd.invariant_factors,
            "hnf": {"H": H.tolist(), "U": U.tolist()},
            "rank": lat.rank(M),
        }
    )
    return True


def _run_characters(job, res):
    B = job.matrix
    L = lat.column_lattice(B)
    S = lat.saturation(L)
    res["saturation_basis"] = [_pt(v) for v in S.vectors()]
    res["cokernel_A"] = lat.cokernel_matrix(B).tolist()
    res["quotient_invariants"] = lat.quotient_invariants(L, S)
    res["characters"] = [_character(r) for r in lat.characters_extending_trivial(L, S)]
    return True


def _run_verify(job, res):
    a, b, c, d = job.abcd
    res["holds"] = cg.verify_representatives_2x2(a, b, c, d, max_degree=max(job.options["budget"], 4 * (a + b + c + d)))
    res["min_ad_bc"] = min(a * d, b * c)
    res["R"] = [_pt(p) for p in cg.representative_box(a, b, c, d)]
    return True


_RUNNERS = {
    "subgraphs": _run_subgraphs,
    "bounded-count": _run_bounded_count,
    "decompose": _run_decompose,
    "components": _run_components,
    "solve": _run_solve,
    "snf": _run_snf,
    "characters": _run_characters,
    "verify-2x2": _run_verify,
}


def run(job: JobSpec) -> tuple[Report, int]:
    echo = {"matrix": job.matrix.tolist(), "options": {k: job.options[k] for k in sorted(job.options)}}
    if job.abcd is not None:
        echo["abcd"] = list(job.abcd)
    res: dict[str, Any] = {}
    t0 = time.perf_counter()
    try:
        complete = _RUNNERS[job.command](job, res)
    except (ValueError, RuntimeError) as exc:
        code = getattr(exc, "code", "cli.error")
        err = {"code": code, "message": str(exc)}
        if hasattr(exc, "witness"):
            err["witness"] = list(exc.witness)
        report = Report(job.command, echo, res, "error", time.perf_counter() - t0, [err])
        return report, EXIT_ERROR
    report = Report(job.command, echo, res, "complete" if complete else "incomplete", time.perf_counter() - t0)
    return report, EXIT_OK if complete else EXIT_INCOMPLETE


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        job = parse_job(argv)
    except (UsageError, OSError) as exc:
        print(f"binodec: error [{getattr(exc, 'code', 'cli.usage')}]: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report, code = run(job)
    out = report.to_text() if job.options["format"] == "text" else report.to_json()
    print(out)
    print(f"binodec: {job.command} finished in {report.timing:.3f}s (kernel: {cg.KERNEL})", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
