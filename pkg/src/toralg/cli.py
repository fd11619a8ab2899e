"""Command-line front end.

Exit status: 0 for a definite answer, 2 when a verdict is unknown within the
search bound, 1 for input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import autgroup, fourier, iso, pell
from .errors import DomainError, NonQuadraticError, ParseError, ToralgError, UnsolvableError
from .quad import QuadNumber, QuadraticIrrational, SqrtForm, parse, square_part

SCHEMA = 1
ENV_PREFIX = "TORALG_"


@dataclass(frozen=True)
class Config:
    search_bound: int = iso.DEFAULT_BOUND
    cache_path: Optional[Path] = None
    output: str = "text"

    def __post_init__(self) -> None:
        if self.search_bound < 1:
            raise DomainError(f"search bound must be >= 1, got {self.search_bound}")
        if self.output not in ("text", "json"):
            raise DomainError(f"unknown output mode {self.output!r}")

    def cache(self) -> Optional[pell.PellCache]:
        return pell.PellCache(self.cache_path) if self.cache_path else None


def resolve_config(args: argparse.Namespace, env: Optional[dict] = None) -> Config:
    """Flags win over ``TORALG_*`` environment variables, which win over defaults."""
    env = os.environ if env is None else env
    bound = getattr(args, "bound", None)
    if bound is None and env.get(ENV_PREFIX + "BOUND"):
        try:
            bound = int(env[ENV_PREFIX + "BOUND"])
        except ValueError:
            raise DomainError(f"{ENV_PREFIX}BOUND is not an integer: {env[ENV_PREFIX + 'BOUND']!r}")
    cache = getattr(args, "cache", None) or env.get(ENV_PREFIX + "CACHE") or None
    return Config(
        search_bound=iso.DEFAULT_BOUND if bound is None else bound,
        cache_path=Path(cache) if cache else None,
        output="json" if getattr(args, "json", False) else "text",
    )


# ------------------------------------------------------------------ corpus


def corpus(U: int, V: int, W: int, Dmax: int, negative_v: bool = False) -> list[QuadraticIrrational]:
    """Positive ``(u + v sqrt(D))/w`` with ``|u| <= U``, ``v <= V``, ``w <= W``, squarefree ``D <= Dmax``.

    Deduplicated by canonical form, in order of first appearance.
    """
    seen: set = set()
    out: list[QuadraticIrrational] = []
    vs = [v for v in range(-V, V + 1) if v] if negative_v else list(range(1, V + 1))
    for D in range(2, Dmax + 1):
        if square_part(D)[0] != 1:
            continue
        for w in range(1, W + 1):
            for v in vs:
                for u in range(-U, U + 1):
                    x = QuadNumber.make(u, v, w, D)
                    if x.sign() > 0 and x not in seen:
                        seen.add(x)
                        out.append(x)
    return out


def read_corpus(path) -> list[QuadraticIrrational]:
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse(line))
        except (ParseError, DomainError) as exc:
            raise type(exc)(f"{path}:{lineno}: {exc}") from exc
    return out


# ----------------------------------------------------------------- reports


def _scalar(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, dict)):
        return json.dumps(value)
    return str(value)


def report_format(result, output: str) -> str:
    """Render a report object (dict) or result set (list) deterministically."""
    if output == "json":
        if isinstance(result, dict):
            result = {"schema": SCHEMA, **result}
        return json.dumps(result)
    if isinstance(result, list):
        return "\n".join(report_format(r, "text") for r in result) if result else "(no results)"
    return "\n".join(f"{key}: {_scalar(val)}" for key, val in result.items())


def parse_matrix(text: str) -> autgroup.GLMatrix:
    """``[[a,b],[c,d]]`` or ``a,b,c,d``."""
    try:
        data = json.loads(text)
        if isinstance(data, list) and len(data) == 4:
            data = [data[:2], data[2:]]
        return autgroup.GLMatrix.from_rows(data)
    except DomainError:
        raise
    except (json.JSONDecodeError, ValueError, TypeError):
        pass
    parts = text.replace(";", ",").split(",")
    if len(parts) != 4:
        raise ParseError(f"expected a 2x2 integer matrix, got {text!r}")
    try:
        a, b, c, d = (int(p) for p in parts)
    except ValueError:
        raise ParseError(f"expected a 2x2 integer matrix, got {text!r}")
    return autgroup.GLMatrix(a, b, c, d)


def read_poly(path: str) -> fourier.TrigPoly:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    if text.lstrip().startswith("["):
        return fourier.TrigPoly.from_json(text)
    return fourier.TrigPoly.from_text(text)


def _poly_out(f: fourier.TrigPoly, output: str) -> object:
    return {"poly": f.to_json()} if output == "json" else {"poly": "\n" + f.to_text().rstrip()}


# ---------------------------------------------------------------- commands


def cmd_pell(args, cfg: Config) -> tuple[object, int]:
    if args.k is not None:
        try:
            sol = pell.enumerate_solution(args.n, args.rhs, args.k)
        except UnsolvableError:
            return {"n": args.n, "rhs": args.rhs, "solvable": False}, 0
        return {**sol.as_dict(), "k": args.k}, 0
    sol = pell.fundamental(args.n, args.rhs, cfg.cache())
    if sol is None:
        return {"n": args.n, "rhs": args.rhs, "solvable": False}, 0
    return sol.as_dict(), 0


def cmd_gen(args, cfg: Config) -> tuple[object, int]:
    try:
        alpha = parse(args.alpha)
    except NonQuadraticError as exc:
        if not exc.positive:
            raise DomainError(f"{args.alpha!r} is not positive") from exc
        return {"alpha": args.alpha, "automorphism_group": "torus only"}, 0
    info = autgroup.generator_info(alpha, cfg.cache())
    lam = autgroup.eigen_check(info.matrix, alpha)
    form = info.form
    report = {
        "alpha": alpha.render(),
        "generator": info.matrix.rows(),
        "det": info.matrix.det,
        "eigenvalue": lam.render(),
        "pell": info.solution.as_dict(),
        "form": {"kind": "sqrt", "p": form.p, "q": form.q}
        if isinstance(form, SqrtForm)
        else {"kind": "affine", "r": form.r, "s": form.s, "k": form.k, "p": form.p, "q": form.q},
    }
    if info.d1 is not None:
        report["d1"] = info.d1
    return report, 0


def cmd_check(args, cfg: Config) -> tuple[object, int]:
    alpha = parse(args.alpha)
    A = parse_matrix(args.matrix)
    ok = autgroup.is_automorphism_matrix(A, alpha)
    report: dict = {"alpha": alpha.render(), "matrix": A.rows(), "det": A.det, "automorphism": ok}
    if ok:
        report["eigenvalue"] = autgroup.eigen_check(A, alpha).render()
        A0 = autgroup.generator(alpha, cfg.cache())
        report["generator"] = A0.rows()
        report["power"] = autgroup.power_index(A, A0, alpha)
    else:
        report["residual"] = list(autgroup.eval_quadratic(A, alpha))
        report["positive"] = autgroup.sign_linear(A.m1, A.n1, alpha) == 1
    return report, 0


def cmd_iso(args, cfg: Config) -> tuple[object, int]:
    alpha, beta = parse(args.alpha), parse(args.beta)
    res = iso.is_isomorphic(alpha, beta, cfg.search_bound)
    report: dict = {"alpha": alpha.render(), "beta": beta.render(), "isomorphic": res.isomorphic}
    if res.witness is not None:
        report["witness"] = res.witness.A.rows()
        report["verified"] = res.witness.verified
    return report, 0


def cmd_aut_iso(args, cfg: Config) -> tuple[object, int]:
    alpha, beta = parse(args.alpha), parse(args.beta)
    verdict = iso.aut_isomorphic(alpha, beta, cfg.search_bound)
    report = {"alpha": alpha.render(), "beta": beta.render(), **verdict.to_dict()}
    return report, 2 if verdict.verdict == "unknown" else 0


def cmd_conjecture(args, cfg: Config) -> tuple[object, int]:
    entries = iso.conjecture_scan(read_corpus(args.corpus_file), cfg.search_bound, args.workers)
    rows = [e.to_dict() for e in entries]
    if cfg.output == "text":
        counts = iso.scan_counts(entries)
        lines = [f"{r['alpha']}\t{r['generator']}\tdet={r['det']}\t{r['conjugate_to_inverse']}" for r in rows]
        lines.append(" ".join(f"{k}={v}" for k, v in counts.items()))
        return "\n".join(lines), 2 if counts["unknown"] else 0
    return rows, 2 if any(r["conjugate_to_inverse"] == "unknown" for r in rows) else 0


def cmd_corpus(args, cfg: Config) -> tuple[object, int]:
    values = corpus(args.U, args.V, args.W, args.Dmax, args.negative_v)
    if cfg.output == "json":
        return [x.render() for x in values], 0
    return "\n".join(x.render() for x in values), 0


def cmd_poly(args, cfg: Config) -> tuple[object, int]:
    f = read_poly(args.file)
    if args.poly_cmd == "member":
        alpha = parse(args.alpha)
        bad = [[m, n] for m, n in sorted(f.support) if autgroup.sign_linear(m, n, alpha) < 0]
        return {"alpha": alpha.render(), "member": not bad, "violations": bad}, 0
    if args.poly_cmd == "map":
        A = parse_matrix(args.matrix)
        c = autgroup.TorusPoint(*(_fraction(t) for t in args.angles)) if args.angles else None
        return _poly_out(fourier.apply_map(f, A, c), cfg.output), 0
    if args.poly_cmd == "cesaro":
        return _poly_out(fourier.cesaro(f, args.n, args.m), cfg.output), 0
    if args.poly_cmd == "measure":
        mu_k, mu = fourier.measure_pair(f, args.p, args.q)
        return {"p": args.p, "q": args.q, "mu_k": [mu_k.real, mu_k.imag], "mu": [mu.real, mu.imag], "agree": mu_k == mu}, 0
    raise AssertionError(args.poly_cmd)


def _fraction(text: str):
    from fractions import Fraction

    try:
        return Fraction(text)
    except ValueError:
        raise ParseError(f"angle must be a rational number of turns, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=argparse.SUPPRESS, help="conjugacy/witness search bound (default 100)")
    common.add_argument("--cache", default=argparse.SUPPRESS, help="Pell solution cache file")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")

    parser = argparse.ArgumentParser(prog="toralg", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pell", parents=[common], help="fundamental solution of x^2 - n y^2 = rhs")
    p.add_argument("n", type=int)
    p.add_argument("rhs", type=int, choices=pell.RHS_VALUES)
    p.add_argument("--k", type=int, help="return the k-th solution instead")
    p.set_defaults(func=cmd_pell)

    p = sub.add_parser("gen", parents=[common], help="generator of the automorphism matrices of A_alpha")
    p.add_argument("alpha")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", parents=[common], help="does a matrix induce an automorphism of A_alpha")
    p.add_argument("alpha")
    p.add_argument("matrix", help="[[m1,n1],[m2,n2]] or m1,n1,m2,n2")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("iso", parents=[common], help="is A_alpha isometrically isomorphic to A_beta")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("aut-iso", parents=[common], help="are Aut(A_alpha) and Aut(A_beta) isomorphic")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.set_defaults(func=cmd_aut_iso)

    p = sub.add_parser("conjecture", parents=[common], help="is each SL generator conjugate to its inverse")
    p.add_argument("corpus_file")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("corpus", parents=[common], help="enumerate canonical quadratic irrationals")
    p.add_argument("--U", type=int, default=4)
    p.add_argument("--V", type=int, default=4)
    p.add_argument("--W", type=int, default=4)
    p.add_argument("--Dmax", type=int, default=20)
    p.add_argument("--negative-v", action="store_true", help="also allow v < 0")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("poly", parents=[common], help="trigonometric polynomial operations")
    psub = p.add_subparsers(dest="poly_cmd", required=True)
    q = psub.add_parser("member", parents=[common])
    q.add_argument("file", help="polynomial file ('m n re im' lines or JSON), '-' for stdin")
    q.add_argument("alpha")
    q = psub.add_parser("map", parents=[common])
    q.add_argument("file")
    q.add_argument("matrix")
    q.add_argument("--angles", nargs=2, metavar=("T1", "T2"), help="rotation angles in turns, e.g. 1/4 0")
    q = psub.add_parser("cesaro", parents=[common])
    q.add_argument("file")
    q.add_argument("n", type=int)
    q.add_argument("m", type=int)
    q = psub.add_parser("measure", parents=[common])
    q.add_argument("file")
    q.add_argument("p", type=int)
    q.add_argument("q", type=int)
    p.set_defaults(func=cmd_poly)
    return parser


def _describe(exc: Exception) -> str:
    if isinstance(exc, ParseError) and exc.text:
        return f"{exc}\n  {exc.text}\n  {' ' * exc.pos}^"
    return str(exc)


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None, env: Optional[dict] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args, env)
        result, status = args.func(args, cfg)
    except (ParseError, DomainError, UnsolvableError, OSError) as exc:
        print(f"error: {_describe(exc)}", file=stderr)
        return 1
    except ToralgError as exc:
        print(f"internal error: {exc}", file=stderr)
        return 1
    text = result if isinstance(result, str) and cfg.output == "text" else report_format(result, cfg.output)
    print(text, file=stdout)
    return status


def main() -> None:
    sys.exit(run())
