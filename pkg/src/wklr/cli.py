"""Command line front end.

Exit codes: 0 success, 1 failed check, 2 unparsable input, 3 invalid
input, 4 instance over the size bounds.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Sequence

import click

from .algebra import ZERO_MISMATCH, AlgebraError, WklrAlgebra
from .diagrams import DiagramError
from .hall import HallError, check_hq_algebra_map
from .loading import Loading, LoadingError, SizeError, enumerate_chambers
from .polyops import perm_sort_key, poly_str
from .quiver import Quiver, QuiverError, loads, validate
from .relations import RelationReport, check_loading, dimension_vectors
from .steady import Charge, ChargeError, cb_preset, steadied_graded_dim

EXIT_FAILED, EXIT_PARSE, EXIT_INVALID, EXIT_SIZE = 1, 2, 3, 4


class ParseError(click.ClickException):
    exit_code = EXIT_PARSE


class InvalidInput(click.ClickException):
    exit_code = EXIT_INVALID


class TooLarge(click.ClickException):
    exit_code = EXIT_SIZE


# ------------------------------------------------------------------ parsing

def read_quiver(path: str) -> Quiver:
    try:
        with open(path, encoding="utf-8") as fh:
            q = loads(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}")
    except (json.JSONDecodeError, QuiverError) as exc:
        raise ParseError(f"{path}: {exc}")
    problems = validate(q)
    if problems:
        raise InvalidInput("; ".join(problems))
    return q


def parse_nu(text: str, q: Quiver) -> tuple:
    try:
        nu = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"bad dimension vector {text!r}")
    if len(nu) != q.vertex_count or any(v < 0 for v in nu) or not any(nu):
        raise InvalidInput(f"dimension vector {text!r} does not fit a quiver with {q.vertex_count} vertices")
    return nu


def parse_loading(text: str, q: Quiver) -> Loading:
    """``"label@position,..."``; positions may be rationals such as ``1/3``."""
    text = text.strip().strip("()")
    pts = []
    try:
        for part in filter(None, (p.strip() for p in text.split(","))):
            label, _, pos = part.partition("@")
            pts.append((Fraction(pos), int(label)))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad loading {text!r}")
    if not pts:
        raise ParseError("empty loading")
    if any(not 0 <= v < q.vertex_count for _, v in pts):
        raise InvalidInput(f"loading {text!r} uses a label outside the quiver")
    try:
        return Loading.of(pts)
    except LoadingError as exc:
        raise InvalidInput(str(exc))


def parse_word(text: str) -> List[tuple]:
    """Generators such as ``psi0*y1*e``, multiplied as written (rightmost acts first)."""
    out = []
    for tok in filter(None, (t.strip() for t in text.split("*"))):
        if tok == "e":
            out.append(("e", 0))
            continue
        for head in ("psi", "y"):
            if tok.startswith(head) and tok[len(head):].isdigit():
                out.append((head, int(tok[len(head):])))
                break
        else:
            raise ParseError(f"bad generator {tok!r}")
    if not out:
        raise ParseError("empty word")
    return out


# ------------------------------------------------------------------ output

def emit(header: Sequence[str], rows: Sequence[Sequence], fmt: str):
    rows = [[str(x) for x in r] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        click.echo(buf.getvalue(), nl=False)
        return
    widths = [max([len(h)] + [len(r[k]) for r in rows]) for k, h in enumerate(header)]
    click.echo("  ".join(h.ljust(n) for h, n in zip(header, widths)).rstrip())
    for r in rows:
        click.echo("  ".join(x.ljust(n) for x, n in zip(r, widths)).rstrip())


def element_rows(x):
    rows = []
    for pi, p in sorted(x.coeffs, key=lambda t: perm_sort_key(t[0])):
        for exp, c in sorted(p.terms.items()):
            rows.append([" ".join(str(a) for a in pi), " ".join(str(e) for e in exp), c])
    return rows


def pool_map(fn, args, threads: int):
    if threads <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, args))


def guarded(fn):
    """Map library exceptions onto exit codes."""
    def run(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SizeError as exc:
            raise TooLarge(str(exc))
        except (AlgebraError, DiagramError, LoadingError, ChargeError, HallError, QuiverError) as exc:
            raise InvalidInput(str(exc))
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# ------------------------------------------------------------------ commands

quiver_opt = click.option("--quiver", "quiver_path", required=True, type=click.Path(dir_okay=False),
                          help="Quiver document (JSON).")
format_opt = click.option("--format", "fmt", type=click.Choice(["table", "csv"]), default="table",
                          show_default=True)
threads_opt = click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)


@click.group()
def main():
    """Computations in weighted KLR algebras."""


@main.command()
@quiver_opt
@click.option("--nu", required=True, help="Dimension vector, e.g. 1,1.")
@format_opt
@guarded
def chambers(quiver_path, nu, fmt):
    """List one representative loading per chamber."""
    q = read_quiver(quiver_path)
    cs = enumerate_chambers(q, parse_nu(nu, q))
    emit(["index", "loading"], [[k, r] for k, r in enumerate(cs.representatives)], fmt)


@main.command()
@quiver_opt
@click.option("--src", required=True, help="Source loading, e.g. 0@0,1@1/2.")
@click.option("--tgt", required=True, help="Target loading.")
@format_opt
@guarded
def basis(quiver_path, src, tgt, fmt):
    """Permutations indexing the basis between two loadings, with degrees."""
    q = read_quiver(quiver_path)
    alg = WklrAlgebra(q)
    a, b = parse_loading(src, q), parse_loading(tgt, q)
    alg.check_generic(a)
    alg.check_generic(b)
    rows = [[" ".join(map(str, p)), alg.basis_degree(p, a, b)] for p in alg.basis_perms(a, b)]
    emit(["perm", "degree"], rows, fmt)


@main.command()
@quiver_opt
@click.option("--src", required=True, help="Loading the word starts from.")
@click.option("--word", required=True, help="Product of generators psiK, yK, e; rightmost acts first.")
@format_opt
@guarded
def mult(quiver_path, src, word, fmt):
    """Straightened coordinates of a product of generators."""
    q = read_quiver(quiver_path)
    alg = WklrAlgebra(q)
    cur = alg.canonical(parse_loading(src, q))
    factors = []
    for kind, k in reversed(parse_word(word)):
        if kind == "e":
            x = alg.idempotent(cur)
        elif kind == "y":
            x = alg.dot(cur, k)
        else:
            x = alg.psi(cur, k)
        factors.append(x)
        cur = x.tgt
    prod = alg.product(*reversed(factors))
    if prod is ZERO_MISMATCH:
        raise InvalidInput("factors are not composable")
    click.echo(f"# {prod.src} -> {prod.tgt}")
    emit(["perm", "exponent", "coefficient"], element_rows(prod), fmt)


def _graded_job(job):
    q, si, src, ti, tgt, cutoff = job
    return [(si, ti, d, n) for d, n in WklrAlgebra(q).graded_dim(src, tgt, cutoff)]


@main.command("graded-dim")
@quiver_opt
@click.option("--nu", required=True)
@click.option("--cutoff", type=int, required=True, help="Highest degree listed.")
@threads_opt
@format_opt
@guarded
def graded_dim(quiver_path, nu, cutoff, threads, fmt):
    """Graded dimensions between all chamber representatives."""
    q = read_quiver(quiver_path)
    reps = enumerate_chambers(q, parse_nu(nu, q)).representatives
    jobs = [(q, si, s, ti, t, cutoff) for si, s in enumerate(reps) for ti, t in enumerate(reps)]
    rows = [r for part in pool_map(_graded_job, jobs, threads) for r in part]
    emit(["src_index", "tgt_index", "degree", "dim"], rows, fmt)


def _relations_job(job):
    q, rep = job
    return check_loading(q, rep)


@main.command("relations-check")
@quiver_opt
@click.option("--max-points", type=click.IntRange(min=1), default=3, show_default=True)
@threads_opt
@format_opt
@guarded
def relations_check(quiver_path, max_points, threads, fmt):
    """Check every local relation on chamber representatives."""
    q = read_quiver(quiver_path)
    jobs = [(q, rep) for nu in dimension_vectors(q.vertex_count, max_points)
            for rep in enumerate_chambers(q, nu).representatives]
    report = RelationReport()
    for part in pool_map(_relations_job, jobs, threads):
        report.merge(part)
    names = sorted({x.relation for x in report.instances})
    rows = [[n, report.count(n), sum(1 for x in report.failures if x.relation == n)] for n in names]
    emit(["relation", "instances", "failures"], rows, fmt)
    for x in report.failures:
        click.echo(f"FAILED {x.relation} at {x.loading} {x.where}: {x.detail}", err=True)
    if not report.ok:
        sys.exit(EXIT_FAILED)


@main.command("steady-dim")
@quiver_opt
@click.option("--nu", required=True)
@click.option("--cutoff", type=int, required=True)
@click.option("--charge", default=None, help='"re/im,..." per vertex; defaults to the Crawley-Boevey preset.')
@click.option("--reduced", is_flag=True, help="Also kill dots on the Crawley-Boevey strand.")
@format_opt
@guarded
def steady_dim(quiver_path, nu, cutoff, charge, reduced, fmt):
    """Graded dimensions of the steadied quotient."""
    q = read_quiver(quiver_path)
    nu = parse_nu(nu, q)
    if charge is None:
        c = cb_preset(q)
    else:
        try:
            c = Charge.parse(charge)
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ChargeError) and "upper half plane" in str(exc):
                raise InvalidInput(str(exc))
            raise ParseError(f"bad charge {charge!r}")
        if len(c.values) != q.vertex_count:
            raise InvalidInput("charge needs one value per vertex")
    comp, table = steadied_graded_dim(q, nu, c, cutoff, reduced=reduced)
    for k, obj in enumerate(comp.objects):
        click.echo(f"# {k}: {obj}")
    emit(["src_index", "tgt_index", "degree", "dim"], [[*k, v] for k, v in sorted(table.items())], fmt)


@main.command("hall-check")
@quiver_opt
@click.option("--prime", type=int, required=True)
@click.option("--i", "i_text", required=True, help="First loading.")
@click.option("--j", "j_text", required=True, help="Second loading.")
@format_opt
@guarded
def hall_check(quiver_path, prime, i_text, j_text, fmt):
    """Compare the trace function of a composition with the Hall product."""
    q = read_quiver(quiver_path)
    if prime < 2 or any(prime % k == 0 for k in range(2, int(prime ** 0.5) + 1)):
        raise InvalidInput(f"{prime} is not prime")
    res = check_hq_algebra_map(q, parse_loading(i_text, q), parse_loading(j_text, q), prime)
    emit(["rep", "composition", "product"], res.rows, fmt)
    if not res.ok:
        sys.exit(EXIT_FAILED)


@main.command()
@quiver_opt
@click.option("--to", "target_path", required=True, type=click.Path(dir_okay=False),
              help="The same quiver with the target weighting.")
@click.option("--src", required=True)
@click.option("--tgt", required=True)
@format_opt
@guarded
def interp(quiver_path, target_path, src, tgt, fmt):
    """Operator of the interpolation between two weightings."""
    q0, q1 = read_quiver(quiver_path), read_quiver(target_path)
    op = WklrAlgebra(q0).interp_operator(q1, parse_loading(src, q0), parse_loading(tgt, q1))
    rows = [[" ".join(map(str, p)), poly_str(f.num),
             " ".join(f"(y{a + 1}-y{b + 1})" for a, b in f.den) or "1"]
            for p, f in sorted(op.comps.items(), key=lambda t: perm_sort_key(t[0]))]
    emit(["perm", "numerator", "denominator"], rows, fmt)


if __name__ == "__main__":
    main()
