"""Command line interface.

    qfcanon symbol FILE -p P [-k K]
    qfcanon canon FILE -p P [-k K] [--seed S] [--json]
    qfcanon equiv FILE_A FILE_B -p P [-k K] [--seed S] [--json]
    qfcanon represent FILE -t T -p P -k K [--seed S] [--json]

A matrix file holds n on its first non-comment line followed by n rows of n
integers; '#' starts a comment.  Exit codes: 0 ok, 1 inequivalent, 2 bad
input, 3 degenerate form, 4 randomized search exhausted, 10 internal error.
"""

import argparse
from dataclasses import dataclass
import json
import random
import sys

from .canon import canonicalize, transform_between
from .errors import (Degenerate, Inequivalent, NoRepresentation, NotPrime, NotSymmetric,
                     PrecisionTooLow, QFError, RetriesExhausted, WitnessError)
from .matmod import IntQuadForm, Witness
from .modint import PrimePower, completion_offset, padic_split
from .represent import quad_value, represent_general
from .symbols import canonical_two_symbol, format_two_symbol, p_symbol, two_symbol

EXIT_OK, EXIT_INEQUIVALENT, EXIT_USAGE, EXIT_DEGENERATE, EXIT_RETRIES, EXIT_INTERNAL = 0, 1, 2, 3, 4, 10
PIPELINE_ATTEMPTS = 3


class MatrixFileError(QFError, ValueError):
    pass


@dataclass(frozen=True)
class MatrixFile:
    path: str
    form: IntQuadForm


def parse_matrix_text(text):
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise MatrixFileError("empty matrix file")
    try:
        n = int(lines[0])
        rows = [[int(v) for v in line.split()] for line in lines[1:]]
    except ValueError as e:
        raise MatrixFileError(f"not an integer: {e}") from None
    if n < 1:
        raise MatrixFileError("dimension must be positive")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise MatrixFileError(f"expected {n} rows of {n} integers")
    try:
        return IntQuadForm(rows)
    except NotSymmetric:
        raise MatrixFileError("matrix is not symmetric") from None


def read_matrix_file(path):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as e:
        raise MatrixFileError(str(e)) from None
    return MatrixFile(path, parse_matrix_text(text))


def _default_k(q, p, k):
    d = q.det()
    if d == 0:
        raise Degenerate("form is singular")
    k0 = padic_split(d, p)[0] + completion_offset(p)
    if k is not None and k < k0:
        raise PrecisionTooLow(f"k = {k} is below ord_p(det) + k_p = {k0}")
    return k0 if k is None else k


def _rng(seed, attempt):
    return random.Random(seed if attempt == 0 else seed * 1000003 + attempt)


def _retry(fn, seed):
    last = None
    for attempt in range(PIPELINE_ATTEMPTS):
        try:
            return fn(_rng(seed, attempt))
        except RetriesExhausted as e:
            last = e
    raise last


def _matrix_lines(rows):
    w = max((len(str(v)) for r in rows for v in r), default=1)
    return [" ".join(str(v).rjust(w) for v in r) for r in rows]


def _emit(out, lines):
    for line in lines:
        print(line, file=out)


def cmd_symbol(args, out):
    q = read_matrix_file(args.input).form
    k = _default_k(q, args.p, args.k)
    if args.p == 2:
        sym = two_symbol(q, k)
        raw, canon = format_two_symbol(sym), canonical_two_symbol(sym).format()
        if args.json:
            print(json.dumps({"p": 2, "k": k, "n": q.n, "symbol": raw, "canonical": canon}), file=out)
        else:
            _emit(out, [f"p = 2, k = {k}", f"2-symbol:  {raw}", f"canonical: {canon}"])
    else:
        sym = p_symbol(q, args.p, k).format()
        if args.json:
            print(json.dumps({"p": args.p, "k": k, "n": q.n, "symbol": sym}), file=out)
        else:
            _emit(out, [f"p = {args.p}, k = {k}", sym])
    return EXIT_OK


def _verify(q, target, u, pk):
    # re-check independently of the library's own witness construction
    try:
        Witness(q.tolist(), target, u, pk)
    except WitnessError as e:
        raise WitnessError(f"verification failed: {e}") from None


def cmd_canon(args, out):
    q = read_matrix_file(args.input).form
    k = _default_k(q, args.p, args.k)
    c, w = _retry(lambda rng: canonicalize(q, args.p, k, rng), args.seed)
    _verify(q, c.matrix.tolist(), w.u, w.pk)
    if args.json:
        print(json.dumps({"p": args.p, "k": k, "n": q.n, "seed": args.seed,
                          "canonical": c.matrix.flat(), "witness": w.u.flat()}), file=out)
    else:
        _emit(out, [f"p = {args.p}, k = {k}", f"blocks: {c.form}", "canonical:"])
        _emit(out, _matrix_lines(c.matrix.entries))
        _emit(out, ["witness:"] + _matrix_lines(w.u.entries) + ["VERIFIED"])
    return EXIT_OK


def cmd_equiv(args, out):
    a = read_matrix_file(args.input_a).form
    b = read_matrix_file(args.input_b).form
    k = _default_k(a, args.p, args.k)
    try:
        w = _retry(lambda rng: transform_between(a, b, args.p, k, rng), args.seed)
    except Inequivalent as e:
        if args.json:
            print(json.dumps({"p": args.p, "k": k, "equivalent": False, "difference": e.difference}), file=out)
        else:
            _emit(out, ["INEQUIVALENT", f"differs: {e.difference}"])
        return EXIT_INEQUIVALENT
    _verify(a, b.tolist(), w.u, w.pk)
    if args.json:
        print(json.dumps({"p": args.p, "k": k, "n": a.n, "seed": args.seed, "equivalent": True,
                          "witness": w.u.flat()}), file=out)
    else:
        _emit(out, ["EQUIVALENT", f"p = {args.p}, k = {k}", "witness:"]
              + _matrix_lines(w.u.entries) + ["VERIFIED"])
    return EXIT_OK


def cmd_represent(args, out):
    q = read_matrix_file(args.input).form
    pk = PrimePower(args.p, args.k)
    try:
        r = _retry(lambda rng: represent_general(q, args.t, pk, rng), args.seed)
    except NoRepresentation as e:
        if args.json:
            print(json.dumps({"p": args.p, "k": args.k, "t": args.t, "vector": None,
                              "certified_mod": e.p ** e.m}), file=out)
        else:
            _emit(out, [f"NONE (certified mod {e.p ** e.m})"])
        return EXIT_OK
    if quad_value(q.tolist(), r.vector) % pk.modulus != args.t % pk.modulus:
        raise WitnessError("representation failed re-verification")
    if args.json:
        print(json.dumps({"p": args.p, "k": args.k, "t": args.t, "vector": list(r.vector)}), file=out)
    else:
        _emit(out, ["(" + ", ".join(map(str, r.vector)) + ")",
                    f"VERIFIED: x'Qx = {args.t % pk.modulus} mod {pk.modulus}"])
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="qfcanon", description="Canonical forms of integral quadratic forms over Z/p^k.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, need_k=False):
        sp.add_argument("-p", type=int, required=True, help="prime")
        sp.add_argument("-k", type=int, required=need_k, help="precision exponent (default ord_p(det)+k_p)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json", action="store_true")

    s = sub.add_parser("symbol", help="p-symbol or 2-symbol")
    s.add_argument("input")
    common(s)
    s = sub.add_parser("canon", help="canonical form and witness")
    s.add_argument("input")
    common(s)
    s = sub.add_parser("equiv", help="decide equivalence, with a witness")
    s.add_argument("input_a")
    s.add_argument("input_b")
    common(s)
    s = sub.add_parser("represent", help="primitive representation of t")
    s.add_argument("input")
    s.add_argument("-t", type=int, required=True, help="value to represent")
    common(s, need_k=True)
    return ap


COMMANDS = {"symbol": cmd_symbol, "canon": cmd_canon, "equiv": cmd_equiv, "represent": cmd_represent}


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        PrimePower(args.p, 1)
        return COMMANDS[args.command](args, out)
    except (MatrixFileError, PrecisionTooLow, NotPrime) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Degenerate as e:
        print(f"error: degenerate form: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except RetriesExhausted as e:
        print(f"error: randomized search exhausted at stage {e.stage}", file=sys.stderr)
        return EXIT_RETRIES
    except Exception as e:  # verification failures and bugs alike
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
