"""Command-line entry point: ``vbounds {voronoi,torsion,bounds,cyclo} ...``.

Exit status: 0 success, 1 domain error, 2 precision or assertion failure,
64 usage error. JSON output is canonical (sorted keys, no timestamps), so
identical flags give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import constants, cyclotomic, minima, torsion
from .cache import Cache
from .chain import ChainComplexZ, ComplexError, read_matrix_text, sniff_text
from .forms import FormError

EXIT_OK, EXIT_DOMAIN, EXIT_PRECISION, EXIT_USAGE = 0, 1, 2, 64

log = logging.getLogger("voronoi_bounds")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


# --- output helpers -----------------------------------------------------------------


def _dump(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
    return "\n".join(_text_lines(obj)) + "\n"


def _text_lines(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _text_lines(obj[k], f"{prefix}{k}.")
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, item in enumerate(obj):
            yield from _text_lines(item, f"{prefix}{i}.")
    else:
        val = " ".join(map(str, obj)) if isinstance(obj, list) else obj
        yield f"{prefix.rstrip('.')}: {val}"


def _checked(result: dict, checks: dict) -> dict:
    result = dict(result)
    result["check"] = checks
    result["ok"] = all(bool(v) for v in checks.values())
    return result


# --- voronoi ------------------------------------------------------------------------


def _voronoi_enumerate(args, cache: Cache):
    from .voronoi import enumerate_perfect

    def produce() -> str:
        recs = enumerate_perfect(args.n, allow_six=args.allow_six)
        out = {"n": args.n, "count": len(recs), "classes": [r.to_json() for r in recs], "provenance": "exact"}
        return json.dumps(out, sort_keys=True)

    data = json.loads(cache.get_or_compute("voronoi.enumerate", {"n": args.n}, produce))
    if args.check:
        data = _checked(data, _voronoi_checks(args.n))
    return data


def _voronoi_checks(n: int) -> dict:
    from .voronoi import enumerate_perfect, facets
    from .voronoi.perfect import facet_orbits, neighbor_is_symmetric

    recs = enumerate_perfect(n)
    checks = {
        "all_perfect": all(minima.is_perfect(r.form) for r in recs),
        "pair_count_le_2^N-1": all(r.pair_count <= constants.s_bound(n) for r in recs),
    }
    checks["neighbor_symmetric"] = all(neighbor_is_symmetric(r, f) for r in recs for f in facet_orbits(r, facets(r)))
    if n <= 4:
        checks["prop1"] = all(minima.prop1_check(r.form).ok for r in recs)
    return checks


def _voronoi_complex(args, cache: Cache):
    from .voronoi.complex import build_complex, count_bounds_ok

    params = {"n": args.n, "group": args.group}

    def produce() -> str:
        cx = build_complex(args.n, args.group)
        return json.dumps(cx.to_json(), sort_keys=True)

    payload = cache.get_or_compute("voronoi.complex", params, produce)
    cx = ChainComplexZ.from_json(payload)
    if args.format == "text" and not args.check:
        return cx.to_text()
    homology = {str(k): torsion.homology(cx, k).to_json() for k in cx.degrees}
    data = {"complex": cx.to_json(), "homology": homology, "provenance": "exact"}
    if args.check:
        bounds = count_bounds_ok(cx)
        data = _checked(
            data,
            {
                "dd_zero": cx.check_dd(),
                "torsion_primes_le_N+1": all(
                    p <= args.n + 1 for h in homology.values() for p in torsion.prime_support(h["torsion"])
                ),
                "orbit_and_face_counts": all(bounds.values()),
            },
        )
    return data


# --- torsion --------------------------------------------------------------------------


def _load_matrix(path: str) -> list[list[int]]:
    text = Path(path).read_text() if path != "-" else sys.stdin.read()
    if text.lstrip().startswith("["):
        return json.loads(text)
    if sniff_text(text) != "matrix":
        raise ComplexError("expected a single matrix (header 'rows cols nnz')")
    return read_matrix_text(text)


def _torsion_snf(args, cache: Cache):
    m = _load_matrix(args.file)
    snf = torsion.smith_normal_form(m)
    data = {
        "invariant_factors": [str(d) for d in snf.invariant_factors],
        "rank": snf.rank,
        "torsion": [str(d) for d in snf.torsion],
        "torsion_order": str(snf.torsion_order),
        "lemma1_bound": str(torsion.lemma1_bound(m)) if any(any(r) for r in m) else "1",
        "provenance": "exact",
    }
    if args.check:
        data = _checked(data, {"lemma1_ge_torsion": int(data["lemma1_bound"]) >= snf.torsion_order, **_random_snf_checks(args)})
    return data


def _random_snf_checks(args, trials: int = 50) -> dict:
    rng = random.Random(args.seed)
    ok = True
    for _ in range(trials):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        m = [[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)]
        if not any(any(row) for row in m):
            continue
        ok &= torsion.lemma1_bound(m) >= torsion.torsion_order(m)
    return {f"random_lemma1_seed{args.seed}": ok}


def _torsion_bound(args, cache: Cache):
    cx = _load_complex(args.complex)
    b = torsion.prop3_bound(cx, args.k)
    h = torsion.homology(cx, args.k)
    data = {"bound": b.to_json(), "homology": h.to_json(), "provenance": "exact"}
    if args.check:
        data = _checked(data, {"prop3_ge_torsion": b.bound >= h.torsion_order, "dd_zero": cx.check_dd()})
    return data


def _load_complex(path: str) -> ChainComplexZ:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return ChainComplexZ.from_json(text)
    return ChainComplexZ.from_text(text)


# --- bounds ---------------------------------------------------------------------------


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"bounds {args.quantity}: --{name} is required")


def _bounds(args, cache: Cache):
    q, d = args.quantity, args.digits
    if q == "gamma":
        _need(args, "n")
        data = {"gamma": str(constants.gamma_bound(args.n)), "hermite_power": str(constants.hermite_power(args.n, args.exact_hermite)), "provenance": "exact"}
    elif q == "s":
        _need(args, "n")
        data = {"s": constants.s_bound(args.n), "provenance": "exact"}
    elif q == "a":
        _need(args, "n")
        data = {"a": str(constants.a_const(args.n)), "a_squared_exact": str(constants.a_exact_squared(args.n)), "provenance": "exact"}
    elif q == "b":
        _need(args, "n")
        data = {"b": str(constants.b_const(args.n)), "provenance": "exact"}
    elif q == "c":
        _need(args, "n", "k")
        c = constants.c_const(args.k, args.n, args.b_mode)
        data = {"c": str(c) if constants.decimal_digits(c) < constants.EXACT_DIGIT_BUDGET else None, "exact_digits": constants.decimal_digits(c), "b_mode": args.b_mode, "provenance": "exact"}
    elif q == "f":
        _need(args, "n", "k")
        data = {"f": str(constants.f_const(args.k, args.n)), "provenance": "exact"}
    elif q == "h":
        _need(args, "n", "k")
        data = constants.h_const(args.k, args.n, d, args.b_mode).to_json()
    elif q == "k":
        _need(args, "m")
        data = constants.k_const(args.m, d, args.b_mode).to_json()
    elif q == "v":
        _need(args, "n")
        data = constants.v_const(args.n, d, args.b_mode).to_json()
    elif q == "epsilon":
        _need(args, "m")
        data = {"epsilon": constants._s(constants.epsilon_poly(args.m, d), d), "precision": d, "provenance": "certified-precision"}
    elif q == "lemma2":
        _need(args, "m")
        data = constants.lemma2_check(args.m, d)
    elif q == "vandiver":
        _need(args, "n")
        data = constants.vandiver_bound_check(args.n, d)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(q)
    data = {k: v for k, v in data.items() if v is not None}
    if args.check:
        checks = {}
        if "ok" in data:
            checks["inequalities"] = data["ok"]
        if q in ("h", "k", "v"):
            again = {"h": lambda dd: constants.h_const(args.k, args.n, dd, args.b_mode), "k": lambda dd: constants.k_const(args.m, dd, args.b_mode), "v": lambda dd: constants.v_const(args.n, dd, args.b_mode)}[q](2 * d)
            checks["stable_under_doubling"] = _same_lead(data.get("ln"), again.ln, d)
        if q == "a":
            checks["a_squared_ge_exact"] = constants.a_const(args.n) ** 2 >= constants.a_exact_squared(args.n)
        data = _checked(data, checks or {"evaluated": True})
    return data


def _same_lead(a, b, digits: int) -> bool:
    if a is None or b is None:
        return a == b
    import mpmath

    with mpmath.workdps(2 * digits + 10):
        x, y = mpmath.mpf(a), mpmath.mpf(b)
        return x == y or abs(x - y) <= abs(x) * mpmath.mpf(10) ** (-(digits - 1))


# --- cyclo ------------------------------------------------------------------------------


def _cyclo(args, cache: Cache):
    op = args.op
    if op == "bernoulli":
        b = cyclotomic.bernoulli_exact(args.n)
        data = {"n": args.n, "B_n": str(b), "provenance": "exact"}
        if args.n >= 2 and args.n % 2 == 0:
            data["N_n"] = str(cyclotomic.bernoulli_numerator_Nn(args.n))
        if args.check:
            data = _checked(data, _bernoulli_checks(args.n))
    elif op == "irregular":
        if args.p is not None:
            pairs = cyclotomic.irregular_pairs(args.p)
        else:
            pairs = _irregular_scan(args.max_p, args.threads)
        data = {"pairs": [[x.p, x.k] for x in pairs], "count": len(pairs), "provenance": "exact"}
        if args.check:
            lim = min(args.p or args.max_p, 300)
            primes = [p for p in range(5, lim + 1) if cyclotomic.is_prime(p)]
            agree = all(cyclotomic.irregular_pairs(p) == cyclotomic.irregular_pairs_exact(p) for p in primes)
            data = _checked(data, {"mod_p_matches_exact_numerators": agree})
    elif op == "vandiver":
        pairs = [cyclotomic.IrregularPair(args.p, args.k)] if args.k is not None else cyclotomic.irregular_pairs(args.p)
        certs = [cyclotomic.vandiver_component_test(x.p, x.k, args.q_budget) for x in pairs]
        if args.store:
            store = cyclotomic.CertificateStore(args.store)
            for c in certs:
                store.append(c)
        data = {"certificates": [c.to_json() for c in certs], "provenance": "exact"}
        if args.check:
            data = _checked(data, {"all_component_zero": all(c.verdict == "component_zero" for c in certs)})
    elif op == "heuristic":
        rep = cyclotomic.heuristic_sum(args.x)
        data = rep.to_json()
        if args.check:
            data = _checked(data, {"paper_rhs_0.16": abs(rep.paper_rhs - 0.16) <= 0.01, "sum_matches_mertens": abs(rep.prime_sum - rep.mertens_estimate) < 1e-3})
    elif op == "kurihara":
        data = {"p": args.p, "n": args.n, "component": cyclotomic.kurihara_component(args.p, args.n), "provenance": "exact"}
    elif op == "l0":
        data = {"p": args.p, "n": args.n, "l0_mod_p": cyclotomic.l0_mod_p(args.p, args.n), "provenance": "exact"}
    elif op == "h2":
        data = {"p": args.p, "n": args.n, "order": str(cyclotomic.h2_order_even(args.p, args.n)), "provenance": "exact"}
    else:  # pragma: no cover
        raise UsageError(op)
    return data


def _bernoulli_checks(n: int) -> dict:
    b = cyclotomic.bernoulli_exact(n)
    checks = {"odd_vanish": n < 3 or n % 2 == 0 or b == 0}
    if n >= 2 and n % 2 == 0:
        bad = []
        for p in range(n + 3, n + 200):
            if cyclotomic.is_prime(p):
                num_mod = b.numerator * pow(b.denominator, -1, p) % p
                if num_mod != cyclotomic.bernoulli_mod_p(n, p):
                    bad.append(p)
        checks["mod_p_agrees"] = not bad
    return checks


def _irregular_scan(max_p: int, threads: int) -> list:
    flags = cyclotomic.kernels.prime_sieve(max_p)
    primes = [p for p in range(5, max_p + 1, 2) if flags[p]]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        chunks = list(pool.map(cyclotomic.irregular_pairs, primes))
    return [x for ch in chunks for x in ch]


# --- parser ------------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--digits", type=int, default=constants.DEFAULT_DIGITS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache-dir")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--check", action="store_true", help="run the invariant suite as well")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    top = _Parser(prog="vbounds", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", parser_class=_Parser, required=True)

    vor = sub.add_parser("voronoi", help="perfect forms and the Voronoi complex")
    vs = vor.add_subparsers(dest="op", parser_class=_Parser, required=True)
    e = vs.add_parser("enumerate", parents=[common])
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--allow-six", action="store_true", help="permit N=6 (slow)")
    e.set_defaults(handler=_voronoi_enumerate)
    c = vs.add_parser("complex", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--group", choices=("sl", "gl"), default="sl")
    c.set_defaults(handler=_voronoi_complex)

    tor = sub.add_parser("torsion", help="Smith forms and torsion bounds")
    ts = tor.add_subparsers(dest="op", parser_class=_Parser, required=True)
    s = ts.add_parser("snf", parents=[common])
    s.add_argument("file", help="matrix file (sparse text or JSON list of rows), '-' for stdin")
    s.set_defaults(handler=_torsion_snf)
    b = ts.add_parser("bound", parents=[common])
    b.add_argument("--complex", required=True)
    b.add_argument("--k", type=int, required=True)
    b.set_defaults(handler=_torsion_bound)

    bnd = sub.add_parser("bounds", parents=[common], help="explicit constants")
    bnd.add_argument("quantity", choices=("gamma", "s", "a", "b", "c", "f", "h", "k", "v", "epsilon", "lemma2", "vandiver"))
    bnd.add_argument("--n", type=int)
    bnd.add_argument("--k", type=int)
    bnd.add_argument("--m", type=int)
    bnd.add_argument("--b-mode", choices=("exact", "ceil"), default="exact")
    bnd.add_argument("--exact-hermite", action="store_true")
    bnd.set_defaults(handler=_bounds)

    cyc = sub.add_parser("cyclo", help="Bernoulli numbers and cyclotomic units")
    cs = cyc.add_subparsers(dest="op", parser_class=_Parser, required=True)
    x = cs.add_parser("bernoulli", parents=[common])
    x.add_argument("--n", type=int, required=True)
    x = cs.add_parser("irregular", parents=[common])
    grp = x.add_mutually_exclusive_group(required=True)
    grp.add_argument("--p", type=int)
    grp.add_argument("--max-p", type=int)
    x = cs.add_parser("vandiver", parents=[common])
    x.add_argument("--p", type=int, required=True)
    x.add_argument("--k", type=int)
    x.add_argument("--q-budget", type=int, default=10)
    x.add_argument("--store", help="append certificates to this JSON-lines file")
    x = cs.add_parser("heuristic", parents=[common])
    x.add_argument("--x", type=int, default=4_000_000)
    for name in ("kurihara", "l0", "h2"):
        x = cs.add_parser(name, parents=[common])
        x.add_argument("--p", type=int, required=True)
        x.add_argument("--n", type=int, required=True)
    for sp in cs.choices.values():
        sp.set_defaults(handler=_cyclo)
    return top


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.digits < constants.MIN_DIGITS:
            raise UsageError(f"--digits must be >= {constants.MIN_DIGITS}")
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
    except UsageError as exc:
        sys.stderr.write(str(exc).rstrip() + "\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    random.seed(args.seed)
    cache = Cache(args.cache_dir, enabled=not args.no_cache)
    try:
        result = args.handler(args, cache)
    except UsageError as exc:
        sys.stderr.write(str(exc) + "\n")
        return EXIT_USAGE
    except (constants.PrecisionError, AssertionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PRECISION
    except (FormError, ComplexError, cyclotomic.DomainError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    text = result if isinstance(result, str) else _dump(result, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if isinstance(result, dict) and result.get("ok") is False and args.check:
        return EXIT_PRECISION
    return EXIT_OK


def _prefixed(cmd: str):
    def run(argv=None) -> int:
        return main([cmd, *(sys.argv[1:] if argv is None else argv)])

    return run


voronoi_main = _prefixed("voronoi")
torsion_main = _prefixed("torsion")
bounds_main = _prefixed("bounds")
cyclo_main = _prefixed("cyclo")


if __name__ == "__main__":
    sys.exit(main())
