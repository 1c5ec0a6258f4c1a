"""Command-line driver: verification suites and single computations, JSON in and out.

Exit codes: 0 success, 1 a check failed, 2 bad input.  ``LW_LOG`` sets the
logging level (e.g. ``LW_LOG=debug``); logs go to standard error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb
from typing import Any, Callable

from . import __version__
from .diffop import (
    DiffOperator,
    PolyBasis,
    adjoint_is_involutive,
    formal_adjoint,
    is_anti_self_adjoint,
    is_self_adjoint,
    operator_from_basis,
    osculating_space,
    self_adjoint_center_check,
    self_dual_structure,
    verify_wronski_is_projection,
    wronski_center,
    wronski_of_subspace,
    wronski_projection,
    wronskian,
)
from .errors import LWError
from .exact import Matrix, Poly
from .exterior import ExteriorTensor, Subspace, plucker
from .projection import (
    Center,
    ProjectionMap,
    center_meets_grassmannian,
    degree_by_sampling,
    fiber_solve_gr24,
    random_subspace,
)
from .serial import (
    matrix_from_json,
    poly_from_json,
    poly_to_json,
    scalar_from_json,
    tensor_from_json,
    to_json,
)
from .symplectic import SymplecticSpace
from .syslin import (
    StateSpace,
    demo_system,
    even_fiber_witness,
    find_symplectic_structure,
    generic_gain,
    hermann_martin,
    pole_placement_projection,
    pole_polynomial,
    random_gain,
    transfer_function,
)

log = logging.getLogger("lagwronski")

SUITES = ("involution", "decomposition", "wronski", "adjoint", "poles")
SUITE_RANGE = {"involution": (1, 4), "decomposition": (1, 5), "wronski": (1, 3), "adjoint": (1, 3), "poles": (1, 2)}


class InputError(Exception):
    """Malformed command-line or JSON input (exit code 2)."""


def _check(name: str, passed: bool, witness: Any = None) -> dict:
    return {"name": name, "passed": bool(passed), "witness": to_json(witness)}


# ---------------------------------------------------------------------------
# suites


def suite_involution(m: int, seed: int, trials: int) -> list[dict]:
    S = SymplecticSpace.darboux(m)
    L = S.involution_matrix
    out = [_check("square_is_identity", L @ L == Matrix.identity(L.nrows), {"dim": L.nrows})]
    for p, basis in sorted(S.decomposition(m).summands.items()):
        sign = -1 if p % 2 else 1
        bad = [t for t in basis if S.lagrangian_involution(t) != t * sign]
        out.append(_check(f"acts_by_sign_on_summand_{p}", not bad, {"sign": sign, "size": len(basis), "failures": bad[:1]}))
    plus, minus = S.involution_eigenspaces
    out.append(_check("eigenspaces_span", plus.dim + minus.dim == comb(2 * m, m), {"plus": plus.dim, "minus": minus.dim}))
    return out


def suite_decomposition(m: int, seed: int, trials: int) -> list[dict]:
    S = SymplecticSpace.darboux(m)
    out = []
    h = len(S.primitive_subspace(m))
    expected = comb(2 * m, m) - (comb(2 * m, m - 2) if m >= 2 else 0)
    out.append(_check("primitive_dimension", h == expected, {"computed": h, "expected": expected}))
    bound = comb(2 * m, m) - (comb(2 * m - 2, m - 2) if m >= 2 else 0)
    out.append(_check("primitive_upper_bound", h <= bound, {"computed": h, "bound": bound}))
    for k in range(m + 1):
        D = S.decomposition(k)
        total = sum(D.dims().values())
        out.append(_check(f"summands_total_grade_{k}", total == comb(2 * m, k) and D.is_direct_sum(),
                          {"dims": D.dims(), "total": total}))
    rng = random.Random(seed)
    ok = True
    for _ in range(trials):
        v = ExteriorTensor.from_vector(2 * m, m, [rng.randint(-3, 3) for _ in range(comb(2 * m, m))])
        parts = S.decompose(v)
        ok &= sum(parts.values(), ExteriorTensor.zero(2 * m, m)) == v
    out.append(_check("decompose_round_trip", ok, {"trials": trials}))
    return out


def suite_wronski(m: int, seed: int, trials: int) -> list[dict]:
    fs = PolyBasis.monomials(2 * m)
    out = []
    L = operator_from_basis(fs)
    out.append(_check("operator_is_pure_derivative", L == DiffOperator.d(2 * m), str(L)))
    out.append(_check("operator_annihilates_basis", all(L.apply(f).is_zero() for f in fs), None))
    C = wronski_center(fs, m)
    dim_U = comb(2 * m, m) - C.dim
    out.append(_check("dim_U", 0 < dim_U, {"dim_U": dim_U, "center_dim": C.dim}))
    out.append(_check("wronski_is_projection", verify_wronski_is_projection(fs, m, trials, seed), {"trials": trials}))
    rng = random.Random(seed)
    sd = self_dual_structure(fs)
    psi = sd.psi if sd else None
    lag = psi is not None
    S_dual = SymplecticSpace(psi) if lag else None
    for _ in range(10):
        t0 = Fraction(rng.randint(-20, 20), rng.randint(1, 7))
        E = osculating_space(fs, m - 1, t0)
        lag &= S_dual is not None and S_dual.is_lagrangian(E)
    out.append(_check("osculating_lagrangian", lag, {"psi": psi}))
    chk = self_adjoint_center_check(fs, m, sd)
    out.append(_check("self_adjoint_center", chk.passed,
                      {"primitive": chk.curve_primitive, "theta_in_Z": chk.theta_in_center,
                       "dim_U": chk.dim_U, "bound": chk.bound}))
    if m == 2:
        P = wronski_projection(fs, 2)
        H = Subspace.coordinate(4, [1, 2])
        S_V = SymplecticSpace.from_psi(psi)
        rep = fiber_solve_gr24(P, P.apply(plucker(H)), S_V)
        expected = {H, Subspace.coordinate(4, [0, 3])}
        out.append(_check("fiber_over_t_squared", set(rep.points) == expected and rep.pairing == (1, 0),
                          {"points": list(rep.points), "pairing": list(rep.pairing)}))
    return out


def random_operator(rng: random.Random, order: int, deg: int = 3) -> DiffOperator:
    return DiffOperator([Poly([rng.randint(-4, 4) for _ in range(rng.randint(0, deg + 1))]) for _ in range(order)])


def suite_adjoint(m: int, seed: int, trials: int) -> list[dict]:
    rng = random.Random(seed)
    ops = [random_operator(rng, rng.randint(1, 5)) for _ in range(trials)]
    bad = [str(L) for L in ops if not adjoint_is_involutive(L)]
    out = [_check("adjoint_involutive", not bad, {"trials": trials, "failures": bad[:1]})]
    out.append(_check("even_derivative_self_adjoint", all(is_self_adjoint(DiffOperator.d(2 * k)) for k in range(1, m + 1)), None))
    out.append(_check("third_derivative_anti_self_adjoint", is_anti_self_adjoint(DiffOperator.d(3)), None))
    t = Poly([0, 1])
    adj, _ = formal_adjoint(DiffOperator([Poly(), t]))
    out.append(_check("adjoint_of_d2_plus_td", adj == DiffOperator([Poly([-1]), -t]), str(adj)))
    return out


def suite_poles(m: int, seed: int, trials: int) -> list[dict]:
    sysm = demo_system(seed, N=m * m, m=m)
    out = [_check("transfer_symmetric", transfer_function(sysm).is_symmetric(), None)]
    omega = find_symplectic_structure(sysm)
    out.append(_check("symplectic_structure", omega is not None, omega))
    hm = hermann_martin(sysm)
    out.append(_check("mcmillan_degree", hm.mcmillan_degree == sysm.N, {"degree": hm.mcmillan_degree, "N": sysm.N}))
    try:
        P, cert = pole_placement_projection(sysm, trials, seed)
        out.append(_check("pairing_identity", True, {"constant": cert.constant, "gains": len(cert.gains)}))
    except AssertionError as exc:
        out.append(_check("pairing_identity", False, str(exc)))
        return out
    verdict = center_meets_grassmannian(P.center, seed)
    out.append(_check("proper", verdict.kind == "disjoint", verdict.kind))
    if omega is None:
        return out
    S = SymplecticSpace(omega)
    out.append(_check("theta_in_center", P.center.contains(S.theta_multiples), None))
    plus, _ = S.involution_eigenspaces
    out.append(_check("curve_in_plus_eigenspace", plus.contains_subspace(hm.curve.coefficient_span()), None))
    rng = random.Random(seed + 1)
    partners = []
    for _ in range(min(trials, 10)):
        K = generic_gain(m, m, rng, omega if m > 1 else None)
        partners.append(even_fiber_witness(sysm, K, omega, check_center=False))
    good = all(w.same_poles and (w.distinct or m == 1) for w in partners)
    out.append(_check("even_fiber_partners", good, [{"K": w.K, "partner": w.K_partner} for w in partners[:2]]))
    return out


SUITE_FUNCS: dict[str, Callable[[int, int, int], list[dict]]] = {
    "involution": suite_involution,
    "decomposition": suite_decomposition,
    "wronski": suite_wronski,
    "adjoint": suite_adjoint,
    "poles": suite_poles,
}


def _run_suite(args: tuple[str, int, int, int]) -> tuple[str, list[dict]]:
    name, m, seed, trials = args
    return name, SUITE_FUNCS[name](m, seed, trials)


# ---------------------------------------------------------------------------
# input helpers


def _load_input(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    data = _parse_json(text, path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    return data


def _parse_json(text: str, where: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}: JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _inline(value: str | None, where: str) -> Any:
    """Inline JSON, or the contents of a file when the value names one."""
    if value is None:
        return None
    if os.path.isfile(value):
        with open(value, encoding="utf-8") as fh:
            return _parse_json(fh.read(), value)
    return _parse_json(value, where)


def _pick(args, data: dict, key: str, flag: str | None = None) -> Any:
    flag = flag or key
    v = _inline(getattr(args, flag, None), f"--{flag}")
    return v if v is not None else data.get(key)


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args, data: dict) -> dict:
    suite = args.suite
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        lo, hi = SUITE_RANGE[name]
        if suite != "all" and not lo <= args.m <= hi:
            raise InputError(f"suite {name} is implemented for {lo} <= m <= {hi}")
    jobs = [(n, min(max(args.m, SUITE_RANGE[n][0]), SUITE_RANGE[n][1]), args.seed, args.trials) for n in names]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_run_suite, jobs))
    else:
        results = [_run_suite(j) for j in jobs]
    checks = []
    for name, cs in results:
        checks.extend({**c, "name": f"{name}.{c['name']}"} for c in cs)
    return {"inputs": {"suite": suite, "m": args.m, "trials": args.trials}, "checks": checks, "results": {}}


def _center_from(data: dict, m: int, n: int) -> tuple[Center, SymplecticSpace | None]:
    S = SymplecticSpace.darboux(n // 2) if n % 2 == 0 else None
    if data.get("center") is None:
        if S is None or m != S.m:
            raise InputError("a center is required unless m = n/2 (default: theta multiples)")
        if m < 2:
            return Center.from_tensors(n, m, []), S
        return Center.from_subspace(n, m, S.theta_multiples), S
    tensors = [tensor_from_json(t, n, m) for t in data["center"]]
    return Center.from_tensors(n, m, tensors), S


def cmd_fiber(args, data: dict) -> dict:
    C, S = _center_from({"center": _pick(args, data, "center")}, 2, 4)
    P = ProjectionMap(C)
    plane = _pick(args, data, "plane")
    target = _pick(args, data, "target")
    if target is None:
        H = Subspace(matrix_from_json(plane)) if plane is not None else random_subspace(4, 2, random.Random(args.seed))
        target = P.apply(plucker(H))
    else:
        target = [scalar_from_json(x) for x in target]
    verdict = center_meets_grassmannian(C)
    if verdict.kind != "disjoint":
        raise InputError("the center meets the Grassmannian; fibers are not finite")
    use_S = S if S is not None and C.contains(S.involution_eigenspaces[1]) else None
    rep = fiber_solve_gr24(P, target, use_S)
    points = [{"plane": H, "plucker": t, "multiplicity": k} for H, t, k in zip(rep.points, rep.tensors, rep.multiplicities)]
    checks = [_check("fiber_degree", rep.degree in (0, 2), rep.degree)]
    if use_S is not None and rep.points:
        checks.append(_check("involution_preserves_fiber", all(j is not None for j in rep.pairing), list(rep.pairing)))
    return {"inputs": {"center": C.tensors(), "target": list(target)},
            "results": {"target": list(rep.target), "points": points, "degree": rep.degree,
                        "pairing": list(rep.pairing)},
            "checks": checks}


def cmd_degree(args, data: dict) -> dict:
    m = args.m
    n = int(data.get("n", 2 * m))
    C, S = _center_from({"center": _pick(args, data, "center")}, m, n)
    P = ProjectionMap(C)
    rep = degree_by_sampling(P, args.seed, args.trials, S if m >= 2 else None)
    checks = []
    if rep.exact and m == 2:
        checks.append(_check("max_fiber_is_degree", rep.max_fiber == 2, rep.max_fiber))
    elif m == 1:
        checks.append(_check("all_fibers_one", rep.max_fiber == 1 == rep.min_fiber, rep.max_fiber))
    else:
        checks.append(_check("pairs_found", rep.max_fiber >= 2, rep.max_fiber))
    return {"inputs": {"m": m, "n": n, "samples": args.trials},
            "results": {"min_fiber": rep.min_fiber, "max_fiber": rep.max_fiber,
                        "fiber_sizes": list(rep.fiber_sizes), "exact": rep.exact},
            "checks": checks}


def cmd_wronski(args, data: dict) -> dict:
    raw = _pick(args, data, "basis")
    if raw is None:
        raise InputError("wronski needs a basis (--basis or an input file with 'basis')")
    if not isinstance(raw, list) or not raw:
        raise InputError("basis must be a nonempty list of coefficient arrays")
    polys = [poly_from_json(c) for c in raw]
    n = len(polys)
    m = data.get("m", args.m_explicit if args.m_explicit is not None else max(1, n // 2))
    if not isinstance(m, int) or not 1 <= m <= n:
        raise InputError(f"m must be an integer in 1..{n}")
    fs = PolyBasis(polys)
    C = wronski_center(fs, m)
    sd = self_dual_structure(fs) if n >= 2 else None
    results: dict[str, Any] = {
        "wronskian": poly_to_json(wronskian(polys)),
        "m": m,
        "center_dim": C.dim,
        "self_dual": sd is not None,
        "psi": sd.psi if sd else None,
        "fiber": None,
    }
    try:
        L = operator_from_basis(fs)
        results["operator"] = [poly_to_json(a) for a in L.coeffs]
        results["self_adjoint"] = is_self_adjoint(L)
    except LWError:
        results["operator"] = None
    checks = [_check("wronski_is_projection", verify_wronski_is_projection(fs, m, args.trials, args.seed), None)]
    if (n, m) == (4, 2) and C.dim == 1 and center_meets_grassmannian(C).kind == "disjoint":
        P = wronski_projection(fs, 2)
        H = Subspace.coordinate(4, [1, 2]) if data.get("plane") is None else Subspace(matrix_from_json(data["plane"]))
        S_V = SymplecticSpace.from_psi(sd.psi) if sd is not None and sd.kind == "skew" else None
        rep = fiber_solve_gr24(P, P.apply(plucker(H)), S_V)
        results["fiber"] = {
            "plane_wronskian": poly_to_json(wronski_of_subspace(fs, H)),
            "points": list(rep.points),
            "multiplicities": list(rep.multiplicities),
            "pairing": list(rep.pairing),
        }
    return {"inputs": {"basis": raw, "m": m}, "results": results, "checks": checks}


def cmd_involution(args, data: dict) -> dict:
    m = args.m
    S = SymplecticSpace.darboux(m)
    raw = _pick(args, data, "tensor")
    if raw is None:
        raise InputError("involution needs --tensor (JSON list of {index, coeff})")
    v = tensor_from_json(raw, 2 * m, m)
    image = S.lagrangian_involution(v)
    parts = S.decompose(v)
    eigen = 1 if image == v else (-1 if image == -v else None)
    return {"inputs": {"m": m, "tensor": v},
            "results": {"image": image, "eigenvalue": eigen,
                        "components": {str(p): t for p, t in sorted(parts.items())}},
            "checks": [_check("involutive", S.lagrangian_involution(image) == v, None)]}


def _system_from(args, data: dict) -> StateSpace:
    source = getattr(args, "system", None)
    if source == "demo":
        return demo_system(args.seed)
    if source is not None:
        data = {**data, **_inline(source, "--system")}
    try:
        return StateSpace(matrix_from_json(data["A"]), matrix_from_json(data["B"]), matrix_from_json(data["C"]))
    except KeyError as exc:
        raise InputError(f"system is missing matrix {exc.args[0]}") from exc


def cmd_poles(args, data: dict) -> dict:
    sysm = _system_from(args, data)
    rawK = _pick(args, data, "K")
    K = matrix_from_json(rawK, sysm.p) if rawK is not None else random_gain(sysm.m, sysm.p, random.Random(args.seed))
    pp = pole_polynomial(sysm, K)
    hm = hermann_martin(sysm)
    omega = find_symplectic_structure(sysm) if sysm.m == sysm.p else None
    results: dict[str, Any] = {
        "pole_poly": poly_to_json(pp),
        "mcmillan": hm.mcmillan_degree,
        "symmetric": transfer_function(sysm).is_symmetric(),
        "omega": omega,
        "partner_K": None,
        "same_poles": None,
    }
    checks = []
    if omega is not None and sysm.is_minimal():
        P, cert = pole_placement_projection(sysm, args.trials, args.seed)
        results["pairing_constant"] = cert.constant
        checks.append(_check("pairing_identity", True, len(cert.gains)))
        w = even_fiber_witness(sysm, K, omega)
        results["partner_K"] = w.K_partner
        results["same_poles"] = w.same_poles
        checks.append(_check("same_poles", w.same_poles, None))
    return {"inputs": {"A": sysm.A, "B": sysm.B, "C": sysm.C, "K": K}, "results": results, "checks": checks}


COMMANDS = {
    "verify": cmd_verify,
    "fiber": cmd_fiber,
    "degree": cmd_degree,
    "wronski": cmd_wronski,
    "involution": cmd_involution,
    "poles": cmd_poles,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    common.add_argument("--trials", type=int, default=20, help="number of random trials or samples (default 20)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent suites (default 1)")
    common.add_argument("--input", help="JSON file with the command's inputs")
    common.add_argument("--output", help="write the report here instead of standard output")
    common.add_argument("--timing", action="store_true", help="add wall-clock time to the report (breaks byte-identical output)")

    p = argparse.ArgumentParser(
        prog="lagwronski",
        description="Exact checks for Lagrangian involutions, Wronski maps and pole placement. "
        "Environment: LW_LOG=<level> sets logging verbosity on standard error.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a property suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--m", type=int, default=2, help="size parameter (default 2)")

    f = sub.add_parser("fiber", parents=[common], help="fiber of a projection of 2-planes in 4-space")
    f.add_argument("--center", help="JSON list of tensors spanning the center (default: theta)")
    f.add_argument("--target", help="JSON quotient coordinates")
    f.add_argument("--plane", help="JSON 4x2 matrix; the target becomes its image")

    d = sub.add_parser("degree", parents=[common], help="sampled fiber sizes of a projection")
    d.add_argument("--m", type=int, default=2)
    d.add_argument("--center", help="JSON list of tensors spanning the center (default: theta multiples)")

    w = sub.add_parser("wronski", parents=[common], help="Wronskian, center and self-duality of a polynomial basis")
    w.add_argument("--basis", help="JSON list of ascending coefficient arrays")
    w.add_argument("--m", type=int, dest="m_explicit", default=None, help="plane dimension (default n/2)")

    i = sub.add_parser("involution", parents=[common], help="apply the Lagrangian involution in Darboux coordinates")
    i.add_argument("--m", type=int, default=2)
    i.add_argument("--tensor", help="JSON list of {index, coeff}")

    q = sub.add_parser("poles", parents=[common], help="pole polynomial, symmetric structure and feedback partner")
    q.add_argument("--system", help="JSON with A, B, C (inline or a path), or 'demo'")
    q.add_argument("--K", help="JSON feedback gain, m x p")
    return p


def _configure_logging():
    level = os.environ.get("LW_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        data = _load_input(args.input)
        body = COMMANDS[args.command](args, data)
    except InputError as exc:
        print(json.dumps({"error": "InputError", "message": str(exc)}), file=sys.stderr)
        return 2
    except (LWError, ValueError, TypeError, KeyError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - start
    log.info("%s finished in %.3f s", args.command, elapsed)
    report = {"command": args.command, "seed": args.seed, **body}
    report["passed"] = all(c["passed"] for c in report["checks"])
    if args.timing:
        report["wall_time"] = round(elapsed, 6)
    text = json.dumps(to_json(report), indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["passed"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
