"""Command line interface: certify, bounds, frame-operator, transform,
example, selftest.

Input files are JSON documents describing one algebra, one module
space, a named operator dictionary, a frame block wiring names
together, and an optional task block with transform parameters.
Complex numbers serialize as [re, im] pairs; matrices as row-major
nested lists of such pairs.  Every run emits exactly one JSON document
on stdout (or a flat table with --human) and is byte-deterministic for
a fixed input and seed.

Exit codes: 0 success or verified, 2 certification or inclusion
failure, 1 any other error, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .algebra import Algebra, AlgebraElement, alg_is_positive
from .errors import (CFrameError, NotIncluded, ParseError, ValidationError)
from .frames import (STATUS_FRAME, ControlledFrameSystem, certify,
                     frame_operator, frame_system, reconstruct, verify_bounds)
from .module_space import ModuleSpace, make_space
from .operators import (ModuleOperator, identity, op_classify, op_compose,
                        op_norm)
from .sequence_example import (build_example, example_certificate,
                               example_sum_identity)
from .spectral import pencil_extremes, hermitian_part
from .testing import random_system, random_vector
from .transforms import (HomomorphismSpec, compose_with_q, douglas_solve,
                         invertible_q_bounds, phi_element,
                         range_inclusion_transfer, transport)

USAGE_EXIT = 64


# -- JSON value helpers --------------------------------------------------

def _cnum(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _element_json(a: AlgebraElement) -> list[list[float]]:
    return [_cnum(v) for v in a.values]


def _matrix_json(m: np.ndarray) -> list:
    return [[_cnum(v) for v in row] for row in np.atleast_2d(m)]


def _parse_complex(v, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(t, (int, float)) for t in v)):
        return complex(v[0], v[1])
    raise ValidationError(f"{where}: expected a number or [re, im] pair")


def _parse_matrix(rows, where: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ValidationError(f"{where}: expected a nonempty matrix")
    out = []
    width = None
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not row:
            raise ValidationError(f"{where}: row {i} is not a nonempty list")
        vals = [_parse_complex(v, f"{where}[{i}][{jj}]")
                for jj, v in enumerate(row)]
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise ValidationError(f"{where}: ragged rows")
        out.append(vals)
    return np.array(out, dtype=np.complex128)


# -- system descriptions -------------------------------------------------

class SystemDescription:
    """Parsed input file: algebra, space, named operators, frame wiring."""

    def __init__(self, algebra: Algebra, space: ModuleSpace,
                 operators: dict[str, ModuleOperator],
                 family: tuple[str, ...] | None,
                 control: str | None, control_prime: str | None,
                 comparison: str | None, task: dict):
        self.algebra = algebra
        self.space = space
        self.operators = operators
        self.family = family
        self.control = control
        self.control_prime = control_prime
        self.comparison = comparison
        self.task = task

    def operator(self, name: str, where: str) -> ModuleOperator:
        if name not in self.operators:
            raise ValidationError(f"{where}: unknown operator name {name!r}")
        return self.operators[name]

    def build_system(self) -> ControlledFrameSystem:
        if self.family is None:
            raise ValidationError("frame: block is required for this command")
        fam = tuple(self.operator(n, "frame.family") for n in self.family)
        c = (self.operator(self.control, "frame.control")
             if self.control else None)
        cp = (self.operator(self.control_prime, "frame.control_prime")
              if self.control_prime else None)
        k = (self.operator(self.comparison, "frame.comparison")
             if self.comparison else None)
        return frame_system(self.space, fam, control=c, control_prime=cp,
                            comparison=k)


def _default_eps_pos() -> float:
    env = os.environ.get("CFRAME_TOLERANCE")
    if env is None:
        return 1e-10
    try:
        val = float(env)
    except ValueError as exc:
        raise ValidationError(
            f"CFRAME_TOLERANCE: not a number: {env!r}"
        ) from exc
    if val <= 0:
        raise ValidationError("CFRAME_TOLERANCE: must be positive")
    return val


def description_from_dict(doc: dict) -> SystemDescription:
    if not isinstance(doc, dict):
        raise ValidationError("top level: expected an object")
    alg_doc = doc.get("algebra")
    if not isinstance(alg_doc, dict) or "d" not in alg_doc:
        raise ValidationError("algebra: block with character count d required")
    d = alg_doc["d"]
    if not isinstance(d, int) or d < 1:
        raise ValidationError("algebra.d: must be a positive integer")
    algebra = Algebra(
        d,
        eps_pos=float(alg_doc.get("eps_pos", _default_eps_pos())),
        eps_nz=float(alg_doc.get("eps_nz", 1e-8)),
    )

    sp_doc = doc.get("space")
    if not isinstance(sp_doc, dict) or "fibers" not in sp_doc:
        raise ValidationError("space: block with fibers list required")
    fibers = sp_doc["fibers"]
    if not isinstance(fibers, list) or len(fibers) != d:
        raise ValidationError(f"space.fibers: need exactly {d} fibers")
    specs = []
    for j, f in enumerate(fibers):
        if not isinstance(f, dict) or "dim" not in f:
            raise ValidationError(f"space.fibers[{j}]: object with dim required")
        n = f["dim"]
        if not isinstance(n, int) or n < 1:
            raise ValidationError(f"space.fibers[{j}].dim: positive integer")
        if "weight" in f:
            w = _parse_matrix(f["weight"], f"space.fibers[{j}].weight")
            if w.shape != (n, n):
                raise ValidationError(
                    f"space.fibers[{j}].weight: expected shape ({n}, {n})"
                )
            specs.append((n, w))
        else:
            specs.append(n)
    space = make_space(algebra, specs)

    ops: dict[str, ModuleOperator] = {}
    for name, blocks in (doc.get("operators") or {}).items():
        if not isinstance(blocks, list) or len(blocks) != d:
            raise ValidationError(
                f"operators.{name}: need one block per fiber ({d})"
            )
        mats = []
        for j, b in enumerate(blocks):
            m = _parse_matrix(b, f"operators.{name}[{j}]")
            if m.shape != (space.dims[j], space.dims[j]):
                raise ValidationError(
                    f"operators.{name}[{j}]: expected shape "
                    f"({space.dims[j]}, {space.dims[j]})"
                )
            mats.append(m)
        ops[name] = ModuleOperator(space, space, tuple(mats))

    family = control = control_prime = comparison = None
    fr = doc.get("frame")
    if fr is not None:
        if not isinstance(fr, dict) or "family" not in fr:
            raise ValidationError("frame: object with family list required")
        fam = fr["family"]
        if (not isinstance(fam, list) or not fam
                or not all(isinstance(n, str) for n in fam)):
            raise ValidationError("frame.family: nonempty list of names")
        family = tuple(fam)
        control = fr.get("control")
        control_prime = fr.get("control_prime")
        comparison = fr.get("comparison")

    task = doc.get("task") or {}
    if not isinstance(task, dict):
        raise ValidationError("task: expected an object")

    desc = SystemDescription(algebra, space, ops, family, control,
                             control_prime, comparison, task)
    for role, name in (("control", control), ("control_prime", control_prime),
                       ("comparison", comparison)):
        if name is not None:
            if not isinstance(name, str):
                raise ValidationError(f"frame.{role}: expected a name")
            desc.operator(name, f"frame.{role}")
    if family:
        for n in family:
            desc.operator(n, "frame.family")
    return desc


def parse_system(path: str) -> SystemDescription:
    """Load and validate a system description file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    return description_from_dict(doc)


def serialize_system(desc: SystemDescription) -> dict:
    """Dictionary form that description_from_dict parses back equal."""
    fibers = []
    for j, n in enumerate(desc.space.dims):
        f: dict = {"dim": int(n)}
        if not np.array_equal(desc.space.weights[j], np.eye(n)):
            f["weight"] = _matrix_json(desc.space.weights[j])
        fibers.append(f)
    doc = {
        "algebra": {
            "d": desc.algebra.d,
            "eps_pos": desc.algebra.eps_pos,
            "eps_nz": desc.algebra.eps_nz,
        },
        "space": {"fibers": fibers},
        "operators": {
            name: [_matrix_json(b) for b in op.blocks]
            for name, op in sorted(desc.operators.items())
        },
    }
    if desc.family is not None:
        fr: dict = {"family": list(desc.family)}
        if desc.control:
            fr["control"] = desc.control
        if desc.control_prime:
            fr["control_prime"] = desc.control_prime
        if desc.comparison:
            fr["comparison"] = desc.comparison
        doc["frame"] = fr
    if desc.task:
        doc["task"] = desc.task
    return doc


# -- report plumbing -----------------------------------------------------

def _native(value):
    if isinstance(value, dict):
        return {str(k): _native(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_native(v) for v in value]
    if isinstance(value, AlgebraElement):
        return _element_json(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return _cnum(value)
    return value


def _render_human(doc: dict, out) -> None:
    def walk(prefix: str, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}{k}." if prefix else f"{k}.", v[k])
            return
        label = prefix[:-1] if prefix.endswith(".") else prefix
        print(f"{label:<40} {json.dumps(v)}", file=out)

    walk("", doc)


def _emit(doc: dict, human: bool) -> None:
    doc = _native(doc)
    if human:
        _render_human(doc, sys.stdout)
    else:
        print(json.dumps(doc, sort_keys=True, indent=2))


def _config_block(args, algebra: Algebra | None) -> dict:
    cfg = {"seed": args.seed, "samples": args.samples}
    if algebra is not None:
        cfg["eps_pos"] = algebra.eps_pos
        cfg["eps_nz"] = algebra.eps_nz
    return cfg


def _certificate_json(cert) -> dict:
    return {
        "status": cert.status,
        "lower": _element_json(cert.lower),
        "upper": _element_json(cert.upper),
        "tight": cert.tight,
        "lower_residual": cert.lower_residual,
        "upper_residual": cert.upper_residual,
        "vacuous_fibers": list(cert.vacuous),
    }


# -- subcommand bodies ---------------------------------------------------

def _cmd_certify(args) -> int:
    desc = parse_system(args.file)
    sysm = desc.build_system()
    cert = certify(sysm, samples=args.samples, seed=args.seed)
    doc = {
        "command": "certify",
        "config": _config_block(args, desc.algebra),
        "result": _certificate_json(cert) | {
            "commutation": {
                "controls_commute": sysm.flags.controls_commute,
                "controls_with_family": sysm.flags.controls_with_family,
                "controls_with_comparison": sysm.flags.controls_with_k,
                "worst_residual": sysm.flags.worst_residual,
            }
        },
    }
    _emit(doc, args.human)
    return 0 if cert.status == STATUS_FRAME else 2


def _cmd_bounds(args) -> int:
    desc = parse_system(args.file)
    sysm = desc.build_system()
    cert = certify(sysm, samples=0, seed=args.seed)
    doc = {
        "command": "bounds",
        "config": _config_block(args, desc.algebra),
        "result": {
            "status": cert.status,
            "lower": _element_json(cert.lower),
            "upper": _element_json(cert.upper),
            "tight": cert.tight,
            "vacuous_fibers": list(cert.vacuous),
        },
    }
    _emit(doc, args.human)
    return 0 if cert.status == STATUS_FRAME else 2


def _cmd_frame_operator(args) -> int:
    desc = parse_system(args.file)
    sysm = desc.build_system()
    s = frame_operator(sysm)
    flags = op_classify(s)
    lo, hi = np.inf, -np.inf
    for j in range(len(sysm.space.dims)):
        w = sysm.space.weights[j]
        ext = pencil_extremes(hermitian_part(w @ s.blocks[j]), w)
        lo = min(lo, ext.lambda_min)
        hi = max(hi, ext.lambda_max)
    doc = {
        "command": "frame-operator",
        "config": _config_block(args, desc.algebra),
        "result": {
            "blocks": [_matrix_json(b) for b in s.blocks],
            "selfadjoint": flags.selfadjoint,
            "positive": flags.positive,
            "invertible": flags.invertible,
            "lambda_min": float(lo),
            "lambda_max": float(hi),
        },
    }
    _emit(doc, args.human)
    return 0


def _task_operator(desc: SystemDescription, key: str) -> ModuleOperator:
    name = desc.task.get(key)
    if not isinstance(name, str):
        raise ValidationError(f"task.{key}: operator name required")
    return desc.operator(name, f"task.{key}")


def _transform_report_json(report) -> dict:
    out = {
        "lower": _element_json(report.lower),
        "upper": _element_json(report.upper),
        "verified": report.verified,
        "residual": report.residual,
    }
    for key, val in sorted(report.details.items()):
        out[key] = _native(val)
    return out


def _cmd_transform(args) -> int:
    desc = parse_system(args.file)
    kind = args.kind
    if kind == "douglas":
        t = _task_operator(desc, "t")
        tp = _task_operator(desc, "tprime")
        try:
            sol = douglas_solve(t, tp)
        except NotIncluded as exc:
            doc = {
                "command": "transform-douglas",
                "config": _config_block(args, desc.algebra),
                "result": {"status": "not_included",
                           "residual": exc.residual},
            }
            _emit(doc, args.human)
            return 2
        doc = {
            "command": "transform-douglas",
            "config": _config_block(args, desc.algebra),
            "result": {
                "status": "included",
                "scale": sol.scale,
                "residual": sol.residual,
                "factor_norm": op_norm(sol.factor),
                "factor_blocks": [_matrix_json(b) for b in sol.factor.blocks],
            },
        }
        _emit(doc, args.human)
        return 0

    sysm = desc.build_system()
    if kind == "q":
        q = _task_operator(desc, "q")
        _, report = compose_with_q(sysm, q, samples=args.samples,
                                   seed=args.seed)
        name = "transform-q"
    elif kind == "invq":
        q = _task_operator(desc, "q")
        report = invertible_q_bounds(sysm, q, samples=args.samples,
                                     seed=args.seed)
        name = "transform-invq"
    elif kind == "range":
        u = _task_operator(desc, "u")
        cert = certify(sysm, samples=args.samples, seed=args.seed)
        try:
            _, report = range_inclusion_transfer(
                sysm, cert, u, samples=args.samples, seed=args.seed
            )
        except NotIncluded as exc:
            doc = {
                "command": "transform-range",
                "config": _config_block(args, desc.algebra),
                "result": {"status": "not_included",
                           "residual": exc.residual},
            }
            _emit(doc, args.human)
            return 2
        name = "transform-range"
    elif kind == "hom":
        hom_doc = desc.task.get("hom")
        if not isinstance(hom_doc, dict):
            raise ValidationError("task.hom: object required")
        for key in ("char_map", "theta", "target_space"):
            if key not in hom_doc:
                raise ValidationError(f"task.hom.{key}: required")
        char_map = hom_doc["char_map"]
        if (not isinstance(char_map, list)
                or not all(isinstance(i, int) for i in char_map)):
            raise ValidationError("task.hom.char_map: list of integers")
        tgt_doc = hom_doc["target_space"]
        if not isinstance(tgt_doc, dict) or "fibers" not in tgt_doc:
            raise ValidationError("task.hom.target_space: fibers required")
        tgt_alg = Algebra(len(char_map), eps_pos=desc.algebra.eps_pos,
                          eps_nz=desc.algebra.eps_nz)
        specs = []
        for j, f in enumerate(tgt_doc["fibers"]):
            if not isinstance(f, dict) or "dim" not in f:
                raise ValidationError(
                    f"task.hom.target_space.fibers[{j}]: dim required"
                )
            if "weight" in f:
                specs.append((f["dim"], _parse_matrix(
                    f["weight"], f"task.hom.target_space.fibers[{j}].weight"
                )))
            else:
                specs.append(f["dim"])
        target_space = make_space(tgt_alg, specs)
        theta = hom_doc["theta"]
        if not isinstance(theta, list) or len(theta) != len(char_map):
            raise ValidationError(
                "task.hom.theta: one matrix per target character"
            )
        blocks = tuple(
            _parse_matrix(b, f"task.hom.theta[{k}]")
            for k, b in enumerate(theta)
        )
        hom = HomomorphismSpec(tuple(char_map), blocks, target_space)
        _, report = transport(sysm, hom, samples=min(args.samples, 200),
                              seed=args.seed)
        name = "transform-hom"
    else:  # pragma: no cover - argparse choices guard this
        raise ValidationError(f"unknown transform kind {kind!r}")

    doc = {
        "command": name,
        "config": _config_block(args, desc.algebra),
        "result": _transform_report_json(report),
    }
    _emit(doc, args.human)
    return 0 if report.verified else 2


def _cmd_example(args) -> int:
    es = build_example(args.n, args.alpha, args.beta)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(min(args.samples, 200)):
        x = random_vector(rng, es.space)
        worst = max(worst, example_sum_identity(es, x).residual)
    ec = example_certificate(es, samples=min(args.samples, 200),
                             seed=args.seed)
    doc = {
        "command": "example",
        "config": _config_block(args, es.space.algebra),
        "result": {
            "n": es.n_max,
            "alpha": es.alpha,
            "beta": es.beta,
            "family_size": len(es.family),
            "identity_residual": worst,
            "status": ec.certificate.status,
            "tight": ec.certificate.tight,
            "fitted_lower": _element_json(ec.fitted_lower),
            "nominal_lower": _element_json(ec.nominal_lower),
            "nominal_matches": ec.nominal_matches,
            "nominal_residual": ec.nominal_residual,
            "equality_residual": ec.equality_residual,
            "bessel_min_slack": ec.bessel_min_slack,
            "upper": _element_json(ec.certificate.upper),
        },
    }
    _emit(doc, args.human)
    return 0


def _selftest_cases(seed: int, samples: int) -> list[dict]:
    cases = []
    rng = np.random.default_rng(seed)

    alg = Algebra(3)
    a = AlgebraElement(alg, rng.standard_normal(3) + 1j * rng.standard_normal(3))
    b = AlgebraElement(alg, rng.standard_normal(3) + 1j * rng.standard_normal(3))
    invol = float(np.max(np.abs((a.star().star() - a).values)))
    prod = float(np.max(np.abs(((a * b).star() - b.star() * a.star()).values)))
    cases.append({
        "name": "algebra_involution",
        "pass": invol == 0.0 and prod <= 1e-12,
        "involution_residual": invol,
        "antihomomorphism_residual": prod,
    })

    space = make_space(Algebra(2), [2, 3])
    ident_sys = frame_system(space, [identity(space)])
    cert = certify(ident_sys, samples=samples, seed=seed)
    ones = np.ones(2)
    cases.append({
        "name": "identity_parseval",
        "pass": (cert.status == STATUS_FRAME and cert.tight
                 and np.allclose(cert.lower.values, ones)
                 and np.allclose(cert.upper.values, ones)
                 and cert.lower_residual == 0.0
                 and cert.upper_residual == 0.0),
        "status": cert.status,
        "tight": cert.tight,
    })

    sysm = random_system(rng, d=3, dims=[2, 3, 2], ops=3)
    cert = certify(sysm, samples=samples, seed=seed)
    ver = verify_bounds(sysm, cert.lower, cert.upper, samples=samples,
                        seed=seed + 1)
    x = random_vector(rng, sysm.space)
    rec = reconstruct(sysm, x, method="richardson")
    from .module_space import module_norm
    rec_err = module_norm(rec.vector - x) / max(module_norm(x), 1e-300)
    cases.append({
        "name": "random_frame_roundtrip",
        "pass": (cert.status == STATUS_FRAME and ver.verified
                 and rec_err <= 1e-7),
        "status": cert.status,
        "verify_residual": ver.residual,
        "reconstruction_error": rec_err,
        "richardson_iterations": rec.iterations,
    })

    t = random_operator_rank_deficient(rng, space)
    d_ok = random_operator_in_range(rng, t)
    sol = douglas_solve(t, d_ok)
    escaped = False
    try:
        douglas_solve(t, _escape_operator(rng, t))
    except NotIncluded:
        escaped = True
    cases.append({
        "name": "douglas_factorization",
        "pass": sol.residual <= 1e-9 and escaped,
        "inclusion_residual": sol.residual,
        "escape_detected": escaped,
    })

    from .testing import diagonal_operator
    sys2 = random_system(rng, d=2, dims=[3, 2], ops=2)
    q = diagonal_operator(rng, sys2.space)
    _, rep = compose_with_q(sys2, q, samples=samples, seed=seed)
    cases.append({
        "name": "family_composition",
        "pass": rep.verified and rep.details[
            "operator_identity_residual"] <= 1e-10,
        "verified": rep.verified,
        "operator_identity_residual": rep.details[
            "operator_identity_residual"],
    })

    es = build_example(21, 2.0, 3.0)
    x = random_vector(rng, es.space)
    ident = example_sum_identity(es, x)
    ec = example_certificate(es, samples=64, seed=seed)
    cases.append({
        "name": "sequence_example",
        "pass": (ident.residual <= 1e-12 and ec.certificate.tight
                 and not ec.nominal_matches
                 and ec.bessel_min_slack >= -1e-12),
        "identity_residual": ident.residual,
        "tight": ec.certificate.tight,
        "nominal_matches": ec.nominal_matches,
        "bessel_min_slack": ec.bessel_min_slack,
    })
    return cases


def random_operator_rank_deficient(rng, space) -> ModuleOperator:
    """One rank-deficient block per fiber, for inclusion tests."""
    blocks = []
    for n in space.dims:
        r = max(1, n - 1)
        a = (rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r)))
        b = (rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n)))
        blocks.append((a @ b) / np.sqrt(2.0))
    return ModuleOperator(space, space, tuple(blocks))


def random_operator_in_range(rng, t: ModuleOperator) -> ModuleOperator:
    """t composed with a random factor, so ranges nest by construction."""
    blocks = tuple(
        b @ ((rng.standard_normal((b.shape[1], b.shape[1]))
              + 1j * rng.standard_normal((b.shape[1], b.shape[1])))
             / np.sqrt(2.0))
        for b in t.blocks
    )
    return ModuleOperator(t.domain, t.codomain, blocks)


def _escape_operator(rng, t: ModuleOperator) -> ModuleOperator:
    """Adds a rank-one piece orthogonal to each deficient range."""
    blocks = []
    for b in t.blocks:
        u, s, _ = np.linalg.svd(b)
        rank = int(np.sum(s > 1e-10 * max(1.0, s[0] if s.size else 1.0)))
        if rank >= b.shape[0]:
            blocks.append(b)
            continue
        w = u[:, -1]
        v = rng.standard_normal(b.shape[1]) + 1j * rng.standard_normal(b.shape[1])
        blocks.append(b + np.outer(w, v))
    return ModuleOperator(t.domain, t.codomain, tuple(blocks))


def _cmd_selftest(args) -> int:
    cases = _selftest_cases(args.seed, args.samples)
    all_pass = all(c["pass"] for c in cases)
    doc = {
        "command": "selftest",
        "config": _config_block(args, None) | {
            "eps_pos": _default_eps_pos(), "eps_nz": 1e-8,
        },
        "result": {"cases": cases, "all_pass": all_pass},
    }
    _emit(doc, args.human)
    return 0 if all_pass else 1


# -- argument parsing ----------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"usage error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def build_parser() -> _Parser:
    parser = _Parser(prog="cframe",
                     description="controlled operator-frame toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--human", action="store_true")

    p = sub.add_parser("certify", help="two-sided bound certificate")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("bounds", help="optimal bounds only")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("frame-operator", help="assemble the frame operator")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_frame_operator)

    p = sub.add_parser("transform", help="bound-preserving transforms")
    p.add_argument("kind", choices=["q", "invq", "hom", "douglas", "range"])
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("example", help="worked sequence example")
    p.add_argument("--n", type=int, default=101)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    common(p)
    p.set_defaults(func=_cmd_example)

    p = sub.add_parser("selftest", help="deterministic built-in checks")
    common(p)
    p.set_defaults(func=_cmd_selftest)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}},
              args.human)
        return 1
    except CFrameError as exc:
        doc = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        res = getattr(exc, "residual", None)
        if res is not None:
            doc["error"]["residual"] = float(res)
        _emit(doc, args.human)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
