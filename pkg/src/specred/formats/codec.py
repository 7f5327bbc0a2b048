"""JSON documents for every value the CLI reads or writes.

Exact scalars are strings ("p/q", or a [re, im] pair of strings when the
imaginary part is nonzero); float scalars are numbers, or [re, im] pairs
when complex. Integer matrices stay plain integers.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Integral
from typing import Any

import numpy as np

from specred.algebra.fields import ExactField, Field, FloatField, GaussianRational
from specred.algebra.ratfun import Polynomial, RationalFunction
from specred.algebra.ratmat import MatrixTerm, PartialFractionForm, RatMatrix
from specred.errors import ParseError
from specred.spectral.labeled import Frame, LabeledMatrix, Subset

EXACT = ExactField()
FLOAT = FloatField()


# Scalars


def encode_scalar(value: Any) -> Any:
    if isinstance(value, GaussianRational):
        if value.im == 0:
            return str(value.re)
        return [str(value.re), str(value.im)]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, Integral):
        return int(value)
    z = complex(value)
    if z.imag == 0 and not isinstance(value, (complex, np.complexfloating)):
        return float(z.real)
    return [float(z.real), float(z.imag)]


def _is_exact_token(value: Any) -> bool:
    return isinstance(value, str) or (isinstance(value, list) and value and isinstance(value[0], str))


def decode_scalar(value: Any) -> Any:
    try:
        if isinstance(value, str):
            return GaussianRational(Fraction(value))
        if isinstance(value, bool):
            raise ParseError("booleans are not scalars", value=value)
        if isinstance(value, int):
            return value
        if isinstance(value, float):
            return value
        if isinstance(value, list) and len(value) == 2:
            if isinstance(value[0], str):
                return GaussianRational(Fraction(value[0]), Fraction(value[1]))
            return complex(float(value[0]), float(value[1]))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad scalar {value!r}", value=str(value)) from exc
    raise ParseError(f"bad scalar {value!r}", value=str(value))


def encode_matrix(matrix: Any) -> list[list[Any]]:
    return [[encode_scalar(x) for x in row] for row in np.asarray(matrix)]


def decode_matrix(rows: Any) -> np.ndarray:
    """Integer, float, complex or exact (object) array, whichever the entries need."""
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError("matrix must be a list of rows")
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("matrix rows differ in length", lengths=[len(r) for r in rows])
    values = [[decode_scalar(x) for x in r] for r in rows]
    flat = [x for r in values for x in r]
    shape = (len(rows), len(rows[0]) if rows else 0)
    if any(isinstance(x, GaussianRational) for x in flat):
        out = np.empty(shape, dtype=object)
        for i, r in enumerate(values):
            for j, x in enumerate(r):
                out[i, j] = GaussianRational.lift(x)
        return out
    if all(isinstance(x, int) for x in flat):
        return np.array(values, dtype=int).reshape(shape)
    if any(isinstance(x, complex) for x in flat):
        return np.array(values, dtype=complex).reshape(shape)
    return np.array(values, dtype=float).reshape(shape)


# Polynomials and rational functions


def encode_polynomial(p: Polynomial) -> list[Any]:
    if p.field.exact:
        return [encode_scalar(GaussianRational.lift(c)) for c in p.coeffs]
    return [[float(complex(c).real), float(complex(c).imag)] for c in p.coeffs]


def decode_polynomial(coeffs: Any, field: Field) -> Polynomial:
    if not isinstance(coeffs, list):
        raise ParseError("polynomial must be a coefficient list")
    return Polynomial.of([decode_scalar(c) for c in coeffs], field)


def encode_ratfun(r: RationalFunction) -> dict[str, Any]:
    return {"num": encode_polynomial(r.num), "den": encode_polynomial(r.den)}


def _field_for(tokens: list[Any]) -> Field:
    return EXACT if all(_is_exact_token(t) for t in tokens) else FLOAT


def decode_ratfun(document: Any, field: Field | None = None) -> RationalFunction:
    try:
        num, den = document["num"], document["den"]
    except (TypeError, KeyError) as exc:
        raise ParseError("rational function needs 'num' and 'den'") from exc
    field = field or _field_for(list(num) + list(den))
    return RationalFunction.normalize(decode_polynomial(num, field), decode_polynomial(den, field))


def encode_ratmatrix(r: RatMatrix) -> dict[str, Any]:
    return {"rows": r.rows, "cols": r.cols, "entries": [encode_ratfun(e) for e in r.entries]}


def decode_ratmatrix(document: Any) -> RatMatrix:
    try:
        rows, cols, entries = document["rows"], document["cols"], document["entries"]
    except (TypeError, KeyError) as exc:
        raise ParseError("matrix document needs 'rows', 'cols' and 'entries'") from exc
    if len(entries) != rows * cols:
        raise ParseError("entry count differs from rows*cols", rows=rows, cols=cols, entries=len(entries))
    if all(isinstance(e, dict) for e in entries):
        tokens = [c for e in entries for key in ("num", "den") for c in e.get(key, [])]
        field = _field_for(tokens)
        return RatMatrix(rows, cols, tuple(decode_ratfun(e, field) for e in entries), field)
    scalars = decode_matrix([entries[i * cols : (i + 1) * cols] for i in range(rows)])
    field = EXACT if scalars.dtype == object or np.issubdtype(scalars.dtype, np.integer) else FLOAT
    return RatMatrix.from_scalars(scalars, field)


def encode_pfd(pff: PartialFractionForm) -> dict[str, Any]:
    return {
        "constant": encode_matrix(pff.constant),
        "terms": [
            {"pole": encode_scalar(t.pole), "order": t.order, "coefficient": encode_matrix(t.coefficient)}
            for t in pff.terms
        ],
    }


def decode_pfd(document: Any) -> PartialFractionForm:
    constant = decode_matrix(document["constant"])
    terms = tuple(
        MatrixTerm(decode_scalar(t["pole"]), int(t["order"]), decode_matrix(t["coefficient"]))
        for t in document["terms"]
    )
    exact = constant.dtype == object or all(isinstance(t.pole, GaussianRational) for t in terms)
    return PartialFractionForm(constant, terms, EXACT if exact else FLOAT)


# Matrices with labels, selectors


def _label(value: Any) -> Any:
    return tuple(_label(v) for v in value) if isinstance(value, list) else value


def encode_label(value: Any) -> Any:
    return [encode_label(v) for v in value] if isinstance(value, tuple) else value


def encode_labeled(a: LabeledMatrix) -> dict[str, Any]:
    return {
        "labels": [encode_label(x) for x in a.labels],
        "matrix": encode_matrix(a.matrix),
        "hermitian": a.hermitian,
    }


def decode_labeled(document: Any) -> LabeledMatrix:
    try:
        matrix = decode_matrix(document["matrix"])
    except (TypeError, KeyError) as exc:
        raise ParseError("labeled matrix needs 'matrix'") from exc
    labels = document.get("labels")
    return LabeledMatrix.of(matrix, None if labels is None else [_label(x) for x in labels])


def encode_selector(selector: Subset | Frame) -> dict[str, Any]:
    if isinstance(selector, Frame):
        return {"frame": encode_matrix(selector.sigma)}
    return {"subset": [encode_label(x) for x in selector.labels]}


def decode_selector(document: Any) -> Subset | Frame:
    if "frame" in document:
        return Frame(decode_matrix(document["frame"]))
    if "subset" in document:
        return Subset(tuple(_label(x) for x in document["subset"]))
    raise ParseError("selector needs 'subset' or 'frame'")


# Walks, unfoldings, certificates


def encode_walk_series(series) -> dict[str, Any]:
    return {
        "subset": [encode_label(x) for x in series.subset],
        "kind": series.kind,
        "coefficients": [encode_matrix(c) for c in series.coefficients],
    }


def encode_unfolding(u) -> dict[str, Any]:
    return {
        "matrix": encode_labeled(u.matrix),
        "subset": [encode_label(x) for x in u.subset],
        "provenance": [dict(step) for step in u.provenance],
        "hermitian": u.hermitian,
        "hollow": u.hollow,
        "blocks": list(u.blocks),
        "source": encode_ratmatrix(u.source),
    }


def encode_walk_sample(sample) -> dict[str, Any]:
    return {
        "subset": [encode_label(x) for x in sample.subset],
        "times": [float(t) for t in sample.times],
        "blocks": [[[[float(z.real), float(z.imag)] for z in row] for row in block] for block in sample.blocks],
    }


def encode_trig_spec(spec) -> dict[str, Any]:
    def term(t) -> dict[str, Any]:
        amp = GaussianRational.lift(t.amplitude) if not isinstance(t.amplitude, complex) else t.amplitude
        amp_doc = [str(amp.re), str(amp.im)] if isinstance(amp, GaussianRational) else [amp.real, amp.imag]
        return {"amp": amp_doc, "freq": t.frequency, "kind": t.kind}

    return {"size": spec.size, "entries": [[[term(t) for t in cell] for cell in row] for row in spec.entries]}


def decode_trig_spec(document: Any):
    from specred.spectral.trig import TrigTerm, TrigWalkSpec

    try:
        size = int(document["size"])
        rows = document["entries"]
        spec = TrigWalkSpec(
            tuple(
                tuple(
                    tuple(TrigTerm(decode_scalar(t["amp"]), int(t["freq"]), t["kind"]) for t in cell)
                    for cell in row
                )
                for row in rows
            )
        )
    except (TypeError, KeyError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad walk spec: {exc}") from exc
    if spec.size != size:
        raise ParseError("declared size differs from entries", size=size, rows=spec.size)
    return spec


def encode_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def encode_pst_certificate(c) -> dict[str, Any]:
    return {
        "u": encode_label(c.u),
        "v": encode_label(c.v),
        "tau": c.tau,
        "gamma": encode_complex(c.gamma),
        "deviation": c.deviation,
    }


def encode_pst_report(r) -> dict[str, Any]:
    return {
        "u": encode_label(r.u),
        "v": encode_label(r.v),
        "tau": r.tau,
        "certified": r.certified,
        "mass": r.mass,
        "deviation": r.deviation,
        "gamma": encode_complex(r.gamma),
        "tol": r.tol,
    }


def encode_fr_report(r) -> dict[str, Any]:
    return {
        "revival": r.revival,
        "tau": r.tau,
        "h": None if r.h is None else [[encode_complex(z) for z in row] for row in r.h],
        "worst_column": encode_label(r.worst_column),
        "leaked": r.leaked,
    }


def encode_equitable(report) -> dict[str, Any]:
    return {
        "equitable": report.equitable,
        "divisor": None if report.divisor is None else encode_matrix(report.divisor),
        "witness": report.witness,
    }
