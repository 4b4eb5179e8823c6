"""JSON and CSV wire formats.

JSON schemas
------------
walk spec        {"n": int, "entries": [{"row": int, "col": int,
                  "terms": [{"shift": int, "re": float, "im": float}]}]}
model spec       {"model": {"d": int, "lambda_coeffs": [{"shift", "re", "im"}]}}
initial vector   {"n": int, "amps": [{"site": int, "channel": int, "re", "im"}]}
eigen system     {"bands": [{"d", "winding", "multiplicity",
                  "samples": [{"re", "im"}]}], "indecomposable": bool,
                  "base_grid": int}
limit measure    {"atoms": [{"x", "mass"}], "bins": [{"x", "mass"}]}

Rows and columns are 1-based; unspecified entries are zero.  CSV floats are
written with 17 significant digits, '.' decimal separator, no locale.
"""

from __future__ import annotations

import json
from typing import IO, Iterable

import numpy as np

from .errors import SpecFormatError
from .laurent import LaurentPoly
from .limit import LimitMeasure, MomentComparison
from .model import CtGenerator, ModelWalkSpec
from .simulate import PositionDistribution, StateVector
from .spectral import Band, EigenSystem
from .symbol import SymbolMatrix


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _require(obj, key, kind, where):
    if not isinstance(obj, dict):
        raise SpecFormatError(f"{where}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise SpecFormatError(f"{where}: missing field '{key}'")
    value = obj[key]
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise SpecFormatError(f"{where}.{key}: expected an integer")
    elif kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SpecFormatError(f"{where}.{key}: expected a number")
        value = float(value)
    elif kind is list:
        if not isinstance(value, list):
            raise SpecFormatError(f"{where}.{key}: expected an array")
    elif kind is bool:
        if not isinstance(value, bool):
            raise SpecFormatError(f"{where}.{key}: expected a boolean")
    return value


def _terms_to_poly(terms, where) -> LaurentPoly:
    coeffs: dict[int, complex] = {}
    for idx, term in enumerate(terms):
        loc = f"{where}[{idx}]"
        shift = _require(term, "shift", int, loc)
        re = _require(term, "re", float, loc)
        im = _require(term, "im", float, loc)
        coeffs[shift] = coeffs.get(shift, 0.0) + complex(re, im)
    return LaurentPoly(coeffs)


def _poly_to_terms(poly: LaurentPoly) -> list[dict]:
    return [
        {"shift": s, "re": c.real, "im": c.imag}
        for s, c in sorted(poly.coeffs.items())
    ]


# -- walks -------------------------------------------------------------------


def walk_to_json(walk: SymbolMatrix) -> dict:
    entries = []
    for i in range(walk.n):
        for j in range(walk.n):
            poly = walk.entries[i][j]
            if not poly.is_zero:
                entries.append(
                    {"row": i + 1, "col": j + 1, "terms": _poly_to_terms(poly)}
                )
    return {"n": walk.n, "entries": entries}


def walk_from_json(data: dict) -> SymbolMatrix:
    n = _require(data, "n", int, "walk")
    if n < 1:
        raise SpecFormatError("walk.n: must be positive")
    entries = [[LaurentPoly.zero() for _ in range(n)] for _ in range(n)]
    for idx, item in enumerate(_require(data, "entries", list, "walk")):
        where = f"walk.entries[{idx}]"
        row = _require(item, "row", int, where)
        col = _require(item, "col", int, where)
        if not (1 <= row <= n and 1 <= col <= n):
            raise SpecFormatError(f"{where}: row/col outside 1..{n}")
        terms = _require(item, "terms", list, where)
        entries[row - 1][col - 1] = _terms_to_poly(terms, f"{where}.terms")
    return SymbolMatrix(n, tuple(tuple(row) for row in entries))


def model_to_json(spec: ModelWalkSpec) -> dict:
    return {
        "model": {"d": spec.d, "lambda_coeffs": _poly_to_terms(spec.lambda_coeffs)}
    }


def model_from_json(data: dict) -> ModelWalkSpec:
    inner = data["model"]
    d = _require(inner, "d", int, "model")
    coeffs = _terms_to_poly(
        _require(inner, "lambda_coeffs", list, "model"), "model.lambda_coeffs"
    )
    return ModelWalkSpec(d, coeffs)


# -- state vectors -----------------------------------------------------------


def state_to_json(xi: StateVector) -> dict:
    amps = [
        {"site": s, "channel": k, "re": a.real, "im": a.imag}
        for (s, k), a in sorted(xi.amplitudes.items())
    ]
    return {"n": xi.n, "amps": amps}


def state_from_json(data: dict) -> StateVector:
    n = _require(data, "n", int, "vector")
    amps: dict[tuple[int, int], complex] = {}
    for idx, item in enumerate(_require(data, "amps", list, "vector")):
        where = f"vector.amps[{idx}]"
        site = _require(item, "site", int, where)
        chan = _require(item, "channel", int, where)
        if not 1 <= chan <= n:
            raise SpecFormatError(f"{where}.channel: outside 1..{n}")
        re = _require(item, "re", float, where)
        im = _require(item, "im", float, where)
        amps[(site, chan)] = amps.get((site, chan), 0.0) + complex(re, im)
    return StateVector(amps, n)


def parse_spec(source: str | IO) -> SymbolMatrix | ModelWalkSpec | StateVector:
    """Parse a walk spec, model spec, or initial vector from JSON text/stream."""
    try:
        data = json.loads(source) if isinstance(source, str) else json.load(source)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SpecFormatError("top level must be a JSON object")
    if "model" in data:
        return model_from_json(data)
    if "amps" in data:
        return state_from_json(data)
    if "entries" in data:
        return walk_from_json(data)
    raise SpecFormatError(
        "unrecognized spec: expected 'entries' (walk), 'model', or 'amps' (vector)"
    )


# -- eigen systems -----------------------------------------------------------


def eigensystem_to_json(system: EigenSystem) -> dict:
    return {
        "bands": [
            {
                "d": band.d,
                "winding": band.winding,
                "multiplicity": band.multiplicity,
                "samples": [{"re": v.real, "im": v.imag} for v in band.samples],
            }
            for band in system.bands
        ],
        "indecomposable": system.indecomposable,
        "base_grid": system.base_grid,
    }


def eigensystem_from_json(data: dict) -> EigenSystem:
    bands = []
    for idx, item in enumerate(_require(data, "bands", list, "eigensystem")):
        where = f"eigensystem.bands[{idx}]"
        d = _require(item, "d", int, where)
        winding = _require(item, "winding", int, where)
        mult = _require(item, "multiplicity", int, where)
        samples = np.array(
            [
                complex(_require(s, "re", float, where), _require(s, "im", float, where))
                for s in _require(item, "samples", list, where)
            ]
        )
        bands.append(Band(d, samples, winding, mult))
    n = sum(b.d * b.multiplicity for b in bands)
    return EigenSystem(
        tuple(bands),
        n,
        _require(data, "base_grid", int, "eigensystem"),
        _require(data, "indecomposable", bool, "eigensystem"),
    )


# -- limit measures ----------------------------------------------------------


def measure_to_json(measure: LimitMeasure) -> dict:
    return {
        "atoms": [{"x": x, "mass": mass} for x, mass in measure.atoms],
        "bins": [{"x": x, "mass": mass} for x, mass in measure.density_samples],
    }


def measure_from_json(data: dict) -> LimitMeasure:
    atoms = tuple(
        (float(_require(a, "x", float, "measure.atoms")),
         float(_require(a, "mass", float, "measure.atoms")))
        for a in _require(data, "atoms", list, "measure")
    )
    bins = tuple(
        (float(_require(b, "x", float, "measure.bins")),
         float(_require(b, "mass", float, "measure.bins")))
        for b in _require(data, "bins", list, "measure")
    )
    total = sum(m for _x, m in atoms) + sum(m for _x, m in bins)
    return LimitMeasure(atoms, bins, float(total))


# -- CSV emitters ------------------------------------------------------------


def write_bands_csv(system: EigenSystem, stream: IO) -> None:
    """Columns: band_index, covering_angle, re, im, arg."""
    stream.write("band_index,covering_angle,re,im,arg\n")
    for j, band in enumerate(system.bands):
        count = len(band.samples)
        for m, value in enumerate(band.samples):
            angle = 2.0 * np.pi * m / count
            stream.write(
                f"{j},{_fmt(angle)},{_fmt(value.real)},{_fmt(value.imag)},"
                f"{_fmt(np.angle(value))}\n"
            )


def write_distribution_csv(
    dist: PositionDistribution, stream: IO, rescaled: bool = False
) -> None:
    """Columns: (site, prob), or (x, prob) with x = site/time when rescaled."""
    if rescaled:
        if dist.time <= 0:
            raise SpecFormatError("rescaled output needs a positive time")
        stream.write("x,prob\n")
        for s in sorted(dist.probs):
            stream.write(f"{_fmt(s / dist.time)},{_fmt(dist.probs[s])}\n")
    else:
        stream.write("site,prob\n")
        for s in sorted(dist.probs):
            stream.write(f"{s},{_fmt(dist.probs[s])}\n")


def write_measure_csv(measure: LimitMeasure, stream: IO) -> None:
    """Columns: kind, x, mass (atoms first, then histogram cells)."""
    stream.write("kind,x,mass\n")
    for x, mass in measure.atoms:
        stream.write(f"atom,{_fmt(x)},{_fmt(mass)}\n")
    for x, mass in measure.density_samples:
        stream.write(f"bin,{_fmt(x)},{_fmt(mass)}\n")


def write_comparison_csv(rows: Iterable[MomentComparison], stream: IO) -> None:
    """Columns: t, m, empirical, limit, deviation."""
    stream.write("t,m,empirical,limit,deviation\n")
    for row in rows:
        stream.write(
            f"{row.t},{row.m},{_fmt(row.empirical)},{_fmt(row.limit)},"
            f"{_fmt(row.deviation)}\n"
        )


def write_generator_csv(gen: CtGenerator, stream: IO) -> None:
    """Columns: theta, h."""
    stream.write("theta,h\n")
    for theta, h in zip(gen.thetas, gen.h_samples):
        stream.write(f"{_fmt(theta)},{_fmt(h)}\n")
