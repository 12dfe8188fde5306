"""Textual specs for every named object, plus flat key=value config files.

Spec grammars (all ASCII, deterministic):

- words:       "λ" | "lambda" | "" | string over {0,1}
- rationals:   "p" | "p/q"
- position set "empty" | "1,3,5" | "pow2" | "tower"
- martingale:  uniform | allin_zeros | pattern:<word> | zbettor:<zset>
               | conservative:<inner> | savings:<inner>
- function:    identity | affine:<j>,<a> | fz:<zset> | fz_scaled:<zset>
               | fz_norm:<zset> | table:<path> | cumulative:<measure>
               | @<config file>
- series:      exp | sin | cos | ln1p | geom | poly:<c0,c1,...>
               | @<config file with kind=series or kind=quotient>
- measure:     uniform | product:<p/q> | from_function:<function>

Config files are flat "key = value" text, UTF-8, '#' comments; keys match
the CLI's long option names and provide defaults the command line
overrides.
"""

from __future__ import annotations

from fractions import Fraction

from .analytic import PowerSeriesSpec, builtin_spec
from .dyadic import Dyadic, Word, parse_rational
from .errors import ParseError
from .funcs import AffineFn, IdentityFn, QuotientFn, TableStepFn
from .martingale import by_name as martingale_by_name
from .measure import (CumulativeFn, DifferentialMeasure, ProductMeasure,
                      UniformMeasure)
from .tightness import (CensusSet, NormalizedInsertionFn, ZeroInsertionFn)


def load_config(path):
    """Flat key=value file -> dict; reports the offending line on errors."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"expected key=value, got {line!r}",
                                 line=lineno)
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if not key:
                raise ParseError("empty key", line=lineno)
            if key in out:
                raise ParseError(f"duplicate key {key!r}", line=lineno)
            out[key] = value
    return out


def parse_word(text):
    return Word.parse(text)


def parse_zset(text):
    return CensusSet.parse(text)


def parse_martingale(text):
    return martingale_by_name(text)


def parse_function(text):
    """Resolve a function spec to an exact oracle."""
    if text == "identity":
        return IdentityFn()
    if text.startswith("affine:"):
        parts = text.split(":", 1)[1].split(",")
        if len(parts) != 2:
            raise ParseError(f"affine needs j,a: {text!r}")
        j = int(parts[0])
        return AffineFn(j, Dyadic.parse(parts[1]))
    if text.startswith("fz:"):
        return ZeroInsertionFn(parse_zset(text.split(":", 1)[1]))
    if text.startswith("fz_scaled:"):
        return ZeroInsertionFn(parse_zset(text.split(":", 1)[1]), scaled=True)
    if text.startswith("fz_norm:"):
        return NormalizedInsertionFn(parse_zset(text.split(":", 1)[1]))
    if text.startswith("table:"):
        return TableStepFn.load(text.split(":", 1)[1])
    if text.startswith("cumulative:"):
        return CumulativeFn(parse_measure(text.split(":", 1)[1]))
    if text.startswith("@"):
        return _function_from_file(text[1:])
    raise ParseError(f"unknown function spec {text!r}")


def parse_series(text):
    """Resolve an evaluator spec: a PowerSeriesSpec or an exact quotient."""
    if text.startswith("@"):
        return _evaluator_from_file(text[1:])
    return builtin_spec(text)


def parse_measure(text):
    if text == "uniform":
        return UniformMeasure()
    if text.startswith("product:"):
        return ProductMeasure(parse_rational(text.split(":", 1)[1]))
    if text.startswith("from_function:"):
        return DifferentialMeasure(parse_function(text.split(":", 1)[1]))
    raise ParseError(f"unknown measure spec {text!r}")


def _require(cfg, key, path):
    if key not in cfg:
        raise ParseError(f"{path}: missing {key!r}")
    return cfg[key]


def _rat_list(text):
    return [parse_rational(part) for part in text.split(",")]


def _evaluator_from_file(path):
    cfg = load_config(path)
    kind = _require(cfg, "kind", path)
    if kind == "series":
        coeffs = _require(cfg, "coeffs", path)
        if "," in coeffs or coeffs.lstrip("-").split("/")[0].isdigit():
            explicit = _rat_list(coeffs)
            exact = lambda n: explicit[n] if n < len(explicit) else Fraction(0)
            base = None
        else:
            base = builtin_spec(coeffs)
            exact = base.exact_coeff
        center = parse_rational(cfg.get("center", "0"))
        if center != 0:
            raise ParseError(f"{path}: only center=0 series are shipped")
        def inherit(key, fallback, parse=parse_rational):
            if key in cfg:
                return parse(cfg[key])
            if base is not None:
                return fallback(base)
            raise ParseError(f"{path}: explicit coefficients need {key!r}")

        spec = PowerSeriesSpec(
            name=f"series[{path}]",
            coeff_approx=lambda n, r: exact(n),
            center_approx=lambda r: Fraction(0),
            term_bound=inherit("C", lambda b: b.term_bound),
            radius=inherit("r", lambda b: b.radius),
            margin=inherit("eps", lambda b: b.margin),
            anchor=inherit("anchor", lambda b: b.anchor, parse_word),
            exact_coeff=exact,
            exact_center=Fraction(0),
            tail_monotone_from=inherit("tail_from",
                                       lambda b: b.tail_monotone_from, int),
        )
        spec.validate()
        return spec
    if kind == "quotient":
        return QuotientFn(_rat_list(_require(cfg, "num", path)),
                          _rat_list(_require(cfg, "den", path)),
                          parse_rational(_require(cfg, "den_floor", path)),
                          name=f"quotient[{path}]")
    if kind in ("table", "f_Z"):
        return _function_from_file(path)
    raise ParseError(f"{path}: unknown kind {kind!r}")


def _function_from_file(path):
    cfg = load_config(path)
    kind = _require(cfg, "kind", path)
    if kind == "table":
        return TableStepFn.load(_require(cfg, "file", path))
    if kind == "f_Z":
        zset = parse_zset(_require(cfg, "zset", path))
        scaled = cfg.get("scaled", "0") not in ("0", "false", "no")
        return ZeroInsertionFn(zset, scaled=scaled)
    if kind == "quotient":
        return QuotientFn(_rat_list(_require(cfg, "num", path)),
                          _rat_list(_require(cfg, "den", path)),
                          parse_rational(_require(cfg, "den_floor", path)),
                          name=f"quotient[{path}]")
    raise ParseError(f"{path}: kind {kind!r} is not a point-function kind")
