"""Textual family specs for the CLI and service.

Grammar (whitespace-insensitive):

    spec     := NAME | NAME '(' args ')'
    args     := arg (',' arg)*
    arg      := NUMBER '*' spec          weighted term (mix only)
              | NAME '=' value           keyword argument
              | value
    value    := NUMBER | NAME | spec | '[' NUMBER (',' NUMBER)* ']'

Examples:

    bit
    pow(bit, 2)
    concat(anti, pow(bit, 2))
    mix(0.5*bit, 0.5*anti)
    polyham(coeffs=[8,12,5,1], d=16)
    filter(t=2, sign=minus)
    annulus(alpha_max=0, t=1, d=64)
    polysphere(coeffs=[0.3,-0.2,0.5], d=4)
    e2dsh(w=1, k=3, d=8)

Bare families take the parser's default dimension.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .combinators import concat, mixture, power
from .core import DshFamily
from .euclidean import ShiftedBucketParams, e2dsh_family
from .hamming import (
    anti_bit_sampling_family,
    bit_sampling_family,
    const_pair_family,
    polynomial_family,
    scaled_biased_anti_family,
    scaled_bit_sampling_family,
)
from .sphere import (
    AnnulusFamilyParams,
    FilterParams,
    annulus_family,
    crosspolytope_family,
    embedded_dimension,
    filter_family,
    polynomial_sphere_family,
    simhash_family,
)
from .polynomial import Polynomial

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<number>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<punct>[()\[\],=*]))"
)


@dataclass
class _Weighted:
    weight: float
    family: DshFamily


class SpecError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise SpecError(f"cannot tokenize {rest!r}")
        pos = m.end()
        for kind in ("name", "number", "punct"):
            v = m.group(kind)
            if v is not None:
                tokens.append((kind, v))
                break
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]], default_dim: int):
        self.tokens = tokens
        self.i = 0
        self.default_dim = default_dim

    def peek(self, offset: int = 0):
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else (None, None)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        kind, v = self.next()
        if v != text:
            raise SpecError(f"expected {text!r}, got {v!r}")

    def parse_spec(self) -> DshFamily:
        kind, name = self.next()
        if kind != "name":
            raise SpecError(f"expected a family name, got {name!r}")
        args, kwargs = [], {}
        if self.peek()[1] == "(":
            self.next()
            while True:
                if self.peek()[1] == ")":
                    break
                arg = self.parse_arg()
                if isinstance(arg, tuple):
                    kwargs[arg[0]] = arg[1]
                else:
                    args.append(arg)
                if self.peek()[1] == ",":
                    self.next()
                else:
                    break
            self.expect(")")
        return _build(name, args, kwargs, self.default_dim)

    def parse_arg(self):
        kind, v = self.peek()
        if kind == "number" and self.peek(1)[1] == "*":
            weight = float(self.next()[1])
            self.expect("*")
            return _Weighted(weight, self.parse_spec())
        if kind == "name" and self.peek(1)[1] == "=":
            key = self.next()[1]
            self.expect("=")
            return (key, self.parse_value())
        return self.parse_value()

    def parse_value(self):
        kind, v = self.peek()
        if kind == "number":
            self.next()
            return float(v)
        if v == "[":
            self.next()
            items = []
            while self.peek()[1] != "]":
                k, num = self.next()
                if k != "number":
                    raise SpecError(f"lists hold numbers, got {num!r}")
                items.append(float(num))
                if self.peek()[1] == ",":
                    self.next()
            self.expect("]")
            return items
        if kind == "name":
            if v in _BUILDERS:
                return self.parse_spec()
            self.next()
            return v
        raise SpecError(f"unexpected token {v!r}")


def _num(kwargs, args, key, position, default=None):
    if key in kwargs:
        return kwargs.pop(key)
    if position is not None and position < len(args):
        return args[position]
    return default


def _dim(kwargs, default_dim: int) -> int:
    d = kwargs.pop("d", None)
    return int(d) if d is not None else default_dim


def _as_family(value, what: str) -> DshFamily:
    if not isinstance(value, DshFamily):
        raise SpecError(f"{what} needs family arguments")
    return value


def _build(name: str, args: list, kwargs: dict, default_dim: int) -> DshFamily:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise SpecError(f"unknown family {name!r}") from None
    fam = builder(args, kwargs, default_dim)
    if kwargs:
        raise SpecError(f"{name}: unknown arguments {sorted(kwargs)}")
    return fam


def _b_bit(args, kwargs, dd):
    return bit_sampling_family(_dim(kwargs, dd))


def _b_anti(args, kwargs, dd):
    return anti_bit_sampling_family(_dim(kwargs, dd))


def _b_scaled_bit(args, kwargs, dd):
    scale = _num(kwargs, args, "scale", 0)
    if scale is None:
        raise SpecError("scaled_bit needs a scale")
    return scaled_bit_sampling_family(_dim(kwargs, dd), float(scale))


def _b_sba(args, kwargs, dd):
    scale = _num(kwargs, args, "scale", 0)
    bias = _num(kwargs, args, "bias", 1)
    if scale is None or bias is None:
        raise SpecError("scaled_biased_anti needs scale and bias")
    return scaled_biased_anti_family(_dim(kwargs, dd), float(scale), float(bias))


def _b_const(args, kwargs, dd):
    p = _num(kwargs, args, "p", 0)
    if p is None:
        raise SpecError("const_pair needs a collision probability")
    return const_pair_family(_dim(kwargs, dd), float(p))


def _b_polyham(args, kwargs, dd):
    coeffs = _num(kwargs, args, "coeffs", 0)
    if not isinstance(coeffs, list):
        raise SpecError("polyham needs coeffs=[c0, c1, ...]")
    fam, _, _ = polynomial_family(coeffs, _dim(kwargs, dd))
    return fam


def _b_simhash(args, kwargs, dd):
    return simhash_family(_dim(kwargs, dd))


def _b_crosspoly(args, kwargs, dd):
    sign = _num(kwargs, args, "sign", 0, "plus")
    return crosspolytope_family(_dim(kwargs, dd), str(sign))


def _b_filter(args, kwargs, dd):
    t = _num(kwargs, args, "t", 0)
    if t is None:
        raise SpecError("filter needs a threshold t")
    m = _num(kwargs, args, "m", None)
    sign = _num(kwargs, args, "sign", None, "plus")
    params = FilterParams(t=float(t), m=None if m is None else int(m), sign=str(sign))
    return filter_family(_dim(kwargs, dd), params)


def _b_annulus(args, kwargs, dd):
    alpha_max = _num(kwargs, args, "alpha_max", 0)
    t = _num(kwargs, args, "t", 1)
    if alpha_max is None or t is None:
        raise SpecError("annulus needs alpha_max and t")
    return annulus_family(
        _dim(kwargs, dd), AnnulusFamilyParams(alpha_max=float(alpha_max), t_plus=float(t))
    )


def _b_polysphere(args, kwargs, dd):
    coeffs = _num(kwargs, args, "coeffs", 0)
    if not isinstance(coeffs, list):
        raise SpecError("polysphere needs coeffs=[c0, c1, ...]")
    d = _dim(kwargs, dd)
    P = Polynomial(tuple(coeffs))
    base = simhash_family(embedded_dimension(P, d))
    return polynomial_sphere_family(P, base, d)


def _b_e2dsh(args, kwargs, dd):
    w = _num(kwargs, args, "w", 0)
    k = _num(kwargs, args, "k", 1)
    if w is None or k is None:
        raise SpecError("e2dsh needs w and k")
    return e2dsh_family(_dim(kwargs, dd), ShiftedBucketParams(w=float(w), k=int(k)))


def _b_concat(args, kwargs, dd):
    fams = [_as_family(a, "concat") for a in args]
    return concat(fams)


def _b_pow(args, kwargs, dd):
    if len(args) != 2:
        raise SpecError("pow needs (family, k)")
    fam = _as_family(args[0], "pow")
    return power(fam, int(args[1]))


def _b_mix(args, kwargs, dd):
    if not args or not all(isinstance(a, _Weighted) for a in args):
        raise SpecError("mix needs weighted terms like 0.5*bit")
    return mixture([a.family for a in args], [a.weight for a in args])


_BUILDERS = {
    "bit": _b_bit,
    "anti": _b_anti,
    "scaled_bit": _b_scaled_bit,
    "scaled_biased_anti": _b_sba,
    "const_pair": _b_const,
    "polyham": _b_polyham,
    "simhash": _b_simhash,
    "crosspoly": _b_crosspoly,
    "filter": _b_filter,
    "annulus": _b_annulus,
    "polysphere": _b_polysphere,
    "e2dsh": _b_e2dsh,
    "concat": _b_concat,
    "pow": _b_pow,
    "mix": _b_mix,
}

FAMILY_NAMES = tuple(sorted(_BUILDERS))


def parse_family(text: str, default_dim: int = 16) -> DshFamily:
    """Build a family from its textual spec."""
    tokens = _tokenize(text)
    if not tokens:
        raise SpecError("empty family spec")
    parser = _Parser(tokens, default_dim)
    fam = parser.parse_spec()
    if parser.i != len(tokens):
        raise SpecError(f"trailing input after spec: {tokens[parser.i:]}")
    return fam
