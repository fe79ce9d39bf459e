"""Dirichlet characters and L-functions built from finite Hurwitz-zeta sums.

A character of period m is stored as a validated table of its m values; the
associated L-function is evaluated through

    L_m(s) = m^{-s} sum_{r=1..m} chi(r) zeta(s, r/m),

with the 1/(s-1) residues of the Hurwitz terms combined symbolically: their
chi-weighted sum is phi(m) for the principal character and exactly 0
otherwise, so non-principal L-functions evaluate cleanly through s = 1.

Also here: the real root sigma_1 of zeta(sigma) = 2, a window-truncated scan
estimate of the abscissa sigma_0 below which Re L_m can vanish, and the
real/imaginary-part bound checks used as runtime oracles on flows.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CharacterValidationError, DomainError, PoleError
from . import special
from .special import DEFAULT_CONFIG, EvalConfig

_UNITY_TOL = 1e-12


@dataclass(frozen=True)
class CharacterTable:
    """A Dirichlet character of period m as an explicit value table.

    ``values[r - 1]`` holds chi(r) for r = 1..m; the last entry stands for
    chi(m), i.e. chi(0 mod m).  Construct through ``validate_character`` (or
    the ``principal_character`` / ``prime_character_group`` builders), which
    checks periodic multiplicativity, the gcd zero pattern, chi(1) = 1 and
    that nonzero values are roots of unity.
    """

    period: int
    values: tuple[complex, ...]
    is_principal: bool
    is_real: bool

    def value(self, n: int) -> complex:
        """chi(n) for any n >= 1, by periodicity."""
        return self.values[(n - 1) % self.period]

    def coprime_count(self) -> int:
        return sum(1 for r in range(1, self.period + 1)
                   if math.gcd(r, self.period) == 1)


def validate_character(values: Sequence[complex]) -> CharacterTable:
    """Validate a raw period-m value list and cache the derived flags."""
    vals = tuple(complex(v) for v in values)
    m = len(vals)
    if m < 1:
        raise CharacterValidationError("a character table needs at least one entry")

    def chi(n: int) -> complex:
        return vals[(n - 1) % m]

    if abs(chi(1) - 1.0) > _UNITY_TOL:
        raise CharacterValidationError(f"chi(1) must be 1, got {chi(1)!r}")
    for r in range(1, m + 1):
        if math.gcd(r, m) > 1:
            if abs(vals[r - 1]) > _UNITY_TOL:
                raise CharacterValidationError(
                    f"chi({r}) must vanish: gcd({r}, {m}) > 1")
        else:
            mag = abs(vals[r - 1])
            if abs(mag - 1.0) > _UNITY_TOL:
                raise CharacterValidationError(
                    f"chi({r}) must be a root of unity, got modulus {mag!r}")
    for a in range(1, m + 1):
        for b in range(a, m + 1):
            lhs = chi(a * b)
            rhs = chi(a) * chi(b)
            if abs(lhs - rhs) > 10 * _UNITY_TOL:
                raise CharacterValidationError(
                    f"multiplicativity fails at pair ({a}, {b}): "
                    f"chi(ab)={lhs!r} vs chi(a)chi(b)={rhs!r}")
    coprime = [vals[r - 1] for r in range(1, m + 1) if math.gcd(r, m) == 1]
    is_principal = all(abs(v - 1.0) <= _UNITY_TOL for v in coprime)
    is_real = all(abs(v.imag) <= _UNITY_TOL for v in vals)
    return CharacterTable(period=m, values=vals,
                          is_principal=is_principal, is_real=is_real)


def principal_character(m: int) -> CharacterTable:
    """The period-m character equal to 1 on residues coprime to m."""
    if m < 1:
        raise DomainError("period must be a positive integer")
    vals = [1.0 + 0.0j if math.gcd(r, m) == 1 else 0.0 + 0.0j
            for r in range(1, m + 1)]
    return validate_character(vals)


def _primitive_root(p: int) -> int:
    order = p - 1
    factors = set()
    x, q = order, 2
    while q * q <= x:
        while x % q == 0:
            factors.add(q)
            x //= q
        q += 1
    if x > 1:
        factors.add(x)
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in factors):
            return g
    raise DomainError(f"{p} is not prime")


def prime_character_group(p: int) -> list[CharacterTable]:
    """All p-1 characters of prime period p, built from a primitive root."""
    if p < 2 or any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
        raise DomainError("period must be prime for the group builder")
    if p == 2:
        return [principal_character(2)]
    g = _primitive_root(p)
    # discrete logs: residue g^k mod p -> k
    dlog = {}
    acc = 1
    for k in range(p - 1):
        dlog[acc] = k
        acc = (acc * g) % p
    tables = []
    for j in range(p - 1):
        vals = []
        for r in range(1, p + 1):
            if r % p == 0:
                vals.append(0.0 + 0.0j)
            else:
                vals.append(np.exp(2j * math.pi * j * dlog[r % p] / (p - 1)))
        tables.append(validate_character(vals))
    return tables


def character_from_json(doc) -> CharacterTable:
    """Load {"period": m, "values": [[re, im], ...]} (dict or JSON text)."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    try:
        m = int(doc["period"])
        pairs = doc["values"]
        vals = [complex(float(re), float(im)) for re, im in pairs]
    except (KeyError, TypeError, ValueError) as exc:
        raise CharacterValidationError(f"malformed character document: {exc}") from exc
    if len(vals) != m:
        raise CharacterValidationError(
            f"value list length {len(vals)} does not match period {m}")
    return validate_character(vals)


def character_to_json(table: CharacterTable) -> dict:
    return {"period": table.period,
            "values": [[v.real, v.imag] for v in table.values]}


# ---------------------------------------------------------------------------
# L-function evaluation.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LFunctionHandle:
    """An evaluatable Dirichlet L-function; ``has_pole`` iff principal."""

    character: CharacterTable
    eval_cfg: EvalConfig = DEFAULT_CONFIG
    has_pole: bool = True

    def __post_init__(self):
        if self.has_pole != self.character.is_principal:
            raise DomainError("has_pole must equal character.is_principal")

    @property
    def period(self) -> int:
        return self.character.period

    def pole_weight(self) -> int:
        """chi-weighted sum of the per-residue 1/(s-1) coefficients."""
        return self.character.coprime_count() if self.has_pole else 0

    def eval(self, s) -> complex:
        return l_eval(self, s)

    def eval_many(self, s, tol: float = 1e-12) -> np.ndarray:
        """Vectorized evaluation on an array of points away from s = 1."""
        s = np.asarray(s, dtype=complex)
        m = self.period
        total = np.zeros_like(s)
        for r in range(1, m + 1):
            chi = self.character.values[r - 1]
            if chi == 0:
                continue
            reg, _ = special.hurwitz_split_many(s, r / m, tol=tol)
            total = total + chi * reg
        pw = self.pole_weight()
        if pw:
            total = total + pw / (s - 1.0)
        return np.exp(-s * math.log(m)) * total if m > 1 else total

    def eval_point(self, s: complex) -> complex:
        return complex(self.eval_many(np.array([complex(s)]))[0])


def l_function(character: CharacterTable,
               cfg: EvalConfig = DEFAULT_CONFIG) -> LFunctionHandle:
    return LFunctionHandle(character=character, eval_cfg=cfg,
                           has_pole=character.is_principal)


def zeta_function(cfg: EvalConfig = DEFAULT_CONFIG) -> LFunctionHandle:
    """The Riemann zeta as the m = 1 principal L-function."""
    return l_function(principal_character(1), cfg)


def l_eval(handle: LFunctionHandle, s) -> complex:
    """L_m(s) through the finite Hurwitz sum, pole residues combined exactly.

    Raises PoleError iff the character is principal and s = 1; non-principal
    L-functions are finite there because the chi-weighted residue sum
    vanishes identically and is dropped symbolically.
    """
    s = complex(s)
    if s == 1 and handle.has_pole:
        raise PoleError("principal L-functions have a pole at s = 1")
    m = handle.period
    cfg = handle.eval_cfg
    total = 0.0 + 0.0j
    for r in range(1, m + 1):
        chi = handle.character.values[r - 1]
        if chi == 0:
            continue
        reg, _, _ = special.hurwitz_regular_split(s, r / m, cfg)
        total += chi * reg
    pw = handle.pole_weight()
    if pw:
        total += pw / (s - 1.0)
    if m > 1:
        total *= np.exp(-s * math.log(m))
    return complex(total)


def dirichlet_series(handle: LFunctionHandle, s, n_terms: int = 1 << 17):
    """Truncated defining series with a zeta-majorant tail bound.

    Returns (partial_sum, tail_bound); requires Re s > 1 for the bound to be
    finite.  This is the direct-series oracle, independent of the Hurwitz
    route.
    """
    s = complex(s)
    if s.real <= 1.0:
        raise DomainError("the series oracle needs Re s > 1")
    n = np.arange(1, n_terms + 1, dtype=float)
    chi = np.array([handle.character.value(k) for k in range(1, handle.period + 1)])
    coeff = np.tile(chi, n_terms // handle.period + 1)[:n_terms]
    partial = complex(np.sum(coeff * np.exp(-s * np.log(n))))
    sigma = s.real
    tail = n_terms ** (1.0 - sigma) / (sigma - 1.0) + n_terms ** (-sigma)
    return partial, float(tail)


def euler_product_principal(handle: LFunctionHandle, s) -> complex:
    """zeta(s) x prod_{p | m} (1 - p^{-s}) for a principal character."""
    if not handle.has_pole:
        raise DomainError("the Euler-factor identity applies to principal characters")
    s = complex(s)
    m = handle.period
    val = special.riemann_zeta(s, handle.eval_cfg)
    p = 2
    mm = m
    while mm > 1:
        if mm % p == 0:
            val *= 1.0 - p ** (-s)
            while mm % p == 0:
                mm //= p
        p += 1
    return complex(val)


# ---------------------------------------------------------------------------
# sigma_1 and the window-truncated sigma_0 estimate.
# ---------------------------------------------------------------------------

def sigma1_root(cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """The real root of zeta(sigma) = 2 on (1, 2), by bisection to 1e-8.

    zeta is strictly decreasing on (1, inf), so the root is unique.
    """
    lo, hi = 1.01, 2.0
    flo = special.riemann_zeta(lo, cfg).real - 2.0
    fhi = special.riemann_zeta(hi, cfg).real - 2.0
    if not (flo > 0 > fhi):
        raise DomainError("bisection bracket lost; zeta evaluation suspect")
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        if special.riemann_zeta(mid, cfg).real - 2.0 > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ScanGrid:
    """Resolution of the sigma_0 window scan."""

    sigma_step: float = 0.005
    t_step: float = 0.2
    bisect_tol: float = 1e-4


@dataclass(frozen=True)
class Sigma0Result:
    sigma: float
    attained: bool     # False: no sign change anywhere in the window
    t_hit: float | None


def sigma0_estimate(handle: LFunctionHandle, sigma_lo: float, sigma_hi: float,
                    t_max: float, grid: ScanGrid = ScanGrid()) -> Sigma0Result:
    """Largest sigma in [sigma_lo, sigma_hi] where Re L_m(sigma + it) changes
    sign for some |t| <= t_max, refined by bisection in sigma.

    A lower estimate of the true abscissa, truncated to the t-window; when no
    sign change exists anywhere in the window the result carries
    ``attained=False`` and returns sigma_lo.
    """
    if not sigma_lo < sigma_hi:
        raise DomainError("need sigma_lo < sigma_hi")
    if t_max < 0:
        raise DomainError("t_max must be nonnegative")
    ts = np.arange(0.0, t_max + grid.t_step * 0.5, grid.t_step)
    if ts.size == 0:
        return Sigma0Result(sigma=sigma_lo, attained=False, t_hit=None)
    if not handle.character.is_real:
        ts = np.concatenate([-ts[::-1], ts[1:]])  # conjugate symmetry fails: scan both signs

    def first_change(sigma: float) -> float | None:
        s = sigma + 1j * ts
        if handle.has_pole:
            # dodge exact pole evaluation at (1, 0)
            s = np.where(np.abs(s - 1.0) < 1e-12, sigma + 1j * (ts + grid.t_step / 7.0), s)
        row = handle.eval_many(s).real
        idx = np.where(np.diff(np.sign(row)) != 0)[0]
        return float(ts[idx[0]]) if idx.size else None

    sigmas = np.arange(sigma_hi, sigma_lo - grid.sigma_step * 0.5, -grid.sigma_step)
    hit_sigma = None
    hit_t = None
    for sg in sigmas:
        t_hit = first_change(float(sg))
        if t_hit is not None:
            hit_sigma, hit_t = float(sg), t_hit
            break
    if hit_sigma is None:
        return Sigma0Result(sigma=sigma_lo, attained=False, t_hit=None)
    # bisect upward: largest sigma with a sign change
    lo = hit_sigma
    hi = min(hit_sigma + grid.sigma_step, sigma_hi)
    while hi - lo > grid.bisect_tol:
        mid = 0.5 * (lo + hi)
        t_hit = first_change(mid)
        if t_hit is None:
            hi = mid
        else:
            lo, hit_t = mid, t_hit
    return Sigma0Result(sigma=lo, attained=True, t_hit=hit_t)


# ---------------------------------------------------------------------------
# Real/imaginary part bound checks (runtime oracle on the right half-plane).
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReBoundsReport:
    value: complex
    re_lower: float
    re_upper: float
    im_bound: float
    re_ok: bool
    im_ok: bool

    @property
    def ok(self) -> bool:
        return self.re_ok and self.im_ok


def re_bounds_check(handle: LFunctionHandle, s) -> ReBoundsReport:
    """Check max{0, 2 - zeta(Re s)} <= Re L <= zeta(Re s), |Im L| <= zeta(Re s) - 1.

    Valid for Re s > 1.  The bounds are attained with equality for the zeta
    itself at real s, so comparisons carry a 1e-12 slack.
    """
    s = complex(s)
    if not s.real > 1.0:
        raise DomainError("the bound check needs Re s > 1")
    z = special.riemann_zeta(complex(s.real), handle.eval_cfg).real
    val = l_eval(handle, s)
    re_lower = max(0.0, 2.0 - z)
    re_upper = z
    im_bound = z - 1.0
    eps = 1e-12
    re_ok = re_lower - eps <= val.real <= re_upper + eps
    im_ok = abs(val.imag) <= im_bound + eps
    return ReBoundsReport(value=val, re_lower=re_lower, re_upper=re_upper,
                          im_bound=im_bound, re_ok=re_ok, im_ok=im_ok)
