"""Bernoulli numbers, irregular primes and a p-th power test for cyclotomic units."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from . import kernels

MERTENS = 0.2614972128476427837554268386  # Meissel-Mertens constant
PAPER_SHIFT = 2.56
HEURISTIC_START = 37


class DomainError(ValueError):
    pass


class ConventionError(AssertionError):
    """The half-range and full-range unit products disagree on a verdict."""


# --- primes ------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (ample for every use here)."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_odd_prime(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def primitive_root(q: int) -> int:
    fs = _prime_factors(q - 1)
    for r in range(2, q):
        if all(pow(r, (q - 1) // f, q) != 1 for f in fs):
            return r
    raise DomainError(f"no primitive root mod {q}")


# --- Bernoulli numbers ---------------------------------------------------------

_B: list[Fraction] = [Fraction(1), Fraction(-1, 2)]


def bernoulli_exact(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{j<=m} C(m+1, j) B_j = 0 (m >= 1)."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if n > 1 and n % 2:
        return Fraction(0)
    while len(_B) <= n:
        m = len(_B)
        if m % 2:
            _B.append(Fraction(0))
            continue
        # only B_0, B_1 and even indices contribute
        s = Fraction(1) - Fraction(m + 1, 2)
        for j in range(2, m, 2):
            s += math.comb(m + 1, j) * _B[j]
        _B.append(-s / (m + 1))
    return _B[n]


def bernoulli_numerator_Nn(n: int) -> int:
    """|numerator| of B_n / n in lowest terms."""
    if n < 2 or n % 2:
        raise DomainError("n must be even and >= 2")
    return abs((bernoulli_exact(n) / n).numerator)


def bernoulli_mod_p(k: int, p: int) -> int:
    """B_k mod p for even 2 <= k <= p-3 (where B_k is p-integral)."""
    _require_odd_prime(p)
    if k % 2 or not 2 <= k <= p - 3:
        raise DomainError(f"need even k with 2 <= k <= p-3, got k={k}, p={p}")
    return int(kernels.bernoulli_table_mod_p(p, k)[k])


@dataclass(frozen=True, order=True)
class IrregularPair:
    p: int
    k: int

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k}


def irregular_pairs(p: int) -> list[IrregularPair]:
    """All (p, k), k even in [2, p-3], with p | B_k."""
    _require_odd_prime(p)
    if p < 5:
        return []
    table = kernels.bernoulli_table_mod_p(p, p - 3)
    return [IrregularPair(p, k) for k in range(2, p - 2, 2) if table[k] == 0]


def irregular_pairs_up_to(max_p: int) -> list[IrregularPair]:
    flags = kernels.prime_sieve(max_p)
    out: list[IrregularPair] = []
    for p in range(5, max_p + 1, 2):
        if flags[p]:
            out.extend(irregular_pairs(p))
    return out


def irregular_pairs_exact(p: int) -> list[IrregularPair]:
    """Oracle route: divisibility of exact numerators."""
    _require_odd_prime(p)
    return [IrregularPair(p, k) for k in range(2, p - 2, 2) if bernoulli_exact(k).numerator % p == 0]


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def h2_order_even(p: int, n: int) -> int:
    """p-part of N_n, the order of H^2(Z[1/p], Z_p(n)) for even n."""
    _require_odd_prime(p)
    if n < 2 or n % 2:
        raise DomainError("n must be even and >= 2")
    return _p_part(bernoulli_numerator_Nn(n), p)


def _check_odd_index(p: int, n: int) -> None:
    _require_odd_prime(p)
    if n % 2 == 0 or not 3 <= n <= p - 2:
        raise DomainError(f"need odd n with 3 <= n <= p-2, got n={n}, p={p}")


def kurihara_component(p: int, n: int) -> str:
    """'zero' when B_{p-n} is a unit mod p, else 'possibly_nonzero'."""
    _check_odd_index(p, n)
    return "possibly_nonzero" if bernoulli_mod_p(p - n, p) == 0 else "zero"


def l0_mod_p(p: int, n: int) -> int:
    """L(0, omega^{-n}) mod p via L(0, omega^{-n}) = -B_{1, omega^{-n}} = -B_{p-n}/(p-n) mod p.

    Uses B_{1, omega^{k-1}} = B_k / k (mod p) with k = p - n.
    """
    _check_odd_index(p, n)
    k = p - n
    return (-bernoulli_mod_p(k, p) * pow(k, -1, p)) % p


# --- Vandiver test -------------------------------------------------------------


@dataclass
class VandiverCertificate:
    pair: IrregularPair
    q: int | None
    verdict: str  # "component_zero" | "inconclusive"
    residue: int | None
    tried: list = field(default_factory=list)  # [(q, residue), ...]

    def to_json(self) -> dict:
        return {
            "p": self.pair.p,
            "k": self.pair.k,
            "q": self.q,
            "verdict": self.verdict,
            "residue": self.residue,
            "tried": [list(t) for t in self.tried],
        }

    @classmethod
    def from_json(cls, d: dict) -> "VandiverCertificate":
        return cls(IrregularPair(d["p"], d["k"]), d["q"], d["verdict"], d.get("residue"), [tuple(t) for t in d.get("tried", [])])


def auxiliary_primes(p: int):
    """Primes q = 1 + m p, q != 1 mod p^2, in increasing order."""
    m = 2
    while True:
        q = 1 + m * p
        if q > kernels.MAX_MODULUS:
            return
        if m % p and is_prime(q):
            yield q
        m += 2


def unit_residue(p: int, k: int, q: int, full_range: bool = False) -> int:
    """p-th power residue (mod q) of the real cyclotomic unit projected to omega^{-k}.

    The unit is prod_a (eta^{a/2} - eta^{-a/2})^{a^{p-1-k}}, eta of order p mod q.
    These factors are real units, so no root-of-unity factor spoils the test.
    """
    eta = pow(primitive_root(q), (q - 1) // p, q)
    return kernels.power_residue_product(p, k, q, eta, full_range)


def vandiver_component_test(p: int, k: int, q_budget: int = 10, require_irregular: bool = True) -> VandiverCertificate:
    """Certify that the omega^{-k} component of the unit is not a p-th power."""
    _require_odd_prime(p)
    if k % 2 or not 2 <= k <= p - 3:
        raise DomainError(f"need even k in [2, p-3], got {k}")
    if q_budget < 1:
        raise DomainError("q_budget must be >= 1")
    if require_irregular and bernoulli_mod_p(k, p) != 0:
        raise DomainError(f"({p}, {k}) is not an irregular pair")
    pair = IrregularPair(p, k)
    tried = []
    for q in auxiliary_primes(p):
        if len(tried) >= q_budget:
            break
        half = unit_residue(p, k, q)
        full = unit_residue(p, k, q, full_range=True)
        if (half == 1) != (full == 1):
            raise ConventionError(f"half/full products disagree at p={p}, k={k}, q={q}")
        tried.append((q, half))
        if half != 1:
            return VandiverCertificate(pair, q, "component_zero", half, tried)
    if not tried:
        raise DomainError(f"no admissible auxiliary prime for p={p}")
    return VandiverCertificate(pair, None, "inconclusive", None, tried)


class CertificateStore:
    """Append-only JSON-lines file of Vandiver certificates."""

    def __init__(self, path):
        self.path = Path(path)

    def append(self, cert: VandiverCertificate) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(json.dumps(cert.to_json(), sort_keys=True) + "\n")

    def load(self) -> list[VandiverCertificate]:
        if not self.path.exists():
            return []
        return [VandiverCertificate.from_json(json.loads(ln)) for ln in self.path.read_text().splitlines() if ln.strip()]


# --- reciprocal prime sum ---------------------------------------------------------


@dataclass(frozen=True)
class HeuristicReport:
    x: int
    prime_sum: float
    paper_rhs: float
    mertens_estimate: float
    error_bound: float

    def to_json(self) -> dict:
        return asdict(self) | {"provenance": "certified-precision"}


def heuristic_sum(x: int) -> HeuristicReport:
    """sum_{37 <= p <= x} 1/p by sieve, next to ln ln x - 2.56.

    The sum is compensated (Neumaier or fsum), so the rounding error stays
    below (number of primes) * 2**-53 * max term, far under 1e-9.
    """
    if x < HEURISTIC_START:
        raise DomainError("x must be >= 37")
    s = kernels.prime_reciprocal_sum(HEURISTIC_START, int(x))
    lnln = math.log(math.log(x))
    small = math.fsum(1.0 / p for p in range(2, HEURISTIC_START) if is_prime(p))
    return HeuristicReport(
        x=int(x),
        prime_sum=s,
        paper_rhs=lnln - PAPER_SHIFT,
        mertens_estimate=lnln + MERTENS - small,
        error_bound=1e-12,
    )


@lru_cache(maxsize=None)
def first_irregular_prime(limit: int = 1000) -> int | None:
    for pair in irregular_pairs_up_to(limit):
        return pair.p
    return None
