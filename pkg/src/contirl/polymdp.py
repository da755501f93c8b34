"""Random polynomial-transition problems on [-1, 1].

A transition density has the mixture form

    P(s'|s) = (1 - s^2) * pa(s') + s^2 * pb(s')

where pa and pb are random nonnegative polynomials renormalised to unit
mass.  The form admits exact inverse-transform sampling (the CDF is a
polynomial) and exact basis-expansion coefficients (each entry is a sum
of monomial moments), which is what makes these problems useful for
validating the sampled estimator end to end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .basis import BasisSpec, moment_integral
from .estimate import CoeffMatrix

_GRID = np.linspace(-1.0, 1.0, 1000)


def _poly_mass(coeffs: np.ndarray) -> float:
    # integral over [-1, 1]; odd monomials vanish
    idx = np.arange(coeffs.size)
    even = idx % 2 == 0
    return float(np.sum(2.0 * coeffs[even] / (idx[even] + 1)))


@dataclass(frozen=True)
class PolyDensity:
    """Polynomial probability density on [-1, 1].

    ``coeffs`` are monomial coefficients c_0..c_d in increasing degree.
    Construction checks nonnegativity on a 1000-point grid and unit mass.
    """

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=float)
        object.__setattr__(self, "coeffs", c)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("coeffs must be a nonempty 1-D vector")
        if (c.size - 1) % 2 != 0:
            raise ValueError(f"polynomial degree must be even, got {c.size - 1}")
        if np.min(P.polyval(_GRID, c)) < -1e-12:
            raise ValueError("density is negative on [-1, 1]")
        if abs(_poly_mass(c) - 1.0) > 1e-10:
            raise ValueError("density does not integrate to 1 on [-1, 1]")
        anti = P.polyint(c)
        object.__setattr__(self, "_anti", anti)
        object.__setattr__(self, "_anti_at_lo", float(P.polyval(-1.0, anti)))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def pdf(self, x):
        return P.polyval(np.asarray(x, dtype=float), self.coeffs)

    def cdf(self, x):
        return P.polyval(np.asarray(x, dtype=float), self._anti) - self._anti_at_lo


@dataclass(frozen=True)
class PolyTransition:
    """State-conditional mixture of two polynomial densities."""

    pa: PolyDensity
    pb: PolyDensity

    def pdf(self, s_next, s):
        s = np.asarray(s, dtype=float)
        wb = s * s
        return (1.0 - wb) * self.pa.pdf(s_next) + wb * self.pb.pdf(s_next)

    def sample(self, s, rng: np.random.Generator, bits: int = 32):
        """Draw s' ~ P(.|s) by bisecting the polynomial CDF.

        Vectorised over ``s``; ``bits`` bisection steps give an absolute
        tolerance of 2**-bits on the returned state.
        """
        arr = np.asarray(s, dtype=float)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        u = rng.random(arr.shape)
        wb = arr * arr
        wa = 1.0 - wb
        lo = np.full(arr.shape, -1.0)
        hi = np.ones(arr.shape)
        for _ in range(bits):
            mid = 0.5 * (lo + hi)
            cdf = wa * self.pa.cdf(mid) + wb * self.pb.cdf(mid)
            go_right = cdf < u
            lo = np.where(go_right, mid, lo)
            hi = np.where(go_right, hi, mid)
        out = 0.5 * (lo + hi)
        return float(out[0]) if scalar else out


@dataclass(frozen=True)
class IRLProblem:
    """Reward-free decision process: one transition per action, action 0 optimal."""

    transitions: tuple
    gamma: float
    rng_seed: int = -1

    def __post_init__(self) -> None:
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if len(self.transitions) < 2:
            raise ValueError("need at least 2 actions")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")

    @property
    def num_actions(self) -> int:
        return len(self.transitions)


def gen_polynomial_density(degree: int, rng: np.random.Generator) -> PolyDensity:
    """Random nonnegative polynomial density of the given even degree.

    Sum over r of a_r * (x - b_r)^(2r) with a_r, b_r ~ Uniform(0, 1),
    renormalised to unit mass on [-1, 1].
    """
    if degree < 2 or degree % 2 != 0:
        raise ValueError(f"degree must be a positive even integer, got {degree}")
    total = np.zeros(degree + 1)
    for r in range(1, degree // 2 + 1):
        a = rng.random()
        b = rng.random()
        term = a * P.polypow([-b, 1.0], 2 * r)
        total[: term.size] += term
    total /= _poly_mass(total)
    return PolyDensity(total)


def gen_transition(degree: int, rng: np.random.Generator) -> PolyTransition:
    return PolyTransition(
        pa=gen_polynomial_density(degree, rng),
        pb=gen_polynomial_density(degree, rng),
    )


def transition_pdf(t: PolyTransition, s_next: float, s: float):
    """Density value P(s_next | s); nonnegative on the valid domain."""
    for v in (s_next, s):
        a = np.asarray(v, dtype=float)
        if np.any(a < -1.0) or np.any(a > 1.0):
            raise ValueError(f"state outside [-1, 1]: {v!r}")
    return t.pdf(s_next, s)


def sample_next(t: PolyTransition, s: float, rng: np.random.Generator, bits: int = 32):
    """One-step transition sample via inverse-transform sampling."""
    arr = np.asarray(s, dtype=float)
    if np.any(arr < -1.0) or np.any(arr > 1.0):
        raise ValueError(f"state outside [-1, 1]: {s!r}")
    return t.sample(s, rng, bits=bits)


def exact_Z(t: PolyTransition, basis: BasisSpec, k: int, action_id: int = -1) -> CoeffMatrix:
    """Exact k-truncation of the transition's coefficient matrix.

    Entry (i, j) is the double integral of P(s'|s) phi_i(s') phi_j(s).
    The mixture form makes it a rank-<=2 sum of outer products whose
    factors are closed-form monomial moments.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    u = np.array(
        [sum(c * moment_integral(basis, m, i) for m, c in enumerate(t.pa.coeffs))
         for i in range(1, k + 1)]
    )
    w = np.array(
        [sum(c * moment_integral(basis, m, i) for m, c in enumerate(t.pb.coeffs))
         for i in range(1, k + 1)]
    )
    z = np.array([moment_integral(basis, 2, j) for j in range(1, k + 1)])
    v = np.array([moment_integral(basis, 0, j) for j in range(1, k + 1)]) - z
    entries = np.outer(u, v) + np.outer(w, z)
    return CoeffMatrix(k=k, entries=entries, provenance="exact", action_id=action_id)


def gen_problem(num_actions: int, gamma: float, degree: int, rng) -> IRLProblem:
    """Random problem with i.i.d. transitions per action.

    ``rng`` may be an integer seed (recorded on the problem) or a numpy
    Generator (the recorded seed is then -1).
    """
    if num_actions < 2:
        raise ValueError("num_actions must be at least 2")
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must lie in [0, 1), got {gamma}")
    if isinstance(rng, (int, np.integer)):
        seed = int(rng)
        gen = np.random.default_rng(seed)
    else:
        seed = -1
        gen = rng
    transitions = tuple(gen_transition(degree, gen) for _ in range(num_actions))
    return IRLProblem(transitions=transitions, gamma=gamma, rng_seed=seed)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def save_problem(problem: IRLProblem, path) -> None:
    """Write the flat text format: header line, then pa/pb coefficient lines.

    Header: num_actions gamma degree seed.  Coefficients are written with
    17 significant digits, which round-trips float64 exactly.
    """
    lines = [
        " ".join(
            [
                str(problem.num_actions),
                _fmt(problem.gamma),
                str(problem.transitions[0].pa.degree),
                str(problem.rng_seed),
            ]
        )
    ]
    for t in problem.transitions:
        lines.append(" ".join(_fmt(c) for c in t.pa.coeffs))
        lines.append(" ".join(_fmt(c) for c in t.pb.coeffs))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_problem(path) -> IRLProblem:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    head = lines[0].split()
    num_actions = int(head[0])
    gamma = float(head[1])
    seed = int(head[3])
    body = lines[1:]
    if len(body) != 2 * num_actions:
        raise ValueError(
            f"expected {2 * num_actions} coefficient lines, found {len(body)}"
        )
    transitions = []
    for a in range(num_actions):
        pa = PolyDensity(np.array([float(x) for x in body[2 * a].split()]))
        pb = PolyDensity(np.array([float(x) for x in body[2 * a + 1].split()]))
        transitions.append(PolyTransition(pa=pa, pb=pb))
    return IRLProblem(transitions=tuple(transitions), gamma=gamma, rng_seed=seed)
