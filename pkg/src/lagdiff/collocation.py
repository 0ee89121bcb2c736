"""Laguerre collocation node families and their scaled coefficients.

Three families are supported:

* ``standard-gauss``: the ``npts`` roots of ``L_npts^(alpha)``;
* ``augmented-gauss``: ``x = 0`` plus the roots of ``L_{npts-1}``;
* ``gauss-radau``: ``x = 0`` plus the roots of ``L_{npts-1}^(1)``.

Every matrix formula consumes the nodes only through differences and the
ratios ``c_k / c_j`` of scaled coefficients, where ``c_j`` is proportional to
``exp(-x_j/2) * pi'(x_j)`` for the nodal polynomial ``pi``.  The scaled
values are taken straight from the root sweep, so no exponentially large or
small factor is ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .glr import RootSweepResult, sweep_roots
from .laguerre import LaguerreParam, binom_at_zero

FAMILY_TAGS = ("standard-gauss", "augmented-gauss", "gauss-radau")


@dataclass(frozen=True)
class NodeFamily:
    tag: str
    alpha: float
    includes_origin: bool
    a_is_x: bool  # weight factor a(x) = x when the origin is a node, else 1

    def __post_init__(self):
        if self.tag not in FAMILY_TAGS:
            raise ValueError(f"unknown node family {self.tag!r}; expected one of {FAMILY_TAGS}")
        if not self.alpha > -1:
            raise ValueError(f"alpha must exceed -1, got {self.alpha}")

    @property
    def min_npts(self) -> int:
        return 2 if self.includes_origin else 1

    @classmethod
    def from_tag(cls, tag: str, alpha: float | None = None) -> NodeFamily:
        """Family by name.  Only ``standard-gauss`` accepts a custom alpha."""
        if tag == "standard-gauss":
            return cls(tag, 0.0 if alpha is None else float(alpha), False, False)
        fixed = {"augmented-gauss": 0.0, "gauss-radau": 1.0}
        if tag not in fixed:
            raise ValueError(f"unknown node family {tag!r}; expected one of {FAMILY_TAGS}")
        if alpha is not None and float(alpha) != fixed[tag]:
            raise ValueError(f"{tag} nodes are defined for alpha={fixed[tag]}, got {alpha}")
        return cls(tag, fixed[tag], True, True)


@dataclass(frozen=True)
class NodeSet:
    """Ordered collocation nodes.

    ``generating_degree`` is the degree of the Laguerre polynomial whose
    roots are the interior nodes; ``sweep`` keeps the root sweep, including
    ``Lhat'`` at every root.
    """

    family: NodeFamily
    nodes: np.ndarray
    generating_degree: int
    sweep: RootSweepResult | None = None

    @property
    def npts(self) -> int:
        return len(self.nodes)

    @property
    def alpha(self) -> float:
        return self.family.alpha

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:] if self.family.includes_origin else self.nodes


@dataclass(frozen=True)
class ScaledCoeffs:
    values: np.ndarray


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def build_nodeset(family: NodeFamily | str, npts: int, alpha: float | None = None) -> NodeSet:
    if isinstance(family, str):
        family = NodeFamily.from_tag(family, alpha)
    if int(npts) != npts or npts < family.min_npts:
        raise ValueError(f"{family.tag} needs npts >= {family.min_npts}, got {npts}")
    npts = int(npts)
    degree = npts - 1 if family.includes_origin else npts
    sweep = sweep_roots(LaguerreParam(family.alpha, degree))
    nodes = np.concatenate([[0.0], sweep.roots]) if family.includes_origin else sweep.roots
    return NodeSet(family, _readonly(nodes), degree, sweep)


def scaled_coeffs(nodeset: NodeSet, derivs: np.ndarray | None = None) -> ScaledCoeffs:
    """``c_j = a(x_j) Lhat_n'(x_j)`` at the roots and ``binom(n+alpha, n)`` at the origin."""
    if derivs is None:
        if nodeset.sweep is None:
            raise ValueError("nodeset carries no root sweep; pass derivs explicitly")
        derivs = nodeset.sweep.derivs
    derivs = np.asarray(derivs, dtype=float)
    interior = nodeset.interior
    if derivs.shape != interior.shape:
        raise ValueError(f"expected {interior.size} derivative values, got {derivs.size}")
    if np.any(derivs == 0) or not np.all(np.isfinite(derivs)):
        raise ArithmeticError("zero or non-finite derivative at a simple root")
    fam = nodeset.family
    if fam.includes_origin:
        c = np.concatenate([[binom_at_zero(nodeset.generating_degree, fam.alpha)], interior * derivs])
    else:
        c = derivs.copy()
    return ScaledCoeffs(_readonly(c))
