"""Factor algebra for variable elimination.

A factor is a nonnegative table over the joint states of its scope. The
values array always has one axis per scope variable, in scope order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dcaw.bn.network import Cpt, Network, NoisyOrCpd, expand_noisy_or


@dataclass(frozen=True)
class Factor:
    scope: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)

    @property
    def is_scalar(self) -> bool:
        return not self.scope


def multiply(a: Factor, b: Factor) -> Factor:
    scope = a.scope + tuple(v for v in b.scope if v not in a.scope)
    return Factor(scope, _aligned(a, scope) * _aligned(b, scope))


def _aligned(f: Factor, scope: tuple[str, ...]) -> np.ndarray:
    """View of f.values broadcastable over the joint shape of `scope`."""
    perm = sorted(range(len(f.scope)), key=lambda i: scope.index(f.scope[i]))
    arr = f.values.transpose(perm)
    shape = [1] * len(scope)
    for axis, i in enumerate(perm):
        shape[scope.index(f.scope[i])] = f.values.shape[i]
    return arr.reshape(shape)


def product(factors: list[Factor]) -> Factor:
    if not factors:
        return Factor((), np.array(1.0))
    scope: tuple[str, ...] = ()
    for f in factors:
        scope += tuple(v for v in f.scope if v not in scope)
    out = np.array(1.0)
    for f in factors:
        out = out * _aligned(f, scope)
    return Factor(scope, out)


def sum_out(f: Factor, var: str) -> Factor:
    axis = f.scope.index(var)
    return Factor(f.scope[:axis] + f.scope[axis + 1:], f.values.sum(axis=axis))


def reduce_var(f: Factor, var: str, state_idx: int) -> Factor:
    axis = f.scope.index(var)
    return Factor(f.scope[:axis] + f.scope[axis + 1:], np.take(f.values, state_idx, axis=axis))


def marginalize_to(f: Factor, keep: tuple[str, ...]) -> Factor:
    """Sum out everything not in keep and reorder axes to keep's order."""
    out = f
    for var in list(out.scope):
        if var not in keep:
            out = sum_out(out, var)
    perm = [out.scope.index(v) for v in keep if v in out.scope]
    scope = tuple(out.scope[i] for i in perm)
    return Factor(scope, out.values.transpose(perm))


def cpd_factor(net: Network, cpd: Cpt | NoisyOrCpd) -> Factor:
    """Family factor with scope (parents..., child)."""
    if isinstance(cpd, NoisyOrCpd):
        cpd = expand_noisy_or(cpd)
    shape = [net.card(p) for p in cpd.parents] + [net.card(cpd.child)]
    return Factor(cpd.parents + (cpd.child,), cpd.rows.reshape(shape))
