"""Coefficient extraction from products of edge factors.

The quantity computed here, for a graph with genus function gf, vertex
order, leak vector l and multidegree a, is

    Coef_{z^{2g}} Coef_{x^l} Coef_{q^a}  prod_i 1/S(z_i)
        * prod_{loops k} P~_loop(q_k) * prod_{non-loops k} P~(x_t/x_h, q_k)

with the dressed factors of :mod:`trofey.propagators`; the plain variant
drops all z-machinery (and requires an all-zero genus function).  Since
q_k occurs in exactly one factor, the q-extraction happens per edge: a
query at multidegree a multiplies the per-edge q^{a_k} slices and only
then extracts x- and z-coefficients.

Winding bounds.  A slice term of a curled edge (a_k > 0) moves w | a_k
units between its endpoints; an uncurled edge (a_k = 0) carries w >= 1 in
its orientation direction.  In any monomial contributing to x^l, the
uncurled weights form a flow on the acyclic orientation whose sources are
curled contributions and leaks, so each uncurled w is at most
B = sum(a) + sum|l|.  Terms beyond these bounds are provably irrelevant
and never built; partial products are additionally pruned by discarding
monomials whose exponent at some vertex can no longer reach l_v with the
remaining edges' capacity.  Nothing is silently truncated: the bounds are
sufficient, and an explicit smaller ``x_bound`` raises instead.

For cross-validation, :func:`refined_coeff_reference` computes the same
coefficient directly from truncated propagator series products.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, Mapping, Sequence

from .graphs import (
    FeynmanGraph,
    GraphAssignment,
    VertexOrder,
    all_orders,
    automorphism_count,
    edge_orientation,
    enumerate_labeled_graphs,
    identity_order,
    validate_assignment,
)
from .propagators import (
    EdgeContext,
    divisors,
    loop_propagator,
    propagator,
    vertex_loop_propagator,
    vertex_propagator,
)
from .series import (
    Coeff,
    TruncatedSeries,
    TruncationSpec,
    invert,
    monomial,
    s_function_series,
)

LeakVector = tuple[int, ...]
Multidegree = tuple[int, ...]


@lru_cache(maxsize=None)
def _s_coeff(m: int) -> Coeff:
    """z^{2m}-coefficient of S(z)."""
    return 1 if m == 0 else Fraction(1, 4**m * factorial(2 * m + 1))


@lru_cache(maxsize=None)
def _inv_s_coeffs(g: int) -> tuple[Coeff, ...]:
    """z^{2m}-coefficients (m = 0..g) of 1/S(z), via series inversion."""
    spec = TruncationSpec.make(z_bounds={1: 2 * g})
    inv = invert(s_function_series(spec, 2 * g, ("z", 1)))
    return tuple(inv.coefficient({("z", 1): 2 * m}) for m in range(g + 1))


# An edge-slice term: exponent/dressing data at the two edge ends plus a
# coefficient.  For loops both ends are the same vertex and x-exponents
# are zero; the whole z-dressing is reported in the tail slot.
_SliceTerm = tuple[int, int, int, int, Coeff]  # (x_tail, z_tail, x_head, z_head, c)


@lru_cache(maxsize=None)
def _slice_terms(
    is_loop: bool, a: int, direct_cap: int, g_tail: int, g_head: int
) -> tuple[_SliceTerm, ...]:
    """q^a-slice of one (dressed) edge factor, in endpoint-local form."""
    out: list[_SliceTerm] = []
    if is_loop:
        if a == 0:
            return ()  # loop factors have no constant term
        for w in divisors(a):
            # S(w z)^2 = sum_m (sum_{i+j=m} s_i s_j) w^{2m} z^{2m}
            for m in range(g_tail + 1):
                conv = sum(_s_coeff(i) * _s_coeff(m - i) for i in range(m + 1))
                out.append((0, 2 * m, 0, 0, w ** (2 * m + 1) * conv))
        return tuple(out)
    if a == 0:
        windings: list[tuple[int, int]] = [(w, 1) for w in range(1, direct_cap + 1)]
    else:
        windings = [(w, s) for w in divisors(a) for s in (1, -1)]
    for w, sgn in windings:
        for i in range(g_tail + 1):
            for j in range(g_head + 1):
                c = w ** (1 + 2 * i + 2 * j) * _s_coeff(i) * _s_coeff(j)
                out.append((sgn * w, 2 * i, -sgn * w, 2 * j, c))
    return tuple(out)


def _normalize_query(
    graph: FeynmanGraph,
    a: Sequence[int] | None,
    l: Sequence[int] | None,
    gf: Sequence[int] | None,
    vertex_contributions: bool | None,
) -> tuple[Multidegree | None, LeakVector, tuple[int, ...], bool]:
    n, r = graph.n, graph.num_edges
    if a is not None:
        a = tuple(a)
        if len(a) != r or any(x < 0 for x in a):
            raise ValueError(f"multidegree must be {r} nonnegative integers")
    leaks = tuple(l) if l is not None else (0,) * n
    if len(leaks) != n:
        raise ValueError(f"leak vector must have length {n}")
    if vertex_contributions is None:
        vertex_contributions = gf is not None
    if vertex_contributions:
        if gf is None:
            raise ValueError("vertex contributions need a genus function")
        gf = tuple(gf)
        if len(gf) != n or any(g < 0 for g in gf):
            raise ValueError("genus function must be n nonnegative integers")
    else:
        if gf is not None and any(gf):
            raise ValueError("plain integrals require an all-zero genus function")
        gf = (0,) * n
    return a, leaks, gf, vertex_contributions


def _edge_processing_order(graph: FeynmanGraph, order: VertexOrder) -> list[int]:
    """Edge indices (0-based) sorted so vertices finish as early as possible."""
    pos = {v: order.index(v) for v in range(1, graph.n + 1)}

    def key(idx: int) -> tuple[int, int, int]:
        u, v = graph.edges[idx]
        return (max(pos[u], pos[v]), min(pos[u], pos[v]), idx)

    return sorted(range(graph.num_edges), key=key)


def _slice_products(
    graph: FeynmanGraph,
    order: VertexOrder,
    a: Multidegree,
    leak_targets: Sequence[LeakVector],
    gf: tuple[int, ...],
    direct_cap: int,
    x_bound: int | None = None,
) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Coeff]:
    """Product of the per-edge q^{a_k} slices and the 1/S(z_i) factors.

    Keys are (x-exponents, z-exponents) by vertex; only monomials that can
    still reach one of ``leak_targets`` survive each multiplication step.
    """
    n = graph.n
    edge_order = _edge_processing_order(graph, order)

    caps = []
    for idx in range(graph.num_edges):
        u, v = graph.edges[idx]
        if u == v:
            caps.append(0)
        elif a[idx] > 0:
            caps.append(a[idx])
        else:
            caps.append(direct_cap)
    if x_bound is not None and caps and x_bound < max(caps):
        raise ValueError(
            f"x_bound {x_bound} is smaller than the provably sufficient "
            f"winding bound {max(caps)}; refusing to truncate silently"
        )

    target_lo = [min(t[v] for t in leak_targets) for v in range(n)]
    target_hi = [max(t[v] for t in leak_targets) for v in range(n)]

    remaining_cap = [0] * n
    for idx in range(graph.num_edges):
        u, v = graph.edges[idx]
        if u != v:
            remaining_cap[u - 1] += caps[idx]
            remaining_cap[v - 1] += caps[idx]

    zero = (0,) * n
    state: dict[tuple[tuple[int, ...], tuple[int, ...]], Coeff] = {(zero, zero): 1}
    for idx in edge_order:
        u, v = graph.edges[idx]
        if u != v:
            tail, head = edge_orientation(graph, idx, order)
        else:
            tail = head = u
        t_idx, h_idx = tail - 1, head - 1
        terms = _slice_terms(
            u == v, a[idx], direct_cap, gf[t_idx], gf[h_idx]
        )
        if not terms:
            return {}
        if u != v:
            remaining_cap[t_idx] -= caps[idx]
            remaining_cap[h_idx] -= caps[idx]
        new: dict[tuple[tuple[int, ...], tuple[int, ...]], Coeff] = {}
        for (xs, zs), c in state.items():
            for xt, zt, xh, zh, ec in terms:
                zt_new = zs[t_idx] + zt
                if zt_new > 2 * gf[t_idx]:
                    continue
                zh_new = zs[h_idx] + zh
                if t_idx != h_idx and zh_new > 2 * gf[h_idx]:
                    continue
                xt_new = xs[t_idx] + xt
                if not (
                    target_lo[t_idx] - remaining_cap[t_idx]
                    <= xt_new
                    <= target_hi[t_idx] + remaining_cap[t_idx]
                ):
                    continue
                xh_new = xs[h_idx] + xh
                if t_idx != h_idx and not (
                    target_lo[h_idx] - remaining_cap[h_idx]
                    <= xh_new
                    <= target_hi[h_idx] + remaining_cap[h_idx]
                ):
                    continue
                xs2 = list(xs)
                zs2 = list(zs)
                xs2[t_idx] = xt_new
                zs2[t_idx] = zt_new
                if t_idx != h_idx:
                    xs2[h_idx] = xh_new
                    zs2[h_idx] = zh_new
                key = (tuple(xs2), tuple(zs2))
                s = new.get(key, 0) + c * ec
                if s == 0:
                    new.pop(key, None)
                else:
                    new[key] = s
        state = new
        if not state:
            return {}
    # vertex prefactors 1/S(z_i); z-degree only grows, so bound pruning stays valid
    for vi in range(n):
        g = gf[vi]
        if g == 0:
            continue
        inv = _inv_s_coeffs(g)
        new = {}
        for (xs, zs), c in state.items():
            for m, im in enumerate(inv):
                z_new = zs[vi] + 2 * m
                if z_new > 2 * g:
                    continue
                zs2 = list(zs)
                zs2[vi] = z_new
                key = (xs, tuple(zs2))
                s = new.get(key, 0) + c * im
                if s == 0:
                    new.pop(key, None)
                else:
                    new[key] = s
        state = new
    return state


def refined_sweep(
    graph: FeynmanGraph,
    order: VertexOrder,
    a: Sequence[int],
    leak_targets: Sequence[Sequence[int]],
    gf: Sequence[int] | None = None,
    vertex_contributions: bool | None = None,
    x_bound: int | None = None,
) -> dict[LeakVector, Coeff]:
    """Coefficients at one multidegree for several leak vectors at once.

    The edge-factor product is independent of the leak target, so a whole
    family of leak extractions shares one product; this is the workhorse
    behind the route-equivalence sweeps.
    """
    targets = [tuple(t) for t in leak_targets]
    a_t, _, gf_t, vc = _normalize_query(graph, a, targets[0], gf, vertex_contributions)
    for t in targets:
        if len(t) != graph.n:
            raise ValueError("bad leak vector length")
    assert a_t is not None
    direct_cap = sum(a_t) + max(sum(abs(x) for x in t) for t in targets)
    products = _slice_products(
        graph, order, a_t, targets, gf_t, direct_cap, x_bound=x_bound
    )
    z_goal = tuple(2 * g for g in gf_t) if vc else (0,) * graph.n
    out: dict[LeakVector, Coeff] = {t: 0 for t in targets}
    for (xs, zs), c in products.items():
        if zs == z_goal and xs in out:
            out[xs] = out[xs] + c
    return out


def refined_coeff(
    graph: FeynmanGraph,
    order: VertexOrder,
    a: Sequence[int],
    l: Sequence[int] | None = None,
    gf: Sequence[int] | None = None,
    vertex_contributions: bool | None = None,
    x_bound: int | None = None,
) -> Coeff:
    """Single coefficient of the (dressed) edge-factor product.

    With ``vertex_contributions`` false (the default when no genus
    function is supplied) the plain factors are used; a nonzero genus
    function then raises.
    """
    a_t, leaks, gf_t, vc = _normalize_query(graph, a, l, gf, vertex_contributions)
    assert a_t is not None
    if sum(leaks) != 0:
        return 0  # every edge term moves weight between vertices, net zero
    return refined_sweep(
        graph, order, a_t, [leaks], gf_t if vc else None,
        vertex_contributions=vc, x_bound=x_bound,
    )[leaks]


def multidegrees(
    graph: FeynmanGraph, q_bounds: Sequence[int], total_cap: int | None = None
) -> Iterator[Multidegree]:
    """All multidegrees within per-edge bounds (loops need a_k >= 1)."""
    r = graph.num_edges
    bounds = list(q_bounds)
    if len(bounds) != r:
        raise ValueError("need one q-bound per edge")
    is_loop = [u == v for u, v in graph.edges]
    if total_cap is None:
        total_cap = sum(bounds)

    def rec(idx: int, left: int, acc: list[int]) -> Iterator[Multidegree]:
        if idx == r:
            yield tuple(acc)
            return
        start = 1 if is_loop[idx] else 0
        min_rest = sum(1 for j in range(idx + 1, r) if is_loop[j])
        for val in range(start, min(bounds[idx], left - min_rest) + 1):
            acc.append(val)
            yield from rec(idx + 1, left - val, acc)
            acc.pop()

    min_first = sum(1 for j in range(r) if is_loop[j])
    if min_first > total_cap:
        return
    yield from rec(0, total_cap, [])


def integral_series_refined(
    graph: FeynmanGraph,
    order: VertexOrder,
    q_bounds: Sequence[int] | int,
    l: Sequence[int] | None = None,
    gf: Sequence[int] | None = None,
    vertex_contributions: bool | None = None,
    total_q_cap: int | None = None,
) -> dict[Multidegree, Coeff]:
    """All refined coefficients with a_k <= q_bounds[k] (zero entries dropped)."""
    if isinstance(q_bounds, int):
        q_bounds = [q_bounds] * graph.num_edges
    _, leaks, gf_t, vc = _normalize_query(graph, None, l, gf, vertex_contributions)
    out: dict[Multidegree, Coeff] = {}
    if sum(leaks) != 0:
        return out
    for a in multidegrees(graph, q_bounds, total_q_cap):
        value = refined_sweep(
            graph, order, a, [leaks], gf_t if vc else None, vertex_contributions=vc
        )[leaks]
        if value != 0:
            out[a] = value
    return out


def integral_series_q(
    graph: FeynmanGraph,
    gf: Sequence[int] | None,
    order: VertexOrder,
    q_order: int,
    vertex_contributions: bool | None = None,
) -> dict[int, Coeff]:
    """q-series with q_1 = ... = q_r = q: coefficient of q^d sums Σa = d."""
    table = integral_series_refined(
        graph,
        order,
        [q_order] * graph.num_edges,
        gf=gf,
        vertex_contributions=vertex_contributions,
        total_q_cap=q_order,
    )
    out: dict[int, Coeff] = {}
    for a, value in table.items():
        d = sum(a)
        s = out.get(d, 0) + value
        if s == 0:
            out.pop(d, None)
        else:
            out[d] = s
    return out


def integral_series_all_orders(
    graph: FeynmanGraph,
    gf: Sequence[int] | None,
    q_order: int,
    vertex_contributions: bool | None = None,
) -> dict[int, Coeff]:
    """Sum of integral_series_q over all n! vertex orders.

    Orders inducing the same edge orientations give identical series, so
    the sum is computed once per orientation class and multiplied.
    """
    classes: dict[tuple, tuple[VertexOrder, int]] = {}
    for order in all_orders(graph.n):
        sig = _orientation_signature(graph, order)
        if sig in classes:
            rep, count = classes[sig]
            classes[sig] = (rep, count + 1)
        else:
            classes[sig] = (order, 1)
    out: dict[int, Coeff] = {}
    for rep, count in classes.values():
        part = integral_series_q(graph, gf, rep, q_order, vertex_contributions)
        for d, c in part.items():
            s = out.get(d, 0) + c * count
            if s == 0:
                out.pop(d, None)
            else:
                out[d] = s
    return out


def _orientation_signature(graph: FeynmanGraph, order: VertexOrder) -> tuple:
    """Edgewise (tail, head) data -- everything order-dependent computations see."""
    sig = []
    for idx, (u, v) in enumerate(graph.edges):
        if u == v:
            sig.append((u, u))
        else:
            sig.append(edge_orientation(graph, idx, order))
    return tuple(sig)


def mirror_total_series(k: Sequence[int], q_order: int) -> dict[int, Coeff]:
    """The graph-sum side of the mirror identity.

    Sums, over all vertex-labeled (graph, gf) classes compatible with k
    and all vertex orders, the dressed q-series weighted by the
    vertex-labeled automorphism count.  Summing labeled classes this way
    equals summing isomorphism classes with the labeled-copy multiplicity;
    both reproduce the pinned invariant values, whereas weighting
    isomorphism classes by bare 1/|Aut| does not.
    """
    totals: dict[int, Coeff] = {}
    for assignment in enumerate_labeled_graphs(k):
        aut = automorphism_count(assignment.graph, assignment.gf, "vertex_labeled")
        series = integral_series_all_orders(assignment.graph, assignment.gf, q_order)
        for d, c in series.items():
            s = totals.get(d, 0) + c * Fraction(1, aut)
            if s == 0:
                totals.pop(d, None)
            else:
                totals[d] = s
    return totals


# -- slow reference path (tests) ----------------------------------------


def refined_coeff_reference(
    graph: FeynmanGraph,
    order: VertexOrder,
    a: Sequence[int],
    l: Sequence[int] | None = None,
    gf: Sequence[int] | None = None,
    vertex_contributions: bool | None = None,
) -> Coeff:
    """Same coefficient via full TruncatedSeries propagator products.

    Exponentially slower than :func:`refined_coeff`; exists to pin the
    fast path against the series-level definitions.
    """
    a_t, leaks, gf_t, vc = _normalize_query(graph, a, l, gf, vertex_contributions)
    assert a_t is not None
    direct_cap = sum(a_t) + sum(abs(x) for x in leaks)
    x_bound = max(1, direct_cap * max(graph.degrees()))
    spec = TruncationSpec.make(
        x_bound=x_bound,
        q_bounds={kk + 1: a_t[kk] for kk in range(graph.num_edges)},
        z_bounds={v: 2 * gf_t[v - 1] for v in range(1, graph.n + 1)},
    )
    product = TruncatedSeries.one(spec)
    for idx in range(1, graph.num_edges + 1):
        ctx = EdgeContext.from_graph(graph, order, idx)
        if vc:
            factor = (
                vertex_loop_propagator(ctx, spec)
                if ctx.is_loop
                else vertex_propagator(ctx, spec)
            )
        else:
            factor = (
                loop_propagator(ctx, spec) if ctx.is_loop else propagator(ctx, spec)
            )
        product = product * factor
    if vc:
        for v in range(1, graph.n + 1):
            if gf_t[v - 1] > 0:
                product = product * invert(
                    s_function_series(spec, 2 * gf_t[v - 1], ("z", v))
                )
    exponents: dict = {}
    for kk in range(graph.num_edges):
        if a_t[kk]:
            exponents[("q", kk + 1)] = a_t[kk]
    for v in range(1, graph.n + 1):
        if leaks[v - 1]:
            exponents[("x", v)] = leaks[v - 1]
        if vc and gf_t[v - 1]:
            exponents[("z", v)] = 2 * gf_t[v - 1]
    return product.coefficient(exponents)
