"""Bosonic operator route to the same cover counts.

Unlabeled mode: the charge-zero half of a Heisenberg algebra with
generators alpha_n, n != 0, commutator [alpha_n, alpha_m] = |n| when
n = -m (else 0), acting on the span of basis states

    b_mu = prod_j alpha_{-mu_j} |vacuum>,   mu a partition,

with <b_mu, b_mu> = |Aut(mu)| * prod mu_j and distinct partitions
orthogonal.  The cut-and-join operator

    M = 1/2 sum_{i,j>=1} (alpha_{-i} alpha_{-j} alpha_{i+j}
                          + alpha_{-(i+j)} alpha_i alpha_j)

preserves the energy |mu| and its matrix powers count branched covers of
the torus: states are evolved as explicit vectors rather than by Wick
pairing, so every intermediate state is inspectable.

Labeled mode: one Heisenberg generator alpha^{(k,j)}_n per (edge k,
germ label j); generators with different (k, j) commute.  A trivalent
loop-free graph with a vertex order and a multidegree a gives one
three-germ operator per vertex, and the sandwiched matrix element
between explicit bra/ket states reproduces the weighted cover count
winding by winding.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Mapping, Sequence

from .graphs import FeynmanGraph, VertexOrder, edge_orientation
from .propagators import divisors
from .series import Coeff

Partition = tuple[int, ...]
# unlabeled states: partition -> coefficient
# labeled states: sorted tuple of (edge, label, weight) triples -> coefficient
State = dict


# -- partitions ---------------------------------------------------------


def partition_tuple(mu: Sequence[int]) -> Partition:
    """Canonical (weakly decreasing) form; entries must be positive."""
    t = tuple(sorted(mu, reverse=True))
    if any(p < 1 for p in t):
        raise ValueError("partition entries must be positive integers")
    return t


@lru_cache(maxsize=None)
def partitions(d: int) -> tuple[Partition, ...]:
    """All partitions of d, largest part first within each."""
    if d < 0:
        raise ValueError("cannot partition a negative integer")
    if d == 0:
        return ((),)

    def rec(rest: int, cap: int) -> Iterator[Partition]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    return tuple(rec(d, d))


def partition_aut(mu: Partition) -> int:
    """|Aut(mu)| = product over part values of (multiplicity!)."""
    out = 1
    for value in set(mu):
        out *= factorial(mu.count(value))
    return out


# -- states and generators ---------------------------------------------


def vacuum() -> State:
    return {(): 1}


def state_from_partition(mu: Sequence[int]) -> State:
    return {partition_tuple(mu): 1}


def _basis_norm(key: tuple) -> int:
    """<b, b> for a basis key of either species."""
    if key and isinstance(key[0], tuple):  # labeled: triples (edge, label, w)
        norm = prod(t[2] for t in key)
        for t in set(key):
            norm *= factorial(key.count(t))
        return norm
    return partition_aut(key) * prod(key)


def inner_product(u: State, v: State) -> Coeff:
    """Pairing of two states; basis keys are orthogonal across species too."""
    total: Coeff = 0
    small, big = (u, v) if len(u) <= len(v) else (v, u)
    for key, cu in small.items():
        cv = big.get(key)
        if cv is not None:
            total = total + cu * cv * _basis_norm(key)
    return total


def apply_alpha(state: State, n: int, label: tuple[int, int] | None = None) -> State:
    """alpha_n (creation for n < 0) applied to a state vector.

    With ``label=(edge, j)`` this is the labeled generator; the state keys
    must then be triple tuples.
    """
    if n == 0:
        raise ValueError("alpha_0 is not a generator here")
    out: State = {}
    for key, coeff in state.items():
        if label is None:
            if n < 0:
                new = tuple(sorted(key + (-n,), reverse=True))
                out[new] = out.get(new, 0) + coeff
            else:
                count = key.count(n)
                if count:
                    pos = key.index(n)
                    new = key[:pos] + key[pos + 1 :]
                    out[new] = out.get(new, 0) + coeff * n * count
        else:
            triple = (label[0], label[1], abs(n))
            if n < 0:
                new = tuple(sorted(key + (triple,)))
                out[new] = out.get(new, 0) + coeff
            else:
                count = key.count(triple)
                if count:
                    pos = key.index(triple)
                    new = key[:pos] + key[pos + 1 :]
                    out[new] = out.get(new, 0) + coeff * n * count
    return {k: c for k, c in out.items() if c != 0}


def cut_join(state: State) -> State:
    """One application of M to an unlabeled state vector."""
    out: State = {}

    def add(key: Partition, c: Coeff) -> None:
        if c != 0:
            out[key] = out.get(key, 0) + c

    half = Fraction(1, 2)
    for key, coeff in state.items():
        # join: alpha_{-i} alpha_{-j} alpha_{i+j}, summed over ordered (i, j)
        for p in set(key):
            pos = key.index(p)
            removed = key[:pos] + key[pos + 1 :]
            base = coeff * p * key.count(p) * half
            for i in range(1, p):
                add(tuple(sorted(removed + (i, p - i), reverse=True)), base)
        # cut: alpha_{-(i+j)} alpha_i alpha_j, summed over ordered (i, j)
        for j in set(key):
            posj = key.index(j)
            mid = key[:posj] + key[posj + 1 :]
            cj = coeff * j * key.count(j)
            for i in set(mid):
                posi = mid.index(i)
                rest = mid[:posi] + mid[posi + 1 :]
                ci = cj * i * mid.count(i) * half
                add(tuple(sorted(rest + (i + j,), reverse=True)), ci)
    return {k: c for k, c in out.items() if c != 0}


def _normalize(value: Coeff) -> Coeff:
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def matrix_element(mu: Sequence[int], n: int, nu: Sequence[int]) -> Coeff:
    """<b_mu | M^n | b_nu>."""
    if n < 0:
        raise ValueError("operator power must be nonnegative")
    state = state_from_partition(nu)
    for _ in range(n):
        state = cut_join(state)
    return _normalize(inner_product(state_from_partition(mu), state))


# -- Hurwitz-type counts -------------------------------------------------


def double_hurwitz(mu: Sequence[int], nu: Sequence[int], n: int) -> Coeff:
    """n! / (prod mu * prod nu) * <b_mu | M^n | b_nu>; degrees must agree."""
    mu_t, nu_t = partition_tuple(mu), partition_tuple(nu)
    if sum(mu_t) != sum(nu_t):
        raise ValueError("ramification profiles must have equal size")
    value = Fraction(factorial(n), prod(mu_t) * prod(nu_t)) * matrix_element(
        mu_t, n, nu_t
    )
    return _normalize(value)


def elliptic_hurwitz_disconnected(g: int, n: int, d: int) -> Coeff:
    """sum over mu |- d of n!/(|Aut mu| prod mu) <b_mu|M^n|b_mu>, n = 2g-2."""
    if d < 1:
        raise ValueError("degree must be positive")
    if n != 2 * g - 2:
        raise ValueError("simple branch point count must equal 2g - 2")
    total: Coeff = 0
    for mu in partitions(d):
        me = matrix_element(mu, n, mu)
        if me != 0:
            total = total + Fraction(factorial(n), partition_aut(mu) * prod(mu)) * me
    return _normalize(total)


def partition_counts(q_order: int) -> list[int]:
    """p(0), ..., p(q_order)."""
    return [len(partitions(d)) for d in range(q_order + 1)]


def _series_mul(u: Sequence[Coeff], v: Sequence[Coeff], order: int) -> list[Coeff]:
    out: list[Coeff] = [0] * (order + 1)
    for i, ui in enumerate(u[: order + 1]):
        if ui == 0:
            continue
        for j, vj in enumerate(v[: order + 1 - i]):
            if vj != 0:
                out[i + j] = out[i + j] + ui * vj
    return out


def _series_div(num: Sequence[Coeff], den: Sequence[Coeff], order: int) -> list[Coeff]:
    if den[0] == 0:
        raise ZeroDivisionError("series division needs a unit constant term")
    inv0 = Fraction(1, 1) / den[0]
    out: list[Coeff] = [0] * (order + 1)
    for i in range(order + 1):
        acc = num[i] if i < len(num) else 0
        for j in range(1, i + 1):
            if j < len(den) and den[j] != 0:
                acc = acc - den[j] * out[i - j]
        out[i] = _normalize(acc * inv0)
    return out


def _set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for blocks in _set_partitions(rest):
        for i in range(len(blocks)):
            yield blocks[:i] + [[first] + blocks[i]] + blocks[i + 1 :]
        yield [[first]] + blocks


def elliptic_hurwitz_connected(n: int, d: int) -> Coeff:
    """Connected count with n simple branch points in degree d.

    Obtained from the disconnected series: dividing out the unbranched
    contribution (the partition generating series) leaves the exponential
    generating series of branch-point-carrying components, and the usual
    set-partition Moebius step isolates the single-component term.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    if n < 1 or n % 2 != 0:
        raise ValueError("need a positive even number of branch points")

    @lru_cache(maxsize=None)
    def branched_over_p(m: int) -> tuple[Coeff, ...]:
        g = (m + 2) // 2
        disc = [0] + [elliptic_hurwitz_disconnected(g, m, e) for e in range(1, d + 1)]
        return tuple(_series_div(disc, partition_counts(d), d))

    @lru_cache(maxsize=None)
    def connected_series(m: int) -> tuple[Coeff, ...]:
        total = list(branched_over_p(m))
        for blocks in _set_partitions(tuple(range(m))):
            if len(blocks) <= 1:
                continue
            if any(len(b) % 2 != 0 for b in blocks):
                continue  # odd branch count cannot occur on a component
            term: list[Coeff] = [1] + [0] * d
            for b in blocks:
                term = _series_mul(term, connected_series(len(b)), d)
            for e in range(d + 1):
                total[e] = total[e] - term[e]
        return tuple(_normalize(c) for c in total)

    return connected_series(n)[d]


# -- labeled mode --------------------------------------------------------

Triple = tuple[int, int, int]  # (edge index, germ label, weight)


def _cut_counts(a: Sequence[int], windings: Mapping[int, int]) -> dict[int, int]:
    """Edge -> number of base-point crossings a_k / w_k (positive edges only)."""
    counts: dict[int, int] = {}
    for idx, ak in enumerate(a):
        k = idx + 1
        if ak == 0:
            continue
        w = windings.get(k)
        if w is None or w < 1 or ak % w != 0:
            raise ValueError(f"edge {k}: winding must divide a_k = {ak}")
        counts[k] = ak // w
    return counts


def labeled_boundary_states(
    a: Sequence[int], windings: Mapping[int, int]
) -> tuple[tuple[Triple, ...], tuple[Triple, ...]]:
    """(bra key, ket key) for a multidegree and a choice of windings.

    Edge k with a_k > 0 and winding w contributes c = a_k / w triples of
    weight w: labels 1..c on the bra side and 2..c+1 on the ket side, so
    labels 2..c interleave and the two end labels are consumed/produced by
    the vertex operators.
    """
    cuts = _cut_counts(a, windings)
    bra: list[Triple] = []
    ket: list[Triple] = []
    for k, c in sorted(cuts.items()):
        w = windings[k]
        bra.extend((k, j, w) for j in range(1, c + 1))
        ket.extend((k, j, w) for j in range(2, c + 2))
    return tuple(sorted(bra)), tuple(sorted(ket))


def winding_choices(a: Sequence[int]) -> Iterator[dict[int, int]]:
    """All winding dictionaries: a divisor of a_k for every edge with a_k > 0."""
    marked = [idx + 1 for idx, ak in enumerate(a) if ak > 0]
    options = [divisors(a[k - 1]) for k in marked]
    for combo in itertools.product(*options):
        yield dict(zip(marked, combo))


def _germ_plans(
    graph: FeynmanGraph,
    order: VertexOrder,
    a: Sequence[int],
    windings: Mapping[int, int],
    vertex: int,
    energy: int,
    caps: Mapping[int, int] | None,
) -> list[tuple[str, int, int]]:
    """One plan per incident edge germ: how this vertex's germ may move.

    A plan is (kind, edge, parameter):

    * ("marked", k, w): edge with a_k > 0 -- either m = +w (consume the
      ket-side end label (k, a_k/w + 1, w)) or m = -w (produce the
      bra-side end label (k, 1, w));
    * ("annihilate", k, limit): a_k = 0 and this vertex is the
      order-earlier endpoint, whose operator acts second -- it must
      consume whatever the partner germ created under label (k, 1);
    * ("create", k, limit): a_k = 0, order-later endpoint, acts first --
      it must create (k, 1, m), m = 1..limit.

    ``caps`` widens the weight limits for the variable-tracking operator;
    without it the total energy bounds every weight.
    """
    plans: list[tuple[str, int, int]] = []
    for idx, (u, v) in enumerate(graph.edges):
        if vertex not in (u, v):
            continue
        k = idx + 1
        if a[idx] > 0:
            plans.append(("marked", k, windings[k]))
        else:
            tail, _ = edge_orientation(graph, idx, order)
            limit = caps[k] if caps is not None else energy
            plans.append(("annihilate" if vertex == tail else "create", k, limit))
    return plans


def _moves_for_key(
    plans: Sequence[tuple[str, int, int]],
    a: Sequence[int],
    key: tuple[Triple, ...],
) -> list[list[tuple[int, Triple]]]:
    """Per germ plan, the moves that can act on this basis key without dying."""
    options: list[list[tuple[int, Triple]]] = []
    for kind, k, par in plans:
        if kind == "marked":
            w = par
            c = a[k - 1] // w
            moves: list[tuple[int, Triple]] = [(-w, (k, 1, w))]
            if (k, c + 1, w) in key:
                moves.append((w, (k, c + 1, w)))
        elif kind == "annihilate":
            moves = [
                (t[2], t)
                for t in dict.fromkeys(key)
                if t[0] == k and t[1] == 1 and t[2] <= par
            ]
        else:
            moves = [(-m, (k, 1, m)) for m in range(1, par + 1)]
        if not moves:
            return []
        options.append(moves)
    return options


def _apply_moves(
    key: tuple[Triple, ...], coeff: Coeff, moves: Sequence[tuple[int, Triple]]
) -> tuple[tuple[Triple, ...], Coeff] | None:
    """Apply a germ combination (annihilations then creations) to a basis key."""
    cur = list(key)
    c = coeff
    for m, triple in moves:
        if m > 0:
            count = cur.count(triple)
            if count == 0:
                return None
            c = c * m * count
            cur.remove(triple)
    for m, triple in moves:
        if m < 0:
            cur.append(triple)
    return tuple(sorted(cur)), c


def _vertex_operator(
    state: State,
    graph: FeynmanGraph,
    order: VertexOrder,
    a: Sequence[int],
    windings: Mapping[int, int],
    vertex: int,
    energy: int,
) -> State:
    """The balanced three-germ operator of one vertex applied to a state."""
    out: State = {}
    plans = _germ_plans(graph, order, a, windings, vertex, energy, None)
    for key, coeff in state.items():
        options = _moves_for_key(plans, a, key)
        if not options:
            continue
        for combo in itertools.product(*options):
            if sum(m for m, _ in combo) != 0:
                continue
            res = _apply_moves(key, coeff, combo)
            if res is None:
                continue
            new_key, c = res
            out[new_key] = out.get(new_key, 0) + c
    return {k: c for k, c in out.items() if c != 0}


def labeled_matrix_element(
    graph: FeynmanGraph,
    order: VertexOrder,
    a: Sequence[int],
    windings: Mapping[int, int],
) -> Coeff:
    """prod_k (1/w_k)^{a_k/w_k} <bra| M_{last} ... M_{first} |ket>.

    Vertex operators are applied in reverse vertex order (the order-last
    vertex acts on the ket first).  Defined for loop-free trivalent
    graphs; this is where the operator product has one three-germ factor
    per vertex.
    """
    if graph.num_loops:
        raise ValueError("labeled matrix elements need a loop-free graph")
    if any(graph.degree(v) != 3 for v in range(1, graph.n + 1)):
        raise ValueError("labeled matrix elements need a trivalent graph")
    if len(a) != graph.num_edges or any(x < 0 for x in a):
        raise ValueError("bad multidegree")
    bra, ket = labeled_boundary_states(a, windings)
    energy = sum(a)
    state: State = {ket: 1}
    for vertex in reversed(order):
        state = _vertex_operator(state, graph, order, a, windings, vertex, energy)
        if not state:
            break
    value = inner_product({bra: 1}, state)
    cuts = _cut_counts(a, windings)
    for k, c in cuts.items():
        value = value * Fraction(1, windings[k]) ** c
    return _normalize(value)


def fock_cover_count(
    graph: FeynmanGraph, order: VertexOrder, a: Sequence[int]
) -> Coeff:
    """Sum of labeled matrix elements over all winding choices."""
    total: Coeff = 0
    for windings in winding_choices(a):
        total = total + labeled_matrix_element(graph, order, a, windings)
    return _normalize(total)


# -- variable-tracking operators ----------------------------------------


def _direct_edge_caps(
    graph: FeynmanGraph, order: VertexOrder, a: Sequence[int], x_bound: int
) -> dict[int, int]:
    """Largest weight an a_k = 0 edge can carry and still contribute a
    monomial inside the |exponent| <= x_bound window.

    At the tail of such an edge the positive exponent +w must be offset,
    within the window, by the other germs there: marked edges contribute
    at most a_e, and incoming unmarked edges at most their own (already
    computed) cap, so processing tails in vertex order closes the caps.
    """
    caps: dict[int, int] = {}
    incident: dict[int, list[int]] = {v: [] for v in range(1, graph.n + 1)}
    for idx, (u, v) in enumerate(graph.edges):
        incident[u].append(idx)
        if u != v:
            incident[v].append(idx)
    for tail_v in order:
        for idx in incident[tail_v]:
            if a[idx] > 0:
                continue
            tail, head = edge_orientation(graph, idx, order)
            if tail != tail_v:
                continue
            cap = x_bound
            for other in incident[tail_v]:
                if other == idx:
                    continue
                if a[other] > 0:
                    cap += a[other]
                else:
                    o_tail, _ = edge_orientation(graph, other, order)
                    if o_tail != tail_v:  # incoming: contributes -w here
                        cap += caps[other + 1]
            caps[idx + 1] = cap
    return caps


def _vertex_operator_tracked(
    state: dict,
    graph: FeynmanGraph,
    order: VertexOrder,
    a: Sequence[int],
    windings: Mapping[int, int],
    vertex: int,
    caps: Mapping[int, int],
) -> dict:
    """Variable-tracking germ operator: keys are (basis key, exponent vector).

    Each germ multiplies by x_vertex^m; there is no balance constraint.
    """
    out: dict = {}
    plans = _germ_plans(graph, order, a, windings, vertex, 0, caps)
    vi = vertex - 1
    for (key, xvec), coeff in state.items():
        options = _moves_for_key(plans, a, key)
        if not options:
            continue
        for combo in itertools.product(*options):
            res = _apply_moves(key, coeff, combo)
            if res is None:
                continue
            new_key, c = res
            new_x = list(xvec)
            new_x[vi] += sum(m for m, _ in combo)
            nk = (new_key, tuple(new_x))
            out[nk] = out.get(nk, 0) + c
    return {k: c for k, c in out.items() if c != 0}


def labeled_series_product(
    graph: FeynmanGraph,
    order: VertexOrder,
    a: Sequence[int],
    windings: Mapping[int, int],
    x_bound: int,
) -> dict[tuple[int, ...], Coeff]:
    """The variable-tracking matrix element as a vertex-exponent series.

    Returns {exponent vector: coefficient}, restricted to the window
    |exponent| <= x_bound in every slot, including the winding prefactor.
    """
    if graph.num_loops:
        raise ValueError("labeled matrix elements need a loop-free graph")
    if any(graph.degree(v) != 3 for v in range(1, graph.n + 1)):
        raise ValueError("labeled matrix elements need a trivalent graph")
    bra, ket = labeled_boundary_states(a, windings)
    caps = _direct_edge_caps(graph, order, a, x_bound)
    state: dict = {(ket, (0,) * graph.n): 1}
    for vertex in reversed(order):
        state = _vertex_operator_tracked(
            state, graph, order, a, windings, vertex, caps
        )
    prefactor: Coeff = 1
    for k, c in _cut_counts(a, windings).items():
        prefactor = prefactor * Fraction(1, windings[k]) ** c
    norm = _basis_norm(bra)
    out: dict[tuple[int, ...], Coeff] = {}
    for (key, xvec), coeff in state.items():
        if key != bra:
            continue
        if any(abs(e) > x_bound for e in xvec):
            continue
        value = _normalize(coeff * norm * prefactor)
        if value != 0:
            out[xvec] = out.get(xvec, 0) + value
    return {k: _normalize(c) for k, c in out.items() if c != 0}


def _edge_factor_product(
    graph: FeynmanGraph,
    order: VertexOrder,
    a: Sequence[int],
    windings: Mapping[int, int] | None,
    x_bound: int,
    caps: Mapping[int, int],
) -> dict[tuple[int, ...], Coeff]:
    """prod over edges of the expected two-endpoint factor, as a series.

    Edges with a_k > 0 contribute w ((x_t/x_h)^w + (x_h/x_t)^w) for the
    chosen winding w (or the divisor sum when ``windings`` is None); edges
    with a_k = 0 contribute sum_w w (x_t/x_h)^w up to the edge cap.
    """
    series: dict[tuple[int, ...], Coeff] = {(0,) * graph.n: 1}
    for idx in range(graph.num_edges):
        tail, head = edge_orientation(graph, idx, order)
        ti, hi = tail - 1, head - 1
        factor: list[tuple[int, int]] = []  # (signed winding at tail, weight w)
        if a[idx] > 0:
            ws = [windings[idx + 1]] if windings is not None else divisors(a[idx])
            for w in ws:
                factor.append((w, w))
                factor.append((-w, w))
        else:
            for w in range(1, caps[idx + 1] + 1):
                factor.append((w, w))
        new: dict[tuple[int, ...], Coeff] = {}
        for xvec, coeff in series.items():
            for signed, w in factor:
                nx = list(xvec)
                nx[ti] += signed
                nx[hi] -= signed
                key = tuple(nx)
                new[key] = new.get(key, 0) + coeff * w
        series = new
    return {
        k: c
        for k, c in series.items()
        if c != 0 and all(abs(e) <= x_bound for e in k)
    }


def labeled_series_product_check(
    graph: FeynmanGraph,
    order: VertexOrder,
    a: Sequence[int],
    x_bound: int,
) -> bool:
    """Verify the variable-tracking matrix element factorizes over edges.

    Checks, winding choice by winding choice, that the tracked operator
    product equals the explicit edge-factor product inside the exponent
    window, and that the winding-summed exponent-zero coefficient is the
    weighted cover count.
    """
    caps = _direct_edge_caps(graph, order, a, x_bound)
    total_zero: Coeff = 0
    for windings in winding_choices(a):
        lhs = labeled_series_product(graph, order, a, windings, x_bound)
        rhs = _edge_factor_product(graph, order, a, windings, x_bound, caps)
        if lhs != rhs:
            return False
        total_zero = total_zero + lhs.get((0,) * graph.n, 0)
    from .covers import cover_count

    return _normalize(total_zero) == cover_count(graph, order, a)
