"""Weighted dual-graph calculus for SNC boundary divisors.

Graphs are simple (no loops or multi-edges): vertices carry integer
self-intersection weights, edges record transversal intersections.  Blow-ups
come in two kinds: outer (at a smooth point of a component) and inner (at a
double point, subdividing the edge).  Castelnuovo contraction inverts both.
A contraction that would create a multi-edge is refused; that keeps every
graph the dual graph of an SNC divisor.

Also here: the Euclidean resolution chain for x^m/y^n, exact intersection
determinants via fraction-free elimination, the unimodularity certificate for
the 4x4 covering matrices T, the Diophantine contractibility test, and the
greedy construction of an ample divisor supported on the whole boundary.
"""

from __future__ import annotations

from dataclasses import dataclass


class GraphError(Exception):
    pass


class UnknownSite(GraphError):
    pass


class NotContractible(GraphError):
    def __init__(self, reason: str):
        super().__init__(f"not contractible: {reason}")
        self.reason = reason


class WrongShape(GraphError):
    pass


class InvalidParams(GraphError):
    pass


class Disconnected(GraphError):
    pass


@dataclass(frozen=True)
class WeightedGraph:
    """Simple weighted graph; vertices maps id -> weight, edges are 2-sets."""

    vertices: dict[str, int]
    edges: frozenset[frozenset]

    def __post_init__(self):
        for e in self.edges:
            if len(e) != 2:
                raise GraphError(f"edge {set(e)} is not a 2-set")
            for v in e:
                if v not in self.vertices:
                    raise GraphError(f"edge endpoint {v!r} is not a vertex")

    @staticmethod
    def build(vertices, edges) -> "WeightedGraph":
        vs = dict(vertices)
        es = frozenset(frozenset(e) for e in edges)
        return WeightedGraph(vs, es)

    def ids(self) -> list[str]:
        return sorted(self.vertices)

    def weight(self, v: str) -> int:
        return self.vertices[v]

    def neighbors(self, v: str) -> list[str]:
        out = []
        for e in self.edges:
            if v in e:
                (other,) = e - {v}
                out.append(other)
        return sorted(out)

    def valence(self, v: str) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: str, v: str) -> bool:
        return frozenset((u, v)) in self.edges

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = set()
        stack = [next(iter(sorted(self.vertices)))]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(self.neighbors(v))
        return len(seen) == len(self.vertices)

    def has_cycle(self) -> bool:
        # a simple graph is a forest iff |E| = |V| - #components
        components = 0
        seen: set = set()
        for start in sorted(self.vertices):
            if start in seen:
                continue
            components += 1
            stack = [start]
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                stack.extend(self.neighbors(v))
        return len(self.edges) != len(self.vertices) - components

    def fresh_id(self, stem: str = "e") -> str:
        k = 1
        while f"{stem}{k}" in self.vertices:
            k += 1
        return f"{stem}{k}"


def graph(vertices, edges=()) -> WeightedGraph:
    return WeightedGraph.build(vertices, edges)


def chain_graph(weights, stem: str = "v") -> WeightedGraph:
    """Linear chain v1 - v2 - ... with the given weights."""
    ids = [f"{stem}{i + 1}" for i in range(len(weights))]
    edges = [(ids[i], ids[i + 1]) for i in range(len(ids) - 1)]
    return WeightedGraph.build(zip(ids, weights), edges)


# ---------------------------------------------------------------------------
# blow-up and contraction


def blow_up(g: WeightedGraph, site) -> WeightedGraph:
    """Outer blow-up at a vertex id, inner blow-up at an edge (u, v).

    Outer: attach a new (-1)-vertex to the site, dropping its weight by one.
    Inner: subdivide the edge with a new (-1)-vertex, dropping both endpoint
    weights by one.
    """
    new_id = g.fresh_id()
    if isinstance(site, str):
        if site not in g.vertices:
            raise UnknownSite(f"vertex {site!r} not in graph")
        vertices = dict(g.vertices)
        vertices[site] -= 1
        vertices[new_id] = -1
        edges = set(g.edges) | {frozenset((site, new_id))}
        return WeightedGraph(vertices, frozenset(edges))
    u, v = tuple(site)
    e = frozenset((u, v))
    if e not in g.edges:
        raise UnknownSite(f"edge {set(e)} not in graph")
    vertices = dict(g.vertices)
    vertices[u] -= 1
    vertices[v] -= 1
    vertices[new_id] = -1
    edges = set(g.edges) - {e} | {frozenset((u, new_id)), frozenset((v, new_id))}
    return WeightedGraph(vertices, frozenset(edges))


def contract(g: WeightedGraph, v: str) -> WeightedGraph:
    """Castelnuovo contraction of a (-1)-vertex of valence <= 2."""
    if v not in g.vertices:
        raise UnknownSite(f"vertex {v!r} not in graph")
    if g.weight(v) != -1:
        raise NotContractible("weight")
    nbrs = g.neighbors(v)
    if len(nbrs) > 2:
        raise NotContractible("valence")
    if len(nbrs) == 2 and g.has_edge(nbrs[0], nbrs[1]):
        raise NotContractible("multi-edge")
    vertices = {w: wt for w, wt in g.vertices.items() if w != v}
    for n in nbrs:
        vertices[n] += 1
    edges = {e for e in g.edges if v not in e}
    if len(nbrs) == 2:
        edges.add(frozenset(nbrs))
    return WeightedGraph(vertices, frozenset(edges))


def minimalize(g: WeightedGraph) -> tuple[WeightedGraph, list[str]]:
    """Contract (-1)-vertices of valence <= 2 until none qualifies.

    Deterministic order: smallest eligible id first.  Returns the minimal
    graph and the log of contracted ids.
    """
    log = []
    while True:
        candidate = None
        for v in g.ids():
            if g.weight(v) != -1 or g.valence(v) > 2:
                continue
            nbrs = g.neighbors(v)
            if len(nbrs) == 2 and g.has_edge(nbrs[0], nbrs[1]):
                continue
            candidate = v
            break
        if candidate is None:
            return g, log
        g = contract(g, candidate)
        log.append(candidate)


def ramanujam_verdict(g: WeightedGraph) -> str:
    """Ramanujam's criterion on the minimalized graph.

    IsomorphicToC2 iff the minimal graph is a linear chain (connected,
    acyclic, valences <= 2; the empty graph counts); NotATree for cycles.
    """
    minimal, _ = minimalize(g)
    if minimal.has_cycle():
        return "NotATree"
    if not minimal.vertices:
        return "IsomorphicToC2"
    if minimal.is_connected() and all(minimal.valence(v) <= 2 for v in minimal.ids()):
        return "IsomorphicToC2"
    return "NotC2"


def ramanujam_graph() -> WeightedGraph:
    """The resolution graph of the Ramanujam surface boundary divisor."""
    chain = [-3, -1, -3, -1, -2, -2, -2, -2]
    g = chain_graph(chain)
    vertices = dict(g.vertices)
    vertices["b1"] = -2
    vertices["b2"] = -2
    edges = set(g.edges) | {frozenset(("v2", "b1")), frozenset(("v4", "b2"))}
    return WeightedGraph(vertices, frozenset(edges))


# ---------------------------------------------------------------------------
# resolution chains


@dataclass(frozen=True)
class ResolutionChain:
    graph: WeightedGraph
    order: tuple[str, ...]  # creation order of the exceptional vertices
    labels: dict[str, tuple[int, int]]  # pullback multiplicities of (x), (y)


def resolution_chain(m: int, n: int) -> ResolutionChain:
    """Exceptional chain of the minimal resolution of x^m / y^n.

    Subtractive Euclid on (a, b) starting at (m, n): each state blows up the
    current indeterminacy point; the new curve's multiplicity label is the sum
    of the two labels at the point.  Terminates when a = b (that blow-up
    separates zeros from poles).  Exactly one (-1)-vertex results, and the
    intersection matrix is unimodular.
    """
    if m < 1 or n < 1:
        raise InvalidParams("resolution_chain needs m, n >= 1")
    vertices: dict[str, int] = {}
    edges: set[frozenset] = set()
    labels: dict[str, tuple[int, int]] = {}
    order: list[str] = []
    left: str | None = None  # internal curve on the zero side (None = D1)
    right: str | None = None  # internal curve on the pole side (None = D2)
    left_label = (1, 0)
    right_label = (0, 1)
    a, b = m, n
    idx = 0
    while True:
        idx += 1
        new = f"E{idx}"
        vertices[new] = -1
        labels[new] = (left_label[0] + right_label[0], left_label[1] + right_label[1])
        order.append(new)
        if left is not None and right is not None:
            edges.discard(frozenset((left, right)))
        if left is not None:
            vertices[left] -= 1
            edges.add(frozenset((left, new)))
        if right is not None:
            vertices[right] -= 1
            edges.add(frozenset((right, new)))
        if a == b:
            break
        if a > b:
            left, left_label = new, labels[new]
            a -= b
        else:
            right, right_label = new, labels[new]
            b -= a
    return ResolutionChain(WeightedGraph(vertices, frozenset(edges)), tuple(order), labels)


# ---------------------------------------------------------------------------
# intersection matrices


@dataclass(frozen=True)
class IntersectionMatrix:
    basis: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]
    determinant: int


def _bareiss_det(matrix: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free Gaussian elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def intersection_matrix(g: WeightedGraph) -> IntersectionMatrix:
    """Symmetric matrix with vertex weights on the diagonal, 1 for each edge."""
    basis = tuple(g.ids())
    index = {v: i for i, v in enumerate(basis)}
    n = len(basis)
    entries = [[0] * n for _ in range(n)]
    for i, v in enumerate(basis):
        entries[i][i] = g.weight(v)
    for e in g.edges:
        u, v = tuple(e)
        entries[index[u]][index[v]] = 1
        entries[index[v]][index[u]] = 1
    det = _bareiss_det(entries)
    return IntersectionMatrix(basis, tuple(tuple(r) for r in entries), det)


# ---------------------------------------------------------------------------
# X_T certificates and the tom Dieck-Petrie Diophantine test


def _xt_validate(t) -> tuple[int, int, int, int, int, int, int, int]:
    """Check the sparsity pattern rows (m00,0,n00,0),(m10,0,0,n10),
    (0,m01,n01,0),(0,m11,0,n11); return the eight entries."""
    if len(t) != 4 or any(len(row) != 4 for row in t):
        raise WrongShape("need a 4x4 matrix")
    for row in t:
        for entry in row:
            if not isinstance(entry, int) or entry < 0:
                raise WrongShape("entries must be non-negative integers")
    pattern = [(0, 0), (0, 2), (1, 0), (1, 3), (2, 1), (2, 2), (3, 1), (3, 3)]
    for i in range(4):
        for j in range(4):
            if (i, j) not in pattern and t[i][j] != 0:
                raise WrongShape(f"entry ({i},{j}) must be zero in this shape")
    m00, n00 = t[0][0], t[0][2]
    m10, n10 = t[1][0], t[1][3]
    m01, n01 = t[2][1], t[2][2]
    m11, n11 = t[3][1], t[3][3]
    return m00, n00, m10, n10, m01, n01, m11, n11


def xt_matrix(m00, n00, m10, n10, m01, n01, m11, n11) -> list[list[int]]:
    return [
        [m00, 0, n00, 0],
        [m10, 0, 0, n10],
        [0, m01, n01, 0],
        [0, m11, 0, n11],
    ]


@dataclass(frozen=True)
class XtCertificate:
    verdict: str  # "Acyclic" | "NotUnimodular"
    determinant: int


def xt_certificate(t) -> XtCertificate:
    """Acyclic iff |det T| = 1 for the covering data matrix T."""
    _xt_validate(t)
    det = _bareiss_det([list(row) for row in t])
    return XtCertificate("Acyclic" if abs(det) == 1 else "NotUnimodular", det)


def tdp_contractibility(m1: int, n1: int, m2: int, n2: int) -> bool:
    """m1 n2 + m2 n1 - m1 m2 = +-1 together with m_i > n_i."""
    return abs(m1 * n2 + m2 * n1 - m1 * m2) == 1 and m1 > n1 and m2 > n2


# ---------------------------------------------------------------------------
# Fujita's ample-support procedure


def ample_support_divisor(q: IntersectionMatrix | list, h: list[int]):
    """Greedy search for a > 0 with (Q a) > 0 componentwise.

    Seeded from the positive part of h; repeatedly adjoins the smallest-id
    component D_j with D_j . A > 0 using the minimal multiplier m_j that
    keeps all accumulated conditions strict.  Returns the vector, or the
    string "Infeasible" when the procedure gets stuck.
    """
    entries = q.entries if isinstance(q, IntersectionMatrix) else q
    n = len(entries)
    if any(len(row) != n for row in entries):
        raise WrongShape("intersection matrix must be square")
    for i in range(n):
        for j in range(n):
            if entries[i][j] != entries[j][i]:
                raise WrongShape("intersection matrix must be symmetric")
    if n == 0:
        return []
    if not _q_connected(entries):
        raise Disconnected("the divisor graph must be connected")
    if len(h) != n:
        raise WrongShape("seed vector length mismatch")
    a = [hi if hi > 0 else 0 for hi in h]
    if all(x == 0 for x in a):
        return "Infeasible"

    def qa(vec):
        return [sum(entries[i][j] * vec[j] for j in range(n)) for i in range(n)]

    for _ in range(8 * n + 16):
        support = [i for i in range(n) if a[i] > 0]
        values = qa(a)
        if len(support) == n and all(v > 0 for v in values):
            return a
        progressed = False
        for j in range(n):
            if a[j] > 0 or values[j] <= 0:
                continue
            mj = _minimal_multiplier(entries, a, values, support, j)
            if mj is None:
                continue
            a = [mj * x for x in a]
            a[j] += 1
            progressed = True
            break
        if not progressed:
            return "Infeasible"
    return "Infeasible"


def _minimal_multiplier(entries, a, values, support, j):
    """Smallest m >= 1 with m*(Qa)_i + Q_ij > 0 for i in support + {j}."""
    lower = 1
    for i in support + [j]:
        vi = values[i]
        qij = entries[i][j]
        if vi > 0:
            # m > (-qij)/vi; qij >= 0 off-diagonal but q_jj may be negative
            need = (-qij) // vi + 1
            lower = max(lower, need)
        else:
            if qij <= 0:
                return None
            if vi < 0:
                return None  # larger m only hurts
    for i in support + [j]:
        if lower * values[i] + entries[i][j] <= 0:
            return None
    return lower


def _q_connected(entries) -> bool:
    n = len(entries)
    if n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and entries[i][j] != 0 and j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


# ---------------------------------------------------------------------------
# DOT export


def to_dot(g: WeightedGraph) -> str:
    lines = ["graph dualgraph {"]
    for v in g.ids():
        lines.append(f'  "{v}" [label="{v}\\n{g.weight(v)}"];')
    for e in sorted(tuple(sorted(e)) for e in g.edges):
        lines.append(f'  "{e[0]}" -- "{e[1]}";')
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# JSON


def graph_to_json(g: WeightedGraph) -> dict:
    return {
        "vertices": [{"id": v, "w": g.weight(v)} for v in g.ids()],
        "edges": sorted([sorted(e) for e in g.edges]),
    }


def graph_from_json(data) -> WeightedGraph:
    vertices = {entry["id"]: int(entry["w"]) for entry in data["vertices"]}
    edges = [tuple(e) for e in data.get("edges", [])]
    return WeightedGraph.build(vertices, edges)
