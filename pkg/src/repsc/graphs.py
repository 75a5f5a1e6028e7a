"""Graph types, random graph models, and plain-text serialization.

The package works with undirected 0/1 graphs stored dense. Two generative
models are provided: a deterministic builder for regular representation
graphs in which every node has the same number of representatives in every
cluster, and the four-probability planted-partition sampler that couples
edge probabilities to both cluster co-membership and representation
co-membership ("same cluster & represented", "different cluster &
represented", and the two non-represented cases).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DegreeRangeError,
    DivisibilityError,
    IndexOutOfRangeError,
    MalformedLineError,
    SizeMismatchError,
)
from .linalg import as_float_matrix, ensure_symmetric


@dataclass(frozen=True)
class Graph:
    """Undirected graph with a dense 0/1 adjacency matrix.

    ``allows_self_loops`` distinguishes representation graphs (where the
    diagonal is meaningful and usually all ones) from similarity graphs
    (diagonal forced to zero).
    """

    adjacency: np.ndarray
    allows_self_loops: bool = False

    def __post_init__(self):
        a = as_float_matrix(self.adjacency, "adjacency")
        if a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency must be square, got {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be exactly symmetric")
        if not np.all((a == 0.0) | (a == 1.0)):
            raise ValueError("adjacency entries must be 0 or 1")
        if not self.allows_self_loops and np.any(np.diag(a) != 0.0):
            raise ValueError("self-loops present but allows_self_loops is False")
        object.__setattr__(self, "adjacency", a)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        """Row sums; a self-loop counts once."""
        return self.adjacency.sum(axis=1)


@dataclass(frozen=True)
class ClusterAssignment:
    """Partition of n nodes into k clusters, labels in [0, k).

    Clusters may be empty (a constant prediction against a K=2 reference is
    a legitimate thing to score); operations that cannot tolerate an empty
    cluster raise EmptyCluster/ZeroVolumeCluster errors themselves.
    """

    labels: np.ndarray
    k: int

    def __post_init__(self):
        lab = np.asarray(self.labels, dtype=np.int64)
        if lab.ndim != 1 or lab.size == 0:
            raise ValueError("labels must be a non-empty 1-d integer array")
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if lab.min() < 0 or lab.max() >= self.k:
            raise ValueError(f"labels must lie in [0, {self.k})")
        object.__setattr__(self, "labels", lab)

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def onehot(self) -> np.ndarray:
        """n-by-k 0/1 membership matrix."""
        out = np.zeros((self.n, self.k))
        out[np.arange(self.n), self.labels] = 1.0
        return out


def contiguous_assignment(n: int, k: int) -> ClusterAssignment:
    """Equal-size clusters of consecutive node indices; requires k | n."""
    if n % k != 0:
        raise DivisibilityError(f"cluster count {k} must divide node count {n}")
    return ClusterAssignment(np.repeat(np.arange(k), n // k), k)


@dataclass(frozen=True)
class RppParams:
    """Parameters of the representation-aware planted-partition model.

    ``assignment`` is the ground-truth partition, ``rep_graph`` the
    representation graph R. Edge probabilities must satisfy
    1 >= p >= q >= r >= s >= 0: p applies to same-cluster represented pairs,
    q to cross-cluster represented pairs, r to same-cluster non-represented
    pairs and s to the remaining pairs.
    """

    assignment: ClusterAssignment
    rep_graph: Graph
    p: float
    q: float
    r: float
    s: float

    def __post_init__(self):
        if self.rep_graph.n != self.assignment.n:
            raise SizeMismatchError(
                f"representation graph has {self.rep_graph.n} nodes, "
                f"assignment has {self.assignment.n}"
            )
        probs = (self.p, self.q, self.r, self.s)
        if not all(np.isfinite(probs)):
            raise ValueError("probabilities must be finite")
        if not (1.0 >= self.p >= self.q >= self.r >= self.s >= 0.0):
            raise ValueError(
                f"need 1 >= p >= q >= r >= s >= 0, got p={self.p} q={self.q} r={self.r} s={self.s}"
            )

    @property
    def n(self) -> int:
        return self.assignment.n

    @property
    def k(self) -> int:
        return self.assignment.k


def build_d_regular_rep_graph(n: int, k: int, d: int) -> tuple[Graph, ClusterAssignment]:
    """Deterministic regular representation graph plus its ground truth.

    Returns (graph, assignment) where the assignment is the contiguous
    equal-size split of n nodes into k clusters and the graph satisfies,
    for that assignment: every diagonal entry is 1, every row sums to d,
    and every node has exactly d/k neighbors in every cluster (its
    self-loop counts toward its own cluster).

    Construction is circulant within each cluster-pair block: node i of a
    cluster connects to a fixed window of positions in the other cluster,
    and blocks below the diagonal are transposes of their mirror block, so
    regularity is exact.

    Raises:
        DivisibilityError: k does not divide n or d, or the within-cluster
            block is infeasible by parity (d/k even with odd cluster size
            forces an odd total degree on an odd number of nodes).
        DegreeRangeError: d outside [k, n] or d/k exceeding the cluster size.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if not (k <= d <= n):
        raise DegreeRangeError(f"degree d={d} must satisfy k <= d <= n (k={k}, n={n})")
    if n % k != 0:
        raise DivisibilityError(f"k={k} must divide n={n}")
    if d % k != 0:
        raise DivisibilityError(f"k={k} must divide d={d}")
    m = n // k  # cluster size
    c = d // k  # neighbors per cluster, including the self-loop
    if c > m:
        raise DegreeRangeError(f"d/k={c} exceeds cluster size n/k={m}")
    if c % 2 == 0 and m % 2 != 0:
        raise DivisibilityError(
            f"no symmetric within-cluster block exists for even d/k={c} and odd "
            f"cluster size n/k={m} (handshake parity)"
        )

    # Within-cluster block: symmetric circulant containing offset 0 (the
    # self-loop). Odd c uses offsets {0, +-1, ..., +-(c-1)/2}; even c swaps
    # one paired offset for the self-paired offset m/2.
    if c % 2 == 1:
        offsets = [0] + [o for j in range(1, (c - 1) // 2 + 1) for o in (j, m - j)]
    else:
        offsets = [0] + [o for j in range(1, (c - 2) // 2 + 1) for o in (j, m - j)]
        offsets.append(m // 2)
    within = np.zeros((m, m))
    idx = np.arange(m)
    for o in offsets:
        within[idx, (idx + o) % m] = 1.0

    # Cross-cluster block for an ordered pair (a, b) with a < b: node i picks
    # the window i..i+c-1 (mod m) in cluster b; the (b, a) block is the
    # transpose, which preserves the per-node count because the block is
    # circulant.
    cross = np.zeros((m, m))
    for o in range(c):
        cross[idx, (idx + o) % m] = 1.0

    adjacency = np.zeros((n, n))
    for a in range(k):
        for b in range(k):
            block = within if a == b else (cross if a < b else cross.T)
            adjacency[a * m:(a + 1) * m, b * m:(b + 1) * m] = block
    return Graph(adjacency, allows_self_loops=True), contiguous_assignment(n, k)


@dataclass(frozen=True)
class RegularityReport:
    """Outcome of checking the regular-representation assumption.

    ``degree`` is the modal row sum (the d the graph is closest to
    satisfying) and ``neighbors_per_cluster`` its per-cluster share when that
    is an integer. ``violating_nodes`` lists each offending node once.
    """

    ok: bool
    degree: int | None
    neighbors_per_cluster: int | None
    diagonal_ok: bool
    regular_ok: bool
    per_cluster_ok: bool
    violations: list[str] = field(default_factory=list)
    violating_nodes: list[int] = field(default_factory=list)


def validate_regular_representation(rep_graph: Graph, assignment: ClusterAssignment) -> RegularityReport:
    """Check full diagonal, d-regularity, and equal per-cluster representation.

    Never raises on a bad graph; every deviation is reported with the nodes
    involved so callers can see exactly what breaks.
    """
    if rep_graph.n != assignment.n:
        raise SizeMismatchError(
            f"graph has {rep_graph.n} nodes, assignment has {assignment.n}"
        )
    a = rep_graph.adjacency
    k = assignment.k
    violations: list[str] = []
    bad_nodes: set[int] = set()

    diag_bad = np.flatnonzero(np.diag(a) != 1.0)
    for i in diag_bad:
        violations.append(f"node {i}: diagonal entry is {a[i, i]:g}, expected 1")
        bad_nodes.add(int(i))
    diagonal_ok = diag_bad.size == 0

    row_sums = a.sum(axis=1).astype(np.int64)
    values, counts = np.unique(row_sums, return_counts=True)
    degree = int(values[np.argmax(counts)])
    deg_bad = np.flatnonzero(row_sums != degree)
    for i in deg_bad:
        violations.append(f"node {i}: degree {row_sums[i]} differs from modal degree {degree}")
        bad_nodes.add(int(i))
    regular_ok = deg_bad.size == 0

    per_cluster_ok = True
    neighbors_per_cluster = None
    if degree % k != 0:
        violations.append(f"modal degree {degree} is not divisible by cluster count {k}")
        per_cluster_ok = False
    else:
        neighbors_per_cluster = degree // k
        counts_nk = a @ assignment.onehot()
        bad_pairs = np.argwhere(counts_nk != neighbors_per_cluster)
        for i, cluster in bad_pairs:
            violations.append(
                f"node {i}: {counts_nk[i, cluster]:g} representatives in cluster "
                f"{cluster}, expected {neighbors_per_cluster}"
            )
            bad_nodes.add(int(i))
        per_cluster_ok = bad_pairs.size == 0

    ok = diagonal_ok and regular_ok and per_cluster_ok
    return RegularityReport(
        ok=ok,
        degree=degree,
        neighbors_per_cluster=neighbors_per_cluster,
        diagonal_ok=diagonal_ok,
        regular_ok=regular_ok,
        per_cluster_ok=per_cluster_ok,
        violations=violations,
        violating_nodes=sorted(bad_nodes),
    )


def _case_probabilities(params: RppParams) -> np.ndarray:
    """Entrywise edge probabilities (diagonal included, caller discards it)."""
    labels = params.assignment.labels
    same = (labels[:, None] == labels[None, :]).astype(np.float64)
    rep = params.rep_graph.adjacency
    return rep * (params.q + (params.p - params.q) * same) + (1.0 - rep) * (
        params.s + (params.r - params.s) * same
    )


def sample_rpp(params: RppParams, seed) -> Graph:
    """Draw a similarity graph from the representation-aware planted partition.

    Each unordered pair i < j is an independent Bernoulli draw with the case
    probability for that pair; there are no self-loops. The full uniform
    matrix is generated in one seeded pass and only the upper triangle is
    consumed, so the sample is a bit-reproducible function of (params, seed).
    """
    n = params.n
    prob = _case_probabilities(params)
    rng = np.random.default_rng(seed)
    u = rng.random((n, n))
    upper = np.triu(u < prob, k=1)
    adjacency = (upper | upper.T).astype(np.float64)
    return Graph(adjacency, allows_self_loops=False)


def sample_planted_partition_rep_graph(
    n: int, groups: int, p_in: float, p_out: float, seed
) -> tuple[Graph, ClusterAssignment]:
    """Planted-partition representation graph over equal contiguous groups.

    Pairs inside a group connect with probability p_in, pairs across groups
    with p_out, and the diagonal is forced to 1 so every node represents
    itself. Returns the graph and the group assignment used.
    """
    if not (0.0 <= p_in <= 1.0 and 0.0 <= p_out <= 1.0):
        raise ValueError(f"probabilities must lie in [0, 1], got p_in={p_in} p_out={p_out}")
    membership = contiguous_assignment(n, groups)
    same = membership.labels[:, None] == membership.labels[None, :]
    prob = np.where(same, p_in, p_out)
    rng = np.random.default_rng(seed)
    u = rng.random((n, n))
    upper = np.triu(u < prob, k=1)
    adjacency = (upper | upper.T).astype(np.float64)
    np.fill_diagonal(adjacency, 1.0)
    return Graph(adjacency, allows_self_loops=True), membership


def expected_adjacency(params: RppParams) -> np.ndarray:
    """Expected similarity matrix of the model, with the diagonal zeroed.

    Off the diagonal this equals the per-pair edge probability. The diagonal
    convention matches the analysis: the raw expectation matrix carries p on
    the diagonal and this function returns it shifted by -p * I, which has
    the same eigenvectors with eigenvalues shifted by p. For a regular
    representation graph the row sums are constant.
    """
    atilde = _case_probabilities(params)
    np.fill_diagonal(atilde, params.p)
    return atilde - params.p * np.eye(params.n)


def as_adjacency(graph_or_matrix) -> np.ndarray:
    """Accept a Graph or any symmetric real matrix and return the dense array.

    Real-valued matrices are allowed wherever a graph is expected so that
    expected-case (population) inputs flow through the same code paths.
    """
    if isinstance(graph_or_matrix, Graph):
        return graph_or_matrix.adjacency
    return ensure_symmetric(graph_or_matrix, "adjacency")


def write_graph(graph: Graph, path) -> None:
    """Write the documented edge-list format: ``n=<N> diag=<0|1>`` header,
    then one ``i j`` line (0-based, i <= j) per stored edge."""
    lines = [f"n={graph.n} diag={1 if graph.allows_self_loops else 0}"]
    rows, cols = np.nonzero(np.triu(graph.adjacency))
    lines.extend(f"{i} {j}" for i, j in zip(rows, cols))
    Path(path).write_text("\n".join(lines) + "\n")


def read_graph(path) -> Graph:
    """Parse the edge-list format written by write_graph."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise MalformedLineError(1, "empty graph file")
    header = lines[0].split()
    try:
        n = int(header[0].removeprefix("n="))
        diag = int(header[1].removeprefix("diag="))
        if diag not in (0, 1):
            raise ValueError
    except (IndexError, ValueError):
        raise MalformedLineError(1, f"expected header 'n=<N> diag=<0|1>', got {lines[0]!r}")
    adjacency = np.zeros((n, n))
    for lineno, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise MalformedLineError(lineno, f"expected 'i j', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLineError(lineno, f"non-integer endpoint in {line!r}")
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRangeError(f"line {lineno}: endpoint out of [0, {n})")
        adjacency[i, j] = adjacency[j, i] = 1.0
    return Graph(adjacency, allows_self_loops=bool(diag))


def write_assignment(assignment: ClusterAssignment, path) -> None:
    """One 0-based cluster label per line, node order."""
    Path(path).write_text("\n".join(str(x) for x in assignment.labels) + "\n")


def read_assignment(path) -> ClusterAssignment:
    labels = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            labels.append(int(stripped))
        except ValueError:
            raise MalformedLineError(lineno, f"expected an integer label, got {line!r}")
    if not labels:
        raise MalformedLineError(1, "assignment file contains no labels")
    arr = np.asarray(labels, dtype=np.int64)
    return ClusterAssignment(arr, int(arr.max()) + 1)
