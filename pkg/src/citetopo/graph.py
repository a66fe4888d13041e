"""
Loading and normalizing directed networks.

Edge lists are parsed into a raw edge multiset, then reduced to a simple
directed graph: self-loops dropped, duplicate links collapsed, isolated
nodes discarded and the remaining nodes renumbered ``0..n-1`` in order of
their raw integer labels.  Adjacency is kept in CSR form (``ptr``/``idx``
arrays) for both link directions.
"""

from __future__ import annotations

import configparser
import gzip
import hashlib
import io
import logging
import os
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import EmptyGraphError, ManifestError, ParseError

log = logging.getLogger(__name__)

FORMATS = ("snap", "konect")
_COMMENT = {"snap": "#", "konect": "%"}


@dataclass(frozen=True)
class RawEdges:
    """Parsed edge list before any cleaning.

    ``edges`` is an ``(E, 2)`` int64 array of ``(source, target)`` raw labels,
    duplicates and self-loops included.  ``labels`` holds every label
    mentioned, sorted.
    """

    edges: np.ndarray
    labels: np.ndarray

    def __len__(self):
        return len(self.edges)


def _open_text(source):
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8")), "<bytes>"
    if isinstance(source, (str, os.PathLike)):
        path = os.fspath(source)
        try:
            if path.endswith(".gz"):
                return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8"), path
            return open(path, encoding="utf-8"), path
        except OSError as exc:
            raise ParseError(f"cannot read edge list: {exc}", source=path) from exc
    if isinstance(source, io.TextIOBase):
        return source, getattr(source, "name", "<stream>")
    if hasattr(source, "read"):
        return io.TextIOWrapper(source, encoding="utf-8"), getattr(source, "name", "<stream>")
    raise TypeError(f"unsupported edge-list source {type(source).__name__}")


def parse_edge_list(source, format="snap"):
    """
    Parse a SNAP or KONECT edge list.

    ``source`` may be a path (``.gz`` is decompressed), raw bytes, or an open
    text/binary stream.  SNAP comment lines start with ``#``, KONECT ones with
    ``%``.  Each data line carries ``source target``; KONECT files may append
    weight/timestamp columns, which are ignored.

    :raises ParseError: on unreadable input, a data line with the wrong
        number of tokens, or a non-integer label.  The message carries the
        line number.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown edge-list format {format!r}; expected one of {FORMATS}")
    comment = _COMMENT[format]
    strict = format == "snap"
    fh, name = _open_text(source)
    src, dst = [], []
    try:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s[0] == comment:
                continue
            tok = s.split()
            if len(tok) != 2 and (strict or len(tok) < 2):
                raise ParseError(f"expected 2 tokens, found {len(tok)}", lineno, name)
            try:
                a, b = int(tok[0]), int(tok[1])
            except ValueError:
                raise ParseError(f"non-integer node label in {s!r}", lineno, name) from None
            src.append(a)
            dst.append(b)
    except UnicodeDecodeError as exc:
        raise ParseError(f"cannot decode edge list: {exc}", source=name) from exc
    finally:
        if fh is not source:
            fh.close()
    edges = np.column_stack([np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)])
    edges = edges.reshape(-1, 2)
    return RawEdges(edges=edges, labels=np.unique(edges))


@dataclass(frozen=True, eq=False)
class UndirectedView:
    """Direction-blind simple graph; reciprocal links merge into one edge."""

    ptr: np.ndarray
    idx: np.ndarray

    @property
    def n(self):
        return len(self.ptr) - 1

    @property
    def m(self):
        return len(self.idx) // 2

    @property
    def degree(self):
        return np.diff(self.ptr)

    def neighbours(self, i):
        return self.idx[self.ptr[i]:self.ptr[i + 1]]

    def edges(self):
        """Each undirected edge once, as ``(i, j)`` with ``i < j``."""
        src = np.repeat(np.arange(self.n), self.degree)
        mask = src < self.idx
        return np.column_stack([src[mask], self.idx[mask]])


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """
    Simple directed graph in CSR form.

    Nodes are dense ids ``0..n-1``; ``labels[i]`` is the raw label of node
    ``i``.  Neighbour lists are sorted.  Instances are treated as immutable.
    """

    out_ptr: np.ndarray
    out_idx: np.ndarray
    in_ptr: np.ndarray
    in_idx: np.ndarray
    labels: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self):
        return len(self.out_ptr) - 1

    @property
    def m(self):
        return len(self.out_idx)

    @property
    def k_out(self):
        return np.diff(self.out_ptr)

    @property
    def k_in(self):
        return np.diff(self.in_ptr)

    @property
    def k(self):
        return self.k_in + self.k_out

    def successors(self, i):
        return self.out_idx[self.out_ptr[i]:self.out_ptr[i + 1]]

    def predecessors(self, i):
        return self.in_idx[self.in_ptr[i]:self.in_ptr[i + 1]]

    def edges(self):
        """All links as an ``(m, 2)`` array of dense ``(source, target)`` ids."""
        return np.column_stack([np.repeat(np.arange(self.n), self.k_out), self.out_idx])

    def node_of(self, label):
        """Dense id of a raw label."""
        i = int(np.searchsorted(self.labels, label))
        if i >= self.n or self.labels[i] != label:
            raise KeyError(label)
        return i

    def adjacency(self):
        """Sparse ``n x n`` 0/1 adjacency (row = source)."""
        a = self._cache.get("adj")
        if a is None:
            a = sparse.csr_matrix(
                (np.ones(self.m, dtype=np.int8), self.out_idx, self.out_ptr),
                shape=(self.n, self.n),
            )
            self._cache["adj"] = a
        return a

    def undirected(self):
        """Cached :func:`undirected_view`."""
        u = self._cache.get("und")
        if u is None:
            u = undirected_view(self)
            self._cache["und"] = u
        return u

    def reversed(self):
        """The same graph with every link reversed."""
        return DirectedGraph(self.in_ptr, self.in_idx, self.out_ptr, self.out_idx, self.labels)


def _csr(rows, cols, n):
    order = np.lexsort((cols, rows))
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=ptr[1:])
    return ptr, cols[order].astype(np.int64)


def graph_from_edges(edges, labels=None):
    """
    Build a :class:`DirectedGraph` from an edge array.

    This is the preprocessing step: self-loops are removed, duplicate
    directed links collapsed, nodes left without any link dropped, and the
    survivors renumbered densely by ascending raw label.

    :raises EmptyGraphError: when nothing but self-loops (or nothing) remains.
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    edges = edges[edges[:, 0] != edges[:, 1]]
    if len(edges) == 0:
        raise EmptyGraphError("no usable edges after removing self-loops")
    node_labels, inv = np.unique(edges, return_inverse=True)
    inv = inv.reshape(-1, 2)
    n = len(node_labels)
    keys = np.unique(inv[:, 0] * n + inv[:, 1])
    src, dst = keys // n, keys % n
    out_ptr, out_idx = _csr(src, dst, n)
    in_ptr, in_idx = _csr(dst, src, n)
    return DirectedGraph(out_ptr, out_idx, in_ptr, in_idx, node_labels)


def preprocess(raw):
    """Turn :class:`RawEdges` into a simple :class:`DirectedGraph`."""
    return graph_from_edges(raw.edges)


def undirected_view(g):
    """Symmetric, loop-free adjacency obtained by dropping link directions."""
    e = g.edges()
    lo, hi = np.minimum(e[:, 0], e[:, 1]), np.maximum(e[:, 0], e[:, 1])
    keys = np.unique(lo * g.n + hi)
    a, b = keys // g.n, keys % g.n
    ptr, idx = _csr(np.concatenate([a, b]), np.concatenate([b, a]), g.n)
    return UndirectedView(ptr, idx)


def degrees(g):
    """Per-node ``(k_in, k_out, k)`` as an ``(n, 3)`` integer array."""
    return np.column_stack([g.k_in, g.k_out, g.k])


def cycle_diagnostics(g):
    """
    Count directed cycles that a clean citation network would not have.

    Returns a dict with the number of reciprocal link pairs and the number
    and total size of strongly connected components with more than one node.
    """
    e = g.edges()
    fwd = e[:, 0] * g.n + e[:, 1]
    rev = e[:, 1] * g.n + e[:, 0]
    reciprocal = int(np.isin(fwd, rev, assume_unique=True).sum() // 2)
    ncomp, lab = csgraph.connected_components(g.adjacency(), directed=True, connection="strong")
    sizes = np.bincount(lab, minlength=ncomp)
    big = sizes[sizes > 1]
    return {
        "reciprocal_pairs": reciprocal,
        "cyclic_components": int(len(big)),
        "nodes_on_cycles": int(big.sum()),
    }


# --------------------------------------------------------------------------
#  Dataset manifest


@dataclass
class DatasetManifest:
    name: str
    path: str
    format: str = "snap"
    expected_n: int | None = None
    expected_m: int | None = None
    checksum: str | None = None

    def verify_checksum(self):
        """Return ``True`` when the stored sha256 matches (or none is stored)."""
        if not self.checksum:
            return True
        algo, _, want = self.checksum.partition(":")
        if not want:
            algo, want = "sha256", algo
        h = hashlib.new(algo)
        with open(self.path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                h.update(chunk)
        ok = h.hexdigest() == want.lower()
        if not ok:
            log.warning("checksum mismatch for dataset %s (%s)", self.name, self.path)
        return ok

    def check_graph(self, g):
        """Raise :class:`ManifestError` if ``(n, m)`` disagree with expectations."""
        if self.expected_n is not None and g.n != self.expected_n:
            raise ManifestError(f"{self.name}: expected n={self.expected_n}, got n={g.n}")
        if self.expected_m is not None and g.m != self.expected_m:
            raise ManifestError(f"{self.name}: expected m={self.expected_m}, got m={g.m}")

    def load(self):
        self.verify_checksum()
        g = preprocess(parse_edge_list(self.path, self.format))
        self.check_graph(g)
        return g


def read_manifest(path):
    """
    Read an INI-style manifest, one section per dataset::

        [cit-HepPh]
        path = data/cit-HepPh.txt.gz
        format = snap
        expected_n = 34546
        expected_m = 421534
        checksum = sha256:...

    Relative paths resolve against the manifest's directory.
    """
    cp = configparser.ConfigParser()
    if not cp.read(path, encoding="utf-8"):
        raise ManifestError(f"cannot read manifest {path}")
    base = os.path.dirname(os.path.abspath(path))
    out = {}
    for name in cp.sections():
        sec = cp[name]
        if "path" not in sec:
            raise ManifestError(f"manifest entry {name!r} has no path")
        fmt = sec.get("format", "snap")
        if fmt.endswith("-edgelist"):
            fmt = fmt[: -len("-edgelist")]
        if fmt not in FORMATS:
            raise ManifestError(f"manifest entry {name!r}: unknown format {fmt!r}")
        try:
            en = sec.getint("expected_n", fallback=None)
            em = sec.getint("expected_m", fallback=None)
        except ValueError as exc:
            raise ManifestError(f"manifest entry {name!r}: {exc}") from None
        out[name] = DatasetManifest(
            name=name,
            path=os.path.join(base, os.path.expanduser(sec["path"])),
            format=fmt,
            expected_n=en,
            expected_m=em,
            checksum=sec.get("checksum") or None,
        )
    return out


def write_manifest(entries, path):
    cp = configparser.ConfigParser()
    for e in entries:
        sec = {"path": e.path, "format": e.format}
        if e.expected_n is not None:
            sec["expected_n"] = str(e.expected_n)
        if e.expected_m is not None:
            sec["expected_m"] = str(e.expected_m)
        if e.checksum:
            sec["checksum"] = e.checksum
        cp[e.name] = sec
    with open(path, "w", encoding="utf-8") as fh:
        cp.write(fh)
