"""Priority queue, search keys and node records shared by every planner."""

import heapq
import itertools
import math
from dataclasses import dataclass

from component.message import cm
from .errors import EmptyQueueError

__all__ = [
    "INF",
    "SearchKey",
    "key_compare",
    "NodeRecord",
    "RecordTable",
    "PriorityQueue",
]

INF = math.inf


@dataclass(frozen=True)
class SearchKey:
    """One or two element key, compared lexicographically when arity is 2.

    A one element key always carries k2 = 0 so that keys of the same queue
    stay comparable as plain tuples.
    """

    k1: float
    k2: float = 0.0
    arity: int = 2

    def __post_init__(self):
        if self.arity not in (1, 2):
            raise ValueError(cm.error.key_arity.format(self.arity))
        if math.isnan(self.k1) or math.isnan(self.k2):
            raise ValueError(cm.error.key_nan.format(self.k1, self.k2))
        if self.arity == 1 and self.k2 != 0:
            object.__setattr__(self, "k2", 0.0)

    @classmethod
    def infinite(cls, arity=2):
        return cls(INF, INF if arity == 2 else 0.0, arity)

    def as_tuple(self):
        return (self.k1, self.k2) if self.arity == 2 else (self.k1,)

    def __lt__(self, other):
        return key_compare(self, other) < 0

    def __le__(self, other):
        return key_compare(self, other) <= 0

    def __gt__(self, other):
        return key_compare(self, other) > 0

    def __ge__(self, other):
        return key_compare(self, other) >= 0


def key_compare(a, b):
    """Compare two keys of the same arity.

    Args:
        a (SearchKey): left key
        b (SearchKey): right key

    Returns:
        -1, 0 or 1 as a is lower, equal or greater than b
    """
    if a.arity != b.arity:
        raise TypeError(cm.error.key_mixed.format(a.arity, b.arity))

    ta, tb = a.as_tuple(), b.as_tuple()

    return (ta > tb) - (ta < tb)


@dataclass
class NodeRecord:
    """bookkeeping of one node, g and rhs start unassigned (+inf)"""

    g: float = INF
    rhs: float = INF
    pred_link: object = None
    in_open: bool = False
    in_closed: bool = False
    in_incons: bool = False


class RecordTable(dict):
    """node -> NodeRecord, records are created on first touch"""

    def __missing__(self, node):
        record = self[node] = NodeRecord()
        return record

    def g(self, node):
        record = self.get(node)
        return INF if record is None else record.g

    def rhs(self, node):
        record = self.get(node)
        return INF if record is None else record.rhs


class PriorityQueue:
    """Mutable min queue keyed by SearchKey.

    Binary heap with lazy invalidation: updating a node pushes a new entry and
    marks the previous one stale, stale entries are dropped when they reach the
    top. Equal keys are served in insertion order.
    """

    def __init__(self, arity=2):
        self.arity = arity
        self._heap = []
        self._live = {}
        self._counter = itertools.count()

    def __len__(self):
        return len(self._live)

    def __bool__(self):
        return bool(self._live)

    def __contains__(self, node):
        return node in self._live

    def __iter__(self):
        return iter(list(self._live))

    def items(self):
        """live (node, key) pairs in insertion order"""
        return [(node, key) for node, (_, key) in self._live.items()]

    def insert(self, node, key):
        """insert node or replace the key it already holds"""
        if key.arity != self.arity:
            raise TypeError(cm.error.key_mixed.format(key.arity, self.arity))

        current = self._live.get(node)
        if current is not None and current[1] == key:
            return

        seq = next(self._counter)
        self._live[node] = (seq, key)
        heapq.heappush(self._heap, (key.k1, key.k2, seq, node))

    def remove(self, node):
        """drop node if present, silently ignore otherwise"""
        self._live.pop(node, None)

    def clear(self):
        self._heap.clear()
        self._live.clear()

    def _prune(self):
        while self._heap:
            _, _, seq, node = self._heap[0]
            live = self._live.get(node)
            if live is not None and live[0] == seq:
                return
            heapq.heappop(self._heap)

    def top_key(self):
        """smallest live key, (+inf, +inf) when the queue is empty"""
        self._prune()
        if not self._heap:
            return SearchKey.infinite(self.arity)

        return self._live[self._heap[0][3]][1]

    def top(self):
        self._prune()
        if not self._heap:
            raise EmptyQueueError(cm.error.empty_queue)

        return self._heap[0][3]

    def pop(self):
        """remove and return (node, key) with the smallest key"""
        self._prune()
        if not self._heap:
            raise EmptyQueueError(cm.error.empty_queue)

        _, _, _, node = heapq.heappop(self._heap)
        _, key = self._live.pop(node)

        return node, key

    def rebuild(self, key_func):
        """recompute every key with key_func, keeping the insertion order of ties"""
        nodes = list(self._live)
        self.clear()
        for node in nodes:
            self.insert(node, key_func(node))
